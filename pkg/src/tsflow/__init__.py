"""Triple systems with certified zero-sum flows."""

__version__ = "0.1.0"
