import time

from .errors import SearchTimeout


class Budget:
    """Node and wall-clock limits shared by the backtracking searches.

    ``None`` means unlimited. A search that runs out raises SearchTimeout,
    so callers can tell "gave up" apart from "exhausted the space".
    """

    def __init__(self, nodes=None, seconds=None):
        self.nodes = nodes
        self.seconds = seconds
        self.used = 0
        self._deadline = None if seconds is None else time.monotonic() + seconds

    @classmethod
    def coerce(cls, budget):
        if isinstance(budget, Budget):
            return budget
        if budget is None:
            return cls()
        return cls(nodes=int(budget))

    def tick(self, n=1):
        self.used += n
        if self.nodes is not None and self.used > self.nodes:
            raise SearchTimeout(f"node budget of {self.nodes} exhausted")
        if self._deadline is not None and (self.used & 0x3FF) == 0:
            if time.monotonic() > self._deadline:
                raise SearchTimeout(f"time budget of {self.seconds}s exhausted")
