"""Algorithm X over dict-of-sets (Knuth's exact cover, column-min heuristic)."""

from ._budget import Budget


def exact_cover(rows, budget=None, secondary=(), rng=None):
    """Yield lists of row keys whose column sets partition the primary columns.

    ``rows`` maps a row key to an iterable of column names. Columns listed
    in ``secondary`` may be covered at most once instead of exactly once.
    Row keys should be sortable so the branching order is deterministic.
    Passing a ``random.Random`` shuffles the branching order instead.
    """
    budget = Budget.coerce(budget)
    secondary = set(secondary)
    Y = {key: list(cols) for key, cols in rows.items()}
    X = {}
    for key in sorted(Y):
        for c in Y[key]:
            X.setdefault(c, []).append(key)
    X = {c: set(keys) for c, keys in X.items()}
    keys = sorted(Y)
    if rng is not None:
        rng.shuffle(keys)
    order = {key: i for i, key in enumerate(keys)}
    primary = [c for c in X if c not in secondary]
    missing = [c for c in primary if not X[c]]
    if missing:
        return
    yield from _search(X, Y, order, set(primary), budget, [])


def _search(X, Y, order, primary, budget, partial):
    budget.tick()
    live = [c for c in primary if c in X]
    if not live:
        yield list(partial)
        return
    c = min(live, key=lambda col: len(X[col]))
    for r in sorted(X[c], key=order.__getitem__):
        partial.append(r)
        cols = _select(X, Y, r)
        yield from _search(X, Y, order, primary, budget, partial)
        _deselect(X, Y, r, cols)
        partial.pop()


def _select(X, Y, r):
    cols = []
    for j in Y[r]:
        for i in X[j]:
            for k in Y[i]:
                if k != j:
                    X[k].remove(i)
        cols.append(X.pop(j))
    return cols


def _deselect(X, Y, r, cols):
    for j in reversed(Y[r]):
        X[j] = cols.pop()
        for i in X[j]:
            for k in Y[i]:
                if k != j:
                    X[k].add(i)
