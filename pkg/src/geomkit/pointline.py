"""Point-line spaces: rank-2 view with derived collinearity structure.

Points are dense integer ids.  Lines are point-id tuples of size >= 2.
Two distinct points lie on at most one line (partial linear space); this
is validated on eager construction.  A lazy variant materializes points
but computes adjacency (and lines through a point) on demand, for spaces
whose full collinearity graph is too large to hold.
"""

from __future__ import annotations

from collections import deque

INF = -1  # distinguished "unreachable" distance value


class PointLineSpace:
    __slots__ = ("n", "lines", "payload", "meta", "_adj", "_lines_by_point", "structure")

    def __init__(self, n_points, lines, payload=None, meta=None, structure=None,
                 validate=True):
        self.n = n_points
        self.lines = [tuple(sorted(L)) for L in lines]
        self.payload = payload
        self.meta = dict(meta or {})
        self.structure = structure  # generator-specific parametric hooks
        adj = [set() for _ in range(n_points)]
        by_pt: list[list[int]] = [[] for _ in range(n_points)]
        for li, L in enumerate(self.lines):
            for i, p in enumerate(L):
                by_pt[p].append(li)
                for q in L[i + 1:]:
                    if validate and q in adj[p]:
                        raise ValueError(
                            f"points {p},{q} on two lines (not a partial linear space)"
                        )
                    adj[p].add(q)
                    adj[q].add(p)
        self._adj = [frozenset(s) for s in adj]
        self._lines_by_point = [tuple(v) for v in by_pt]

    # -- collinearity ---------------------------------------------------------

    def points(self):
        return range(self.n)

    def neighbors(self, x) -> frozenset:
        return self._adj[x]

    def perp(self, x) -> frozenset:
        """x together with every point collinear with it."""
        return self._adj[x] | {x}

    def collinear(self, x, y) -> bool:
        return x != y and y in self._adj[x]

    def lines_through(self, x):
        return [self.lines[i] for i in self._lines_by_point[x]]

    def line_through_pair(self, x, y):
        for i in self._lines_by_point[x]:
            if y in self.lines[i]:
                return self.lines[i]
        return None

    # -- distances -------------------------------------------------------------

    def distance(self, x, y, cutoff=None) -> int:
        if x == y:
            return 0
        seen = {x}
        frontier = [x]
        d = 0
        while frontier:
            d += 1
            if cutoff is not None and d > cutoff:
                return INF
            nxt = []
            for u in frontier:
                for v in self.neighbors(u):
                    if v == y:
                        return d
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        return INF

    def bfs_distances(self, x):
        dist = {x: 0}
        queue = deque([x])
        while queue:
            u = queue.popleft()
            du = dist[u]
            for v in self.neighbors(u):
                if v not in dist:
                    dist[v] = du + 1
                    queue.append(v)
        return dist

    def diameter(self) -> int:
        best = 0
        for x in self.points():
            dist = self.bfs_distances(x)
            if len(dist) < self.n:
                return INF
            best = max(best, max(dist.values()))
        return best

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return len(self.bfs_distances(0)) == self.n


class LazyPointLineSpace:
    """Points materialized, adjacency computed on demand and cached.

    `neighbor_fn(i) -> iterable of point ids`, `lines_fn(i) -> iterable of
    point-id tuples` are supplied by the generator.  The insert-only cache
    means concurrent readers see either absence (recompute) or the final
    value, never partial data.
    """

    __slots__ = ("n", "payload", "meta", "structure", "_neighbor_fn", "_lines_fn", "_cache")

    def __init__(self, n_points, neighbor_fn, lines_fn=None, payload=None,
                 meta=None, structure=None):
        self.n = n_points
        self.payload = payload
        self.meta = dict(meta or {})
        self.structure = structure
        self._neighbor_fn = neighbor_fn
        self._lines_fn = lines_fn
        self._cache: dict[int, frozenset] = {}

    def points(self):
        return range(self.n)

    def neighbors(self, x) -> frozenset:
        s = self._cache.get(x)
        if s is None:
            s = frozenset(self._neighbor_fn(x))
            self._cache[x] = s
        return s

    def perp(self, x) -> frozenset:
        return self.neighbors(x) | {x}

    def collinear(self, x, y) -> bool:
        return x != y and y in self.neighbors(x)

    def lines_through(self, x):
        if self._lines_fn is None:
            raise ValueError("lines not available on this lazy space")
        return [tuple(sorted(L)) for L in self._lines_fn(x)]

    def line_through_pair(self, x, y):
        for L in self.lines_through(x):
            if y in L:
                return L
        return None

    def distance(self, x, y, cutoff=None) -> int:
        return PointLineSpace.distance(self, x, y, cutoff)  # type: ignore[arg-type]


def is_gamma_space(space, sample_points=None, sample_lines=None):
    """Gamma-space law: |x^perp ∩ L| ∈ {0, 1, |L|} for (x, L) with x not on L.

    Returns (verdict, witness).  Full scan unless samples given.
    """
    pts = sample_points if sample_points is not None else range(space.n)
    for x in pts:
        px = space.neighbors(x)
        lines = sample_lines if sample_lines is not None else getattr(space, "lines", None)
        if lines is None:
            raise ValueError("line list required for gamma-space check")
        for L in lines:
            if x in L:
                continue
            k = sum(1 for p in L if p in px)
            if k not in (0, 1, len(L)):
                return False, (x, L)
    return True, None


def singular_closure(space, pts):
    """Least line-closed set of pairwise-collinear points containing pts.

    Returns None if the closure stops being pairwise collinear.
    """
    S = set(pts)
    for a in S:
        for b in S:
            if a < b and not space.collinear(a, b):
                return None
    changed = True
    while changed:
        changed = False
        for a in list(S):
            for b in list(S):
                if a >= b:
                    continue
                L = space.line_through_pair(a, b)
                if L is None:
                    return None
                for p in L:
                    if p not in S:
                        for s in S:
                            if s != p and not space.collinear(s, p):
                                return None
                        S.add(p)
                        changed = True
    return frozenset(S)


def extend_to_maximal_singular(space, start):
    """Grow a singular set to a maximal singular subspace (deterministic)."""
    S = singular_closure(space, start)
    if S is None:
        raise ValueError(f"{start} is not singular")
    while True:
        common = None
        for s in S:
            ns = space.neighbors(s)
            common = set(ns) if common is None else common & ns
        common -= S
        if not common:
            return frozenset(S)
        z = min(common)
        nxt = singular_closure(space, S | {z})
        if nxt is None:
            # z collinear with all of S but closure fails: drop candidate
            common.discard(z)
            ok = None
            for c in sorted(common):
                nxt = singular_closure(space, S | {c})
                if nxt is not None:
                    ok = nxt
                    break
            if ok is None:
                return frozenset(S)
            S = set(ok)
        else:
            S = set(nxt)


def maximal_singulars_generic(space, budget=200000):
    """All maximal singular subspaces by closure search over lines.

    Exact on small spaces; raises BudgetExceeded if the search frontier
    outgrows the budget.
    """
    from .reports import BudgetExceeded

    found: set[frozenset] = set()
    frontier: deque[frozenset] = deque()
    seen: set[frozenset] = set()
    for L in space.lines:
        c = singular_closure(space, L)
        if c is not None and c not in seen:
            seen.add(c)
            frontier.append(c)
    if not frontier:
        # spaces with no lines: isolated points are their own maximals
        return [frozenset({p}) for p in space.points()]
    steps = 0
    while frontier:
        S = frontier.popleft()
        steps += 1
        if steps > budget or len(seen) > budget:
            raise BudgetExceeded(f"maximal singular search exceeded budget {budget}")
        common = None
        for s in S:
            ns = space.neighbors(s)
            common = set(ns) if common is None else common & ns
        common -= S
        extended = False
        for z in sorted(common):
            c = singular_closure(space, S | {z})
            if c is not None:
                extended = True
                if c not in seen:
                    seen.add(c)
                    frontier.append(c)
        if not extended:
            found.add(S)
    return sorted(found, key=lambda s: sorted(s))


def projective_dimension(size: int, q: int):
    """d with size == (q^{d+1}-1)/(q-1), else None."""
    total, d, power = 1, 0, 1
    while total < size:
        power *= q
        total += power
        d += 1
    return d if total == size else None
