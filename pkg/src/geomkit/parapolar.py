"""Parapolar-space machinery over point-line spaces: perps, distances,
polar pairs, symplecta as 2-convex closures, maximal singular subspaces and
their two classes, symplecton neighborhoods N_A(S)/N_B(S)/X(S), and the
enriched subspaces D(S).

Spaces built by the generators carry parametric fast paths (catalogs,
algebraic distance); everything falls back to generic graph algorithms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .pointline import (
    PointLineSpace,
    maximal_singulars_generic,
    projective_dimension,
    singular_closure,
)
from .reports import BudgetExceeded


class InputError(ValueError):
    pass


class RankTieError(RuntimeError):
    """Both maximal-singular families have the same rank (the excluded
    n = 2j case); carries the unlabeled families."""

    def __init__(self, families):
        super().__init__("maximal singular classes have equal rank")
        self.families = families


# ---------------------------------------------------------------------------
# basic ops


def perp(space, x) -> frozenset:
    return space.perp(x)


def distance(space, x, y) -> int:
    st = getattr(space, "structure", None)
    if st is not None and hasattr(st, "distance_pair"):
        return st.distance_pair(x, y)
    return space.distance(x, y)


def is_polar_pair(space, x, y) -> bool:
    """Distance exactly 2 with at least two common collinear points."""
    if x == y or space.collinear(x, y):
        return False
    common = space.neighbors(x) & space.neighbors(y)
    return len(common) >= 2


def common_perp(space, x, y) -> frozenset:
    return space.neighbors(x) & space.neighbors(y)


@dataclass(frozen=True)
class Symplecton:
    points: frozenset
    polar_rank: int | None
    pair: tuple

    def __len__(self):
        return len(self.points)


def polar_rank_of(space, pts, q) -> int | None:
    """Greedy maximal clique inside pts; in a polar space this is a maximal
    singular subspace, giving rank = projective dimension + 1."""
    a = min(pts)
    clique = {a}
    cand = space.neighbors(a) & pts
    while cand:
        z = min(cand)
        clique.add(z)
        cand = cand & space.neighbors(z)
        cand.discard(z)
    d = projective_dimension(len(clique), q)
    return None if d is None else d + 1


def symplecton_closure(space, x, y, q=None) -> Symplecton:
    """Least 2-convex subset containing a polar pair: keep adding the full
    common perp of every internal distance-2 pair until stable."""
    if not is_polar_pair(space, x, y):
        raise InputError(f"({x},{y}) is not a polar pair")
    S = {x, y} | set(common_perp(space, x, y))
    changed = True
    while changed:
        changed = False
        elems = sorted(S)
        for i, u in enumerate(elems):
            nu = space.neighbors(u)
            for v in elems[i + 1:]:
                if v in nu:
                    continue
                common = nu & space.neighbors(v)
                if common and not common <= S:
                    S |= common
                    changed = True
    q = q if q is not None else space.meta.get("q", 2)
    return Symplecton(frozenset(S), polar_rank_of(space, frozenset(S), q), (x, y))


def all_symplecta(space, budget=None, seed=42):
    """Deduplicated symplecton list.

    Parametric for generator-built spaces; otherwise closures over every
    polar pair (each symplecton computed once).  With a budget, stops after
    that many polar pairs and flags the result partial via BudgetExceeded.
    """
    st = getattr(space, "structure", None)
    q = space.meta.get("q", 2)
    if st is not None and hasattr(st, "symplecta_parametric"):
        out = []
        for _, pts in sorted(st.symplecta_parametric().items(), key=lambda kv: kv[0].key()):
            pair = _some_polar_pair(space, pts)
            out.append(Symplecton(pts, polar_rank_of(space, pts, q), pair))
        return out
    if st is not None and hasattr(st, "symplecton_catalog"):
        out = []
        for pts in st.symplecton_catalog():
            pair = _some_polar_pair(space, pts)
            out.append(Symplecton(pts, polar_rank_of(space, pts, q), pair))
        return out
    return _all_symplecta_generic(space, budget, q)


def _some_polar_pair(space, pts):
    elems = sorted(pts)
    for i, u in enumerate(elems):
        nu = space.neighbors(u)
        for v in elems[i + 1:]:
            if v not in nu and len(nu & space.neighbors(v)) >= 2:
                return (u, v)
    return None


def _all_symplecta_generic(space, budget, q):
    symps: list[Symplecton] = []
    by_pt: dict[int, list[int]] = {}
    examined = 0
    for x in space.points():
        nx = space.neighbors(x)
        two_away = set()
        for n in nx:
            two_away |= space.neighbors(n)
        two_away -= nx
        two_away.discard(x)
        for y in sorted(two_away):
            if y <= x:
                continue
            if any(y in symps[i].points for i in by_pt.get(x, ())):
                continue
            common = nx & space.neighbors(y)
            if len(common) < 2:
                continue
            examined += 1
            if budget is not None and examined > budget:
                raise BudgetExceeded(
                    f"all_symplecta examined {examined} polar pairs (budget {budget})"
                )
            S = symplecton_closure(space, x, y, q)
            idx = len(symps)
            symps.append(S)
            for p in S.points:
                by_pt.setdefault(p, []).append(idx)
    return symps


def maximal_singular_subspaces(space, budget=200000):
    """All maximal singular subspaces (point sets, pairwise collinear,
    line-closed, not properly contained in a larger one).

    Parametric for generator-built spaces; generic closure search otherwise.
    """
    st = getattr(space, "structure", None)
    if st is not None and hasattr(st, "maximal_singulars_catalog"):
        fam_a, fam_b = st.maximal_singulars_catalog()
        return sorted(set(fam_a) | set(fam_b), key=sorted)
    if st is not None and hasattr(st, "max_singulars_parametric"):
        fam_a, fam_b = st.max_singulars_parametric()
        return sorted(set(fam_a) | set(fam_b), key=sorted)
    return maximal_singulars_generic(space, budget)


def classify_maximal_classes(space, maximals=None, q=None):
    """Partition into (family_A, family_B) with A the larger singular rank.

    Raises RankTieError when the ranks coincide (the excluded n = 2j case).
    """
    q = q if q is not None else space.meta.get("q", 2)
    if maximals is None:
        maximals = maximal_singular_subspaces(space)
    by_rank: dict[int, list[frozenset]] = {}
    for M in maximals:
        d = projective_dimension(len(M), q)
        if d is None:
            raise InputError(f"maximal singular of size {len(M)} is not projective over q={q}")
        by_rank.setdefault(d, []).append(M)
    if len(by_rank) == 1:
        raise RankTieError(list(by_rank.values())[0])
    if len(by_rank) != 2:
        raise InputError(f"expected two singular ranks, found {sorted(by_rank)}")
    lo, hi = sorted(by_rank)
    return by_rank[hi], by_rank[lo]


# ---------------------------------------------------------------------------
# shape predicates


def is_line_set(space, pts) -> bool:
    pts = set(pts)
    if len(pts) < 2:
        return False
    it = iter(pts)
    a, b = next(it), next(it)
    L = space.line_through_pair(a, b)
    return L is not None and set(L) == pts


def is_plane_set(space, pts, q) -> bool:
    """Line-closed singular subspace of rank 2: q^2 + q + 1 points."""
    pts = set(pts)
    if len(pts) != q * q + q + 1:
        return False
    elems = sorted(pts)
    for i, a in enumerate(elems):
        na = space.neighbors(a)
        for b in elems[i + 1:]:
            if b not in na:
                return False
            L = space.line_through_pair(a, b)
            if L is None or not set(L) <= pts:
                return False
    return True


def is_singular_set(space, pts) -> bool:
    elems = sorted(pts)
    for i, a in enumerate(elems):
        na = space.neighbors(a)
        for b in elems[i + 1:]:
            if b not in na:
                return False
    return True


def is_max_singular_of(space, pts, S_points) -> bool:
    """pts is a maximal singular subspace of the symplecton point set S."""
    pts = set(pts)
    if not pts or not pts <= S_points or not is_singular_set(space, pts):
        return False
    common = None
    for a in pts:
        na = space.neighbors(a)
        common = (na & S_points) if common is None else common & na
    common -= pts
    if common:
        return False
    # line-closure inside the space
    elems = sorted(pts)
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            L = space.line_through_pair(a, b)
            if L is not None and not set(L) <= pts:
                return False
    return True


def meet_shape(space, pts, q, S_points=None) -> str:
    """Classify a perp-intersection: empty/point/line/plane/max/other."""
    k = len(pts)
    if k == 0:
        return "empty"
    if k == 1:
        return "point"
    if is_line_set(space, pts):
        return "line"
    if is_plane_set(space, pts, q):
        return "plane"
    if S_points is not None and is_max_singular_of(space, pts, S_points):
        return "max"
    return "other"


# ---------------------------------------------------------------------------
# subspace predicates


def is_subspace(space, pts):
    """Any line meeting pts in >= 2 points lies inside.  (verdict, witness)."""
    pts = set(pts)
    seen_lines = set()
    for p in pts:
        for L in space.lines_through(p):
            if L in seen_lines:
                continue
            seen_lines.add(L)
            k = sum(1 for x in L if x in pts)
            if k >= 2 and k < len(L):
                return False, L
    return True, None


def is_2convex(space, pts):
    """Internal distance-2 pairs have their whole common perp inside."""
    pts_set = set(pts)
    elems = sorted(pts_set)
    for i, u in enumerate(elems):
        nu = space.neighbors(u)
        for v in elems[i + 1:]:
            if v in nu:
                continue
            common = nu & space.neighbors(v)
            if common and not common <= pts_set:
                return False, (u, v, sorted(common - pts_set)[0])
    return True, None


def is_strong_parapolar_set(space, pts):
    """Every internal distance-2 pair is polar (>= 2 common perp points)."""
    pts_set = set(pts)
    elems = sorted(pts_set)
    for i, u in enumerate(elems):
        nu = space.neighbors(u)
        for v in elems[i + 1:]:
            if v in nu:
                continue
            common = nu & space.neighbors(v)
            if len(common) == 1:
                return False, (u, v)
            if not common:
                # distance > 2: not a distance-2 pair, skip
                continue
    return True, None


# ---------------------------------------------------------------------------
# analysis context


@dataclass
class SympNeighborhood:
    symp: Symplecton
    n_a: dict  # x -> frozenset (the maximal singular perp-meet)
    n_b: dict
    x_set: dict  # x -> (p, witness ambient A index)
    other: dict  # x -> shape tag (nonempty meets fitting none of the classes)

    def partition_sizes(self):
        return (len(self.symp.points), len(self.n_a), len(self.x_set),
                len(self.n_b), len(self.other))


class Analysis:
    """Cached derived data for one (eagerly materialized) point-line space."""

    def __init__(self, space: PointLineSpace, name: str | None = None):
        self.space = space
        self.name = name or "{family}({n},{j},{q})".format(
            family=space.meta.get("family", "space"),
            n=space.meta.get("n", "?"),
            j=space.meta.get("j", ""),
            q=space.meta.get("q", "?"),
        )
        self.q = space.meta.get("q", 2)

    @cached_property
    def symplecta(self) -> list[Symplecton]:
        return all_symplecta(self.space)

    @cached_property
    def symps_by_point(self):
        idx: dict[int, list[int]] = {}
        for i, S in enumerate(self.symplecta):
            for p in S.points:
                idx.setdefault(p, []).append(i)
        return idx

    @cached_property
    def families(self):
        """(family_A, family_B, tie) of ambient maximal singular subspaces.

        Generator catalogs fix the labels (Grassmann: A = inside-(j+1)-space
        family; half-spin: A = rank n-1 family); the rank-tie flag marks the
        n = 2j degenerate case, where the parametric labels remain usable
        but rank-based classification is impossible.
        """
        st = getattr(self.space, "structure", None)
        if st is not None and hasattr(st, "maximal_singulars_catalog"):
            fam_a, fam_b = st.maximal_singulars_catalog()
        elif st is not None and hasattr(st, "max_singulars_parametric"):
            fam_a, fam_b = st.max_singulars_parametric()
        else:
            fam_a, fam_b = classify_maximal_classes(self.space)
            return fam_a, fam_b, False
        ra = projective_dimension(len(fam_a[0]), self.q)
        rb = projective_dimension(len(fam_b[0]), self.q)
        if ra == rb:
            return fam_a, fam_b, True
        if ra < rb:
            fam_a, fam_b = fam_b, fam_a
        return fam_a, fam_b, False

    @cached_property
    def fam_by_point(self):
        fam_a, fam_b, _ = self.families
        idx: dict[int, list[tuple[int, int]]] = {}
        for side, fam in ((0, fam_a), (1, fam_b)):
            for i, M in enumerate(fam):
                for p in M:
                    idx.setdefault(p, []).append((side, i))
        return idx

    # -- per-symplecton machinery ---------------------------------------------

    def symp_max_singulars(self, S: Symplecton):
        """(M_A(S), M_B(S)) with the ambient member realizing each, i.e.
        lists of (ambient_side, ambient_index, intersection_set)."""
        fam_a, fam_b, _ = self.families
        size = None
        if S.polar_rank is not None:
            size = (self.q ** S.polar_rank - 1) // (self.q - 1)
        fams = (fam_a, fam_b)
        seen_ids = set()
        out_a, out_b = [], []
        for p in S.points:
            for side, i in self.fam_by_point.get(p, ()):
                if (side, i) in seen_ids:
                    continue
                seen_ids.add((side, i))
                inter = fams[side][i] & S.points
                if size is not None:
                    ok = len(inter) == size
                else:
                    ok = is_max_singular_of(self.space, inter, S.points)
                if ok:
                    (out_a if side == 0 else out_b).append((side, i, frozenset(inter)))
        return out_a, out_b

    def symp_neighborhood(self, S: Symplecton) -> SympNeighborhood:
        """Classify every external point with nonempty perp-meet into
        N_A(S), N_B(S), X(S) or the residual bucket, with witnesses."""
        fam_a, fam_b, tie = self.families
        if tie:
            raise RankTieError([*fam_a, *fam_b])
        space = self.space
        ms_a, ms_b = self.symp_max_singulars(S)
        sets_a = {m[2] for m in ms_a}
        sets_b = {m[2] for m in ms_b}
        amb_a_of = {m[2]: m[1] for m in ms_a}  # intersection -> ambient famA index
        candidates = set()
        for p in S.points:
            candidates |= space.neighbors(p)
        candidates -= S.points
        n_a, n_b, x_set, other = {}, {}, {}, {}
        for x in sorted(candidates):
            meet = frozenset(space.neighbors(x) & S.points)
            if not meet:
                continue
            if meet in sets_a:
                n_a[x] = meet
            elif meet in sets_b:
                n_b[x] = meet
            elif len(meet) == 1:
                wit = self._x_clause_witness(S, x, next(iter(meet)), ms_a)
                if wit is not None:
                    x_set[x] = wit
                else:
                    other[x] = "point-no-witness"
            else:
                other[x] = meet_shape(space, meet, self.q, S.points)
        return SympNeighborhood(S, n_a, n_b, x_set, other)

    def _x_clause_witness(self, S, x, p, ms_a):
        """X(S) clauses: every q in p^perp∩S polar with x, plus a witness
        A in A_p ∩ A(S) whose perp-meet with x is a plane."""
        space = self.space
        fam_a, _, _ = self.families
        nx = space.neighbors(x)
        for qpt in (space.neighbors(p) & S.points):
            if qpt in nx:
                return None  # would contradict the singleton perp-meet
            if len(nx & space.neighbors(qpt)) < 2:
                return None
        for side, i, inter in ms_a:
            if p not in fam_a[i]:
                continue
            cand = nx & fam_a[i]
            if len(cand) == self.q ** 2 + self.q + 1 and is_plane_set(space, cand, self.q):
                return (p, i)
        return None

    # -- the enriched subspaces D(S) -------------------------------------------

    def build_D5_subspace(self, S: Symplecton, nbhd: SympNeighborhood | None = None):
        nbhd = nbhd or self.symp_neighborhood(S)
        return frozenset(S.points | set(nbhd.n_a))

    def build_D6_subspace(self, S: Symplecton, nbhd: SympNeighborhood | None = None):
        nbhd = nbhd or self.symp_neighborhood(S)
        return frozenset(S.points | set(nbhd.n_a) | set(nbhd.x_set))
