"""Constructors for the named geometries: projective geometries (A_{n-1}
buildings), Grassmann point-line spaces, hyperbolic quadrics with oriflamme
typing (D_n buildings), and half-spin point-line spaces, plus parametric
catalogs of their symplecta and maximal singular subspaces.

Vector dimensions are used throughout for typing (type i = subspaces of
vector dimension i); the singular rank of a subspace with (q^{d+1}-1)/(q-1)
points is d.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .geometry import Geometry, build_geometry
from .gflinear import (
    GF,
    Field,
    SubspaceBasis,
    bit_reduce,
    bit_rank,
    bit_rref,
    contains,
    enumerate_subspaces,
    gaussian_count,
    rref,
    subspaces_of,
)
from .pointline import LazyPointLineSpace, PointLineSpace


class SizeGuardError(RuntimeError):
    """Instance exceeds desk-scale limits; pass override_guard=True to force."""


# ---------------------------------------------------------------------------
# F_2 packed-vector helpers


def dot_nullspace2(rows, n):
    """Basis of {v in F_2^n : <v, r> = 0 for all r in rows} (packed ints)."""
    R = bit_rref(list(rows))
    pivots = [(r & -r).bit_length() - 1 for r in R]
    pivset = set(pivots)
    out = []
    for c in range(n):
        if c in pivset:
            continue
        v = 1 << c
        for r, p in zip(R, pivots):
            if (r >> c) & 1:
                v ^= 1 << p
        out.append(v)
    return out


def complement_basis2(basis_rows, n):
    """Standard basis vectors completing RREF rows to a basis of F_2^n."""
    rows = list(basis_rows)
    comp = []
    for c in range(n):
        v = 1 << c
        for b in rows:
            if v & (b & -b):
                v ^= b
        if v:
            rows = bit_rref(rows + [1 << c])
            comp.append(1 << c)
    return comp


def span_vectors2(rows):
    vs = [0]
    for r in rows:
        vs += [v ^ r for v in vs]
    return vs


def superspaces_of(U: SubspaceBasis, d: int):
    """All d-subspaces of the ambient space containing U (q=2)."""
    f, n, k = U.field, U.n, U.dim
    if d < k:
        return
    if d == k:
        yield U
        return
    if f.q != 2:
        raise NotImplementedError("superspace enumeration implemented for q=2")
    comp = complement_basis2(U.rows, n)
    m = len(comp)
    for inner in enumerate_subspaces(f, m, d - k):
        lifted = list(U.rows)
        for irow in inner.rows:
            v = 0
            t = irow
            while t:
                i = (t & -t).bit_length() - 1
                v ^= comp[i]
                t &= t - 1
            lifted.append(v)
        yield SubspaceBasis(f, n, tuple(bit_rref(lifted)), _trusted=True)


def subspaces_between(low: SubspaceBasis, high: SubspaceBasis, d: int):
    """d-subspaces y with low ⊆ y ⊆ high, via the quotient high/low (q=2)."""
    f, n = low.field, low.n
    comp = []
    rows = list(low.rows)
    for h in high.rows:
        v = h
        for b in rows:
            if v & (b & -b):
                v ^= b
        if v:
            rows = bit_rref(rows + [h])
            comp.append(h)
    m = len(comp)
    k = low.dim
    for inner in enumerate_subspaces(f, m, d - k):
        lifted = list(low.rows)
        for irow in inner.rows:
            v = 0
            t = irow
            while t:
                i = (t & -t).bit_length() - 1
                v ^= comp[i]
                t &= t - 1
            lifted.append(v)
        yield SubspaceBasis(f, n, tuple(bit_rref(lifted)), _trusted=True)


# ---------------------------------------------------------------------------
# projective geometries (A_{n-1} buildings)


def projective_geometry(n: int, field: Field, override_guard=False) -> Geometry:
    """Subspace geometry of F_q^n: types 1..n-1, symmetrized containment."""
    q = field.q
    total = sum(gaussian_count(n, d, q) for d in range(1, n))
    if not override_guard and (n > 7 or total > 120_000):
        raise SizeGuardError(
            f"projective_geometry({n}, GF({q})) has {total} objects; "
            "pass override_guard=True to force"
        )
    ids: dict[SubspaceBasis, int] = {}
    types: dict[int, int] = {}
    payload: dict[int, SubspaceBasis] = {}
    for d in range(1, n):
        for s in enumerate_subspaces(field, n, d):
            i = len(ids)
            ids[s] = i
            types[i] = d
            payload[i] = s
    incid = []
    for s, i in ids.items():
        for dd in range(1, s.dim):
            for sub in subspaces_of(s, dd):
                incid.append((ids[sub], i))
    return build_geometry(types, incid, typeset=range(1, n), payload=payload)


def fano_plane() -> Geometry:
    return projective_geometry(3, GF(2))


# ---------------------------------------------------------------------------
# Grassmann spaces


@dataclass(frozen=True)
class GrassmannSpec:
    n: int
    j: int
    field: Field

    def __post_init__(self):
        if not 1 <= self.j <= self.n - 1:
            raise ValueError(f"need 1 <= j <= n-1, got j={self.j}, n={self.n}")

    @property
    def q(self):
        return self.field.q

    def point_count(self):
        return gaussian_count(self.n, self.j, self.q)


class GrassmannStructure:
    """Parametric catalogs for a generator-built Grassmann space."""

    def __init__(self, spec: GrassmannSpec, space, index):
        self.spec = spec
        self.space = space
        self.index = index  # SubspaceBasis -> point id

    def point_id(self, basis: SubspaceBasis) -> int:
        return self.index[basis]

    def symplecton_catalog(self):
        """One symplecton per (j-2, j+2)-flag: the j-subspaces in between;
        each is a nondegenerate rank-3 polar space in the point-line
        structure."""
        spec = self.spec
        if spec.j < 2 or spec.j + 2 > spec.n:
            return []
        out = []
        for low in enumerate_subspaces(spec.field, spec.n, spec.j - 2):
            for high in superspaces_of(low, spec.j + 2):
                out.append(frozenset(
                    self.index[m] for m in subspaces_between(low, high, spec.j)
                ))
        return out

    def maximal_singulars_catalog(self):
        """(family_A, family_B): all j-subs inside a fixed (j+1)-space /
        all j-subs over a fixed (j-1)-space."""
        spec = self.spec
        fam_a = [
            frozenset(self.index[m] for m in subspaces_of(top, spec.j))
            for top in enumerate_subspaces(spec.field, spec.n, spec.j + 1)
        ]
        fam_b = [
            frozenset(self.index[m] for m in superspaces_of(low, spec.j))
            for low in enumerate_subspaces(spec.field, spec.n, spec.j - 1)
        ]
        return fam_a, fam_b

    def distance_pair(self, x, y):
        """Grassmann distance = codimension of the intersection."""
        bx, by = self.space.payload[x], self.space.payload[y]
        return self.spec.j - (bx.dim + by.dim - bit_rank(list(bx.rows) + list(by.rows)))


def grassmann_space(spec: GrassmannSpec, override_guard=False) -> PointLineSpace:
    """Points = j-subspaces of F_q^n; lines = (j-1, j+1)-flags; each line
    has q+1 points; collinearity <=> dim(x ∩ y) = j-1."""
    count = spec.point_count()
    if not override_guard and (spec.n > 8 or count > 20_000):
        raise SizeGuardError(
            f"grassmann {spec} has {count} points; pass override_guard=True to force"
        )
    f, n, j = spec.field, spec.n, spec.j
    if f.q != 2:
        raise NotImplementedError("grassmann_space implemented for q=2")
    index: dict[SubspaceBasis, int] = {}
    payload: list[SubspaceBasis] = []
    for s in enumerate_subspaces(f, n, j):
        index[s] = len(payload)
        payload.append(s)
    lines = []
    for low in enumerate_subspaces(f, n, j - 1):
        for high in superspaces_of(low, j + 1):
            lines.append(tuple(sorted(
                index[m] for m in subspaces_between(low, high, j)
            )))
    meta = {"family": "grassmann", "n": n, "j": j, "q": spec.q}
    space = PointLineSpace(len(payload), lines, payload=payload, meta=meta, validate=False)
    space.structure = GrassmannStructure(spec, space, index)
    return space


# ---------------------------------------------------------------------------
# hyperbolic quadrics (D_n oriflamme geometries)


@dataclass(frozen=True)
class QuadricSpec:
    n: int  # Witt index; ambient F_q^{2n} with form x_1 y_1 + ... + x_n y_n
    field: Field

    @property
    def q(self):
        return self.field.q


class HyperbolicForm:
    """Q(x|y) = sum x_i y_i on F_q^{2n}; coordinates e_1..e_n then f_1..f_n."""

    def __init__(self, n: int, field: Field):
        self.n = n
        self.field = field
        self.dim = 2 * n

    def value(self, v: int) -> int:
        n = self.n
        return bin((v & ((1 << n) - 1)) & (v >> n)).count("1") & 1

    def bilinear(self, u: int, v: int) -> int:
        n = self.n
        mask = (1 << n) - 1
        a = bin((u & mask) & (v >> n)).count("1")
        b = bin((v & mask) & (u >> n)).count("1")
        return (a + b) & 1

    def polarize(self, u: int) -> int:
        """T(u) with B(u, v) = <T(u), v> under the standard dot product."""
        n = self.n
        mask = (1 << n) - 1
        return ((u & mask) << n) | (u >> n)

    def is_totally_singular(self, basis: SubspaceBasis) -> bool:
        rows = basis.rows
        for i, r in enumerate(rows):
            if self.value(r):
                return False
            for s in rows[i + 1:]:
                if self.bilinear(r, s):
                    return False
        return True

    def perp_rows(self, rows) -> list[int]:
        return dot_nullspace2([self.polarize(r) for r in rows], self.dim)

    def singular_points(self):
        f = self.field
        if f.q != 2:
            raise NotImplementedError("quadric enumeration implemented for q=2")
        return [
            SubspaceBasis(f, self.dim, (v,), _trusted=True)
            for v in range(1, 1 << self.dim)
            if self.value(v) == 0
        ]

    def singular_subspaces(self, d: int, seed_level=None):
        """All totally singular d-subspaces, by extension from level d-1."""
        f = self.field
        if d == 0:
            return [rref(f, self.dim, [])]
        if d == 1:
            return self.singular_points()
        prev = seed_level if seed_level is not None else self.singular_subspaces(d - 1)
        seen = set()
        out = []
        for U in prev:
            urows = list(U.rows)
            for v in self._singular_extensions(U):
                ext = SubspaceBasis(f, self.dim, tuple(bit_rref(urows + [v])), _trusted=True)
                if ext not in seen:
                    seen.add(ext)
                    out.append(ext)
        return out

    def _singular_extensions(self, U: SubspaceBasis):
        urows = list(U.rows)
        for v in span_vectors2(self.perp_rows(U.rows)):
            if v and self.value(v) == 0 and bit_reduce(v, urows):
                yield v

    # -- generators (maximal totally singular subspaces) ----------------------

    def generators_of_class(self, parity: int):
        """Generators M with dim(M ∩ f-block) ≡ parity (mod 2), each once.

        Parametrization: T = M ∩ F ranges over subspaces of the f-block,
        W = T^perp within the e-block, and M/T is the graph of an
        alternating map W -> F/T.
        """
        f, n = self.field, self.n
        if f.q != 2:
            raise NotImplementedError
        out = []
        for d in range(parity & 1, n + 1, 2):
            for T in enumerate_subspaces(f, n, d):
                t_rows = [r << n for r in T.rows]
                m = n - d
                if m == 0:
                    out.append(SubspaceBasis(f, 2 * n, tuple(bit_rref(t_rows)), _trusted=True))
                    continue
                w_rows = dot_nullspace2(list(T.rows), n)
                g_rows = _dual_vectors2(w_rows, n)
                for bits in itertools.product((0, 1), repeat=m * (m - 1) // 2):
                    phi = [0] * m
                    k = 0
                    for i in range(m):
                        for jj in range(i + 1, m):
                            if bits[k]:
                                phi[i] ^= g_rows[jj]
                                phi[jj] ^= g_rows[i]
                            k += 1
                    rows = t_rows + [w_rows[i] | (phi[i] << n) for i in range(m)]
                    out.append(SubspaceBasis(f, 2 * n, tuple(bit_rref(rows)), _trusted=True))
        return out

    def class_parity(self, M: SubspaceBasis) -> int:
        """dim(M ∩ f-block) mod 2; constant on each oriflamme class."""
        e_rank = bit_rank([r & ((1 << self.n) - 1) for r in M.rows])
        return (M.dim - e_rank) & 1

    # -- quotient structure ----------------------------------------------------

    def quotient_structure(self, U: SubspaceBasis):
        """(smaller HyperbolicForm, lift) for U^perp / U, U totally singular.

        A hyperbolic basis of the quotient is extracted; `lift(v)` maps a
        packed quotient vector to an ambient representative.
        """
        if not self.is_totally_singular(U):
            raise ValueError("quotient_structure requires a totally singular subspace")
        k = U.dim
        m = self.n - k
        perp = self.perp_rows(U.rows)
        # coset representatives of U^perp / U
        reps = []
        rows = list(U.rows)
        for p in perp:
            v = p
            for b in rows:
                if v & (b & -b):
                    v ^= b
            if v:
                rows = bit_rref(rows + [v])
                reps.append(v)
        assert len(reps) == 2 * m
        # extract hyperbolic pairs from the induced form on span(reps) mod U
        basis_e, basis_f = [], []
        space = reps
        for _ in range(m):
            vecs = span_vectors2(space)
            e = next(v for v in vecs if v and self.value(v) == 0 and bit_reduce(v, list(U.rows)))
            fv = next(v for v in vecs if self.bilinear(e, v) == 1)
            if self.value(fv):
                fv ^= e  # char-2 adjustment makes the partner singular
            basis_e.append(e)
            basis_f.append(fv)
            space = [
                v for v in _reduce_against(space, [e, fv], self)
                if v
            ]
        ordered = basis_e + basis_f
        sub = HyperbolicForm(m, self.field)

        def lift(v: int) -> int:
            out = 0
            t = v
            while t:
                i = (t & -t).bit_length() - 1
                out ^= ordered[i]
                t &= t - 1
            return out

        return sub, lift

    def generators_over(self, U: SubspaceBasis):
        """All generators containing the totally singular subspace U."""
        f = self.field
        if U.dim == self.n:
            return [U]
        sub, lift = self.quotient_structure(U)
        out = []
        for parity in (0, 1):
            for g in sub.generators_of_class(parity):
                rows = list(U.rows) + [lift(r) for r in g.rows]
                out.append(SubspaceBasis(f, self.dim, tuple(bit_rref(rows)), _trusted=True))
        return out


def _reduce_against(space_rows, pair, form):
    """Complement of the hyperbolic pair inside span(space_rows), w.r.t. B."""
    e, fv = pair
    out = []
    for v in space_rows:
        w = v
        if form.bilinear(w, fv):
            w ^= e
        if form.bilinear(w, e):
            w ^= fv
        out.append(w)
    return bit_rref([w for w in out if w])


def _dual_vectors2(w_rows, n):
    """g_j in F_2^n with <w_i, g_j> = delta_ij."""
    m = len(w_rows)
    gs = []
    for j in range(m):
        aug = [(w_rows[i], 1 if i == j else 0) for i in range(m)]
        basis = []
        for row, rhs in aug:
            for brow, brhs in basis:
                if row & (brow & -brow):
                    row ^= brow
                    rhs ^= brhs
            if row:
                basis.append((row, rhs))
            elif rhs:
                raise ValueError("inconsistent dual-vector system")
        g = 0
        # back-substitute: satisfy each pivot equation via its pivot bit
        for brow, brhs in reversed(basis):
            pc = brow & -brow
            cur = bin(brow & g).count("1") & 1
            if cur != brhs:
                g ^= pc
        gs.append(g)
    for i in range(m):
        for j in range(m):
            assert (bin(w_rows[i] & gs[j]).count("1") & 1) == (1 if i == j else 0)
    return gs


def hyperbolic_quadric(spec: QuadricSpec, override_guard=False) -> Geometry:
    """Oriflamme D_n geometry: types 1..n-2 = totally singular subspaces by
    vector dimension; types n-1 and n = the two classes of maximal singular
    subspaces, split by the intersection-parity rule.  Two maximals of
    opposite classes are incident iff they meet in dimension n-1; all other
    incidence is symmetrized containment."""
    n, f = spec.n, spec.field
    if f.q != 2:
        raise NotImplementedError("hyperbolic quadric implemented for q=2")
    if not override_guard and n > 5:
        raise SizeGuardError(f"hyperbolic_quadric D_{n}(2) exceeds size guard")
    form = HyperbolicForm(n, f)
    levels: dict[int, list[SubspaceBasis]] = {}
    prev = None
    for d in range(1, n - 1):
        prev = form.singular_subspaces(d, seed_level=prev)
        levels[d] = prev
    gens0 = form.generators_of_class(0)
    gens1 = form.generators_of_class(1)
    if min(b.key() for b in gens1) < min(b.key() for b in gens0):
        gens0, gens1 = gens1, gens0
    levels[n - 1] = gens0
    levels[n] = gens1

    ids: dict[SubspaceBasis, int] = {}
    types: dict[int, int] = {}
    payload: dict[int, SubspaceBasis] = {}
    for t in range(1, n + 1):
        for s in sorted(levels[t], key=lambda b: b.key()):
            i = len(ids)
            ids[s] = i
            types[i] = t
            payload[i] = s
    incid = []
    for t in range(2, n + 1):
        for s in levels[t]:
            i = ids[s]
            for dd in range(1, min(s.dim, n - 1)):
                for sub in subspaces_of(s, dd):
                    other = ids.get(sub)
                    if other is not None:
                        incid.append((other, i))
    idx_other = {b: ids[b] for b in levels[n]}
    for M in levels[n - 1]:
        i = ids[M]
        for H in subspaces_of(M, n - 1):
            other = _other_generator_over(form, H, M)
            j = idx_other.get(other)
            if j is not None:
                incid.append((i, j))
    return build_geometry(types, incid, typeset=range(1, n + 1), payload=payload)


def _other_generator_over(form: HyperbolicForm, H: SubspaceBasis, M: SubspaceBasis):
    """The second maximal totally singular subspace over a hyperplane H of M."""
    f = form.field
    hrows = list(H.rows)
    mrows = list(M.rows)
    for v in span_vectors2(form.perp_rows(H.rows)):
        if v and form.value(v) == 0 and bit_reduce(v, mrows):
            cand = SubspaceBasis(f, form.dim, tuple(bit_rref(hrows + [v])), _trusted=True)
            if form.is_totally_singular(cand):
                return cand
    raise ValueError("no second generator over the given hyperplane")


# ---------------------------------------------------------------------------
# half-spin spaces


class HalfSpinStructure:
    """Parametric hooks for a generator-built half-spin space D_{n,n}(q)."""

    def __init__(self, n, field, space, gens, index, form):
        self.n = n
        self.field = field
        self.space = space
        self.gens = gens          # point id -> SubspaceBasis (vector dim n)
        self.index = index        # SubspaceBasis -> point id
        self.form = form

    def distance_pair(self, x, y):
        bx, by = self.gens[x], self.gens[y]
        inter_dim = bx.dim + by.dim - bit_rank(list(bx.rows) + list(by.rows))
        return (self.n - inter_dim) // 2

    def symplecta_parametric(self):
        """Symplecta ↔ totally singular (n-4)-subspaces; the symplecton of
        such an L is the set of points (generators) containing it."""
        d = self.n - 4
        groups: dict[SubspaceBasis, list[int]] = {}
        for pid, M in enumerate(self.gens):
            for sub in subspaces_of(M, d):
                groups.setdefault(sub, []).append(pid)
        return {k: frozenset(v) for k, v in groups.items()}

    def symplecton_over(self, L: SubspaceBasis) -> frozenset:
        """Point set of the symplecton attached to a singular (n-4)-space."""
        out = []
        for g in self.form.generators_over(L):
            pid = self.index.get(g)
            if pid is not None:
                out.append(pid)
        return frozenset(out)

    def max_singulars_parametric(self):
        """(family_A, family_B): family A (singular rank n-1) from the
        opposite-class maximals via hyperplane meets; family B (singular
        rank 3) from totally singular (n-3)-subspaces."""
        n, form = self.n, self.form
        fam_a: dict[SubspaceBasis, set[int]] = {}
        for pid, M in enumerate(self.gens):
            for H in subspaces_of(M, n - 1):
                other = _other_generator_over(form, H, M)
                fam_a.setdefault(other, set()).add(pid)
        fam_b: dict[SubspaceBasis, set[int]] = {}
        for pid, M in enumerate(self.gens):
            for sub in subspaces_of(M, n - 3):
                fam_b.setdefault(sub, set()).add(pid)
        return (
            [frozenset(v) for _, v in sorted(fam_a.items(), key=lambda kv: kv[0].key())],
            [frozenset(v) for _, v in sorted(fam_b.items(), key=lambda kv: kv[0].key())],
        )


def half_spin_space(n: int, field: Field, override_guard=False):
    """Points = one oriflamme class of maximal singular subspaces of D_n(q);
    lines = totally singular (n-2)-subspaces, each carried by its q+1
    class-members; collinearity <=> intersection of vector dimension n-2.

    n=6 is exposed through a lazy adjacency interface (points materialized,
    neighborhoods computed on demand and cached)."""
    if (field.q != 2 or n not in (5, 6)) and not override_guard:
        raise SizeGuardError("half_spin_space supports n in {5, 6} with q = 2")
    form = HyperbolicForm(n, field)
    gens0 = form.generators_of_class(0)
    gens1 = form.generators_of_class(1)
    if min(b.key() for b in gens1) < min(b.key() for b in gens0):
        gens0 = gens1
    gens = sorted(gens0, key=lambda b: b.key())
    index = {b: i for i, b in enumerate(gens)}
    meta = {"family": "half-spin", "n": n, "q": field.q}

    if n == 5:
        groups: dict[SubspaceBasis, list[int]] = {}
        for pid, M in enumerate(gens):
            for W in subspaces_of(M, n - 2):
                groups.setdefault(W, []).append(pid)
        lines = [tuple(sorted(v))
                 for _, v in sorted(groups.items(), key=lambda kv: kv[0].key())]
        space = PointLineSpace(len(gens), lines, payload=gens, meta=meta, validate=False)
        space.structure = HalfSpinStructure(n, field, space, gens, index, form)
        return space

    def points_over(W: SubspaceBasis):
        ids = []
        for g in form.generators_over(W):
            pid = index.get(g)
            if pid is not None:
                ids.append(pid)
        return ids

    def neighbor_fn(i):
        M = gens[i]
        out = set()
        for W in subspaces_of(M, n - 2):
            out.update(points_over(W))
        out.discard(i)
        return out

    def lines_fn(i):
        M = gens[i]
        for W in subspaces_of(M, n - 2):
            yield tuple(sorted(points_over(W)))

    space = LazyPointLineSpace(
        len(gens), neighbor_fn, lines_fn=lines_fn, payload=gens, meta=meta
    )
    space.structure = HalfSpinStructure(n, field, space, gens, index, form)
    return space


# ---------------------------------------------------------------------------
# rank-2 geometry view (for the interchange format)


def as_rank2_geometry(space: PointLineSpace) -> Geometry:
    """A point-line space as a rank-2 geometry (types 1 = points, 2 = lines)."""
    types = {}
    payload = {}
    for p in space.points():
        types[p] = 1
        if space.payload is not None:
            payload[p] = space.payload[p]
    incid = []
    for li, L in enumerate(space.lines):
        lid = space.n + li
        types[lid] = 2
        for p in L:
            incid.append((p, lid))
    return build_geometry(types, incid, typeset=(1, 2), payload=payload)
