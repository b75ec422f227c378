"""Exact linear algebra over small finite fields.

Subspaces of F_q^n are kept in reduced row-echelon form with strictly
increasing pivot columns, so equal subspaces always have identical
representations.  F_2 rows are packed as machine ints (bit i = column i);
other supported orders use coefficient tuples with table lookup.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9)

# Irreducible polynomials for the non-prime orders, low-degree coefficient
# first, leading coefficient omitted (monic).
_IRREDUCIBLE = {
    4: (1, 1),       # x^2 + x + 1 over F_2
    8: (1, 1, 0),    # x^3 + x + 1 over F_2
    9: (1, 0),       # x^2 + 1 over F_3
}


class InputError(ValueError):
    """Bad arguments: dimension mismatch, unsupported order, out-of-range ids."""


def _build_tables(p: int, deg: int, poly: tuple[int, ...]) -> tuple[tuple, tuple]:
    """Multiplication/addition tables for GF(p^deg), elements encoded base p."""
    q = p ** deg

    def enc(coeffs):
        return sum(c * p**i for i, c in enumerate(coeffs))

    def dec(x):
        out = []
        for _ in range(deg):
            out.append(x % p)
            x //= p
        return out

    def poly_mul(a, b):
        prod = [0] * (2 * deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        # reduce modulo the irreducible polynomial
        for i in range(len(prod) - 1, deg - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j, pj in enumerate(poly):
                    prod[i - deg + j] = (prod[i - deg + j] - c * pj) % p
        return prod[:deg]

    add = tuple(
        tuple(enc([(x + y) % p for x, y in zip(dec(a), dec(b))]) for b in range(q))
        for a in range(q)
    )
    mul = tuple(
        tuple(enc(poly_mul(dec(a), dec(b))) for b in range(q)) for a in range(q)
    )
    return add, mul


class Field:
    """GF(q) for q in SUPPORTED_ORDERS; immutable, element set = range(q)."""

    __slots__ = ("q", "p", "deg", "_add", "_mul", "_inv")

    def __init__(self, q: int):
        if q not in SUPPORTED_ORDERS:
            raise InputError(f"unsupported field order {q}; supported: {SUPPORTED_ORDERS}")
        self.q = q
        if q in _IRREDUCIBLE:
            p = 2 if q in (4, 8) else 3
            deg = {4: 2, 8: 3, 9: 2}[q]
            self._add, self._mul = _build_tables(p, deg, _IRREDUCIBLE[q])
        else:
            p, deg = q, 1
            self._add = tuple(tuple((a + b) % q for b in range(q)) for a in range(q))
            self._mul = tuple(tuple((a * b) % q for b in range(q)) for a in range(q))
        self.p, self.deg = p, deg
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    inv[a] = b
                    break
        self._inv = tuple(inv)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        row = self._add[a]
        return row.index(0)

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self.neg(b)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[a]

    def __eq__(self, other):
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self):
        return hash(("Field", self.q))

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def GF(q: int) -> Field:
    return Field(q)


# ---------------------------------------------------------------------------
# F_2 bit-row kernels


def bit_rref(rows: list[int]) -> list[int]:
    """Reduced row echelon form of int-packed F_2 rows (bit i = column i)."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            low = b & -b
            if row & low:
                row ^= b
        if row:
            basis.append(row)
            low = row & -row
            for i, b in enumerate(basis[:-1]):
                if b & low:
                    basis[i] = b ^ row
    basis.sort(key=lambda r: r & -r)
    return basis


def bit_rank(rows) -> int:
    basis: list[int] = []
    for row in rows:
        for b in basis:
            if row & (b & -b):
                row ^= b
        if row:
            basis.append(row)
    return len(basis)


def bit_reduce(v: int, basis: list[int]) -> int:
    """Reduce v against an RREF basis; 0 iff v is in the span."""
    for b in basis:
        if v & (b & -b):
            v ^= b
    return v


# ---------------------------------------------------------------------------
# Generic (tuple-vector) kernels for q > 2


def _generic_rref(field: Field, rows: list[list[int]]) -> list[tuple[int, ...]]:
    work = [list(r) for r in rows]
    n = len(work[0]) if work else 0
    basis: list[list[int]] = []
    pivots: list[int] = []
    for row in work:
        for b, pc in zip(basis, pivots):
            c = row[pc]
            if c:
                row = [field.sub(x, field.mul(c, y)) for x, y in zip(row, b)]
        pc = next((i for i, x in enumerate(row) if x), None)
        if pc is None:
            continue
        s = field.inv(row[pc])
        row = [field.mul(s, x) for x in row]
        for i, (b, bpc) in enumerate(zip(basis, pivots)):
            c = b[pc]
            if c:
                basis[i] = [field.sub(x, field.mul(c, y)) for x, y in zip(b, row)]
        basis.append(row)
        pivots.append(pc)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    return [tuple(basis[i]) for i in order]


# ---------------------------------------------------------------------------
# SubspaceBasis


def pack2(vec) -> int:
    m = 0
    for i, x in enumerate(vec):
        if x & 1:
            m |= 1 << i
    return m


def unpack2(m: int, n: int) -> tuple[int, ...]:
    return tuple((m >> i) & 1 for i in range(n))


class SubspaceBasis:
    """Canonical RREF basis of a subspace of F_q^n.  Immutable and hashable."""

    __slots__ = ("field", "n", "rows", "_hash")

    def __init__(self, field: Field, n: int, rows: tuple, _trusted: bool = False):
        self.field = field
        self.n = n
        self.rows = rows  # tuple[int] for q=2, tuple[tuple[int,...]] otherwise
        self._hash = hash((field.q, n, rows))
        if not _trusted:
            raise InputError("use rref() to construct a SubspaceBasis")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def row_vectors(self) -> tuple[tuple[int, ...], ...]:
        if self.field.q == 2:
            return tuple(unpack2(r, self.n) for r in self.rows)
        return self.rows

    def key(self) -> tuple:
        """Flattened RREF matrix; the canonical total order on subspaces."""
        flat = []
        for rv in self.row_vectors():
            flat.extend(rv)
        return tuple(flat)

    def contains_vector(self, vec) -> bool:
        if self.field.q == 2:
            v = vec if isinstance(vec, int) else pack2(vec)
            return bit_reduce(v, list(self.rows)) == 0
        f = self.field
        row = list(vec)
        for b in self.rows:
            pc = next(i for i, x in enumerate(b) if x)
            c = row[pc]
            if c:
                row = [f.sub(x, f.mul(c, y)) for x, y in zip(row, b)]
        return not any(row)

    def vectors(self):
        """All q^dim vectors of the subspace (packed ints for q=2)."""
        if self.field.q == 2:
            vs = [0]
            for r in self.rows:
                vs += [v ^ r for v in vs]
            return vs
        f = self.field
        vs = [(0,) * self.n]
        for r in self.rows:
            new = []
            for c in range(1, f.q):
                scaled = tuple(f.mul(c, x) for x in r)
                new += [tuple(f.add(a, b) for a, b in zip(v, scaled)) for v in vs]
            vs += new
        return vs

    def to_hex(self) -> str:
        """Debug text form: one row per line, hex-packed for q=2."""
        if self.field.q == 2:
            return "\n".join(format(r, "x") for r in self.rows)
        return "\n".join("".join(str(x) for x in r) for r in self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, SubspaceBasis)
            and self._hash == other._hash
            and self.n == other.n
            and self.rows == other.rows
            and self.field.q == other.field.q
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"SubspaceBasis(GF({self.field.q}), n={self.n}, dim={self.dim})"


def rref(field: Field, n: int, vectors) -> SubspaceBasis:
    """Canonical basis of the span of `vectors` in F_q^n.

    Vectors are coordinate sequences; for q=2 packed ints are accepted too.
    """
    vecs = list(vectors)
    if field.q == 2:
        packed = []
        for v in vecs:
            if isinstance(v, int):
                if v >> n:
                    raise InputError(f"vector 0x{v:x} exceeds ambient dimension {n}")
                packed.append(v)
            else:
                if len(v) != n:
                    raise InputError(f"vector of length {len(v)} in ambient dimension {n}")
                packed.append(pack2(v))
        return SubspaceBasis(field, n, tuple(bit_rref(packed)), _trusted=True)
    rows = []
    for v in vecs:
        if len(v) != n:
            raise InputError(f"vector of length {len(v)} in ambient dimension {n}")
        rows.append([x % field.q if isinstance(x, int) else x for x in v])
    return SubspaceBasis(field, n, tuple(_generic_rref(field, rows)), _trusted=True)


def zero_subspace(field: Field, n: int) -> SubspaceBasis:
    return SubspaceBasis(field, n, (), _trusted=True)


def _check_ambient(U: SubspaceBasis, W: SubspaceBasis):
    if U.n != W.n or U.field.q != W.field.q:
        raise InputError(
            f"ambient mismatch: F_{U.field.q}^{U.n} vs F_{W.field.q}^{W.n}"
        )


def subspace_sum(U: SubspaceBasis, W: SubspaceBasis) -> SubspaceBasis:
    """Smallest subspace containing both: the span of the stacked rows."""
    _check_ambient(U, W)
    if U.field.q == 2:
        return SubspaceBasis(
            U.field, U.n, tuple(bit_rref(list(U.rows) + list(W.rows))), _trusted=True
        )
    return rref(U.field, U.n, list(U.rows) + list(W.rows))


def intersect(U: SubspaceBasis, W: SubspaceBasis) -> SubspaceBasis:
    """Canonical basis of U ∩ W (zero-row tag method)."""
    _check_ambient(U, W)
    f = U.field
    if f.q == 2:
        # Work rows tagged with the combination of U-rows they carry.
        work = [(u, 1 << i) for i, u in enumerate(U.rows)]
        work += [(w, 0) for w in W.rows]
        basis: list[tuple[int, int]] = []
        inter: list[int] = []
        for val, tag in work:
            for bval, btag in basis:
                if val & (bval & -bval):
                    val ^= bval
                    tag ^= btag
            if val:
                basis.append((val, tag))
            elif tag:
                vec = 0
                t = tag
                while t:
                    i = (t & -t).bit_length() - 1
                    vec ^= U.rows[i]
                    t &= t - 1
                inter.append(vec)
        return SubspaceBasis(f, U.n, tuple(bit_rref(inter)), _trusted=True)
    # generic: augment with coefficient columns over the U-rows
    du = U.dim
    work = []
    for i, u in enumerate(U.rows):
        tag = [0] * du
        tag[i] = 1
        work.append(list(u) + tag)
    for w in W.rows:
        work.append(list(w) + [0] * du)
    n = U.n
    reduced = _generic_rref_partial(f, work, n)
    inter = []
    for row in reduced:
        if not any(row[:n]) and any(row[n:]):
            vec = [0] * n
            for i, c in enumerate(row[n:]):
                if c:
                    vec = [f.add(x, f.mul(c, y)) for x, y in zip(vec, U.rows[i])]
            inter.append(vec)
    return rref(f, n, inter)


def _generic_rref_partial(field: Field, rows: list[list[int]], n_pivot_cols: int):
    """RREF searching pivots only in the first n_pivot_cols columns."""
    basis: list[list[int]] = []
    pivots: list[int] = []
    out: list[list[int]] = []
    for row in rows:
        row = list(row)
        for b, pc in zip(basis, pivots):
            c = row[pc]
            if c:
                row = [field.sub(x, field.mul(c, y)) for x, y in zip(row, b)]
        pc = next((i for i, x in enumerate(row[:n_pivot_cols]) if x), None)
        if pc is None:
            out.append(row)
            continue
        s = field.inv(row[pc])
        row = [field.mul(s, x) for x in row]
        basis.append(row)
        pivots.append(pc)
    return out


def contains(U: SubspaceBasis, W: SubspaceBasis) -> bool:
    """True iff W ⊆ U (every row of W reduces to zero against U)."""
    _check_ambient(U, W)
    if U.field.q == 2:
        rows = list(U.rows)
        return all(bit_reduce(w, rows) == 0 for w in W.rows)
    return all(U.contains_vector(w) for w in W.rows)


def gaussian_count(n: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of F_q^n (Gaussian binomial)."""
    if d < 0 or d > n:
        raise InputError(f"need 0 <= d <= n, got d={d}, n={n}")
    num = den = 1
    for i in range(d):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def enumerate_subspaces(field: Field, n: int, d: int):
    """Yield every d-subspace of F_q^n exactly once, in canonical RREF form.

    The stream is restartable and partitioned by pivot pattern, so parallel
    workers can split the pivot-column combinations among themselves.
    """
    if d < 0 or d > n:
        raise InputError(f"need 0 <= d <= n, got d={d}, n={n}")
    if d == 0:
        yield zero_subspace(field, n)
        return
    q = field.q
    for pivots in itertools.combinations(range(n), d):
        pivset = set(pivots)
        free_pos = [
            (i, c) for i in range(d) for c in range(pivots[i] + 1, n) if c not in pivset
        ]
        if q == 2:
            base = [1 << p for p in pivots]
            for values in itertools.product((0, 1), repeat=len(free_pos)):
                rows = base[:]
                for (i, c), v in zip(free_pos, values):
                    if v:
                        rows[i] |= 1 << c
                yield SubspaceBasis(field, n, tuple(rows), _trusted=True)
        else:
            for values in itertools.product(range(q), repeat=len(free_pos)):
                rows = [[0] * n for _ in range(d)]
                for i, p in enumerate(pivots):
                    rows[i][p] = 1
                for (i, c), v in zip(free_pos, values):
                    rows[i][c] = v
                yield SubspaceBasis(field, n, tuple(tuple(r) for r in rows), _trusted=True)


def subspaces_of(basis: SubspaceBasis, d: int):
    """Yield the d-subspaces of a given subspace, lifted to the ambient space."""
    f, n = basis.field, basis.n
    k = basis.dim
    if d > k:
        return
    if f.q == 2:
        rows = basis.rows
        for inner in enumerate_subspaces(f, k, d):
            lifted = []
            for irow in inner.rows:
                v = 0
                t = irow
                while t:
                    i = (t & -t).bit_length() - 1
                    v ^= rows[i]
                    t &= t - 1
                lifted.append(v)
            yield SubspaceBasis(f, n, tuple(bit_rref(lifted)), _trusted=True)
    else:
        for inner in enumerate_subspaces(f, k, d):
            lifted = []
            for irow in inner.rows:
                vec = [0] * n
                for i, c in enumerate(irow):
                    if c:
                        vec = [f.add(x, f.mul(c, y)) for x, y in zip(vec, basis.rows[i])]
                lifted.append(vec)
            yield rref(f, n, lifted)
