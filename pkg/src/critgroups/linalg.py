"""Exact integer linear algebra.

Dense matrices of Python ints, column-style Hermite normal form, Smith
normal form with optional transforms, lattice subquotients, and finitely
generated abelian groups given either by invariant factors or by an explicit
presentation.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from sympy import factorint, isprime

from .errors import ContainmentViolation, InfiniteGroupError, NotAComplex, NotAHomomorphism

INFINITE = math.inf


class IntMatrix:
    """Immutable dense matrix of arbitrary-precision integers."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(operator.index(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> IntMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], nrows: int) -> IntMatrix:
        cols = [tuple(c) for c in columns]
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column length mismatch")
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @classmethod
    def hstack(cls, *blocks: IntMatrix) -> IntMatrix:
        n = blocks[0].nrows
        if any(b.nrows != n for b in blocks):
            raise ValueError("hstack needs equal row counts")
        rows = [sum((b._rows[i] for b in blocks), ()) for i in range(n)]
        return cls(rows, sum(b.ncols for b in blocks))

    @classmethod
    def vstack(cls, *blocks: IntMatrix) -> IntMatrix:
        m = blocks[0].ncols
        if any(b.ncols != m for b in blocks):
            raise ValueError("vstack needs equal column counts")
        return cls([r for b in blocks for r in b._rows], m)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[int, ...]]:
        if self.nrows == 0:
            return [()] * self.ncols
        return list(zip(*self._rows))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return self._rows[i][j]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix.from_columns(self._rows, self.ncols)

    def transpose(self) -> IntMatrix:
        return self.T

    def select_columns(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix([[r[j] for j in idx] for r in self._rows], len(idx))

    def select_rows(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix([self._rows[i] for i in idx], self.ncols)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self._rows], other.ncols
        )

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._rows)

    def _zip(self, other: IntMatrix, op) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(
            [[op(a, b) for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self.ncols
        )

    def __add__(self, other: IntMatrix) -> IntMatrix:
        return self._zip(other, operator.add)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self._zip(other, operator.sub)

    def __neg__(self) -> IntMatrix:
        return IntMatrix([[-a for a in r] for r in self._rows], self.ncols)

    def __rmul__(self, k: int) -> IntMatrix:
        k = operator.index(k)
        return IntMatrix([[k * a for a in r] for r in self._rows], self.ncols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, ncols={self.ncols})"


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x, nx, y, ny = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
    if a < 0:
        return -a, -x, -y
    return a, x, y


# ---------------------------------------------------------------------------
# Hermite normal form


@dataclass(frozen=True, eq=False)
class LatticeBasis:
    """Canonical basis of a column lattice, in column-style Hermite form.

    ``H`` is n x r, column i has its first nonzero entry (the pivot, > 0) at
    row ``pivots[i]``, pivots strictly increase, and every entry of an earlier
    column in a later pivot row lies in [0, pivot).  When built with
    ``transform=True`` the original matrix M satisfies ``M @ coefficients == H``
    and ``M @ kernel == 0`` with ``kernel`` a basis of the integer kernel.
    """

    H: IntMatrix
    pivots: tuple[int, ...]
    coefficients: IntMatrix | None = None
    kernel: IntMatrix | None = None

    @property
    def rank(self) -> int:
        return self.H.ncols

    @cached_property
    def _cols(self) -> list[tuple[int, ...]]:
        return self.H.columns()

    def coords(self, vec: Sequence[int]) -> tuple[int, ...] | None:
        """Coordinates of ``vec`` in the basis, or None if not in the lattice."""
        b = list(vec)
        if len(b) != self.H.nrows:
            raise ValueError("vector length mismatch")
        out = []
        for col, p in zip(self._cols, self.pivots):
            q, r = divmod(b[p], col[p])
            if r:
                return None
            out.append(q)
            if q:
                for i in range(p, len(b)):
                    b[i] -= q * col[i]
        if any(b):
            return None
        return tuple(out)

    def contains(self, vec: Sequence[int]) -> bool:
        return self.coords(vec) is not None

    def preimage(self, vec: Sequence[int]) -> tuple[int, ...] | None:
        """Integer x with M x = vec for the original matrix M, if one exists."""
        if self.coefficients is None:
            raise ValueError("basis was built without transform data")
        c = self.coords(vec)
        if c is None:
            return None
        return self.coefficients.apply(c)


def hermite_basis(M: IntMatrix, transform: bool = False) -> LatticeBasis:
    n, k = M.shape
    basis: dict[int, list] = {}
    kernel = []
    for j, column in enumerate(M.columns()):
        vec = list(column)
        coef = [int(i == j) for i in range(k)] if transform else None
        p = 0
        while True:
            while p < n and vec[p] == 0:
                p += 1
            if p == n:
                if transform:
                    kernel.append(coef)
                break
            slot = basis.get(p)
            if slot is None:
                basis[p] = [vec, coef]
                break
            row, rcoef = slot
            a, b = row[p], vec[p]
            if b % a == 0:
                q = b // a
                for i in range(p, n):
                    vec[i] -= q * row[i]
                if transform:
                    for i in range(k):
                        coef[i] -= q * rcoef[i]
            else:
                g, x, y = xgcd(a, b)
                ag, bg = a // g, b // g
                new_row = row[:p] + [x * row[i] + y * vec[i] for i in range(p, n)]
                new_vec = vec[:p] + [ag * vec[i] - bg * row[i] for i in range(p, n)]
                if transform:
                    new_rc = [x * rcoef[i] + y * coef[i] for i in range(k)]
                    coef = [ag * coef[i] - bg * rcoef[i] for i in range(k)]
                    slot[1] = new_rc
                slot[0] = new_row
                vec = new_vec
    pivots = sorted(basis)
    vecs = [basis[p][0] for p in pivots]
    coefs = [basis[p][1] for p in pivots]
    for i, p in enumerate(pivots):
        if vecs[i][p] < 0:
            vecs[i] = [-x for x in vecs[i]]
            if transform:
                coefs[i] = [-x for x in coefs[i]]
    # reduce earlier columns modulo each later pivot
    for i, p in enumerate(pivots):
        piv = vecs[i][p]
        for t in range(i):
            q = vecs[t][p] // piv
            if q:
                vt, vi = vecs[t], vecs[i]
                for r in range(p, n):
                    vt[r] -= q * vi[r]
                if transform:
                    ct, ci = coefs[t], coefs[i]
                    for r in range(k):
                        ct[r] -= q * ci[r]
    H = IntMatrix.from_columns(vecs, n)
    if not transform:
        return LatticeBasis(H, tuple(pivots))
    return LatticeBasis(
        H,
        tuple(pivots),
        IntMatrix.from_columns(coefs, k),
        IntMatrix.from_columns(kernel, k),
    )


def hnf(M: IntMatrix) -> tuple[IntMatrix, int]:
    """Column-style Hermite normal form: (H, rank)."""
    b = hermite_basis(M)
    return b.H, b.rank


def integer_kernel(M: IntMatrix) -> IntMatrix:
    """Matrix whose columns form a basis of {x in Z^k : M x = 0}."""
    return hermite_basis(M, transform=True).kernel


def same_lattice(A: IntMatrix, B: IntMatrix) -> bool:
    return hnf(A)[0] == hnf(B)[0]


def solve_integer(A: IntMatrix, B: IntMatrix) -> IntMatrix | None:
    """Integer X with A @ X == B, or None when no integer solution exists."""
    if A.nrows != B.nrows:
        raise ValueError("row count mismatch")
    basis = hermite_basis(A, transform=True)
    cols = []
    for b in B.columns():
        x = basis.preimage(b)
        if x is None:
            return None
        cols.append(x)
    return IntMatrix.from_columns(cols, A.ncols)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True, eq=False)
class SmithForm:
    """Smith normal form data; ``U @ M @ V`` is diagonal with ``diag`` when transforms exist."""

    diag: tuple[int, ...]
    rank: int
    U: IntMatrix | None = None
    V: IntMatrix | None = None

    @property
    def nonzero(self) -> tuple[int, ...]:
        return self.diag[: self.rank]


def snf(M: IntMatrix, transforms: bool = False) -> SmithForm:
    n, m = M.shape
    A = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None
    V = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]

    def row_axpy(dst, src, q):  # row dst += q * row src
        a, b = A[dst], A[src]
        for c in range(m):
            if b[c]:
                a[c] += q * b[c]
        if U is not None:
            a, b = U[dst], U[src]
            for c in range(n):
                if b[c]:
                    a[c] += q * b[c]

    def col_axpy(dst, src, q):  # col dst += q * col src
        for r in A:
            if r[src]:
                r[dst] += q * r[src]
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] += q * r[src]

    t = 0
    while t < min(n, m):
        best = None
        for i in range(t, n):
            row = A[i]
            for j in range(t, m):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, n):
                if A[i][t]:
                    row_axpy(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, m):
                if A[t][j]:
                    col_axpy(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                cand = [(abs(A[i][t]), i, "r") for i in range(t + 1, n) if A[i][t]]
                cand += [(abs(A[t][j]), j, "c") for j in range(t + 1, m) if A[t][j]]
                _, idx, kind = min(cand)
                if kind == "r":
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            bad = next(
                (i for i in range(t + 1, n) if any(x % p for x in A[i][t + 1 :])), None
            )
            if bad is None:
                break
            row_axpy(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    diag = tuple(A[i][i] for i in range(min(n, m)))
    rank = sum(1 for d in diag if d)
    if not transforms:
        return SmithForm(diag, rank)
    return SmithForm(diag, rank, IntMatrix(U, n), IntMatrix(V, m))


# ---------------------------------------------------------------------------
# Abelian groups


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    # trial division and Pollard rho only
    return tuple(sorted(factorint(n, use_pm1=False, use_ecm=False).items()))


def _normalize_cyclic(orders: Iterable[int]) -> list[int]:
    a = sorted(orders)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            g = math.gcd(a[i], a[j])
            a[i], a[j] = g, a[i] * a[j] // g
    return [x for x in a if x > 1]


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group Z_{d1} + ... + Z_{dt} + Z^r with d1 | d2 | ..."""

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        f = tuple(operator.index(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for i, d in enumerate(f):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if i and d % f[i - 1]:
                raise ValueError(f"divisibility fails: {f[i - 1]} does not divide {d}")

    @classmethod
    def from_cyclic(cls, orders: Iterable[int], free_rank: int = 0) -> AbelianGroup:
        """Group from any list of cyclic orders; an order of 0 means a copy of Z."""
        finite = []
        for d in orders:
            d = abs(operator.index(d))
            if d == 0:
                free_rank += 1
            else:
                finite.append(d)
        return cls(tuple(_normalize_cyclic(finite)), free_rank)

    @classmethod
    def trivial(cls) -> AbelianGroup:
        return cls()

    @property
    def order(self) -> int | float:
        if self.free_rank:
            return INFINITE
        return math.prod(self.invariant_factors)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    def __add__(self, other: AbelianGroup) -> AbelianGroup:
        return AbelianGroup.from_cyclic(
            self.invariant_factors + other.invariant_factors, self.free_rank + other.free_rank
        )

    def power(self, k: int) -> AbelianGroup:
        return AbelianGroup.from_cyclic(self.invariant_factors * k, self.free_rank * k)

    def primary_decomposition(self) -> dict[int, list[int]]:
        if self.free_rank:
            raise InfiniteGroupError("primary decomposition of an infinite group")
        out: dict[int, list[int]] = {}
        for d in self.invariant_factors:
            for p, e in _factor(d):
                out.setdefault(p, []).append(e)
        return {p: sorted(out[p]) for p in sorted(out)}

    def sylow(self, p: int) -> AbelianGroup:
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        exps = self.primary_decomposition().get(p, [])
        return AbelianGroup.from_cyclic([p**e for e in exps])

    def primary_orders(self) -> list[int]:
        return [p**e for p, es in self.primary_decomposition().items() for e in es]

    def __str__(self) -> str:
        parts = [f"Z{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " ⊕ ".join(parts) if parts else "trivial"

    def primary_str(self) -> str:
        parts = [f"Z{q}" for q in self.primary_orders()] + ["Z"] * self.free_rank
        return " ⊕ ".join(parts) if parts else "trivial"

    def describe(self) -> str:
        """Invariant-factor form, followed by the primary form when it differs."""
        a = str(self)
        if self.free_rank:
            return a
        b = self.primary_str()
        return a if a == b else f"{a} = {b}"

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors), "free_rank": self.free_rank}

    @classmethod
    def from_json(cls, data: dict) -> AbelianGroup:
        return cls(tuple(data["invariant_factors"]), int(data.get("free_rank", 0)))


def lcm_exponent(g: AbelianGroup) -> int:
    return g.invariant_factors[-1] if g.invariant_factors else 1


# ---------------------------------------------------------------------------
# Presentations and homomorphisms


@dataclass(frozen=True, eq=False)
class PresentedGroup:
    """The group A/B, where A is spanned by the independent columns of U and
    the columns of R give generators of B in U-coordinates."""

    U: IntMatrix
    R: IntMatrix

    def __post_init__(self):
        if self.U.ncols != self.R.nrows:
            raise ValueError("R must have one row per column of U")

    @property
    def ambient_rank(self) -> int:
        return self.U.nrows

    @property
    def rank(self) -> int:
        return self.U.ncols

    @cached_property
    def _gens(self) -> LatticeBasis:
        b = hermite_basis(self.U, transform=True)
        if b.rank != self.U.ncols:
            raise ValueError("columns of U are dependent")
        return b

    @cached_property
    def _rels(self) -> LatticeBasis:
        return hermite_basis(self.R)

    @cached_property
    def group(self) -> AbelianGroup:
        s = snf(self.R)
        return AbelianGroup(tuple(d for d in s.nonzero if d > 1), self.rank - s.rank)

    def coordinates(self, vec: Sequence[int]) -> tuple[int, ...] | None:
        """U-coordinates of an ambient vector, or None if outside A."""
        return self._gens.preimage(vec)

    def is_relation(self, coords: Sequence[int]) -> bool:
        return self._rels.contains(coords)

    def same_presentation(self, other: PresentedGroup) -> bool:
        return self is other or (self.U == other.U and self.R == other.R)


def lattice_quotient(gens_A: IntMatrix, gens_B: IntMatrix) -> tuple[AbelianGroup, PresentedGroup]:
    """The subquotient (column lattice of A) / (column lattice of B)."""
    if gens_A.nrows != gens_B.nrows:
        raise ValueError("ambient dimension mismatch")
    basis = hermite_basis(gens_A)
    coords = []
    for j, col in enumerate(gens_B.columns()):
        c = basis.coords(col)
        if c is None:
            raise ContainmentViolation(f"column {j} of B is not in lattice A")
        coords.append(c)
    pres = PresentedGroup(basis.H, IntMatrix.from_columns(coords, basis.rank))
    return pres.group, pres


@dataclass(frozen=True, eq=False)
class GroupHom:
    """Homomorphism of presented groups induced by an ambient integer matrix F."""

    source: PresentedGroup
    target: PresentedGroup
    F: IntMatrix
    M: IntMatrix = field(init=False, repr=False)

    def __post_init__(self):
        if self.F.shape != (self.target.ambient_rank, self.source.ambient_rank):
            raise NotAHomomorphism(f"matrix shape {self.F.shape} does not match the ambient lattices")
        image = self.F @ self.source.U
        cols = []
        for j, v in enumerate(image.columns()):
            c = self.target.coordinates(v)
            if c is None:
                raise NotAHomomorphism(f"generator {j} does not map into the target lattice")
            cols.append(c)
        M = IntMatrix.from_columns(cols, self.target.rank)
        for j, v in enumerate((M @ self.source.R).columns()):
            if not self.target.is_relation(v):
                raise NotAHomomorphism(f"relation {j} does not map into the target relations")
        object.__setattr__(self, "M", M)


def induced_hom(f: GroupHom) -> IntMatrix:
    """Matrix M with U_target @ M == F @ U_source (unique, since U has full column rank)."""
    return f.M


def compose(g: GroupHom, f: GroupHom) -> GroupHom:
    if not f.target.same_presentation(g.source):
        raise ValueError("homomorphisms are not composable")
    return GroupHom(f.source, g.target, g.F @ f.F)


def scalar_hom(P: PresentedGroup, k: int) -> GroupHom:
    return GroupHom(P, P, k * IntMatrix.identity(P.ambient_rank))


def homs_equal(f: GroupHom, g: GroupHom) -> bool:
    """True when f and g induce the same map of groups."""
    if not (f.source.same_presentation(g.source) and f.target.same_presentation(g.target)):
        raise ValueError("homomorphisms have different source or target")
    return all(f.target.is_relation(c) for c in (f.M - g.M).columns())


def kernel_lattice(f: GroupHom) -> IntMatrix:
    """Generators, in source coordinates, of the preimage of the target relations."""
    rs, Rt = f.source.rank, f.target.R
    K = integer_kernel(IntMatrix.hstack(f.M, -Rt))
    return K.select_rows(range(rs))


def hom_kernel(f: GroupHom) -> AbelianGroup:
    return lattice_quotient(kernel_lattice(f), f.source.R)[0]


def hom_image(f: GroupHom) -> AbelianGroup:
    Rt = f.target.R
    return lattice_quotient(IntMatrix.hstack(f.M, Rt), Rt)[0]


def hom_cokernel(f: GroupHom) -> AbelianGroup:
    Rt = f.target.R
    return lattice_quotient(IntMatrix.identity(f.target.rank), IntMatrix.hstack(f.M, Rt))[0]


def is_injective(f: GroupHom) -> bool:
    return hom_kernel(f).is_trivial


def is_surjective(f: GroupHom) -> bool:
    return hom_cokernel(f).is_trivial


def complex_homology(f: GroupHom, g: GroupHom) -> AbelianGroup:
    """ker(g) / im(f) for a composable pair with g o f = 0."""
    if not f.target.same_presentation(g.source):
        raise ValueError("homomorphisms are not composable")
    Z = g.target
    for j, c in enumerate((g.M @ f.M).columns()):
        if not Z.is_relation(c):
            raise NotAComplex(f"g o f is nonzero on generator {j}")
    Y = f.target
    return lattice_quotient(kernel_lattice(g), IntMatrix.hstack(f.M, Y.R))[0]
