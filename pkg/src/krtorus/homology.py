"""Exact integer linear algebra: Smith normal form and cellular homology.

All arithmetic is arbitrary-precision int (Fractions only inside the
inverse helper). The Smith reduction uses a fixed pivot rule, smallest
nonzero absolute value with row-major tie break, so results are
reproducible bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalInvariantError


@dataclass(frozen=True)
class IntMatrix:
    entries: tuple[tuple[int, ...], ...]
    shape: tuple[int, int]

    @classmethod
    def from_rows(cls, rows, cols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
            if cols is not None and cols != width:
                raise ValueError("explicit column count disagrees with rows")
            cols = width
        elif cols is None:
            cols = 0
        return cls(rows, (len(rows), cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows(tuple(tuple(1 if i == j else 0 for j in range(n))
                                   for i in range(n)), cols=n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntMatrix":
        return cls(tuple(tuple(0 for _ in range(c)) for _ in range(r)), (r, c))

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "IntMatrix":
        r, c = self.shape
        return IntMatrix(tuple(tuple(self.entries[i][j] for i in range(r))
                               for j in range(c)), (c, r))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        r, k = self.shape
        k2, c = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = [other.column(j) for j in range(c)]
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(row, col))
                                     for col in cols)
                               for row in self.entries), (r, c))

    def det(self) -> int:
        # Bareiss fraction-free elimination
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        r, c = self.shape
        return r == c and abs(self.det()) == 1

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(min(self.shape)))


@dataclass(frozen=True)
class SnfResult:
    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return self.d.diagonal()

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def _smith_tracked(a: IntMatrix):
    nr, nc = a.shape
    m = [list(r) for r in a.entries]
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def row_swap(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def row_sub(i, q, k):
        mi, mk = m[i], m[k]
        for j in range(nc):
            mi[j] -= q * mk[j]
        ui, uk = u[i], u[k]
        for j in range(nr):
            ui[j] -= q * uk[j]

    def col_sub(j, q, k):
        for r in m:
            r[j] -= q * r[k]
        for r in v:
            r[j] -= q * r[k]

    t = 0
    while True:
        # pivot: smallest nonzero absolute value, row-major tie break
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                e = m[i][j]
                if e and (best is None or abs(e) < abs(best[0])):
                    best = (e, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            row_swap(t, bi)
        if bj != t:
            col_swap(t, bj)
        while True:
            dirty = False
            for i in range(t + 1, nr):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    row_sub(i, q, t)
                    if m[i][t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    col_sub(j, q, t)
                    if m[t][j]:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            offender = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if m[i][j] % m[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            # pull a non-divisible entry into the working row and repeat
            mi = m[offender]
            mt = m[t]
            for j in range(nc):
                mt[j] += mi[j]
            ui, ut = u[offender], u[t]
            for j in range(nr):
                ut[j] += ui[j]
        t += 1
    for i in range(min(nr, nc)):
        if m[i][i] < 0:
            for j in range(nc):
                m[i][j] = -m[i][j]
            for j in range(nr):
                u[i][j] = -u[i][j]
    return m, u, v


# above this size the O(n^3) determinant checks dominate, so only the
# cheap product identity is verified; the acceptance sweep runs tiny
# matrices through the full check
_FULL_CHECK_LIMIT = 80


def smith_normal_form(a: IntMatrix) -> SnfResult:
    """U @ A @ V = D with U, V unimodular and D a divisibility diagonal."""
    m, u, v = _smith_tracked(a)
    res = SnfResult(IntMatrix.from_rows(u, cols=a.shape[0]),
                    IntMatrix.from_rows(m, cols=a.shape[1]),
                    IntMatrix.from_rows(v, cols=a.shape[1]))
    d = res.d
    for i in range(d.shape[0]):
        for j in range(d.shape[1]):
            if i != j and d[i, j]:
                raise InternalInvariantError("Smith form is not diagonal")
    diag = res.diagonal
    for x, y in zip(diag, diag[1:]):
        if x == 0 and y != 0:
            raise InternalInvariantError("zero before nonzero on the Smith diagonal")
        if x and y % x:
            raise InternalInvariantError("Smith diagonal is not a divisibility chain")
    if any(x < 0 for x in diag):
        raise InternalInvariantError("negative Smith diagonal entry")
    if (res.u @ a @ res.v).entries != d.entries:
        raise InternalInvariantError("Smith factorization identity failed")
    if max(a.shape, default=0) <= _FULL_CHECK_LIMIT:
        if not res.u.is_unimodular() or not res.v.is_unimodular():
            raise InternalInvariantError("Smith transform is not unimodular")
    return res


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    n, c = m.shape
    if n != c:
        raise ValueError("inverse of a non-square matrix")
    a = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(m.entries)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    out = []
    for i in range(n):
        row = []
        for j in range(n, 2 * n):
            x = a[i][j]
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular over the integers")
            row.append(int(x))
        out.append(tuple(row))
    return IntMatrix.from_rows(out, cols=n)


@dataclass(frozen=True)
class CokernelInvariants:
    """Invariant factors of Z^rows / column-span, plus the free rank."""

    diagonal: tuple[int, ...]
    free_rank: int

    @property
    def factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)

    def pair_nm(self) -> tuple[int, int]:
        """(n, nm) for a finite cokernel with at most two invariant factors."""
        if self.free_rank:
            raise ValueError("cokernel is infinite")
        fs = self.factors
        if len(fs) > 2:
            raise ValueError(f"more than two invariant factors: {fs}")
        padded = (1,) * (2 - len(fs)) + fs
        return padded


def cokernel_invariants(a: IntMatrix) -> CokernelInvariants:
    res = smith_normal_form(a)
    return CokernelInvariants(res.diagonal, free_rank=a.shape[0] - res.rank)


@dataclass(frozen=True)
class HomologySummary:
    betti: tuple[int, int, int]
    torsion: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


class _ChainBasis:
    """Shared machinery for H1 of a 2-complex given boundary matrices."""

    def __init__(self, d1: IntMatrix, d2: IntMatrix):
        n0, n1 = d1.shape
        n1b, n2 = d2.shape
        if n1 != n1b:
            raise ValueError("boundary matrices do not compose")
        prod = d1 @ d2
        if any(x for row in prod.entries for x in row):
            raise ValueError("d1 @ d2 is not zero")
        self.d1, self.d2 = d1, d2
        self.s1 = smith_normal_form(d1)
        self.r1 = self.s1.rank
        self.v1_inv = unimodular_inverse(self.s1.v)
        folded = self.v1_inv @ d2
        for i in range(self.r1):
            if any(folded.entries[i]):
                raise InternalInvariantError("image of d2 leaks outside the kernel of d1")
        self.b_mat = IntMatrix.from_rows(folded.entries[self.r1:], cols=n2)
        self.s2 = smith_normal_form(self.b_mat)
        self.r2 = self.s2.rank
        self.u2 = self.s2.u
        self.u2_inv = unimodular_inverse(self.u2)
        self.kernel_rank = n1 - self.r1

    def torsion1(self) -> tuple[int, ...]:
        return tuple(d for d in self.s2.diagonal if d > 1)

    def betti(self) -> tuple[int, int, int]:
        n0 = self.d1.shape[0]
        n2 = self.d2.shape[1]
        return (n0 - self.r1, self.kernel_rank - self.r2, n2 - self.r2)

    def free_h1_chains(self) -> IntMatrix:
        """Columns are 1-chains whose classes form a basis of free H1."""
        k = self.kernel_rank
        n1 = self.d1.shape[1]
        kernel_cols = [self.s1.v.column(self.r1 + t) for t in range(k)]
        coeff = self.u2_inv
        cols = []
        for t in range(self.r2, k):
            col = [0] * n1
            for i in range(k):
                ci = coeff[i, t]
                if ci:
                    for x in range(n1):
                        col[x] += ci * kernel_cols[i][x]
            cols.append(col)
        return IntMatrix.from_rows(
            tuple(tuple(col[x] for col in cols) for x in range(n1)),
            cols=len(cols))

    def h1_coords(self, chains: IntMatrix) -> IntMatrix:
        """Coordinates of cycle columns in the free H1 basis."""
        folded = self.v1_inv @ chains
        for i in range(self.r1):
            if any(folded.entries[i]):
                raise InternalInvariantError("chain is not a cycle")
        kern = IntMatrix.from_rows(folded.entries[self.r1:], cols=chains.shape[1])
        w = self.u2 @ kern
        # torsion/image coordinates (rows below r2 survive)
        return IntMatrix.from_rows(w.entries[self.r2:], cols=chains.shape[1])


def chain_homology(d1: IntMatrix, d2: IntMatrix) -> HomologySummary:
    """Homology of a 2-complex straight from its boundary matrices."""
    basis = _ChainBasis(d1, d2)
    t0 = tuple(d for d in basis.s1.diagonal if d > 1)
    return HomologySummary(basis.betti(), (t0, basis.torsion1(), ()))


def cellular_homology(p) -> HomologySummary:
    """Homology of a cell partition; (1, 2, 1) betti and no torsion on a torus."""
    return chain_homology(p.boundary_1, p.boundary_2)


def _signed_permutation_matrices(p, a):
    n0 = len(p.zero_cells)
    n1 = len(p.one_cells)
    n2 = len(p.two_cells)
    p0 = [[0] * n0 for _ in range(n0)]
    for j in range(n0):
        p0[a.perm0[j]][j] = 1
    p1 = [[0] * n1 for _ in range(n1)]
    for j in range(n1):
        img, sign = a.perm1[j]
        p1[img][j] = sign
    p2 = [[0] * n2 for _ in range(n2)]
    for j in range(n2):
        p2[a.perm2[j]][j] = 1
    return (IntMatrix.from_rows(p0, cols=n0),
            IntMatrix.from_rows(p1, cols=n1),
            IntMatrix.from_rows(p2, cols=n2))


def h1_action(p, a) -> IntMatrix:
    """Matrix of a cell automorphism on free H1, in the basis chain_homology uses.

    The automorphism must be a chain map: commuting with both boundary
    operators is asserted before any quotient is taken.
    """
    m0, m1, m2 = _signed_permutation_matrices(p, a)
    if (m0 @ p.boundary_1).entries != (p.boundary_1 @ m1).entries:
        raise InternalInvariantError("automorphism does not commute with boundary_1")
    if (m1 @ p.boundary_2).entries != (p.boundary_2 @ m2).entries:
        raise InternalInvariantError("automorphism does not commute with boundary_2")
    basis = _ChainBasis(p.boundary_1, p.boundary_2)
    h = basis.free_h1_chains()
    return basis.h1_coords(m1 @ h)
