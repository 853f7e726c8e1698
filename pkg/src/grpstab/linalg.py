"""Exact linear algebra over Z, Q and Z/p.

Matrices are dense and row-major with Python integers; nothing here ever
touches floating point.  Integer problems go through the Smith normal form,
field problems through Gaussian elimination (modular for Z/p, fraction-free
for Q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .rings import ZZ, CoeffRing


def _as_int(x) -> int:
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError(f"non-integral entry {x}")
        return x.numerator
    return int(x)


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(_as_int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows([list(self.column(j)) for j in range(self.cols)], self.rows)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(a * b for a, b in zip(r, c)) for c in cols)
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence) -> list:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.cols} columns")
        return [sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows)]

    def is_diagonal(self) -> bool:
        return all(x == 0 for k, x in enumerate(self.entries) if k // self.cols != k % self.cols)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]


@dataclass(frozen=True)
class SNFResult:
    S: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def invariants(self) -> list[int]:
        """Nonzero diagonal entries, d1 | d2 | ..."""
        return [d for d in self.S.diagonal() if d]

    @property
    def rank(self) -> int:
        return len(self.invariants)


def determinant(M: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    A = M.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _snf(A: list[list[int]], m: int, n: int, track_uinv: bool = False):
    """In-place Smith reduction of A.

    Returns (U, V, Uinv) as row lists with U*A0*V = A on exit; Uinv is None
    unless requested.  Pivots are the nonzero entry of least absolute value,
    ties to the smallest row then column.
    """
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    W = [[int(i == j) for j in range(m)] for i in range(m)] if track_uinv else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        if W is not None:
            for r in W:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):  # row dst += c * row src
        if c == 0:
            return
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]
        if W is not None:
            for r in W:
                r[src] -= c * r[dst]

    def add_col(dst, src, c):  # col dst += c * col src
        if c == 0:
            return
        for r in A:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        if W is not None:
            for r in W:
                r[i] = -r[i]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
            # leftover remainders are strictly smaller than the pivot
            cand = None
            for i in range(t + 1, m):
                if A[i][t] and (cand is None or abs(A[i][t]) < cand[0]):
                    cand = (abs(A[i][t]), i, None)
            for j in range(t + 1, n):
                if A[t][j] and (cand is None or abs(A[t][j]) < cand[0]):
                    cand = (abs(A[t][j]), None, j)
            if cand is not None:
                if cand[1] is not None:
                    swap_rows(cand[1], t)
                else:
                    swap_cols(cand[2], t)
                continue
            bad = None
            for i in range(t + 1, m):
                if any(x % piv for x in A[i][t + 1:]):
                    bad = i
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            negate_row(t)
    return U, V, W


def smith_normal_form(M: IntMatrix) -> SNFResult:
    """Smith normal form S = U M V with unimodular U, V."""
    A = M.to_rows()
    U, V, _ = _snf(A, M.rows, M.cols)
    return SNFResult(
        S=IntMatrix.from_rows(A, M.cols),
        U=IntMatrix.from_rows(U, M.rows),
        V=IntMatrix.from_rows(V, M.cols),
    )


# -- field elimination ------------------------------------------------------

def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    return [x // g for x in row] if g > 1 else row


def _integral_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each row by its denominators so the entries are integers."""
    out = []
    for r in rows:
        den = 1
        for x in r:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def _echelon(rows: list[list], ncols: int, ring: CoeffRing) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field.

    Over Z/p rows are normalised to leading 1.  Over Q the elimination is
    fraction-free: rows stay integral and primitive, pivots are arbitrary
    nonzero integers.
    """
    p = ring.p if ring.kind == "Zp" else None
    if p is not None:
        A = [[x % p for x in r] for r in rows]
    else:
        A = [_primitive(r) for r in _integral_rows(rows)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        if p is not None:
            inv = pow(A[r][c], -1, p)
            A[r] = [x * inv % p for x in A[r]]
            for i in range(len(A)):
                if i != r and A[i][c]:
                    f = A[i][c]
                    A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        else:
            a = A[r][c]
            for i in range(len(A)):
                if i != r and A[i][c]:
                    b = A[i][c]
                    A[i] = _primitive([a * x - b * y for x, y in zip(A[i], A[r])])
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M: IntMatrix, ring: CoeffRing) -> int:
    if ring.is_field:
        return len(_echelon(M.to_rows(), M.cols, ring)[1])
    return smith_normal_form(M).rank


def _kernel_field(rows: list[list], ncols: int, ring: CoeffRing) -> list[tuple]:
    E, pivots = _echelon(rows, ncols, ring)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        if ring.kind == "Zp":
            v = [0] * ncols
            v[f] = 1
            for row, pc in zip(E, pivots):
                v[pc] = -row[f] % ring.p
            basis.append(tuple(v))
        else:
            v = [Fraction(0)] * ncols
            v[f] = Fraction(1)
            for row, pc in zip(E, pivots):
                v[pc] = Fraction(-row[f], row[pc])
            den = 1
            for x in v:
                den = den * x.denominator // gcd(den, x.denominator)
            basis.append(tuple(_primitive([int(x * den) for x in v])))
    return basis


def kernel_basis(M: IntMatrix, ring: CoeffRing) -> list[tuple]:
    """Basis of {v : M v = 0}; over Z a basis of the kernel lattice.

    Over Q the basis vectors are returned as primitive integer vectors.
    """
    if ring.is_field:
        return _kernel_field(M.to_rows(), M.cols, ring)
    res = smith_normal_form(M)
    r = res.rank
    return [tuple(res.V.column(j)) for j in range(r, M.cols)]


def _solve_field(rows: list[list], b: Sequence, ncols: int, ring: CoeffRing):
    aug = [list(r) + [x] for r, x in zip(rows, b)]
    E, pivots = _echelon(aug, ncols + 1, ring)
    if pivots and pivots[-1] == ncols:
        return None
    if ring.kind == "Zp":
        x = [0] * ncols
        for row, pc in zip(E, pivots):
            x[pc] = row[ncols]
        return tuple(x)
    x = [Fraction(0)] * ncols
    for row, pc in zip(E, pivots):
        x[pc] = Fraction(row[ncols], row[pc])
    return tuple(x)


def solve_in_image(M: IntMatrix, b: Sequence, ring: CoeffRing) -> tuple | None:
    """Some x with M x = b over the ring, or None when b is not in the image."""
    if len(b) != M.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {M.rows} rows")
    if ring.is_field:
        return _solve_field(M.to_rows(), b, M.cols, ring)
    b = [ring.coerce(x) for x in b]
    res = smith_normal_form(M)
    c = res.U.apply(b)
    d = res.S.diagonal()
    y = [0] * M.cols
    for i, ci in enumerate(c):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if ci != 0:
                return None
        elif ci % di:
            return None
        else:
            y[i] = ci // di
    return tuple(res.V.apply(y))


def lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Echelon basis of the Z-span of the given integer vectors."""
    from .sparse import SparseEchelon

    ech = SparseEchelon(ZZ)
    for v in vectors:
        ech.insert({i: x for i, x in enumerate(v) if x})
    out = []
    for lead in sorted(ech.pivots):
        vec = ech.pivots[lead]
        out.append(tuple(vec.get(i, 0) for i in range(dim)))
    return out


def subquotient_invariants(Z: Sequence[Sequence], B: Sequence[Sequence], ring: CoeffRing,
                           dim: int | None = None) -> tuple[int, list[int]]:
    """Isomorphism type of span(Z)/span(B): free rank and torsion coefficients."""
    if dim is None:
        dim = len(Z[0]) if Z else (len(B[0]) if B else 0)
    zmat = IntMatrix.from_columns(Z, dim) if ring.kind != "Q" else None
    for b in B:
        if ring.kind == "Q":
            ok = _solve_field([[z[i] for z in Z] for i in range(dim)], b, len(Z), ring)
        else:
            ok = solve_in_image(zmat, b, ring)
        if ok is None:
            raise ArithmeticError(f"generator {tuple(b)} is not in the span of Z")
    if ring.is_field:
        rz = len(_echelon([list(r) for r in zip(*Z)] if Z else [], len(Z), ring)[1]) if Z else 0
        rb = len(_echelon([list(r) for r in zip(*B)] if B else [], len(B), ring)[1]) if B else 0
        return rz - rb, []
    basis = lattice_basis(Z, dim)
    bmat = IntMatrix.from_columns(basis, dim)
    coords = [solve_in_image(bmat, b, ZZ) for b in B]
    C = IntMatrix.from_columns(coords, len(basis)) if coords else IntMatrix.zeros(len(basis), 0)
    inv = smith_normal_form(C).invariants
    return len(basis) - len(inv), [d for d in inv if d > 1]


# -- list-based entry points (entries may be Fractions over Q) ------------------

def solve_lists(rows: Sequence[Sequence], ncols: int, b: Sequence, ring: CoeffRing) -> tuple | None:
    """solve_in_image for a matrix given as row lists."""
    if ring.is_field:
        return _solve_field([list(r) for r in rows], list(b), ncols, ring)
    return solve_in_image(IntMatrix.from_rows(rows, ncols), b, ring)


def kernel_lists(rows: Sequence[Sequence], ncols: int, ring: CoeffRing) -> list[tuple]:
    if ring.is_field:
        return _kernel_field([list(r) for r in rows], ncols, ring)
    return kernel_basis(IntMatrix.from_rows(rows, ncols), ring)


def rank_lists(rows: Sequence[Sequence], ncols: int, ring: CoeffRing) -> int:
    if ring.is_field:
        return len(_echelon([list(r) for r in rows], ncols, ring)[1])
    return smith_normal_form(IntMatrix.from_rows(rows, ncols)).rank
