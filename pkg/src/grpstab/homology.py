"""Low-degree group homology from the bar resolution.

H_k(G; R) for k = 1, 2 is computed at C_k of the bar complex with trivial
coefficients.  The normalized complex (no identity entries) is the working
route; the unnormalized one is kept as an independent cross-check.

Boundary columns are sparse.  im d_{k+1} is put in echelon form; every unit
pivot eliminates one basis position, so C_k / im d_{k+1} collapses to a small
presentation on the surviving positions.  A dense Smith form of that small
presentation gives torsion coefficients and class coordinates.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from . import config
from .abelian import Presentation
from .errors import CapExceeded, InputError
from .groups import FiniteGroup, Homomorphism
from .linalg import (IntMatrix, _snf, kernel_lists, smith_normal_form, solve_lists,
                     rank_lists)
from .rings import ZZ, CoeffRing
from .sparse import QuotientReducer, SparseEchelon


# -- bar complex ------------------------------------------------------------------

def bar_basis(G: FiniteGroup, degree: int, normalized: bool = True) -> list[tuple[int, ...]]:
    letters = range(1, G.order) if normalized else range(G.order)
    return list(product(letters, repeat=degree))


def _indexer(G: FiniteGroup, normalized: bool):
    n = G.order
    if normalized:
        base, off = n - 1, 1
    else:
        base, off = n, 0

    def index(t: tuple[int, ...]) -> int | None:
        k = 0
        for g in t:
            if normalized and g == 0:
                return None
            k = k * base + (g - off)
        return k

    return index


def _boundary_column(G: FiniteGroup, cell: tuple[int, ...], index) -> dict[int, int]:
    """Sparse boundary of one bar cell [g1|...|gk], trivial coefficients."""
    t = G.table
    k = len(cell)
    col: dict[int, int] = {}

    def add(face, c):
        i = index(face)
        if i is None:
            return
        v = col.get(i, 0) + c
        if v:
            col[i] = v
        else:
            col.pop(i)

    if k == 1:
        return col  # g*[] - [] = 0
    add(cell[1:], 1)
    for i in range(k - 1):
        add(cell[:i] + (t[cell[i]][cell[i + 1]],) + cell[i + 2:], -1 if i % 2 == 0 else 1)
    add(cell[:-1], -1 if k % 2 else 1)
    return col


@dataclass(frozen=True)
class BarComplexSlice:
    """Boundary map C_degree -> C_{degree-1} of the bar complex."""

    group: FiniteGroup
    degree: int
    normalized: bool
    basis: tuple[tuple[int, ...], ...]
    columns: tuple[dict, ...] = field(repr=False)
    target_dim: int = 0

    @property
    def boundary(self) -> IntMatrix:
        """Dense form of the boundary (rows index C_{degree-1})."""
        rows = [[0] * len(self.columns) for _ in range(self.target_dim)]
        for j, col in enumerate(self.columns):
            for i, c in col.items():
                rows[i][j] = c
        return IntMatrix.from_rows(rows, len(self.columns))


def bar_slice(G: FiniteGroup, degree: int, normalized: bool = True) -> BarComplexSlice:
    if degree not in (1, 2, 3):
        raise InputError("bar slices are built for degrees 1, 2, 3")
    basis = bar_basis(G, degree, normalized)
    index = _indexer(G, normalized)
    cols = tuple(_boundary_column(G, c, index) for c in basis)
    lower = (G.order - 1 if normalized else G.order) ** (degree - 1)
    return BarComplexSlice(G, degree, normalized, tuple(basis), cols, lower)


def compose_columns(outer: BarComplexSlice, inner: BarComplexSlice) -> list[dict]:
    """Sparse columns of outer o inner (should all be empty: d o d = 0)."""
    out = []
    for col in inner.columns:
        acc: dict[int, int] = {}
        for i, c in col.items():
            for j, d in outer.columns[i].items():
                v = acc.get(j, 0) + c * d
                if v:
                    acc[j] = v
                else:
                    acc.pop(j)
        out.append(acc)
    return out


def chain_map(f: Homomorphism, chain: dict[int, int], degree: int) -> dict[int, int]:
    """Push a normalized bar chain along f: [g1|...|gk] -> [f g1|...|f gk]."""
    A, B = f.source, f.target
    basis = _basis_cache(A, degree)
    index = _indexer(B, True)
    out: dict[int, int] = {}
    img = f.images
    for i, c in chain.items():
        j = index(tuple(img[g] for g in basis[i]))
        if j is None:
            continue
        v = out.get(j, 0) + c
        if v:
            out[j] = v
        else:
            out.pop(j)
    return out


_basis_memo: dict = {}


def _basis_cache(G: FiniteGroup, degree: int):
    key = (G.key, degree)
    b = _basis_memo.get(key)
    if b is None:
        b = _basis_memo[key] = bar_basis(G, degree)
    return b


# -- homology groups --------------------------------------------------------------

class HomologyGroup:
    """H_degree(G; ring) with an explicit cycle basis and class coordinates.

    Coordinates live in ``presentation``: over Z the torsion generators come
    first (one per invariant factor, in divisibility order), then free ones.
    """

    def __init__(self, group, degree, ring, torsion, cycle_basis, presentation, coords_fn,
                 reducer, relation_solver):
        self.group = group
        self.degree = degree
        self.ring = ring
        self.torsion = tuple(torsion)
        self.rank = len(cycle_basis) - len(self.torsion)
        self.cycle_basis = tuple(cycle_basis)
        self.presentation = presentation
        self._coords = coords_fn
        self._reducer = reducer
        self._relation_solver = relation_solver

    @property
    def ngens(self) -> int:
        return len(self.cycle_basis)

    def is_zero(self) -> bool:
        return self.ngens == 0

    def invariants(self) -> tuple[int, tuple[int, ...]]:
        return self.rank, self.torsion

    def coordinates(self, cycle: dict[int, int]) -> tuple:
        """Coordinates of the class of a cycle (chain given sparsely)."""
        return self.presentation.normalize(self._coords(cycle))

    def boundary_witness(self, chain: dict[int, int]) -> tuple | None:
        """Certificate that ``chain`` is a boundary, or None if it is not.

        The chain is first reduced against the unit pivots of the boundary
        echelon (subtracting explicit boundaries); what remains must be an
        integer combination of the leftover relation vectors, and that
        combination is the returned witness (empty over fields).
        """
        r = self._reducer.reduce(chain)
        return self._relation_solver(r)

    def class_of_basis(self, coords) -> dict[int, int]:
        """A representing cycle for the given coordinate vector."""
        out: dict[int, int] = {}
        for c, vec in zip(coords, self.cycle_basis):
            if c:
                for i, x in vec.items():
                    out[i] = out.get(i, 0) + c * x
        return {i: x for i, x in out.items() if x}

    def dense_cycle(self, i: int) -> tuple:
        dim = (self.group.order - 1) ** self.degree
        vec = self.cycle_basis[i]
        return tuple(vec.get(j, 0) for j in range(dim))

    def __repr__(self):
        return (f"H_{self.degree}({self.group.name}; {self.ring}) = "
                f"{describe(self.rank, self.torsion, self.ring)}")


def describe(rank: int, torsion, ring: CoeffRing) -> str:
    parts = [f"Z/{d}" for d in torsion]
    if rank:
        base = {"Z": "Z", "Q": "Q"}.get(ring.kind, f"(Z/{ring.p})")
        parts.append(base if rank == 1 else f"{base}^{rank}")
    return " + ".join(parts) or "0"


_memo: dict = {}
_echelon_memo: dict = {}
_lock = threading.Lock()


def _check_cap(G: FiniteGroup, degree: int) -> None:
    cap = config.current().homology_cap
    if degree == 2 and G.order > cap:
        n = G.order - 1
        raise CapExceeded(
            f"H_2 of a group of order {G.order} exceeds the homology cap {cap}: "
            f"the boundary d3 would be {n * n} x {n ** 3}")


def homology_group(G: FiniteGroup, degree: int, ring: CoeffRing = ZZ) -> HomologyGroup:
    if degree not in (1, 2):
        raise InputError("homology is computed in degrees 1 and 2")
    _check_cap(G, degree)
    key = (G.key, degree, ring)
    H = _memo.get(key)
    if H is None:
        H = _compute(G, degree, ring)
        with _lock:
            H = _memo.setdefault(key, H)
    if degree == 1:
        _cross_check_h1(H)
    return H


def _boundary_echelon(G: FiniteGroup, degree: int, ring: CoeffRing) -> SparseEchelon:
    # Q reuses the integral (fraction-free) echelon
    base_ring = ZZ if ring.kind == "Q" else ring
    key = (G.key, degree, base_ring)
    ech = _echelon_memo.get(key)
    if ech is None:
        up = bar_slice(G, degree + 1)
        ech = SparseEchelon(base_ring)
        for col in up.columns:
            if col:
                ech.insert(col)
        with _lock:
            ech = _echelon_memo.setdefault(key, ech)
    if ring.kind == "Q":
        shadow = SparseEchelon(ring)
        shadow.pivots = ech.pivots
        return shadow
    return ech


def _compute(G: FiniteGroup, degree: int, ring: CoeffRing) -> HomologyGroup:
    m = (G.order - 1) ** degree
    ech = _boundary_echelon(G, degree, ring)
    red = QuotientReducer(ech, m)
    free_pos = red.free
    q = len(free_pos)
    slot = {pos: t for t, pos in enumerate(free_pos)}
    index_lower = _indexer(G, True)
    basis = _basis_cache(G, degree)

    if ring.kind == "Z":
        rel = [[0] * len(red.relations) for _ in range(q)]
        for j, w in enumerate(red.relations):
            for pos, c in w.items():
                rel[slot[pos]][j] = c
        A = [row[:] for row in rel]
        U, _, Uinv = _snf(A, q, len(red.relations), track_uinv=True)
        diag = [A[i][i] for i in range(min(q, len(red.relations)))]
        r = sum(1 for d in diag if d)
        torsion_idx = [i for i in range(r) if diag[i] > 1]
        torsion = [diag[i] for i in torsion_idx]
        free_idx = list(range(r, q))
    else:
        U = Uinv = None
        torsion_idx, torsion = [], []
        free_idx = list(range(q))

    def lift(vec_q) -> dict[int, int]:
        return {free_pos[t]: x for t, x in enumerate(vec_q) if x}

    def uinv_col(i):
        if Uinv is None:
            return [int(t == i) for t in range(q)]
        return [Uinv[t][i] for t in range(q)]

    def d_lower(chain: dict) -> dict:
        out: dict = {}
        for i, c in chain.items():
            for j, d in _boundary_column(G, basis[i], index_lower).items():
                v = out.get(j, 0) + c * d
                if v:
                    out[j] = v
                else:
                    out.pop(j)
        if ring.kind == "Zp":
            out = {j: v % ring.p for j, v in out.items() if v % ring.p}
        return out

    # cycles among the free coordinates
    lower_dim = (G.order - 1) ** (degree - 1)
    images = [d_lower(lift(uinv_col(i))) for i in free_idx]
    M = [[img.get(row, 0) for img in images] for row in range(lower_dim)]
    K = kernel_lists(M, len(free_idx), ring) if free_idx else []

    cycles = [lift(uinv_col(i)) for i in torsion_idx]
    for kv in K:
        acc = [0] * q
        for c, i in zip(kv, free_idx):
            if c:
                col = uinv_col(i)
                acc = [a + c * x for a, x in zip(acc, col)]
        cycles.append(lift(acc))
    moduli = tuple(torsion) + (0,) * len(K)
    pres = Presentation(ring, moduli)

    Kcols = [list(kv) for kv in K]
    Krows = [[kv[j] for kv in Kcols] for j in range(len(free_idx))]

    def coords(cycle: dict) -> tuple:
        x = red.reduce(cycle)
        xv = [0] * q
        for pos, c in x.items():
            xv[slot[pos]] = c
        y = [sum(a * b for a, b in zip(U[i], xv)) for i in range(q)] if U is not None else xv
        tors = [y[i] for i in torsion_idx]
        if not K:
            if any(y[i] for i in free_idx):
                raise ValueError("chain is not a cycle")
            return tuple(tors)
        yF = [y[i] for i in free_idx]
        z = solve_lists(Krows, len(K), yF, ring)
        if z is None:
            raise ValueError("chain is not a cycle")
        return tuple(tors) + tuple(z)

    rel_rows = None
    if ring.kind == "Z" and red.relations:
        rel_rows = [[w.get(pos, 0) for w in red.relations] for pos in free_pos]

    def relation_solver(r: dict):
        if not r:
            return ()
        if rel_rows is None:
            return None
        vec = [r.get(pos, 0) for pos in free_pos]
        return solve_lists(rel_rows, len(red.relations), vec, ring)

    return HomologyGroup(G, degree, ring, torsion, cycles, pres, coords, red, relation_solver)


def _cross_check_h1(H: HomologyGroup) -> None:
    inv = H.group.abelianization_invariants
    ring = H.ring
    if ring.kind == "Z":
        expected = (0, tuple(inv))
    elif ring.kind == "Q":
        expected = (0, ())
    else:
        expected = (sum(1 for d in inv if d % ring.p == 0), ())
    if H.invariants() != expected:
        raise AssertionError(
            f"H_1({H.group.name}; {ring}) = {H.invariants()} disagrees with the "
            f"abelianization {inv}")


def dense_invariants(G: FiniteGroup, degree: int, ring: CoeffRing = ZZ,
                     normalized: bool = False) -> tuple[int, tuple[int, ...]]:
    """(rank, torsion) of H_degree by dense elimination on whole boundary matrices.

    Independent of the sparse route; used as an oracle on small groups.
    """
    up = bar_slice(G, degree + 1, normalized).boundary
    down = bar_slice(G, degree, normalized).boundary
    dim = up.rows
    if ring.is_field:
        r_up = rank_lists(up.to_rows(), up.cols, ring)
        r_down = rank_lists(down.to_rows(), down.cols, ring) if down.rows else 0
        return dim - r_down - r_up, ()
    inv_up = smith_normal_form(up).invariants
    r_down = smith_normal_form(down).rank if down.rows else 0
    return dim - r_down - len(inv_up), tuple(d for d in inv_up if d > 1)


def exterior_square_invariants(invariants) -> tuple[int, ...]:
    """Torsion of A ^ A for A = (+) Z/d_i: (+)_{i<j} Z/gcd(d_i, d_j)."""
    from math import gcd

    ds = [d for d in invariants if d > 1]
    parts = [gcd(ds[i], ds[j]) for i in range(len(ds)) for j in range(i + 1, len(ds))]
    return smith_invariants_of_diagonal([p for p in parts if p > 1])


def smith_invariants_of_diagonal(ds) -> tuple[int, ...]:
    """Invariant factors of (+) Z/d_i, in divisibility order."""
    if not ds:
        return ()
    res = smith_normal_form(IntMatrix.from_rows([[d if i == j else 0 for j in range(len(ds))]
                                                for i, d in enumerate(ds)]))
    return tuple(d for d in res.invariants if d > 1)


# -- induced maps -------------------------------------------------------------------

class HomologyMap:
    """f_* on H_degree, as a matrix on cycle-basis classes.

    ``matrix[i][j]`` is the i-th coordinate of the image of source generator j.
    """

    def __init__(self, source: HomologyGroup, target: HomologyGroup, columns, hom=None,
                 pushed=None):
        self.source = source
        self.target = target
        self.columns = tuple(tuple(c) for c in columns)
        self.hom = hom
        self._pushed = pushed

    @property
    def matrix(self) -> tuple[tuple, ...]:
        return tuple(tuple(c[i] for c in self.columns) for i in range(self.target.ngens))

    @cached_property
    def witnesses(self) -> tuple:
        """Boundary certificates: pushed cycle minus the claimed combination."""
        if self._pushed is None:
            return ()
        out = []
        for pushed, col in zip(self._pushed, self.columns):
            claimed = self.target.class_of_basis(col)
            diff = dict(pushed)
            for i, x in claimed.items():
                v = diff.get(i, 0) - x
                if v:
                    diff[i] = v
                else:
                    diff.pop(i, None)
            w = self.target.boundary_witness(diff)
            if w is None:
                raise AssertionError("induced map column is not certified by a boundary")
            out.append(w)
        return tuple(out)

    def __matmul__(self, other: HomologyMap) -> HomologyMap:
        """self o other, composed as maps on classes."""
        cols = []
        for c in other.columns:
            acc = [0] * self.target.ngens
            for coef, mine in zip(c, self.columns):
                if coef:
                    acc = [a + coef * m for a, m in zip(acc, mine)]
            cols.append(self.target.presentation.normalize(acc))
        return HomologyMap(other.source, self.target, cols)

    def kernel(self) -> list[tuple]:
        return self.source.presentation.kernel_of(self.columns, self.target.presentation)

    def image(self) -> list[tuple]:
        return [c for c in self.columns if not self.target.presentation.is_zero(c)]

    def is_zero(self) -> bool:
        return all(self.target.presentation.is_zero(c) for c in self.columns)

    def is_injective(self) -> bool:
        return all(self.source.presentation.is_zero(v) for v in self.kernel())

    def is_surjective(self) -> bool:
        return self.target.presentation.spans_all(list(self.columns))

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __eq__(self, other):
        return (isinstance(other, HomologyMap)
                and self.source is other.source and self.target is other.target
                and all(self.target.presentation.equal(a, b)
                        for a, b in zip(self.columns, other.columns)))

    __hash__ = None


_map_memo: dict = {}


def induced_map(f: Homomorphism, degree: int, ring: CoeffRing = ZZ) -> HomologyMap:
    HA = homology_group(f.source, degree, ring)
    HB = homology_group(f.target, degree, ring)
    key = (f.source.key, f.target.key, f.images, degree, ring)
    hit = _map_memo.get(key)
    if hit is not None:
        return hit
    pushed = [chain_map(f, c, degree) for c in HA.cycle_basis]
    cols = [HB.coordinates(p) for p in pushed]
    out = HomologyMap(HA, HB, cols, hom=f, pushed=pushed)
    with _lock:
        return _map_memo.setdefault(key, out)


def clear_caches() -> None:
    with _lock:
        _memo.clear()
        _echelon_memo.clear()
        _basis_memo.clear()
        _map_memo.clear()
