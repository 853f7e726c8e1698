"""Finitely generated modules given by coordinates and diagonal relations.

A :class:`Presentation` is R^k modulo d_i e_i for the listed moduli (0 means
no relation).  Over fields all moduli are 0.  Homology groups hand out
coordinates in such a presentation, and every sub-object question
(containment, spanning, kernels of maps) is answered here by exact linear
algebra on stacked generator matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import _snf, kernel_lists, rank_lists, solve_lists
from .rings import CoeffRing


def _clean(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


@dataclass(frozen=True)
class Presentation:
    ring: CoeffRing
    moduli: tuple[int, ...]

    @property
    def ngens(self) -> int:
        return len(self.moduli)

    def normalize(self, v) -> tuple:
        if len(v) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(v)}")
        if self.ring.kind == "Zp":
            return tuple(int(x) % self.ring.p for x in v)
        if self.ring.kind == "Q":
            return tuple(_clean(Fraction(x)) for x in v)
        return tuple(x % d if d else x for x, d in zip(v, self.moduli))

    def is_zero(self, v) -> bool:
        return not any(self.normalize(v))

    def equal(self, a, b) -> bool:
        return self.is_zero([x - y for x, y in zip(a, b)])

    def _relations(self) -> list[list]:
        k = self.ngens
        return [[d if i == j else 0 for i in range(k)] for j, d in enumerate(self.moduli) if d]

    def _stack(self, gens) -> tuple[list[list], int]:
        cols = [list(g) for g in gens] + self._relations()
        rows = [[c[i] for c in cols] for i in range(self.ngens)]
        return rows, len(cols)

    def contains(self, gens, v) -> bool:
        """Is v in the submodule generated by ``gens``?"""
        if self.is_zero(v):
            return True
        rows, n = self._stack(gens)
        if n == 0:
            return False
        return solve_lists(rows, n, list(v), self.ring) is not None

    def submodule_le(self, small, big) -> bool:
        return all(self.contains(big, v) for v in small)

    def cokernel(self, gens) -> tuple[int, tuple[int, ...]]:
        """(rank, torsion) of this module modulo the span of ``gens``."""
        rows, n = self._stack(gens)
        k = self.ngens
        if n == 0:
            return k, (() if self.ring.is_field else tuple(d for d in self.moduli if d > 1))
        if self.ring.is_field:
            return k - (rank_lists(rows, n, self.ring) if n else 0), ()
        A = [list(r) for r in rows]
        _snf(A, k, n)
        diag = [A[i][i] for i in range(min(k, n))]
        nonzero = [d for d in diag if d]
        return k - len(nonzero), tuple(d for d in nonzero if d > 1)

    def spans_all(self, gens) -> bool:
        return self.cokernel(gens) == (0, ())

    def structure(self) -> tuple[int, tuple[int, ...]]:
        return self.cokernel([])

    def kernel_of(self, columns, target: Presentation) -> list[tuple]:
        """Generators of the kernel of the map self -> target with the given columns."""
        s = self.ngens
        if s == 0:
            return []
        t = target.ngens
        if t == 0:
            return [tuple(int(i == j) for i in range(s)) for j in range(s)]
        rel = target._relations()
        cols = [list(c) for c in columns] + rel
        rows = [[c[i] for c in cols] for i in range(t)]
        K = kernel_lists(rows, len(cols), self.ring)
        out = [self.normalize(v[:s]) for v in K]
        return [v for v in out if not self.is_zero(v)]

    def push(self, columns, v) -> tuple:
        """Image in this module of source coordinates v under a map given by columns."""
        acc = [0] * self.ngens
        for c, col in zip(v, columns):
            if c:
                acc = [a + c * x for a, x in zip(acc, col)]
        return self.normalize(acc)
