"""Sparse echelon bases for big, very sparse boundary matrices.

Vectors are dicts ``{index: coefficient}`` with no zero values.  A
:class:`SparseEchelon` keeps one basis vector per leading (largest) index.
Over Z the basis is a lattice basis built with gcd steps, so insertion is
fraction-free; over Q the same integral basis is kept and only the final
back-substitution divides.

:class:`QuotientReducer` turns an echelon basis of a submodule B of R^m into
a normal form for R^m / B: every vector is reduced against the unit pivots,
leaving coordinates on the small set of remaining positions.
"""

from __future__ import annotations

from fractions import Fraction

from .rings import CoeffRing


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def axpy(v: dict, c, w: dict, mod: int | None = None) -> None:
    """v += c * w, in place, dropping zeros."""
    for k, x in w.items():
        y = v.get(k, 0) + c * x
        if mod is not None:
            y %= mod
        if y:
            v[k] = y
        else:
            v.pop(k, None)


def combine(a, v: dict, b, w: dict) -> dict:
    """a*v + b*w as a fresh dict."""
    if a == 0:
        out = {}
    elif a == 1:
        out = dict(v)
    else:
        out = {k: a * x for k, x in v.items()}
    axpy(out, b, w)
    return out


class SparseEchelon:
    def __init__(self, ring: CoeffRing):
        self.ring = ring
        self.mod = ring.p if ring.kind == "Zp" else None
        self.pivots: dict[int, dict] = {}

    def insert(self, v: dict) -> None:
        mod = self.mod
        if mod is not None:
            v = {k: x % mod for k, x in v.items() if x % mod}
        else:
            v = dict(v)
        piv = self.pivots
        while v:
            i = max(v)
            w = piv.get(i)
            b = v[i]
            if w is None:
                if mod is not None:
                    inv = pow(b, -1, mod)
                    v = {k: x * inv % mod for k, x in v.items()}
                elif b < 0:
                    v = {k: -x for k, x in v.items()}
                piv[i] = v
                return
            a = w[i]
            if mod is not None:
                axpy(v, -b, w, mod)
            elif b % a == 0:
                axpy(v, -(b // a), w)
            else:
                g, x, y = _xgcd(a, b)
                new_w = combine(x, w, y, v)
                v = combine(a // g, v, -(b // g), w)
                piv[i] = new_w

    @property
    def rank(self) -> int:
        return len(self.pivots)


class QuotientReducer:
    """Normal forms modulo the span of an echelon basis.

    ``free`` lists the positions that are not unit pivots, in increasing
    order.  :meth:`reduce` maps any vector to an equivalent one supported on
    ``free``.  ``relations`` are the reduced non-unit pivots (over Z only):
    R^m / B is isomorphic to R^free / span(relations).
    """

    def __init__(self, echelon: SparseEchelon, dim: int):
        ring = echelon.ring
        self.ring = ring
        self.dim = dim
        mod = echelon.mod
        piv = echelon.pivots
        if ring.kind == "Z":
            unit = {i for i, w in piv.items() if w[i] == 1}
        else:
            unit = set(piv)
        self.unit = unit
        self.free = [i for i in range(dim) if i not in unit]
        # tails[i]: the unit pivot at i minus e_i, supported on free positions
        tails: dict[int, dict] = {}
        relations = []
        for i in sorted(piv):
            w = dict(piv[i])
            if ring.kind == "Q":
                lead = w[i]
                if lead != 1:
                    w = {k: Fraction(x, lead) for k, x in w.items()}
            for j in [k for k in w if k != i and k in unit]:
                c = w.get(j)
                if c:
                    w.pop(j)
                    axpy(w, -c, tails[j], mod)
            if i in unit:
                w.pop(i)
                tails[i] = w
            else:
                relations.append(w)
        self.tails = tails
        self.relations = relations

    def reduce(self, v: dict) -> dict:
        mod = self.ring.p if self.ring.kind == "Zp" else None
        out = {}
        for k, x in v.items():
            if mod is not None:
                x %= mod
            if not x:
                continue
            t = self.tails.get(k)
            if t is None:
                y = out.get(k, 0) + x
                if mod is not None:
                    y %= mod
                if y:
                    out[k] = y
                else:
                    out.pop(k, None)
            else:
                axpy(out, -x, t, mod)
        return out
