"""Descending normal series on finite groups, computed by their recursions.

Lower-central-type series are indexed from 1 (G_1 = G); derived-type series
from 0 (G^(0) = G).  ``gamma(G, kind, n)`` converts to the uniform level
used by stabilization: level n is G_{n+1} for the lower-central family and
G^(n) for the derived family.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .errors import InputError
from .groups import (FiniteGroup, Subgroup, commutator_subgroup, generate, quotient,
                     subgroup_closure)
from .report import Report
from .rings import is_prime

_KINDS = {
    "lcs": "LowerCentral",
    "rlcs": "RationalLowerCentral",
    "plcs": "PLowerCentral",
    "derived": "Derived",
    "rderived": "RationalDerived",
    "pderived": "PDerived",
    "tfderived": "TorsionFreeDerived",
    "cohn": "Cohn",
}
_LCS_TYPE = {"LowerCentral", "RationalLowerCentral", "PLowerCentral"}
_VERBAL = {"LowerCentral", "PLowerCentral", "Derived", "PDerived"}


@dataclass(frozen=True)
class SeriesKind:
    tag: str
    p: int | None = None

    def __post_init__(self):
        if self.tag not in _KINDS.values():
            raise InputError(f"unknown series kind {self.tag!r}")
        needs_p = self.tag in ("PLowerCentral", "PDerived")
        if needs_p and (self.p is None or not is_prime(self.p)):
            raise InputError(f"{self.tag} needs a prime p, got {self.p!r}")
        if not needs_p and self.p is not None:
            raise InputError(f"{self.tag} takes no prime")

    @classmethod
    def parse(cls, text: str) -> SeriesKind:
        name, _, arg = text.strip().lower().partition(":")
        if name not in _KINDS:
            raise InputError(f"unknown series {text!r}; expected one of "
                             "lcs, rlcs, plcs:p, derived, rderived, pderived:p, tfderived, cohn")
        p = None
        if arg:
            try:
                p = int(arg)
            except ValueError:
                raise InputError(f"bad prime in {text!r}") from None
        return cls(_KINDS[name], p)

    @property
    def base(self) -> int:
        return 1 if self.tag in _LCS_TYPE else 0

    @property
    def lcs_type(self) -> bool:
        return self.tag in _LCS_TYPE

    @property
    def verbal(self) -> bool:
        return self.tag in _VERBAL

    def level_index(self, n: int) -> int:
        """Series index holding level n."""
        return n + 1 if self.lcs_type else n

    @property
    def code(self) -> str:
        short = {v: k for k, v in _KINDS.items()}[self.tag]
        return f"{short}:{self.p}" if self.p else short

    def __str__(self):
        return f"{self.tag}({self.p})" if self.p else self.tag


LCS = SeriesKind("LowerCentral")
DERIVED = SeriesKind("Derived")
RLCS = SeriesKind("RationalLowerCentral")
RDERIVED = SeriesKind("RationalDerived")
TFDERIVED = SeriesKind("TorsionFreeDerived")
COHN = SeriesKind("Cohn")


def plcs(p: int) -> SeriesKind:
    return SeriesKind("PLowerCentral", p)


def pderived(p: int) -> SeriesKind:
    return SeriesKind("PDerived", p)


# -- one step of each recursion ---------------------------------------------------

def _roots(G: FiniteGroup, within: Subgroup, target: Subgroup) -> tuple[Subgroup, list[str]]:
    """Elements of ``within`` with some positive power in ``target``, closed up."""
    orders = G.element_orders
    raw = []
    for x in within.elements:
        y = x
        for _ in range(orders[x]):
            if y in target:
                raw.append(x)
                break
            y = G.mul(y, x)
    S = subgroup_closure(G, raw)
    notes = []
    if S.order != len(raw):
        notes.append(f"root set of size {len(raw)} is not a subgroup; closed up to order {S.order}")
    return S, notes


def _cohn_step(G: FiniteGroup, prev: Subgroup) -> Subgroup:
    """x in prev with k.x = 0 in prev^ab for a scalar k = 1..order(x)."""
    C = commutator_subgroup(G, prev, prev)
    orders = G.element_orders
    found = []
    for x in prev.elements:
        y = x
        for _k in range(1, orders[x] + 1):
            if y in C:
                found.append(x)
                break
            y = G.mul(y, x)
    return subgroup_closure(G, found)


def _torsion_free_step(G: FiniteGroup, prev: Subgroup) -> Subgroup:
    """Pull back the Z-torsion of prev^ab, on the branch where G/prev is trivial."""
    if not prev.is_whole():
        raise NotImplementedError(
            "torsion-free derived step needs localization over a nontrivial quotient group")
    H, inc = prev.as_group()
    Q, proj = quotient(H, commutator_subgroup(H, H.whole(), H.whole()))
    # every element of the finite module Q has finite order; keep those literally
    qorders = Q.element_orders
    torsion = {q for q in range(Q.order) if qorders[q] > 0}
    return subgroup_closure(G, [inc(h) for h in range(H.order) if proj(h) in torsion])


def _step(G: FiniteGroup, kind: SeriesKind, prev: Subgroup) -> tuple[Subgroup, list[str]]:
    whole = G.whole()
    tag = kind.tag
    if tag == "LowerCentral":
        return commutator_subgroup(G, whole, prev), []
    if tag == "Derived":
        return commutator_subgroup(G, prev, prev), []
    if tag in ("PLowerCentral", "PDerived"):
        other = whole if tag == "PLowerCentral" else prev
        comm = commutator_subgroup(G, prev, other)
        powers = sorted({G.power(x, kind.p) for x in prev.elements})
        return generate(G, list(comm.witnesses) + powers), []
    if tag == "RationalLowerCentral":
        return _roots(G, whole, commutator_subgroup(G, whole, prev))
    if tag == "RationalDerived":
        return _roots(G, prev, commutator_subgroup(G, prev, prev))
    if tag == "TorsionFreeDerived":
        return _torsion_free_step(G, prev), []
    if tag == "Cohn":
        return _cohn_step(G, prev), ["Cohn witnesses searched over scalars k.1 only"]
    raise AssertionError(tag)


# -- chains -------------------------------------------------------------------------

@dataclass
class SeriesChain:
    kind: SeriesKind
    group: FiniteGroup
    base: int
    terms: list[Subgroup]
    stabilized_at: int | None = None  # first index i with terms[i] == terms[i-1]
    notes: list[str] = field(default_factory=list)

    def term(self, n: int) -> Subgroup:
        if n < self.base:
            raise InputError(f"{self.kind} starts at index {self.base}, asked for {n}")
        i = n - self.base
        return self.terms[min(i, len(self.terms) - 1)]

    @property
    def indices(self) -> list[int]:
        return list(range(self.base, self.base + len(self.terms)))

    def orders(self) -> list[int]:
        return [t.order for t in self.terms]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.code,
            "group": self.group.name,
            "base": self.base,
            "stabilized_at": self.stabilized_at,
            "terms": [{"index": i, "order": t.order, "elements": list(t.elements)}
                      for i, t in zip(self.indices, self.terms)],
            "notes": list(self.notes),
        }


class _Memo:
    """Per (group, kind) chain prefixes; readers see complete prefixes only."""

    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()

    def get(self, key):
        return self._data.get(key)

    def put(self, key, value):
        with self._lock:
            cur = self._data.get(key)
            if cur is None or len(cur[0]) < len(value[0]):
                self._data[key] = value
            return self._data[key]


_memo = _Memo()


def _terms(G: FiniteGroup, kind: SeriesKind, count: int) -> tuple[list[Subgroup], int | None, list[str]]:
    key = (G.key, kind)
    hit = _memo.get(key)
    if hit is not None:
        terms, stab, notes = hit
        if stab is not None or len(terms) >= count:
            return terms, stab, notes
    else:
        terms, stab, notes = [G.whole()], None, []
    terms, notes = list(terms), list(notes)
    while len(terms) < count:
        nxt, extra = _step(G, kind, terms[-1])
        for e in extra:
            if e not in notes:
                notes.append(e)
        if nxt == terms[-1]:
            stab = len(terms)
            break
        terms.append(nxt)
    stored = _memo.put(key, (terms, stab, notes))
    return stored


def series_chain(G: FiniteGroup, kind: SeriesKind, depth: int) -> SeriesChain:
    """Up to ``depth`` terms, stopping early once the series is constant."""
    if depth < 1:
        raise InputError("depth must be at least 1")
    terms, stab, notes = _terms(G, kind, depth)
    terms = terms[:depth]
    stab = stab if stab is not None and stab <= depth else None
    chain = SeriesChain(kind, G, kind.base, terms, None if stab is None else stab + kind.base,
                        list(notes))
    _assert_chain(chain)
    if kind.tag in ("RationalLowerCentral", "RationalDerived", "TorsionFreeDerived", "Cohn") \
            and G.order > 1 and all(t.is_whole() for t in terms):
        chain.notes.append("every term is the whole group: finite groups have no room for "
                           "this enlargement to differ from G")
    return chain


def _assert_chain(chain: SeriesChain) -> None:
    for i, t in enumerate(chain.terms):
        if not t.is_normal():
            raise AssertionError(f"{chain.kind} term {i + chain.base} is not normal")
        if i and not t <= chain.terms[i - 1]:
            raise AssertionError(f"{chain.kind} is not descending at index {i + chain.base}")


def series_term(G: FiniteGroup, kind: SeriesKind, n: int) -> Subgroup:
    if n < kind.base:
        raise InputError(f"{kind} starts at index {kind.base}, asked for {n}")
    terms, _, _ = _terms(G, kind, n - kind.base + 1)
    return terms[min(n - kind.base, len(terms) - 1)]


def gamma(G: FiniteGroup, kind: SeriesKind, n: int) -> Subgroup:
    """Level-n term: G_{n+1} for lower-central type, G^(n) for derived type."""
    if n < 0:
        raise InputError("levels start at 0")
    return series_term(G, kind, kind.level_index(n))


def chain_violations(chain: SeriesChain) -> list[str]:
    """Structural properties every chain of its kind must have."""
    G = chain.group
    kind = chain.kind
    out = []
    terms = chain.terms
    for i, t in enumerate(terms):
        idx = i + chain.base
        if not t.is_normal():
            out.append(f"term {idx} not normal")
        if kind.tag in ("LowerCentral", "PLowerCentral") and i + 1 < len(terms):
            if not commutator_subgroup(G, G.whole(), t) <= terms[i + 1]:
                out.append(f"[G, term {idx}] not inside term {idx + 1}")
        if kind.tag in ("PLowerCentral", "PDerived") and i + 1 < len(terms):
            nxt = terms[i + 1]
            for x in t.elements:
                if G.power(x, kind.p) not in nxt:
                    out.append(f"term {idx}/term {idx + 1} has an element of order other than "
                               f"{kind.p}: {G.names[x]}")
                    break
            if not commutator_subgroup(G, t, t) <= nxt:
                out.append(f"term {idx}/term {idx + 1} is not abelian")
    return out


def containment_chain_check(G: FiniteGroup, n: int) -> Report:
    """Derived <= Cohn <= TorsionFree cap Rational-LCS(2^m), and
    Derived <= RationalDerived <= TorsionFree, for every m <= n."""
    rep = Report(f"containment chain for {G.name} up to n = {n}",
                 claim="G^(m) <= G^(m)_C <= G^(m)_H cap G^r_(2^m) and "
                       "G^(m) <= G^(m)_r <= G^(m)_H")
    for m in range(n + 1):
        D = series_term(G, DERIVED, m)
        C = series_term(G, COHN, m)
        H = series_term(G, TFDERIVED, m)
        Rl = series_term(G, RLCS, 2 ** m)
        Rd = series_term(G, RDERIVED, m)
        rep.add(f"m={m}: G^(m) <= G^(m)_C", D <= C, f"{D.order} <= {C.order}")
        rep.add(f"m={m}: G^(m)_C <= G^(m)_H cap G^r_{2 ** m}", C <= H.intersect(Rl),
                f"{C.order} <= {H.intersect(Rl).order}")
        rep.add(f"m={m}: G^(m) <= G^(m)_r", D <= Rd, f"{D.order} <= {Rd.order}")
        rep.add(f"m={m}: G^(m)_r <= G^(m)_H", Rd <= H, f"{Rd.order} <= {H.order}")
        if m >= 1:
            rep.add(f"m={m}: enlarged terms equal G (computed by recursion)",
                    all(S.is_whole() for S in (C, H, Rl, Rd)),
                    f"orders {C.order}, {H.order}, {Rl.order}, {Rd.order} of {G.order}")
    rep.note("torsion-free derived terms use the branch where the acting quotient is trivial")
    rep.note("Cohn witnesses searched over scalars k.1 only")
    return rep
