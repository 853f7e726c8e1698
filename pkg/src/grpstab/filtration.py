"""Filtrations of H_2 by kernels and images of induced maps.

* ``phi_lcs(G, n, R)``: kernel of H_2(G; R) -> H_2(G/G_n; R).
* ``phi_derived(G, n, flavor)``: image of H_2(S; R) -> H_2(G; R) for the
  derived-type subgroup S of the flavor (G^(n) with Z or Q, G^(n)_p with
  Z/p, or the torsion-free derived term with Q).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .groups import FiniteGroup, quotient
from .homology import HomologyGroup, homology_group, induced_map
from .report import Report
from .rings import QQ, ZZ, CoeffRing
from .series import DERIVED, LCS, RLCS, TFDERIVED, SeriesKind, pderived, plcs, series_term


@dataclass(frozen=True)
class FiltrationSubspace:
    ambient: HomologyGroup
    member_classes: tuple[tuple, ...]
    label: str

    @property
    def presentation(self):
        return self.ambient.presentation

    def contains(self, v) -> bool:
        return self.presentation.contains(self.member_classes, v)

    def __le__(self, other: FiltrationSubspace) -> bool:
        return self.presentation.submodule_le(self.member_classes, other.member_classes)

    def same_as(self, other: FiltrationSubspace) -> bool:
        return self <= other and other <= self

    def is_zero(self) -> bool:
        return all(self.presentation.is_zero(v) for v in self.member_classes)

    def is_everything(self) -> bool:
        return self.presentation.spans_all(self.member_classes)

    def structure(self) -> tuple[int, tuple[int, ...]]:
        """(rank, torsion) of the ambient group modulo this sub-object."""
        return self.presentation.cokernel(self.member_classes)

    def certify(self) -> bool:
        """Each member class has a cycle representative in the ambient complex."""
        for v in self.member_classes:
            cyc = self.ambient.class_of_basis(v)
            if not self.presentation.equal(self.ambient.coordinates(cyc), v):
                return False
        return True

    def to_dict(self) -> dict:
        return {"label": self.label, "ring": str(self.ambient.ring),
                "ambient": {"rank": self.ambient.rank, "torsion": list(self.ambient.torsion)},
                "members": [[str(x) for x in v] for v in self.member_classes],
                "quotient": {"rank": self.structure()[0], "torsion": list(self.structure()[1])}}


def r_lower_central(ring: CoeffRing) -> SeriesKind:
    """The lower central series matched to a coefficient ring."""
    if ring.kind == "Z":
        return LCS
    if ring.kind == "Q":
        return RLCS
    return plcs(ring.p)


def phi_lcs(G: FiniteGroup, n: int, ring: CoeffRing = ZZ, matched: bool = False) -> FiltrationSubspace:
    """Kernel of H_2(G; R) -> H_2(G/G_n; R).

    With ``matched`` the quotient is by the R-lower central term G^R_n instead
    of the ordinary G_n.
    """
    if n < 1:
        raise InputError("the lower central filtration starts at n = 1")
    kind = r_lower_central(ring) if matched else LCS
    H = homology_group(G, 2, ring)
    _, proj = quotient(G, series_term(G, kind, n))
    f = induced_map(proj, 2, ring)
    label = f"Phi_{n}^{ring}" + (" (matched series)" if matched else "")
    return FiltrationSubspace(H, tuple(f.kernel()), label)


FLAVORS = ("integral", "rational", "mod_p", "harvey")


def _flavor(flavor: str, p: int | None) -> tuple[SeriesKind, CoeffRing]:
    if flavor == "integral":
        return DERIVED, ZZ
    if flavor == "rational":
        return DERIVED, QQ
    if flavor == "mod_p":
        if p is None:
            raise InputError("mod_p flavor needs a prime")
        return pderived(p), CoeffRing.mod(p)
    if flavor == "harvey":
        return TFDERIVED, QQ
    raise InputError(f"unknown flavor {flavor!r}; expected one of {', '.join(FLAVORS)}")


def phi_derived(G: FiniteGroup, n: int, flavor: str = "integral", p: int | None = None) -> FiltrationSubspace:
    """Image of H_2(S; R) -> H_2(G; R) for the flavor's level-n subgroup S."""
    if n < 0:
        raise InputError("derived filtrations start at n = 0")
    kind, ring = _flavor(flavor, p)
    H = homology_group(G, 2, ring)
    S = series_term(G, kind, n)
    sub, inc = S.as_group()
    f = induced_map(inc, 2, ring)
    label = f"Phi^({n})[{flavor}{':' + str(p) if p else ''}]"
    return FiltrationSubspace(H, tuple(f.image()), label)


def filtration_nesting_check(G: FiniteGroup, ring: CoeffRing, max_n: int,
                             matched: bool = False) -> Report:
    rep = Report(f"filtration nesting for {G.name} over {ring}, n <= {max_n}",
                 claim="Phi_m^R(A) <= Phi_n^R(A) whenever m >= n")
    phis = {n: phi_lcs(G, n, ring, matched) for n in range(1, max_n + 1)}
    for n in range(1, max_n + 1):
        for m in range(n, max_n + 1):
            rep.add(f"Phi_{m} <= Phi_{n}", phis[m] <= phis[n],
                    f"quotients {_fmt(phis[m].structure())} / {_fmt(phis[n].structure())}")
    rep.data["ambient"] = repr(phis[1].ambient)
    return rep


def _fmt(s) -> str:
    rank, tors = s
    return f"rank {rank} torsion {list(tors)}"


def zero_map_lemma_check(B: FiniteGroup, k: int) -> Report:
    """H_2(B_k; Z) -> H_2(B; Z) -> H_2(B/B_{2k-1}; Z) is zero."""
    if k < 1:
        raise InputError("k must be at least 1")
    rep = Report(f"zero-map lemma for {B.name}, k = {k}",
                 claim="H_2(B_k; Z) -> H_2(B/B_(2k-1); Z) is the zero map")
    Bk, inc = series_term(B, LCS, k).as_group()
    Q, proj = quotient(B, series_term(B, LCS, 2 * k - 1))
    first = induced_map(inc, 2, ZZ)
    second = induced_map(proj, 2, ZZ)
    composite = second @ first
    direct = induced_map(proj @ inc, 2, ZZ)
    rep.data.update({"source": repr(first.source), "middle": repr(first.target),
                     "target": repr(second.target)})
    for j, col in enumerate(composite.columns):
        rep.add(f"generator {j} of H_2(B_{k})", second.target.presentation.is_zero(col),
                f"image coordinates {list(col)}")
    if not composite.columns:
        rep.add("source homology vanishes", True, "H_2(B_k; Z) = 0")
    rep.add("composite agrees with the map induced by the composite homomorphism",
            composite == direct)
    return rep
