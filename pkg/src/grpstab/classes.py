"""Membership of homomorphisms in homologically defined classes of maps.

Every family asks for a condition on H_1 (isomorphism, or only injectivity)
and surjectivity of H_2(A)/Phi(A) -> H_2(B)/Phi(B) for a filtration Phi.
Surjectivity onto a quotient is decided as ``image + Phi(B) = H_2(B)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError
from .filtration import FiltrationSubspace, phi_derived, phi_lcs
from .groups import FiniteGroup, Homomorphism, join, quotient
from .homology import describe, homology_group, induced_map
from .report import Report
from .rings import QQ, ZZ, CoeffRing, is_prime

FAMILIES = ("twoconn", "h1mono", "dwyer", "chp", "chpmono", "ch", "chq", "harvey")

_USAGE = {
    "twoconn": "twoconn RING",
    "h1mono": "h1mono RING",
    "dwyer": "dwyer RING N",
    "chp": "chp P N",
    "chpmono": "chpmono P N",
    "ch": "ch N",
    "chq": "chq N",
    "harvey": "harvey N",
}


@dataclass(frozen=True)
class MapClassSpec:
    family: str
    ring: CoeffRing = ZZ
    n: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown class family {self.family!r}; expected one of "
                             + ", ".join(FAMILIES))
        leveled = self.family not in ("twoconn", "h1mono")
        if leveled and (self.n is None or self.n < 1):
            raise InputError(f"{self.family} needs a level n >= 1")
        if not leveled and self.n is not None:
            raise InputError(f"{self.family} takes no level")
        if self.family in ("chp", "chpmono") and self.ring.kind != "Zp":
            raise InputError(f"{self.family} works over Z/p")
        if self.family == "ch" and self.ring.kind != "Z":
            raise InputError("ch works over Z")
        if self.family in ("chq", "harvey") and self.ring.kind != "Q":
            raise InputError(f"{self.family} works over Q")

    # constructors mirroring the family names
    @classmethod
    def two_connected(cls, ring: CoeffRing) -> MapClassSpec:
        return cls("twoconn", ring)

    @classmethod
    def h1_mono_h2_epi(cls, ring: CoeffRing) -> MapClassSpec:
        return cls("h1mono", ring)

    @classmethod
    def dwyer(cls, ring: CoeffRing, n: int) -> MapClassSpec:
        return cls("dwyer", ring, n)

    @classmethod
    def chp(cls, p: int, n: int, mono: bool = False) -> MapClassSpec:
        return cls("chpmono" if mono else "chp", CoeffRing.mod(p), n)

    @classmethod
    def ch_integral(cls, n: int) -> MapClassSpec:
        return cls("ch", ZZ, n)

    @classmethod
    def ch_rational(cls, n: int) -> MapClassSpec:
        return cls("chq", QQ, n)

    @classmethod
    def harvey(cls, n: int) -> MapClassSpec:
        return cls("harvey", QQ, n)

    @classmethod
    def parse(cls, tokens: list[str] | str) -> MapClassSpec:
        """Parse e.g. ``twoconn z``, ``dwyer z:2 3``, ``chp 2 3``, ``harvey 2``."""
        if isinstance(tokens, str):
            tokens = tokens.replace(",", " ").split()
        if not tokens:
            raise InputError("empty class specification")
        fam, args = tokens[0].lower(), tokens[1:]
        if fam not in FAMILIES:
            raise InputError(f"unknown class family {fam!r}; expected one of " + ", ".join(FAMILIES))

        def need(k):
            if len(args) != k:
                raise InputError(f"usage: {_USAGE[fam]}")

        def level(s):
            try:
                return int(s)
            except ValueError:
                raise InputError(f"bad level {s!r} (usage: {_USAGE[fam]})") from None

        if fam in ("twoconn", "h1mono"):
            need(1)
            return cls(fam, CoeffRing.parse(args[0]))
        if fam == "dwyer":
            need(2)
            return cls(fam, CoeffRing.parse(args[0]), level(args[1]))
        if fam in ("chp", "chpmono"):
            need(2)
            p = level(args[0])
            if not is_prime(p):
                raise InputError(f"{p} is not prime")
            return cls(fam, CoeffRing.mod(p), level(args[1]))
        need(1)
        ring = {"ch": ZZ, "chq": QQ, "harvey": QQ}[fam]
        return cls(fam, ring, level(args[0]))

    @property
    def h1_mono_only(self) -> bool:
        return self.family in ("h1mono", "chpmono")

    def __str__(self):
        if self.family in ("twoconn", "h1mono"):
            return f"{self.family}({self.ring})"
        if self.family in ("chp", "chpmono"):
            return f"{self.family}(p={self.ring.p}, n={self.n})"
        if self.family == "dwyer":
            return f"dwyer({self.ring}, n={self.n})"
        return f"{self.family}(n={self.n})"

    def filtration(self, G: FiniteGroup) -> FiltrationSubspace | None:
        """The sub-object of H_2(G) this family divides out (None: nothing)."""
        fam, n = self.family, self.n
        if fam in ("twoconn", "h1mono"):
            return None
        if fam == "dwyer":
            return phi_lcs(G, n, self.ring)
        if fam in ("chp", "chpmono"):
            return phi_derived(G, n - 1, "mod_p", self.ring.p)
        if fam == "ch":
            return phi_derived(G, n - 1, "integral")
        if fam == "chq":
            return phi_derived(G, n - 1, "rational")
        return phi_derived(G, n - 1, "harvey")

    def side_conditions(self) -> str | None:
        if self.family in ("chp", "chpmono", "ch", "chq", "harvey"):
            return ("source finitely generated, target finitely presented: automatic for "
                    "finite groups")
        return None


@dataclass
class MembershipReport:
    map: Homomorphism
    spec: MapClassSpec
    verdict: bool
    report: Report = field(repr=False)

    def to_dict(self) -> dict:
        d = self.report.to_dict()
        d["verdict"] = self.verdict
        d["spec"] = str(self.spec)
        return d


def _struct(H) -> str:
    return describe(H.rank, H.torsion, H.ring)


def check_membership(f: Homomorphism, spec: MapClassSpec, stop_early: bool = False) -> MembershipReport:
    """Decide membership; ``stop_early`` skips remaining conditions after a failure."""
    A, B = f.source, f.target
    R = spec.ring
    rep = Report(f"{spec} membership of {A.name} -> {B.name}")
    # H_1
    m1 = induced_map(f, 1, R)
    rep.data["H1"] = f"{_struct(m1.source)} -> {_struct(m1.target)}"
    kernel = [v for v in m1.kernel() if not m1.source.presentation.is_zero(v)]
    rep.add(f"H_1(-;{R}) injective", not kernel,
            "" if not kernel else f"kernel class with coordinates {list(kernel[0])}",
            kernel=[[str(x) for x in v] for v in kernel])
    if not spec.h1_mono_only:
        cok = m1.target.presentation.cokernel(list(m1.columns))
        rep.add(f"H_1(-;{R}) surjective", cok == (0, ()),
                "" if cok == (0, ()) else f"cokernel {describe(cok[0], cok[1], R)}")
    if stop_early and not rep.passed:
        rep.note("remaining conditions skipped after the first failure")
        return MembershipReport(f, spec, False, rep)
    # H_2 modulo the family's filtration
    m2 = induced_map(f, 2, R)
    phiA, phiB = spec.filtration(A), spec.filtration(B)
    rep.data["H2"] = f"{_struct(m2.source)} -> {_struct(m2.target)}"
    if phiB is None:
        gens = list(m2.columns)
        what = f"H_2(-;{R}) surjective"
    else:
        gens = list(m2.columns) + list(phiB.member_classes)
        what = f"H_2(A;{R})/{phiA.label} -> H_2(B;{R})/{phiB.label} surjective"
        rep.data["H2 quotients"] = (f"{describe(*phiA.structure(), R)} -> "
                                    f"{describe(*phiB.structure(), R)}")
        pushed = [m2.target.presentation.push(m2.columns, v) for v in phiA.member_classes]
        rep.add("filtration carried into filtration", all(phiB.contains(v) for v in pushed),
                "f_*(Phi(A)) <= Phi(B)")
    cok = m2.target.presentation.cokernel(gens)
    rep.add(what, cok == (0, ()),
            "" if cok == (0, ()) else f"cokernel {describe(cok[0], cok[1], R)}")
    side = spec.side_conditions()
    if side:
        rep.note(side)
    return MembershipReport(f, spec, rep.passed, rep)


def is_member(f: Homomorphism, spec: MapClassSpec) -> bool:
    return check_membership(f, spec, stop_early=True).verdict


def compose_all(fs: list[Homomorphism]) -> Homomorphism:
    """fs[-1] o ... o fs[0]."""
    if not fs:
        raise InputError("need at least one map")
    out = fs[0]
    for g in fs[1:]:
        if g.source != out.target:
            raise InputError(f"maps not composable: {out.target.name} vs {g.source.name}")
        out = g @ out
    return out


def check_composition_closure(fs: list[Homomorphism], spec: MapClassSpec) -> Report:
    rep = Report(f"composition closure of {spec} over {len(fs)} maps",
                 claim="composites of class members are class members")
    comp = compose_all(fs)
    verdicts = [is_member(f, spec) for f in fs]
    rep.data["member verdicts"] = verdicts
    if all(verdicts):
        rep.add("composite is a member", is_member(comp, spec))
    else:
        rep.add("hypothesis not met (some factor is not a member)", True)
    return rep


@dataclass(frozen=True)
class QuotientSquare:
    """A -> A/N and A -> A/M completed to A/NM."""

    left: Homomorphism   # A -> A/N
    right: Homomorphism  # A -> A/M
    from_left: Homomorphism   # A/N -> A/NM
    from_right: Homomorphism  # A/M -> A/NM

    def commutes(self) -> bool:
        return (self.from_left @ self.left) == (self.from_right @ self.right)


def _induced_quotient(f: Homomorphism, p: Homomorphism) -> Homomorphism:
    """The map f.target -> p.target with (result o f) = p, for surjective f."""
    images = [None] * f.target.order
    for a in range(f.source.order):
        y = f(a)
        if images[y] is None:
            images[y] = p(a)
        elif images[y] != p(a):
            raise InputError("kernel of the first map is not inside the kernel of the second")
    return Homomorphism(f.target, p.target, images)


def pushout_of_quotients(f: Homomorphism, g: Homomorphism) -> QuotientSquare:
    if f.source != g.source:
        raise InputError("quotient maps do not share a source")
    if not (f.is_surjective() and g.is_surjective()):
        raise InputError("pushout_of_quotients needs surjective (quotient) maps")
    A = f.source
    NM = join(A, f.kernel(), g.kernel())
    _, p = quotient(A, NM)
    return QuotientSquare(f, g, _induced_quotient(f, p), _induced_quotient(g, p))


def check_nudge_out(f: Homomorphism, g: Homomorphism, spec: MapClassSpec) -> Report:
    """Do two quotient members complete to a member square?"""
    rep = Report(f"nudge-out of quotient maps for {spec}",
                 claim="members out of a common source complete to a commuting member square")
    sq = pushout_of_quotients(f, g)
    rep.add("square commutes", sq.commutes())
    if is_member(f, spec) and is_member(g, spec):
        rep.add("completion from A/N is a member", is_member(sq.from_left, spec))
        rep.add("completion from A/M is a member", is_member(sq.from_right, spec))
    else:
        rep.add("hypothesis not met (a side is not a member)", True)
    rep.note("only quotient squares are tested; general pushouts leave finite groups")
    return rep
