"""Stabilization of series under classes of maps, and the theorem sweeps.

The stabilization of a subgroup function Gamma under a class H collects every
a in A that some member f: A -> B of H sends into Gamma(B).  Here the search
runs over the canonical quotient projections of A only, so every certified
element is genuine but the result is a lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import config
from .classes import MapClassSpec, MembershipReport, check_membership, is_member
from .corpus import MapRecord, enumerate_maps, ordered
from .errors import CapExceeded
from .filtration import filtration_nesting_check, r_lower_central, zero_map_lemma_check
from .groups import (FiniteGroup, Homomorphism, Subgroup, all_normal_subgroups, normal_closure,
                     quotient)
from .report import Report
from .rings import CoeffRing
from .series import (DERIVED, LCS, RLCS, TFDERIVED, SeriesKind, containment_chain_check, gamma,
                     pderived, plcs, series_term)

LOWER_BOUND_BANNER = ("lower bound only: witnesses are restricted to quotient projections, "
                      "so elements certified by other maps may be missing")

SubgroupFunction = Callable[[FiniteGroup], Subgroup]


@dataclass
class Certificate:
    element: int
    kernel: Subgroup
    membership: MembershipReport

    def to_dict(self) -> dict:
        G = self.kernel.parent
        return {"element": self.element, "name": G.names[self.element],
                "kernel": list(self.kernel.elements), "class": str(self.membership.spec)}


@dataclass
class StabilizationResult:
    group: FiniteGroup
    kind: SeriesKind
    n: int
    spec: MapClassSpec
    lower_bound: Subgroup
    baseline: Subgroup
    certificates: list[Certificate] = field(default_factory=list)
    upper_bound: Subgroup | None = None
    upper_reason: str = ""
    searched: int = 0
    members: int = 0

    @property
    def exact(self) -> bool:
        """True when a stable superseries closes the sandwich."""
        return self.upper_bound is not None and self.upper_bound == self.lower_bound

    def invariant_violations(self) -> list[str]:
        out = []
        if not self.lower_bound.is_normal():
            out.append("lower bound is not normal")
        if not self.baseline <= self.lower_bound:
            out.append("baseline not contained in lower bound")
        if self.upper_bound is not None and not self.lower_bound <= self.upper_bound:
            out.append("lower bound exceeds the stable upper bound")
        return out

    def report(self) -> Report:
        G = self.group
        rep = Report(f"stabilization of {self.kind} level {self.n} on {G.name} under {self.spec}",
                     claim="Gamma_S(A) = {a : some class member f has f(a) in Gamma(B)}")
        rep.data.update({
            "group order": G.order,
            "baseline order": self.baseline.order,
            "baseline": [G.names[x] for x in self.baseline.elements],
            "lower bound order": self.lower_bound.order,
            "lower bound": [G.names[x] for x in self.lower_bound.elements],
            "quotients searched": self.searched,
            "member quotients": self.members,
        })
        if self.upper_bound is not None:
            rep.data["upper bound order"] = self.upper_bound.order
            rep.data["upper bound"] = [G.names[x] for x in self.upper_bound.elements]
            rep.data["upper bound source"] = self.upper_reason
        for c in self.certificates:
            rep.add(f"certificate for {G.names[c.element]}", True,
                    f"projection with kernel of order {c.kernel.order} is a member")
        problems = [p for p in self.invariant_violations() if "upper" not in p]
        rep.add("lower bound normal and contains the baseline", not problems,
                "; ".join(problems))
        if self.upper_bound is not None:
            rep.add("lower bound inside the stable upper bound",
                    self.lower_bound <= self.upper_bound)
        rep.note(LOWER_BOUND_BANNER)
        if self.exact:
            rep.note("upper and lower bounds coincide, so the value is exact")
        return rep


def stable_upper_bound(G: FiniteGroup, kind: SeriesKind, n: int,
                       spec: MapClassSpec) -> tuple[Subgroup, str] | None:
    """A superseries known to be stable under the class, when the theory supplies one."""
    fam = spec.family
    if fam in ("twoconn", "dwyer") or (fam == "h1mono" and spec.ring.kind == "Zp"):
        if fam == "dwyer" and spec.n != n:
            return None
        stable = r_lower_central(spec.ring)
        up = gamma(G, stable, n)
        if gamma(G, kind, n) <= up:
            return up, f"{stable} level {n} is stable under {spec}"
        return None
    if fam in ("ch", "chq", "harvey") and kind == DERIVED:
        up = series_term(G, TFDERIVED, n).intersect(series_term(G, RLCS, 2 ** n))
        return up, "torsion-free derived term intersected with the rational lower central term"
    return None


def quotient_stabilization(G: FiniteGroup, kind: SeriesKind, n: int, spec: MapClassSpec,
                           base: SubgroupFunction | None = None,
                           single_closures: bool = False) -> StabilizationResult:
    """Lower bound for the stabilization, searching over quotient projections.

    ``base`` replaces the level-n series term as the subgroup function being
    stabilized.  ``single_closures`` restricts the search to kernels that are
    normal closures of one element (the fallback when the lattice is too big).
    """
    cap = config.current().lattice_cap
    if not single_closures and G.order > cap:
        raise CapExceeded(
            f"group of order {G.order} exceeds the lattice cap {cap}; the largest feasible "
            "search uses kernels that are normal closures of single elements "
            "(single_closures=True)")
    fn = base or (lambda X: gamma(X, kind, n))
    baseline = fn(G)
    if single_closures:
        kernels = sorted({normal_closure(G, [x]) for x in range(G.order)}, key=lambda S: S.sort_key)
    else:
        kernels = all_normal_subgroups(G)
    certified = set(baseline.elements)
    certs: list[Certificate] = []
    members = 0
    for N in kernels:
        Q, proj = quotient(G, N)
        target = fn(Q)
        hits = [a for a in proj.preimage(target).elements if a not in certified]
        mem = check_membership(proj, spec, stop_early=True)
        if not mem.verdict:
            continue
        members += 1
        for a in hits:
            certified.add(a)
            certs.append(Certificate(a, N, mem))
    lower = normal_closure(G, sorted(certified))
    ub = stable_upper_bound(G, kind, n, spec) if base is None else None
    res = StabilizationResult(G, kind, n, spec, lower, baseline, certs,
                              ub[0] if ub else None, ub[1] if ub else "",
                              searched=len(kernels), members=members)
    bad = [p for p in res.invariant_violations() if "upper" not in p]
    if bad:
        raise AssertionError(f"stabilization invariant broken: {bad}")
    return res


# -- monomorphism check ---------------------------------------------------------------

@dataclass
class MonoReport:
    map: Homomorphism
    kind: SeriesKind
    n: int
    witnesses: list[int]

    @property
    def verdict(self) -> bool:
        return not self.witnesses

    def describe(self) -> str:
        A = self.map.source
        if self.verdict:
            return f"{A.name}/Gamma^{self.n} -> {self.map.target.name}/Gamma^{self.n} injective"
        names = ", ".join(A.names[x] for x in self.witnesses[:5])
        return f"elements outside Gamma^{self.n}(A) mapping into Gamma^{self.n}(B): {names}"


def monomorphism_check(f: Homomorphism, kind: SeriesKind, n: int) -> MonoReport:
    """Is f^-1(Gamma^n(B)) inside Gamma^n(A)?"""
    GA = gamma(f.source, kind, n)
    GB = gamma(f.target, kind, n)
    wit = [a for a in range(f.source.order) if f(a) in GB and a not in GA]
    return MonoReport(f, kind, n, wit)


# -- sweeps ----------------------------------------------------------------------------

def _maps(corpus, maps):
    return maps if maps is not None else enumerate_maps(corpus)


def _within_caps(rec: MapRecord) -> bool:
    cap = config.current().homology_cap
    return rec.hom.source.order <= cap and rec.hom.target.order <= cap


def _mono_sweep(rep: Report, accepted: list[MapRecord], kinds: list[SeriesKind],
                levels, tag: str) -> None:
    bad = 0
    for rec in accepted:
        for kind in kinds:
            for n in levels:
                m = monomorphism_check(rec.hom, kind, n)
                if not m.verdict:
                    bad += 1
                    rep.add(f"{tag} {rec.label} {kind} level {n}", False, m.describe())
    rep.add(f"{tag}: monomorphism checks over {len(accepted)} accepted maps",
            bad == 0, f"kinds {', '.join(map(str, kinds))}, levels {list(levels)}")


def _accepted(maps: list[MapRecord], spec: MapClassSpec, rep: Report) -> list[MapRecord]:
    out, skipped = [], 0
    for rec in maps:
        if not _within_caps(rec):
            skipped += 1
            continue
        if is_member(rec.hom, spec):
            out.append(rec)
    if skipped:
        rep.note(f"{skipped} maps skipped: a group exceeds the homology cap")
    return out


def verify_stallings_suite(corpus: list[FiniteGroup], ring: CoeffRing, max_n: int,
                           maps: list[MapRecord] | None = None) -> Report:
    kind = r_lower_central(ring)
    rep = Report(f"stallings suite over {ring}, levels <= {max_n}",
                 claim=f"2-connected maps over {ring} induce monomorphisms modulo the "
                       f"{ring}-lower central series ({kind})")
    maps = _maps(corpus, maps)
    acc = _accepted(maps, MapClassSpec.two_connected(ring), rep)
    rep.data.update({"maps enumerated": len(maps), "maps accepted": len(acc)})
    _mono_sweep(rep, acc, [kind], range(1, max_n + 1), "stallings")
    rep.note("maps: all quotients, all subgroup inclusions, and generator-image maps from "
             "sources with at most two generators")
    return rep


def verify_dwyer_stability(corpus: list[FiniteGroup], ring: CoeffRing, max_n: int,
                           maps: list[MapRecord] | None = None) -> Report:
    kind = r_lower_central(ring)
    rep = Report(f"dwyer stability over {ring}, n <= {max_n}",
                 claim=f"members of the Dwyer {ring}-class at level n induce monomorphisms "
                       f"modulo level n of the {ring}-lower central series")
    maps = _maps(corpus, maps)
    total = 0
    for n in range(1, max_n + 1):
        acc = _accepted(maps, MapClassSpec.dwyer(ring, n), rep)
        total += len(acc)
        rep.data[f"accepted at n={n}"] = len(acc)
        _mono_sweep(rep, acc, [kind], [n], f"dwyer n={n}")
    rep.data["maps enumerated"] = len(maps)
    return rep


def verify_dwyer_converse(G: FiniteGroup, ring: CoeffRing, max_n: int) -> Report:
    kind = r_lower_central(ring)
    rep = Report(f"dwyer converse on {G.name} over {ring}, n <= {max_n}",
                 claim="for a in G^R_(n+1), the projection G -> G/<<a>> lies in the Dwyer "
                       "R-class at level n")
    count = 0
    for n in range(1, max_n + 1):
        term = gamma(G, kind, n)
        for a in term.elements[1:]:
            _, proj = quotient(G, normal_closure(G, [a]))
            mem = check_membership(proj, MapClassSpec.dwyer(ring, n))
            count += 1
            rep.add(f"n={n} a={G.names[a]}", mem.verdict,
                    "" if mem.verdict else "; ".join(c.name for c in mem.report.failures))
    if not count:
        rep.add("no non-identity elements in the relevant terms (vacuous)", True)
    return rep


def verify_p_series_stability(corpus: list[FiniteGroup], p: int, max_n: int,
                              maps: list[MapRecord] | None = None) -> Report:
    ring = CoeffRing.mod(p)
    kinds = [pderived(p), plcs(p)]
    rep = Report(f"p-series stability for p = {p}, levels <= {max_n}",
                 claim="maps 2-connected over Z/p (or injective on H_1 and onto on H_2 over "
                       "Z/p) induce monomorphisms modulo the p-derived and p-lower central "
                       "series")
    maps = _maps(corpus, maps)
    for spec in (MapClassSpec.two_connected(ring), MapClassSpec.h1_mono_h2_epi(ring)):
        acc = _accepted(maps, spec, rep)
        rep.data[f"accepted by {spec}"] = len(acc)
        _mono_sweep(rep, acc, kinds, range(1, max_n + 1), str(spec))
    rep.data["maps enumerated"] = len(maps)
    rep.note("both the p-derived and the p-lower central series are checked, each labelled")
    return rep


def verify_idempotency_empirical(G: FiniteGroup, kind: SeriesKind, n: int,
                                 spec: MapClassSpec) -> Report:
    rep = Report(f"idempotency of quotient stabilization on {G.name}: {kind} level {n}, {spec}",
                 claim="the stabilization is itself stable under the class")
    S1 = quotient_stabilization(G, kind, n, spec)
    memo: dict = {}

    def first(X: FiniteGroup) -> Subgroup:
        key = X.key
        if key not in memo:
            memo[key] = quotient_stabilization(X, kind, n, spec).lower_bound
        return memo[key]

    S2 = quotient_stabilization(G, kind, n, spec, base=first)
    rep.data.update({"S1 order": S1.lower_bound.order, "S2 order": S2.lower_bound.order})
    rep.add("S2 = S1", S2.lower_bound == S1.lower_bound)
    rep.note("checks idempotency of the quotient-restricted operator")
    return rep


@dataclass
class StabilizationSweep:
    results: list[StabilizationResult]
    report: Report


def stabilization_invariants(G: FiniteGroup, ring: CoeffRing, max_n: int) -> StabilizationSweep:
    """Normality, baseline containment, class and level monotonicity on one group."""
    kind = r_lower_central(ring) if ring.kind != "Q" else LCS
    rep = Report(f"stabilization invariants on {G.name} over {ring}, levels <= {max_n}")
    runs = []
    two = MapClassSpec.two_connected(ring)
    prev_two = prev_dw = None
    for n in range(1, max_n + 1):
        a = quotient_stabilization(G, kind, n, two)
        b = quotient_stabilization(G, kind, n, MapClassSpec.dwyer(ring, n))
        runs += [a, b]
        for r in (a, b):
            bad = r.invariant_violations()
            rep.add(f"n={n} {r.spec}: normal, contains baseline, below upper bound", not bad,
                    "; ".join(bad))
        rep.add(f"n={n}: twoconn result inside dwyer result", a.lower_bound <= b.lower_bound)
        if prev_two is not None:
            rep.add(f"level {n} inside level {n - 1} (twoconn)", a.lower_bound <= prev_two)
            rep.add(f"level {n} inside level {n - 1} (dwyer)", b.lower_bound <= prev_dw)
        prev_two, prev_dw = a.lower_bound, b.lower_bound
    return StabilizationSweep(runs, rep)


def verify_h_invariance(corpus: list[FiniteGroup], max_n: int,
                        maps: list[MapRecord] | None = None, primes=(2, 3)) -> Report:
    rep = Report(f"invariance of verbal series under all maps, indices <= {max_n}",
                 claim="f(Gamma^n(A)) <= Gamma^n(B) for every homomorphism f")
    maps = _maps(corpus, maps)
    kinds = [LCS, DERIVED] + [plcs(p) for p in primes] + [pderived(p) for p in primes]
    bad = 0
    for rec in maps:
        f = rec.hom
        for kind in kinds:
            for i in range(kind.base, kind.base + max_n + 1):
                if not f.image_of(series_term(f.source, kind, i)) <= series_term(f.target, kind, i):
                    bad += 1
                    rep.add(f"{rec.label} {kind} index {i}", False)
    rep.add(f"{len(maps)} maps, {len(kinds)} series", bad == 0)
    return rep


def suite_nesting(corpus, rings, max_n) -> Report:
    rep = Report(f"filtration nesting over {len(corpus)} groups, n <= {max_n}",
                 claim="Phi_m^R(A) <= Phi_n^R(A) whenever m >= n")
    cap = config.current().homology_cap
    for G in corpus:
        if G.order > cap:
            rep.note(f"{G.name} skipped: order {G.order} exceeds the homology cap")
            continue
        for R in rings:
            sub = filtration_nesting_check(G, R, max_n)
            rep.add(f"{G.name} over {R}", sub.passed,
                    "" if sub.passed else "; ".join(c.name for c in sub.failures))
    return rep


def suite_zero_lemma(corpus, ks=(1, 2)) -> Report:
    rep = Report("zero-map lemma over the corpus",
                 claim="H_2(B_k; Z) -> H_2(B/B_(2k-1); Z) is the zero map")
    cap = config.current().homology_cap
    for G in corpus:
        if G.order > cap:
            rep.note(f"{G.name} skipped: order {G.order} exceeds the homology cap")
            continue
        for k in ks:
            sub = zero_map_lemma_check(G, k)
            rep.add(f"{G.name} k={k}", sub.passed,
                    "" if sub.passed else "; ".join(c.name for c in sub.failures))
    return rep


def suite_chain_containment(corpus, max_n) -> Report:
    rep = Report("derived-type containment chains over the corpus",
                 claim="G^(n) <= G^(n)_C <= G^(n)_H cap G^r_(2^n) and G^(n) <= G^(n)_r <= G^(n)_H")
    for G in corpus:
        sub = containment_chain_check(G, max_n)
        rep.add(G.name, sub.passed, "" if sub.passed else "; ".join(c.name for c in sub.failures))
    return rep


def suite_idempotency(corpus, max_n=1) -> Report:
    from .rings import QQ, ZZ

    rep = Report("idempotency of quotient stabilization over the corpus")
    cap = config.current().lattice_cap
    for G in corpus:
        if G.order > min(cap, config.current().homology_cap):
            rep.note(f"{G.name} skipped: order {G.order} exceeds a cap")
            continue
        for spec in (MapClassSpec.two_connected(QQ), MapClassSpec.two_connected(ZZ)):
            for n in range(1, max_n + 1):
                sub = verify_idempotency_empirical(G, LCS, n, spec)
                rep.add(f"{G.name} {spec} level {n}", sub.passed)
    return rep
