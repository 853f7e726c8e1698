"""Command-line interface.

Exit status: 0 all checks pass (or the map is a member), 1 a verified
failure or non-member, 2 bad input, 3 a size cap refused the computation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import config
from .builders import BUILTINS, build_group, load_group, load_homomorphism
from .classes import MapClassSpec, check_membership
from .corpus import load_corpus, p_groups, enumerate_maps
from .errors import CapExceeded, InputError
from .filtration import FLAVORS, filtration_nesting_check, phi_derived, phi_lcs
from .groups import FiniteGroup
from .homology import describe, homology_group
from .report import Report
from .rings import QQ, ZZ, CoeffRing
from .series import SeriesKind, series_chain
from .stability import (quotient_stabilization, stabilization_invariants, suite_chain_containment,
                        suite_idempotency, suite_nesting, suite_zero_lemma, verify_dwyer_converse,
                        verify_dwyer_stability, verify_h_invariance, verify_p_series_stability,
                        verify_stallings_suite)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

SUITES = ("stallings", "dwyer-converse", "zero-lemma", "nesting", "p-stability",
          "idempotency", "chain-containment", "h-invariance")


def group_arg(text: str) -> FiniteGroup:
    """A group file, or ``builtin:NAME[:k=v,...]`` (e.g. builtin:dihedral:n=4)."""
    if text.startswith("builtin:"):
        _, _, rest = text.partition(":")
        name, _, params = rest.partition(":")
        if name not in BUILTINS:
            raise InputError(f"unknown builtin {name!r}; expected one of {', '.join(BUILTINS)}")
        kv = {}
        for item in filter(None, params.split(",")):
            k, eq, v = item.partition("=")
            if not eq:
                raise InputError(f"builtin parameter {item!r} is not of the form key=value")
            kv[k.strip()] = v.strip()
        G = build_group({"kind": "builtin", "builtin": name, "params": kv})
        return G
    return load_group(Path(text))


# -- commands --------------------------------------------------------------------------

def cmd_group_info(args) -> Report:
    G = group_arg(args.group)
    orders = G.element_orders
    profile = {o: orders.count(o) for o in sorted(set(orders))}
    rep = Report(f"group {G.name}")
    rep.data.update({
        "order": G.order,
        "generators": [G.names[g] for g in G.generators],
        "element orders": {str(k): v for k, v in profile.items()},
        "abelian": G.is_abelian,
        "abelianization": list(G.abelianization_invariants),
    })
    rep.body.append("element orders: " + ", ".join(f"{v} of order {k}" for k, v in profile.items()))
    if G.order == 1:
        rep.note("trivial group")
    return rep


def cmd_series(args) -> Report:
    G = group_arg(args.group)
    kind = SeriesKind.parse(args.kind)
    chain = series_chain(G, kind, args.depth)
    rep = Report(f"{kind} series of {G.name}")
    rep.data.update(chain.to_dict())
    del rep.data["notes"]  # shown as report notes
    rep.data["orders"] = chain.orders()
    for i, t in zip(chain.indices, chain.terms):
        rep.body.append(f"term {i}: order {t.order}")
    if chain.stabilized_at is not None:
        rep.body.append(f"constant from index {chain.stabilized_at - 1}")
    for n in chain.notes:
        rep.note(n)
    return rep


def cmd_homology(args) -> Report:
    G = group_arg(args.group)
    ring = CoeffRing.parse(args.coeff)
    if args.degree not in (1, 2):
        raise InputError("degree must be 1 or 2")
    H = homology_group(G, args.degree, ring)
    rep = Report(f"H_{args.degree}({G.name}; {ring})")
    rep.data.update({
        "group": G.name, "degree": args.degree, "ring": str(ring),
        "rank": H.rank, "torsion": list(H.torsion), "basis size": H.ngens,
        "structure": describe(H.rank, H.torsion, ring),
        "cycles": [{str(k): v for k, v in sorted(c.items())} for c in H.cycle_basis],
    })
    return rep


def cmd_filtration(args) -> Report:
    G = group_arg(args.group)
    if args.family == "lcs":
        ring = CoeffRing.parse(args.arg or "z")
        if args.nesting:
            return filtration_nesting_check(G, ring, args.n)
        F = phi_lcs(G, args.n, ring)
    else:
        flavor, _, p = (args.arg or "integral").partition(":")
        if flavor not in FLAVORS:
            raise InputError(f"unknown flavor {flavor!r}; expected one of {', '.join(FLAVORS)}")
        F = phi_derived(G, args.n, flavor, int(p) if p else None)
    rep = Report(f"{F.label} of {G.name}")
    rep.data.update(F.to_dict())
    rep.body.append(f"H_2 = {describe(F.ambient.rank, F.ambient.torsion, F.ambient.ring)}; "
                    f"quotient by the filtration = {describe(*F.structure(), F.ambient.ring)}")
    rep.add("member classes are cycles of the ambient group", F.certify())
    return rep


def cmd_class_check(args) -> Report:
    f = load_homomorphism(Path(args.map))
    spec = MapClassSpec.parse([args.family] + args.params)
    mem = check_membership(f, spec)
    rep = mem.report
    rep.data["verdict"] = "member" if mem.verdict else "non-member"
    return rep


def cmd_stabilize(args) -> Report:
    G = group_arg(args.group)
    kind = SeriesKind.parse(args.series)
    spec = MapClassSpec.parse([args.family] + args.params)
    res = quotient_stabilization(G, kind, args.level, spec)
    return res.report()


def _rings(arg: str | None) -> list[CoeffRing]:
    if arg:
        return [CoeffRing.parse(x) for x in arg.split(",")]
    return [ZZ, CoeffRing.mod(2), CoeffRing.mod(3), QQ]


def cmd_verify(args) -> Report:
    corpus = load_corpus()
    suite = args.suite
    rep = Report(f"verify {suite} over {len(corpus)} groups")
    max_n = args.max_n
    if suite == "stallings":
        maps = enumerate_maps(corpus)
        for R in _rings(args.ring):
            rep.extend(verify_stallings_suite(corpus, R, max_n or 5, maps), f"[{R}] ")
    elif suite == "dwyer-converse":
        R = CoeffRing.parse(args.ring or "z")
        n = max_n or 3
        rep.extend(verify_dwyer_stability(corpus, R, n), "[stability] ")
        cap = config.current().homology_cap
        for G in corpus:
            if G.order > cap:
                rep.note(f"{G.name} skipped: order {G.order} exceeds the homology cap")
                continue
            sub = verify_dwyer_converse(G, R, n)
            rep.add(f"[converse] {G.name}", sub.passed,
                    "" if sub.passed else "; ".join(c.name for c in sub.failures))
    elif suite == "zero-lemma":
        rep.extend(suite_zero_lemma(corpus, tuple(range(1, (max_n or 2) + 1))))
    elif suite == "nesting":
        rep.extend(suite_nesting(corpus, _rings(args.ring), max_n or 5))
    elif suite == "p-stability":
        primes = [args.p] if args.p else [2, 3]
        for p in primes:
            bound = 16 if p == 2 else 27
            P = p_groups(corpus, p, bound)
            rep.extend(verify_p_series_stability(P, p, max_n or 4), f"[p={p}] ")
    elif suite == "idempotency":
        rep.extend(suite_idempotency(corpus, max_n or 1))
    elif suite == "chain-containment":
        rep.extend(suite_chain_containment(corpus, max_n or 3))
    elif suite == "h-invariance":
        rep.extend(verify_h_invariance(corpus, max_n or 5))
    else:
        raise InputError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    if suite in ("stallings", "dwyer-converse", "p-stability"):
        rep.note("lower-central-type series are checked at levels 1..n, level n meaning term n+1")
    if args.invariants:
        for G in corpus:
            for R in _rings(args.ring):
                rep.extend(stabilization_invariants(G, R, max_n or 3).report, f"[{G.name} {R}] ")
    return rep


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grpstab", description=__doc__.splitlines()[0])
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--homology-cap", type=int, default=24,
                    help="largest group order for H_2 (default 24)")
    ap.add_argument("--lattice-cap", type=int, default=32,
                    help="largest group order for quotient searches (default 32)")
    ap.add_argument("--corpus", help="directory of group files or a JSON list of groups")
    ap.add_argument("--seed", type=int, help="shuffle sweep order (results do not depend on it)")
    ap.add_argument("-v", "--verbose", action="store_true", help="list every check in text output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group-info", help="order, element orders, generators, abelianization")
    p.add_argument("group", help="group file or builtin:NAME[:k=v,...]")
    p.set_defaults(func=cmd_group_info)

    p = sub.add_parser("series", help="terms of a series")
    p.add_argument("group")
    p.add_argument("kind", help="lcs, rlcs, plcs:p, derived, rderived, pderived:p, tfderived, cohn")
    p.add_argument("depth", type=int)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("homology", help="H_1 or H_2 with coefficients z, q or z:p")
    p.add_argument("group")
    p.add_argument("degree", type=int)
    p.add_argument("coeff")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("filtration", help="lower central or derived filtration of H_2")
    p.add_argument("group")
    p.add_argument("family", choices=("lcs", "derived"))
    p.add_argument("n", type=int)
    p.add_argument("arg", nargs="?",
                   help="coefficients for lcs (z, q, z:p); flavor for derived "
                        "(integral, rational, mod_p:p, harvey)")
    p.add_argument("--nesting", action="store_true",
                   help="for lcs: check Phi_m <= Phi_n for all n <= m <= N")
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("class-check", help="membership of a map in a class")
    p.add_argument("map", help="homomorphism file")
    p.add_argument("family", help="twoconn, h1mono, dwyer, chp, chpmono, ch, chq, harvey")
    p.add_argument("params", nargs="*", help="ring and/or level, e.g. 'z 2' or '2 3'")
    p.set_defaults(func=cmd_class_check)

    p = sub.add_parser("stabilize", help="quotient-witness stabilization of a series")
    p.add_argument("group")
    p.add_argument("series")
    p.add_argument("level", type=int)
    p.add_argument("family")
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_stabilize)

    p = sub.add_parser("verify", help="run a verification suite over the corpus")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--max-n", type=int)
    p.add_argument("--ring", help="comma-separated coefficient rings")
    p.add_argument("--p", type=int, help="prime for p-stability")
    p.add_argument("--invariants", action="store_true",
                   help="also check stabilization invariants on every corpus group")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = config.RunConfig(args.homology_cap, args.lattice_cap, args.format, args.corpus,
                               args.seed)
        with config.using(cfg):
            rep = args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_CAP
    if args.format == "json":
        print(rep.render_json())
    else:
        print(rep.render_text(verbose=args.verbose))
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
