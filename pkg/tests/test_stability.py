from __future__ import annotations

import pytest

from grpstab import config
from grpstab.builders import cyclic, dihedral, quaternion8
from grpstab.classes import MapClassSpec
from grpstab.corpus import enumerate_maps, p_groups
from grpstab.errors import CapExceeded
from grpstab.groups import Homomorphism, normal_closure, quotient
from grpstab.rings import QQ, ZZ, CoeffRing
from grpstab.series import DERIVED, LCS, gamma, plcs
from grpstab.stability import (monomorphism_check, quotient_stabilization,
                               verify_dwyer_converse, verify_idempotency_empirical,
                               verify_p_series_stability, verify_stallings_suite)

F2 = CoeffRing.mod(2)


def to_trivial(G):
    return Homomorphism(G, cyclic(1), [0] * G.order)


def test_z2_rational_strictly_exceeds_baseline():
    res = quotient_stabilization(cyclic(2), LCS, 1, MapClassSpec.two_connected(QQ))
    assert res.baseline.order == 1
    assert res.lower_bound.is_whole()
    assert len(res.certificates) == 1 and res.certificates[0].kernel.is_whole()
    assert res.exact


def test_z2_integral_stays_at_baseline():
    res = quotient_stabilization(cyclic(2), LCS, 1, MapClassSpec.two_connected(ZZ))
    assert res.lower_bound == res.baseline and res.searched == 2


def test_baseline_everything():
    G = quaternion8()
    res = quotient_stabilization(G, DERIVED, 0, MapClassSpec.two_connected(ZZ))
    assert res.lower_bound.is_whole()


def test_trivial_group():
    res = quotient_stabilization(cyclic(1), LCS, 2, MapClassSpec.dwyer(ZZ, 2))
    assert res.lower_bound.order == 1


def test_report_has_banner_and_certificates():
    rep = quotient_stabilization(cyclic(2), LCS, 1, MapClassSpec.two_connected(QQ)).report()
    assert any("lower bound only" in n for n in rep.notes)
    assert any(c.name.startswith("certificate") for c in rep.checks)
    assert rep.passed


def test_lattice_cap():
    with config.using(lattice_cap=16):
        with pytest.raises(CapExceeded, match="single_closures"):
            quotient_stabilization(dihedral(9), LCS, 1, MapClassSpec.two_connected(QQ))
        res = quotient_stabilization(dihedral(9), LCS, 1, MapClassSpec.two_connected(QQ),
                                     single_closures=True)
        assert res.baseline <= res.lower_bound


def test_monomorphism_examples():
    D = dihedral(8)
    assert monomorphism_check(Homomorphism.identity(D), LCS, 3).verdict
    _, proj = quotient(D, normal_closure(D, [D.names.index("r^4")]))
    m = monomorphism_check(proj, LCS, 2)
    assert m.verdict
    m = monomorphism_check(to_trivial(cyclic(2)), LCS, 1)
    assert not m.verdict and m.witnesses == [1]


def test_stallings_small_corpora():
    Z3, one = cyclic(3), cyclic(1)
    rep = verify_stallings_suite([Z3, one], F2, 5)
    assert rep.passed and rep.data["maps accepted"] >= 1
    assert verify_stallings_suite([one], ZZ, 5).passed
    assert verify_stallings_suite([quaternion8()], ZZ, 5).passed


def test_dwyer_converse_examples():
    assert verify_dwyer_converse(cyclic(6), ZZ, 3).passed
    rep = verify_dwyer_converse(dihedral(8), ZZ, 2)
    assert rep.passed and any("r^4" in c.name for c in rep.checks)
    rep = verify_dwyer_converse(quaternion8(), ZZ, 1)
    assert rep.passed and [c.name for c in rep.checks] == ["n=1 a=-1"]


def test_p_series_examples():
    assert verify_p_series_stability([cyclic(3), cyclic(1)], 2, 4).passed
    assert verify_p_series_stability([quaternion8()], 2, 4).passed


def test_idempotency_examples():
    rep = verify_idempotency_empirical(cyclic(2), LCS, 1, MapClassSpec.two_connected(QQ))
    assert rep.passed and rep.data == {"S1 order": 2, "S2 order": 2}
    assert verify_idempotency_empirical(quaternion8(), LCS, 1, MapClassSpec.two_connected(QQ)).passed


def test_seed_only_changes_order(corpus):
    small = p_groups(corpus, 2, 8)
    base = enumerate_maps(small)
    with config.using(seed=7):
        shuffled = enumerate_maps(small)
        rep = verify_stallings_suite(small, F2, 3, shuffled)
    assert sorted(r.key for r in base) == sorted(r.key for r in shuffled)
    assert [r.key for r in base] != [r.key for r in shuffled]
    ref = verify_stallings_suite(small, F2, 3, base)
    assert rep.data == ref.data and rep.passed == ref.passed


def test_floor_for_p_lower_central(corpus):
    for G in p_groups(corpus, 2, 16):
        for n in (1, 2):
            res = quotient_stabilization(G, plcs(2), n, MapClassSpec.two_connected(F2))
            assert res.lower_bound == res.baseline == gamma(G, plcs(2), n)
