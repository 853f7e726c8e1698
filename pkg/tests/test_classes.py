from __future__ import annotations

import pytest

from grpstab.builders import cyclic, dihedral, quaternion8
from grpstab.classes import (FAMILIES, MapClassSpec, check_composition_closure, check_membership,
                             is_member, pushout_of_quotients)
from grpstab.corpus import generator_maps, p_groups, quotient_maps
from grpstab.errors import InputError
from grpstab.groups import Homomorphism, normal_closure, quotient, subgroup_closure
from grpstab.homology import homology_group
from grpstab.rings import QQ, ZZ, CoeffRing

F2 = CoeffRing.mod(2)


def every_spec(n=2):
    return [MapClassSpec.two_connected(ZZ), MapClassSpec.two_connected(F2),
            MapClassSpec.h1_mono_h2_epi(QQ), MapClassSpec.dwyer(ZZ, n), MapClassSpec.dwyer(QQ, n),
            MapClassSpec.chp(2, n), MapClassSpec.chp(3, n, mono=True),
            MapClassSpec.ch_integral(n), MapClassSpec.ch_rational(n), MapClassSpec.harvey(n)]


def to_trivial(G):
    return Homomorphism(G, cyclic(1), [0] * G.order)


def test_specs_cover_all_families():
    assert {s.family for s in every_spec()} == set(FAMILIES)


def test_parse():
    assert MapClassSpec.parse("twoconn z") == MapClassSpec.two_connected(ZZ)
    assert MapClassSpec.parse("dwyer z:2 3") == MapClassSpec.dwyer(F2, 3)
    assert MapClassSpec.parse(["chp", "2", "3"]) == MapClassSpec.chp(2, 3)
    assert MapClassSpec.parse("harvey 2") == MapClassSpec.harvey(2)
    for bad in ("", "twoconn", "dwyer z", "chp 4 2", "ch x", "nope z", "harvey 0"):
        with pytest.raises(InputError):
            MapClassSpec.parse(bad)


def test_identity_is_in_every_family():
    for G in (quaternion8(), dihedral(4), cyclic(6)):
        for spec in every_spec():
            assert is_member(Homomorphism.identity(G), spec), spec


def test_z3_to_trivial_is_z2_two_connected():
    Z3 = cyclic(3)
    # coprime order: all Z/2 homology of Z3 vanishes in degrees 1, 2
    assert homology_group(Z3, 1, F2).is_zero() and homology_group(Z3, 2, F2).is_zero()
    assert is_member(to_trivial(Z3), MapClassSpec.two_connected(F2))


def test_z2_to_trivial():
    f = to_trivial(cyclic(2))
    mem = check_membership(f, MapClassSpec.two_connected(ZZ))
    assert not mem.verdict
    assert mem.report.failures[0].name.startswith("H_1") and mem.report.failures[0].data["kernel"]
    for n in (1, 2, 3):
        assert is_member(f, MapClassSpec.dwyer(QQ, n))


def test_d16_projection_is_dwyer_level_two():
    D = dihedral(8)
    r4 = D.names.index("r^4")
    _, proj = quotient(D, normal_closure(D, [r4]))
    assert is_member(proj, MapClassSpec.dwyer(ZZ, 2))
    assert not is_member(proj, MapClassSpec.two_connected(ZZ))


def test_membership_is_deterministic():
    D = dihedral(8)
    _, proj = quotient(D, normal_closure(D, [D.names.index("r^4")]))
    for spec in every_spec():
        a = check_membership(proj, spec).to_dict()
        b = check_membership(proj, spec).to_dict()
        assert a == b


def test_composition_closure_examples():
    Q = quaternion8()
    i = Homomorphism.identity(Q)
    assert check_composition_closure([i, i], MapClassSpec.two_connected(ZZ)).passed
    D = dihedral(4)
    _, proj = quotient(D, normal_closure(D, [D.names.index("r^2")]))
    spec = MapClassSpec.dwyer(ZZ, 1)
    rep = check_composition_closure([proj], spec)
    assert rep.passed and rep.data["member verdicts"] == [is_member(proj, spec)]


def test_composites_of_members_are_members(corpus):
    spec = MapClassSpec.two_connected(F2)
    groups = p_groups(corpus, 2, 16)
    quots = [rec.hom for G in groups for rec in quotient_maps(G)]
    members = [f for f in quots if is_member(f, spec)]
    for f in members:
        for rec in quotient_maps(f.target):
            g = rec.hom
            if is_member(g, spec):
                assert is_member(g @ f, spec)


def test_class_nesting_and_two_connected_inside_dwyer(corpus_maps):
    for rec in corpus_maps[::13]:
        f = rec.hom
        if max(f.source.order, f.target.order) > 24:
            continue
        for ring in (ZZ, F2):
            dw = [is_member(f, MapClassSpec.dwyer(ring, n)) for n in range(1, 5)]
            assert all(a or not b for a, b in zip(dw, dw[1:]))
            if is_member(f, MapClassSpec.two_connected(ring)):
                assert all(dw)
        ch = [is_member(f, MapClassSpec.chp(2, n)) for n in range(1, 5)]
        assert all(a or not b for a, b in zip(ch, ch[1:]))


def test_automorphisms_are_in_every_family(small_corpus):
    for G in small_corpus:
        if G.order > 12:
            continue
        autos = [r.hom for r in generator_maps(G, G) if r.hom.is_injective()]
        for f in autos[:6]:
            for spec in every_spec(3):
                assert is_member(f, spec), (G.name, spec)


def test_pushouts():
    Q = quaternion8()
    i, j = Q.names.index("i"), Q.names.index("j")
    _, f = quotient(Q, subgroup_closure(Q, [i]))
    _, g = quotient(Q, subgroup_closure(Q, [j]))
    sq = pushout_of_quotients(f, g)
    assert sq.commutes() and sq.from_left.target.order == 1
    same = pushout_of_quotients(f, f)
    assert same.from_left.is_injective() and same.from_left.is_surjective()
    _, triv = quotient(Q, Q.trivial())
    sq2 = pushout_of_quotients(triv, f)
    assert sq2.from_right.is_injective() and sq2.commutes()
    with pytest.raises(InputError):
        pushout_of_quotients(f, Homomorphism.identity(cyclic(2)))


def test_nudge_out_on_quotient_squares(corpus):
    from grpstab.classes import check_nudge_out
    from grpstab.groups import all_normal_subgroups

    for G in p_groups(corpus, 2, 8) + [quaternion8()]:
        projs = [quotient(G, N)[1] for N in all_normal_subgroups(G)]
        for spec in (MapClassSpec.two_connected(F2), MapClassSpec.dwyer(ZZ, 2)):
            for f in projs:
                for g in projs:
                    rep = check_nudge_out(f, g, spec)
                    assert rep.passed, (G.name, str(spec), [c.name for c in rep.failures])
