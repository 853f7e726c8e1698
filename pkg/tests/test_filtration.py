from __future__ import annotations

from math import prod

import pytest

from grpstab.builders import cyclic, dihedral, quaternion8, symmetric
from grpstab.errors import InputError
from grpstab.filtration import (filtration_nesting_check, phi_derived, phi_lcs,
                                zero_map_lemma_check)
from grpstab.groups import quotient
from grpstab.homology import homology_group
from grpstab.rings import QQ, ZZ, CoeffRing
from grpstab.series import LCS, series_term

from oracles import phi_lcs_order

F2 = CoeffRing.mod(2)


def order_of(F):
    """|Phi| for a finite ambient group."""
    H = F.ambient
    rank, tors = F.structure()
    assert H.rank == 0 and rank == 0
    return prod(H.torsion) // prod(tors)


def h2_order(G):
    H = homology_group(G, 2, ZZ)
    return prod(H.torsion)


def test_level_one_is_everything(small_corpus):
    for G in small_corpus:
        for ring in (ZZ, F2):
            assert phi_lcs(G, 1, ring).is_everything()


def test_beyond_class_is_zero():
    D = dihedral(8)  # class 3
    for n in (4, 5):
        assert phi_lcs(D, n, ZZ).is_zero()


def test_d16_level_two_golden():
    D = dihedral(8)
    F = phi_lcs(D, 2, ZZ)
    # five-term oracle: |H_2(D16)| = 2, |G_2/G_3| = 2, H_2(D16/G_2) = H_2(Z2^2) = Z/2
    expected = phi_lcs_order(2, 2, 2)
    assert expected == 2
    assert order_of(F) == expected
    assert F.is_everything()
    assert F.certify()


def test_phi_orders_match_five_term_sequence(small_corpus):
    for G in small_corpus:
        for n in range(2, 5):
            Gn, Gn1 = series_term(G, LCS, n), series_term(G, LCS, n + 1)
            Q, _ = quotient(G, Gn)
            expected = phi_lcs_order(h2_order(G), Gn.order // Gn1.order, h2_order(Q))
            assert order_of(phi_lcs(G, n, ZZ)) == expected, (G.name, n)


def test_matched_option_uses_r_series():
    # over Z/2 the matched series is the 2-lower central series; for Z4 its second
    # term is {0, 2}, and Z4 -> Z2 kills H_2(-; Z/2) (the Tor part of 2-torsion in Z4)
    G = cyclic(4)
    assert phi_lcs(G, 2, F2, matched=True).is_everything()
    assert phi_lcs(G, 2, F2).is_zero()


def test_derived_examples(small_corpus):
    for G in small_corpus:
        assert phi_derived(G, 0, "integral").is_everything()
        assert phi_derived(G, 2, "harvey").is_zero()
        assert phi_derived(G, 2, "rational").is_zero()
    S3 = symmetric(3)
    assert phi_derived(S3, 2, "integral").is_zero()  # S3'' = 1
    with pytest.raises(InputError):
        phi_derived(S3, 1, "mod_p")


def test_nesting_examples():
    G = quaternion8()
    rep = filtration_nesting_check(G, ZZ, 1)
    assert rep.passed and len(rep.checks) == 1
    A = cyclic(6)
    for ring in (ZZ, QQ, F2):
        phis = [phi_lcs(A, n, ring) for n in range(2, 6)]
        assert all(a.same_as(b) for a, b in zip(phis, phis[1:]))
    assert filtration_nesting_check(dihedral(8), ZZ, 4).passed


def test_zero_map_lemma_examples():
    for k in (1, 2):
        assert zero_map_lemma_check(dihedral(8), k).passed
    rep = zero_map_lemma_check(cyclic(4), 2)
    assert rep.passed and any("vanishes" in c.name for c in rep.checks)
    with pytest.raises(InputError):
        zero_map_lemma_check(cyclic(4), 0)
