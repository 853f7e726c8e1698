from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grpstab.builders import (build_group, cyclic, dihedral, direct_product, elementary_abelian,
                              from_permutations, heisenberg, quaternion8, semidirect_cyclic,
                              symmetric)
from grpstab.errors import InputError
from grpstab.groups import (FiniteGroup, Homomorphism, all_normal_subgroups, commutator_subgroup,
                            hom_from_images, join, normal_closure, quotient, subgroup_closure)

from oracles import abelian_invariants_from_orders, commutator_set, perm_closure, table_subgroup


def names_of(G, S):
    return {G.names[x] for x in S.elements}


def test_builtin_orders():
    assert dihedral(4).order == 8
    assert heisenberg(3).order == 27
    assert symmetric(4).order == 24
    assert semidirect_cyclic(3, 4, 2).order == 12


def test_quaternion_has_one_involution():
    Q = quaternion8()
    # oracle: count elements x != 1 with x*x == 1 straight from the table
    assert sum(1 for x in range(1, 8) if Q.table[x][x] == 0) == 1
    assert Q.element_orders.count(2) == 1


def test_permutation_three_cycle():
    G = from_permutations(3, [[1, 2, 0]])
    assert G.order == 3 == len(perm_closure([(1, 2, 0)]))


def test_symmetric_matches_permutation_closure():
    assert symmetric(4).order == len(perm_closure([(1, 2, 3, 0), (1, 0, 2, 3)]))


def test_closures_in_dihedral():
    D = dihedral(4)
    r2 = D.names.index("r^2")
    s = D.names.index("s")
    assert names_of(D, subgroup_closure(D, [r2])) == {"e", "r^2"}
    N = normal_closure(D, [s])
    assert N.order == 4 and names_of(D, N) == {"e", "s", "r^2", "r^2s"}
    assert subgroup_closure(D, []).order == 1
    assert normal_closure(D, []).order == 1
    assert subgroup_closure(D, D.generators).is_whole()


def test_commutator_subgroups():
    Q = quaternion8()
    C = commutator_subgroup(Q, Q.whole(), Q.whole())
    assert names_of(Q, C) == {"1", "-1"}
    assert set(C.elements) == commutator_set(Q.table, range(8), range(8))
    S3 = symmetric(3)
    assert commutator_subgroup(S3, S3.whole(), S3.whole()).order == 3
    assert commutator_subgroup(S3, S3.whole(), S3.trivial()).order == 1


def test_quotients():
    D = dihedral(4)
    Z = subgroup_closure(D, [D.names.index("r^2")])
    K, proj = quotient(D, Z)
    assert K.order == 4 and set(K.element_orders) == {1, 2}
    T, p = quotient(D, D.trivial())
    assert T.order == 8 and p.is_injective()
    one, _ = quotient(D, D.whole())
    assert one.order == 1


def test_hom_from_images():
    Q = quaternion8()
    assert hom_from_images(Q, Q, dict(zip(Q.generators, Q.generators))) == Homomorphism.identity(Q)
    C = normal_closure(Q, [Q.names.index("-1")])
    K, proj = quotient(Q, C)
    f = hom_from_images(Q, K, {g: proj(g) for g in Q.generators})
    assert f == proj
    with pytest.raises(InputError):
        hom_from_images(cyclic(4), cyclic(3), {cyclic(4).generators[0]: 1})


def test_normal_subgroup_counts():
    for p in (2, 3, 5):
        assert len(all_normal_subgroups(cyclic(p))) == 2
    Q = quaternion8()
    assert sorted(N.order for N in all_normal_subgroups(Q)) == [1, 2, 4, 4, 4, 8]
    assert sorted(N.order for N in all_normal_subgroups(symmetric(3))) == [1, 3, 6]


def test_malformed_tables_are_rejected():
    with pytest.raises(InputError, match="repeats entry"):
        FiniteGroup([[0, 1, 2], [1, 2, 0], [2, 2, 1]])
    with pytest.raises(InputError, match="identity"):
        FiniteGroup([[1, 0], [0, 1]])
    with pytest.raises(InputError):
        build_group({"kind": "builtin", "builtin": "semidirect_cyclic",
                     "params": {"n": 5, "m": 2, "k": 2}})
    with pytest.raises(InputError):
        from_permutations(3, [[0, 0, 1]])


def test_nonassociative_latin_square_rejected():
    # a loop of order 5 that is not a group
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(InputError, match="associative"):
        FiniteGroup(t)


def test_abelianization_matches_element_count_oracle(small_corpus):
    for G in small_corpus:
        C = commutator_subgroup(G, G.whole(), G.whole())
        Q, _ = quotient(G, C)
        assert list(G.abelianization_invariants) == abelian_invariants_from_orders(
            list(Q.element_orders)), G.name


def test_direct_product_invariants():
    G = direct_product(cyclic(2), cyclic(4))
    assert list(G.abelianization_invariants) == [2, 4]
    assert list(elementary_abelian(3, 2).abelianization_invariants) == [3, 3]


@given(st.sampled_from(["Q8", "D8", "S3", "Z2xZ4", "Dic12", "D12", "SD16"]), st.data())
def test_quotient_projection_properties(name, data, ):
    from grpstab.corpus import default_corpus

    G = next(g for g in default_corpus() if g.name == name)
    seed = data.draw(st.lists(st.integers(0, G.order - 1), max_size=2))
    N = normal_closure(G, seed)
    assert N.is_normal()
    assert subgroup_closure(G, seed) <= N
    _, proj = quotient(G, N)
    assert proj.is_surjective()
    assert proj.kernel() == N


@given(st.sampled_from(["Q8", "D8", "S3", "Dic12", "M16"]), st.data())
def test_commutator_symmetry(name, data):
    from grpstab.corpus import default_corpus

    G = next(g for g in default_corpus() if g.name == name)
    H = subgroup_closure(G, data.draw(st.lists(st.integers(0, G.order - 1), max_size=2)))
    K = subgroup_closure(G, data.draw(st.lists(st.integers(0, G.order - 1), max_size=2)))
    assert commutator_subgroup(G, H, K) == commutator_subgroup(G, K, H)
    assert set(commutator_subgroup(G, H, K).elements) == commutator_set(G.table, H.elements, K.elements)


def test_normal_subgroups_closed_under_meet_and_join(small_corpus):
    for G in small_corpus:
        normals = all_normal_subgroups(G)
        keys = {N.mask for N in normals}
        for A in normals:
            for B in normals:
                assert A.intersect(B).mask in keys
                assert join(G, A, B).mask in keys


def test_subgroup_closure_matches_brute_force(small_corpus):
    for G in small_corpus:
        for x in range(G.order):
            assert set(subgroup_closure(G, [x]).elements) == table_subgroup(G.table, [x])
