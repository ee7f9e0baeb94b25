"""Finite Abelian group arithmetic, subsets, subgroup and index queries."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from midconvex.errors import CapExceeded
from midconvex.groups import (
    GroupSubset,
    element_order,
    halving_set,
    index_is_odd,
    is_subgroup,
    make_group,
    subgroup_generated,
)

small_orders = st.lists(st.integers(min_value=1, max_value=6), min_size=1, max_size=3)


def naive_element_order(a):
    """Oracle: iterate multiples until zero comes back."""
    zero = a.group.zero()
    point = a
    n = 1
    while point != zero:
        point = point + a
        n += 1
    return n


def naive_halving(group, s):
    """Oracle: enumerate the whole group and filter on the defining equation."""
    return frozenset(z for z in group if z + z == s)


def test_make_group_examples():
    assert make_group([]).order == 1
    assert make_group([12]).order == 12
    assert make_group([2, 3]).order == 6


def test_make_group_rejects_bad_orders():
    with pytest.raises(ValueError):
        make_group([0])
    with pytest.raises(ValueError):
        make_group([3, -1])


def test_make_group_order_cap():
    with pytest.raises(CapExceeded):
        make_group([2] * 21)
    make_group([2] * 21, order_cap=1 << 22)


def test_product_2_3_is_cyclic_of_order_6():
    # oracle: exhaust element orders; a cyclic group of order 6 shows up as
    # an element of order 6 and the full order multiset {1,2,3,3,6,6}
    group = make_group([2, 3])
    orders = sorted(naive_element_order(a) for a in group)
    assert orders == [1, 2, 3, 3, 6, 6]
    cyclic6 = sorted(naive_element_order(a) for a in make_group([6]))
    assert orders == cyclic6


def test_add_neg_examples():
    g12 = make_group([12])
    assert (g12.element([7]) + g12.element([8])).residues == (3,)
    g23 = make_group([2, 3])
    assert (g23.element([1, 2]) + g23.element([1, 2])).residues == (0, 1)
    assert -g23.zero() == g23.zero()


def test_add_rejects_mismatched_groups():
    with pytest.raises(ValueError):
        make_group([4]).element([1]) + make_group([5]).element([1])


def test_enumeration_is_mixed_radix_last_component_fastest():
    group = make_group([2, 3])
    assert [e.residues for e in group] == [
        (0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2),
    ]
    assert [group.element_at(i).residues for i in range(6)] == [e.residues for e in group]
    assert all(group.index_of(group.element_at(i)) == i for i in range(6))


def test_element_order_examples():
    g12 = make_group([12])
    assert element_order(g12.element([4])) == 3
    assert element_order(g12.zero()) == 1
    assert element_order(make_group([2, 3]).element([1, 1])) == 6


@given(small_orders, st.data())
def test_element_order_matches_iteration_and_divides_group_order(orders, data):
    group = make_group(orders)
    index = data.draw(st.integers(min_value=0, max_value=group.order - 1))
    a = group.element_at(index)
    n = element_order(a)
    assert n == naive_element_order(a)
    assert group.order % n == 0


def test_halving_set_examples():
    g12 = make_group([12])
    assert {z.residues[0] for z in halving_set(g12.element([6]))} == {3, 9}
    g5 = make_group([5])
    assert {z.residues[0] for z in halving_set(g5.element([1]))} == {3}
    g2 = make_group([2])
    assert halving_set(g2.element([1])) == frozenset()


@given(small_orders, st.data())
def test_halving_set_matches_enumeration(orders, data):
    group = make_group(orders)
    index = data.draw(st.integers(min_value=0, max_value=group.order - 1))
    s = group.element_at(index)
    assert halving_set(s) == naive_halving(group, s)


@given(small_orders, st.data())
def test_halving_set_size_is_zero_or_two_torsion_count(orders, data):
    group = make_group(orders)
    torsion = len(halving_set(group.zero()))
    index = data.draw(st.integers(min_value=0, max_value=group.order - 1))
    count = len(halving_set(group.element_at(index)))
    assert count in (0, torsion)


def test_is_subgroup_examples():
    g15 = make_group([15])
    assert is_subgroup(GroupSubset.from_elements(g15, [0, 3, 6, 9, 12]))
    g4 = make_group([4])
    assert not is_subgroup(GroupSubset.from_elements(g4, [0, 1]))


def test_subgroup_generated_examples():
    g4 = make_group([4])
    assert subgroup_generated(GroupSubset.from_elements(g4, [0, 1])).size == 4
    assert subgroup_generated(GroupSubset.empty(g4)).members() == [g4.zero()]


def test_subgroup_generated_output_is_a_subgroup():
    g12 = make_group([12])
    for seed in ([8], [9], [4, 6], [5]):
        generated = subgroup_generated(GroupSubset.from_elements(g12, seed))
        assert is_subgroup(generated)
        for e in seed:
            assert g12.element([e]) in generated


def test_index_is_odd_examples():
    g15 = make_group([15])
    sub = GroupSubset.from_elements(g15, [0, 3, 6, 9, 12])
    assert index_is_odd(sub)
    assert index_is_odd(GroupSubset.full(g15))
    g4 = make_group([4])
    assert not index_is_odd(GroupSubset.from_elements(g4, [0, 2]))


def test_index_is_odd_rejects_non_subgroups():
    g4 = make_group([4])
    with pytest.raises(ValueError):
        index_is_odd(GroupSubset.from_elements(g4, [0, 1]))


def quotient_has_even_order_element(subset):
    """Oracle: order of g modulo the subgroup is the least n with n*g inside."""
    group = subset.group
    for g in group:
        point = g
        n = 1
        while point not in subset:
            point = point + g
            n += 1
        if n % 2 == 0:
            return True
    return False


def test_odd_index_iff_quotient_has_no_even_order_element():
    for orders in ([4], [6], [8], [12], [2, 2], [2, 3], [3, 3], [2, 2, 2]):
        group = make_group(orders)
        for mask in range(1 << group.order):
            subset = GroupSubset(group, mask)
            if not is_subgroup(subset):
                continue
            assert index_is_odd(subset) == (not quotient_has_even_order_element(subset))


def test_group_subset_membership_table_round_trip():
    group = make_group([2, 3])
    subset = GroupSubset.from_elements(group, [(0, 0), (1, 2)])
    assert subset.membership == (True, False, False, False, False, True)
    assert GroupSubset.from_bools(group, subset.membership) == subset
    assert subset.size == 2
    assert group.element([1, 2]) in subset
    assert group.element([1, 1]) not in subset


def test_group_subset_from_bools_length_check():
    group = make_group([4])
    with pytest.raises(ValueError):
        GroupSubset.from_bools(group, [True, False])


def test_group_subset_translate():
    group = make_group([15])
    coset = GroupSubset.from_elements(group, [0, 3, 6, 9, 12]).translate(group.element([1]))
    assert sorted(e.residues[0] for e in coset.members()) == [1, 4, 7, 10, 13]


def test_trivial_group():
    trivial = make_group([])
    assert trivial.order == 1
    zero = trivial.zero()
    assert zero + zero == zero
    assert halving_set(zero) == frozenset([zero])
    assert is_subgroup(GroupSubset.full(trivial))
