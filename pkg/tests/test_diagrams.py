import pytest
from hypothesis import given
from hypothesis import strategies as st

from tl3d.checks import all_partitions, boundary_labels, objects_upto, oracle_admissible
from tl3d.diagrams import (
    AdmissibilityError,
    Diagram,
    enumerate_homs,
    flip,
    group_by_propagating,
    identity,
    is_admissible,
    joined_tree,
    permutation_diagram,
    propagating_config,
)
from tl3d.partitions import SetPartition
from tl3d.trees import EdgePermutation, automorphisms, enumerate_trees, tree_from_string

T = tree_from_string
P = SetPartition.of

SMALL = objects_upto(3)


def test_reconstructed_colouring():
    # bottom (1(2)), top ()(()) numbered 1 | 2(3): colours 1 on the outer
    # loops, 2 on the inner ones, 3 on the bare top loop
    j = joined_tree(T("(())"), T("()(())"))
    good = P([["1-", "2+"], ["2-", "3+"], ["1+"]])
    assert is_admissible(j, good)
    # either 2 recoloured 3 leaves a chain holding a single 1
    assert not is_admissible(j, P([["1-", "2+"], ["2-", "1+"], ["3+"]]))
    assert not is_admissible(j, P([["1-", "2+"], ["2-"], ["1+", "3+"]]))


def test_inner_to_top_through_one_outer_edge():
    j = joined_tree(T("(())"), T("()"))
    assert not is_admissible(j, P([["2-", "1+"], ["1-"]]))
    assert is_admissible(j, P([["1-", "1+"], ["2-"]]))


def test_ground_must_match():
    with pytest.raises(ValueError):
        is_admissible(joined_tree(T("()"), T("()")), P([["1-"]]))


def test_nested_pair_hom_set():
    homs = enumerate_homs(T("(())"), T("(())"))
    groups = group_by_propagating(homs)
    assert len(homs) == 9
    assert {n: len(ds) for n, ds in groups.items()} == {0: 4, 1: 4, 2: 1}


def test_trivial_hom_sets():
    assert [d.partition for d in enumerate_homs(T(""), T(""))] == [SetPartition(())]
    assert {str(d.partition) for d in enumerate_homs(T("()"), T("()"))} == {"{{1-,1+}}", "{{1-},{1+}}"}


def test_frozen_sizes():
    assert len(enumerate_homs(T("()()"), T("()()"))) == 15
    assert len(enumerate_homs(T("()()()"), T("()(())"))) == 104


@pytest.mark.parametrize("F", SMALL, ids=str)
def test_homs_match_filter_oracle(F):
    for Fp in SMALL:
        if F.loop_count + Fp.loop_count > 5:
            continue
        labels = boundary_labels(F.loop_count, Fp.loop_count)
        expect = sorted((p for p in all_partitions(labels) if oracle_admissible(F, Fp, p)), key=lambda p: p.blocks)
        assert [d.partition for d in enumerate_homs(F, Fp)] == expect


@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.data())
def test_flip_preserves_admissibility(F, Fp, data):
    d = data.draw(st.sampled_from(enumerate_homs(F, Fp)))
    assert flip(flip(d)) == d
    assert flip(d) in enumerate_homs(Fp, F)


def test_flip_example():
    d = Diagram.checked(T("(())"), T("()"), P([["1-", "1+"], ["2-"]]))
    assert flip(d) == Diagram(T("()"), T("(())"), P([["1-", "1+"], ["2+"]]))
    assert flip(identity(T("()()"))) == identity(T("()()"))


def test_identity_examples():
    assert str(identity(T("(())")).partition) == "{{1-,1+},{2-,2+}}"
    assert identity(T("")).partition == SetPartition(())


@pytest.mark.parametrize("n", range(7))
def test_permutation_diagrams_admissible(n):
    for F in enumerate_trees(n):
        j = joined_tree(F, F)
        for sigma in automorphisms(F):
            assert is_admissible(j, permutation_diagram(F, sigma).partition)


def test_swap_diagram():
    F = T("()()")
    d = permutation_diagram(F, EdgePermutation.from_cycles(2, (1, 2)))
    assert str(d.partition) == "{{1-,2+},{1+,2-}}"
    assert permutation_diagram(F, EdgePermutation.identity(2)) == identity(F)


def test_permutation_outside_group():
    with pytest.raises(ValueError):
        permutation_diagram(T("(())"), EdgePermutation.from_cycles(2, (1, 2)))


def test_checked_rejects():
    with pytest.raises(AdmissibilityError):
        Diagram.checked(T("(())"), T("()"), P([["2-", "1+"], ["1-"]]))


def test_json_round_trip():
    for d in enumerate_homs(T("(())"), T("()()")):
        assert Diagram.from_json(d.to_json()) == d


def test_propagating_configs():
    F = T("(())")
    assert propagating_config(identity(F)) == F
    homs = group_by_propagating(enumerate_homs(F, F))
    assert {propagating_config(d) for d in homs[1]} == {T("()")}
    assert {propagating_config(d) for d in homs[0]} == {T("")}
