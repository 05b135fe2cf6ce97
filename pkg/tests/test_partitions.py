import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tl3d.checks import all_partitions, boundary_labels, closure_compose
from tl3d.partitions import (
    CompositionError,
    LoopLabel,
    SetPartition,
    Side,
    bottom,
    compose,
    compose3,
    identity_partition,
    lex_compare,
    propagating_number,
    top,
)

P = SetPartition.of


@st.composite
def partitions(draw, n_bottom, n_top):
    labels = boundary_labels(n_bottom, n_top)
    colours = draw(st.lists(st.integers(0, len(labels)), min_size=len(labels), max_size=len(labels)))
    groups: dict[int, list[LoopLabel]] = {}
    for x, c in zip(labels, colours):
        groups.setdefault(c, []).append(x)
    return SetPartition(tuple(tuple(g) for g in groups.values()))


@st.composite
def stacks(draw, layers=3, max_size=3):
    sizes = draw(st.lists(st.integers(0, max_size), min_size=layers + 1, max_size=layers + 1))
    return [draw(partitions(sizes[i], sizes[i + 1])) for i in range(layers)]


def test_label_text():
    assert str(bottom(3)) == "3-" and str(top(12)) == "12+"
    assert LoopLabel.parse("2−") == bottom(2)
    with pytest.raises(ValueError):
        LoopLabel.parse("x+")


def test_normal_form():
    p = P([["2+", "1-"], ["1+"]])
    assert p.blocks == ((bottom(1), top(2)), (top(1),))
    assert str(p) == "{{1-,2+},{1+}}"


def test_rejects_overlap_and_empty():
    with pytest.raises(ValueError):
        P([["1-"], ["1-", "1+"]])
    with pytest.raises(ValueError):
        SetPartition(((),))


def test_json_round_trip():
    p = P([["1-", "3+"], ["2-"], ["1+", "2+"]])
    assert SetPartition.from_json(p.to_json()) == p


def test_chain_through_two_layers():
    # 3- reaches 1+ via middle 3 ~ 2 (upper) and 2 ~ 1 (lower)
    a = P([["3-", "3+"], ["1-", "1+", "2+"], ["2-"]])
    b = P([["3-", "2-"], ["1-", "1+"]])
    r = compose(a, b)
    assert r.trace.block_of(bottom(3)) == (bottom(1), top(1), bottom(3))


@given(partitions(2, 2))
def test_identity_is_unit(p):
    for lower, upper in ((identity_partition(2), p), (p, identity_partition(2))):
        r = compose(lower, upper)
        assert r.trace == p and r.middle_only_blocks == 0


def test_two_caps_close_one_bubble():
    a = P([["1+"], ["2+"]])
    b = P([["1-", "2-"]])
    r = compose(a, b)
    assert r.trace == SetPartition(())
    assert (r.merged_components, r.middle_only_blocks) == (1, 1)


def test_middle_mismatch():
    with pytest.raises(CompositionError):
        compose(P([["1-", "1+"]]), P([["1-", "1+"], ["2-"]]))


def test_empty_middle_is_disjoint_union():
    a = P([["1-"], ["2-"]])
    b = P([["1+", "2+"]])
    r = compose(a, b)
    assert len(r.trace) == 3 and r.middle_only_blocks == 0


def test_three_identities():
    i = identity_partition(3)
    r = compose3(i, i, i)
    assert r.trace == i and r.merged_components == 3


@given(stacks())
def test_compose3_matches_sequential(layers):
    a, x, b = layers
    one = compose3(a, x, b)
    lower = compose(a, x)
    two = compose(lower.trace, b)
    assert one.trace == two.trace
    assert one.middle_only_blocks == lower.middle_only_blocks + two.middle_only_blocks


@given(stacks())
def test_trace_associative(layers):
    a, b, c = layers
    left = compose(compose(a, b).trace, c).trace
    right = compose(a, compose(b, c).trace).trace
    assert left == right


@given(stacks(layers=2))
def test_component_bookkeeping(layers):
    a, b = layers
    r = compose(a, b)
    assert r.merged_components == len(r.trace) + r.middle_only_blocks
    assert (r.trace, r.middle_only_blocks) == closure_compose(a, b)
    assert propagating_number(r.trace) <= min(propagating_number(a), propagating_number(b))


def test_propagating_examples():
    assert propagating_number(P([["1+", "1-", "3+", "3-", "4-"], ["2+", "2-"], ["4+"]])) == 2
    assert propagating_number(identity_partition(4)) == 4
    assert propagating_number(P([["1-"], ["1+"], ["2-"]])) == 0


def test_lex_order_on_small_ground():
    labels = [bottom(1), bottom(2), bottom(3)]
    parts = sorted(all_partitions(labels), key=lambda p: p.blocks)
    assert [str(p) for p in parts] == [
        "{{1-},{2-},{3-}}",
        "{{1-},{2-,3-}}",
        "{{1-,2-},{3-}}",
        "{{1-,2-,3-}}",
        "{{1-,3-},{2-}}",
    ]
    assert lex_compare(P([["1-", "2-"]]), P([["1-"], ["2-"]])) == 1


def test_lex_compare_total_on_four_labels():
    parts = list(all_partitions(boundary_labels(2, 2)))
    assert len(parts) == 15
    for p, q in itertools.product(parts, repeat=2):
        assert lex_compare(p, q) == -lex_compare(q, p)
        assert (lex_compare(p, q) == 0) == (p == q)


def test_lex_compare_needs_same_ground():
    with pytest.raises(ValueError):
        lex_compare(P([["1-"]]), P([["1+"]]))


def test_flip_swaps_sides():
    p = P([["1-", "2+"], ["2-"]])
    assert p.flipped() == P([["1+", "2-"], ["2+"]])
    assert p.side_indices(Side.TOP) == {2}
