import itertools
import json

import networkx as nx
import pytest

from tl3d.checks import objects_upto
from tl3d.posets import fold_moves, hasse, leaf_removals, meld_moves, propagating_leq, subfold_leq
from tl3d.trees import RootedTree, tree_from_string

from .test_trees import plane_embeddings

T = tree_from_string


def matching(s: str) -> dict[int, int]:
    stack, out = [], {}
    for i, ch in enumerate(s):
        if ch == "(":
            stack.append(i)
        else:
            out[stack.pop()] = i
    return out


def rewrite_all(t: RootedTree, rule) -> set[RootedTree]:
    """Apply a string rewrite at every position of every drawing of ``t``."""
    out = set()
    for s in plane_embeddings(t):
        for new in rule(s, matching(s)):
            out.add(T(new))
    return out


def fold_rule(s, match):
    # (t1(t2)) -> (t1)t2, with (t2) the last thing inside the outer pair
    for i, j in match.items():
        if j - i > 1 and s[j - 1] == ")":
            inner_open = next(a for a, b in match.items() if b == j - 1)
            t1, t2 = s[i + 1 : inner_open], s[inner_open + 1 : j - 1]
            yield s[:i] + "(" + t1 + ")" + t2 + s[j + 1 :]


def meld_rule(s, match):
    for i, j in match.items():
        if j + 1 in match:
            k = match[j + 1]
            yield s[:i] + "(" + s[i + 1 : j] + s[j + 2 : k] + ")" + s[k + 1 :]


def leaf_rule(s, match):
    for i, j in match.items():
        if j == i + 1:
            yield s[:i] + s[j + 1 :]


@pytest.mark.parametrize("t", objects_upto(4), ids=str)
def test_moves_match_string_rewriting(t):
    assert set(fold_moves(t)) == rewrite_all(t, fold_rule)
    assert set(meld_moves(t)) == rewrite_all(t, meld_rule)
    assert set(leaf_removals(t)) == rewrite_all(t, leaf_rule)


def test_move_examples():
    assert T("()()") in fold_moves(T("((()))"))
    assert fold_moves(T("()")) == []
    assert T("(()())") in meld_moves(T("(())(())"))
    assert meld_moves(T("()")) == []
    assert meld_moves(T("()()")) == [T("()")]
    assert leaf_removals(T("(())")) == [T("()")]
    assert leaf_removals(T("()()")) == [T("()")]
    assert leaf_removals(T("((()))")) == [T("(())")]


def test_subfold_examples():
    assert subfold_leq(T("()()"), T("((()))"))
    assert not subfold_leq(T("((()))"), T("()(())"))
    assert not subfold_leq(T("()(())"), T("((()))"))
    # both lie above (()) and ()(), which are incomparable
    for low in (T("(())"), T("()()")):
        assert subfold_leq(low, T("((()))")) and subfold_leq(low, T("()(())"))
    assert not subfold_leq(T("(())"), T("()()")) and not subfold_leq(T("()()"), T("(())"))


def test_partial_order_axioms():
    objs = objects_upto(5)
    leq = {(a, b): subfold_leq(a, b) for a in objs for b in objs}
    for a in objs:
        assert leq[a, a]
    for a, b in itertools.product(objs, repeat=2):
        if leq[a, b]:
            assert a.loop_count <= b.loop_count
            if leq[b, a]:
                assert a == b
    for a, b, c in itertools.product(objs[:20], repeat=3):
        if leq[a, b] and leq[b, c]:
            assert leq[a, c]


def test_hasse_figure():
    got = hasse(3).edge_set()
    assert got == {
        ("", "()"),
        ("()", "()()"),
        ("()", "(())"),
        ("()()", "()()()"),
        ("()()", "()(())"),
        ("()()", "((()))"),
        ("(())", "()(())"),
        ("(())", "(()())"),
        ("(())", "((()))"),
    }


def test_hasse_trivial():
    h = hasse(0)
    assert len(h.nodes) == 1 and h.covers == []
    with pytest.raises(ValueError):
        hasse(-1)


def test_hasse_four_regression():
    h = hasse(4)
    assert len(h.nodes) == 17
    assert len(h.covers) == 28


@pytest.mark.parametrize("n", range(6))
def test_hasse_is_transitive_reduction(n):
    h = hasse(n)
    g = nx.DiGraph()
    g.add_nodes_from(range(len(h.nodes)))
    for i, a in enumerate(h.nodes):
        for j, b in enumerate(h.nodes):
            if i != j and subfold_leq(a, b):
                g.add_edge(i, j)
    assert set(nx.transitive_reduction(g).edges) == set(h.covers)
    for rel in h.relations:
        moved = {"leaf_removal": leaf_removals, "fold": fold_moves, "meld": meld_moves}[rel.move](rel.upper)
        assert rel.lower in moved


def test_hasse_exports():
    h = hasse(2)
    dot = h.to_dot()
    assert dot.startswith("digraph") and '"(())"' in dot and dot.count("->") == 3
    data = json.loads(h.dumps())
    assert data["nodes"] == ["", "()", "()()", "(())"]


def test_propagating_examples():
    assert propagating_leq(T("()()"), T("((()))")) is True
    for t in objects_upto(3):
        assert propagating_leq(t, t) is True
    assert propagating_leq(T("()()"), T("()")) is False


def test_propagating_bound_is_inconclusive():
    assert propagating_leq(T("()()"), T("((()))"), max_check=0) is None
