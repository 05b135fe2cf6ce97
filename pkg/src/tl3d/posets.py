"""Partial orders on rooted trees.

The sub/fold order is generated by three downward moves, each removing one
loop:

* leaf removal: delete a loop with nothing inside it;
* fold, ``(t1(t2)) -> (t1)t2``: a loop ``C`` inside a loop ``L`` is erased
  and the contents of ``C`` move out beside ``L``;
* meld, ``(t1)(t2) -> (t1 t2)``: two sibling loops are merged into one.

The propagating order asks whether the identity on one object factors through
another; it is decided here by search over hom bases at k = 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .algebra import sh_product
from .diagrams import Diagram, enumerate_homs, identity
from .trees import RootedTree, enumerate_trees, sort_key, tree_from_parents

MOVES = ("leaf_removal", "fold", "meld")


def _kids(parents: tuple[int, ...]) -> dict[int, list[int]]:
    kids: dict[int, list[int]] = {v: [] for v in range(len(parents) + 1)}
    for i, p in enumerate(parents, start=1):
        kids[p].append(i)
    return kids


def _delete(parents: tuple[int, ...], gone: int, reparent: dict[int, int]) -> RootedTree:
    """Drop loop ``gone``, reattach loops per ``reparent`` and renumber."""
    keep = [i for i in range(1, len(parents) + 1) if i != gone]
    index = {old: new for new, old in enumerate(keep, start=1)}
    index[0] = 0
    new = []
    for i in keep:
        p = reparent.get(i, parents[i - 1])
        new.append(index[p])
    return tree_from_parents(new)


def _unique_sorted(trees) -> list[RootedTree]:
    return sorted(set(trees), key=sort_key)


def leaf_removals(t: RootedTree) -> list[RootedTree]:
    parents = t.parents
    kids = _kids(parents)
    return _unique_sorted(_delete(parents, v, {}) for v in range(1, len(parents) + 1) if not kids[v])


def fold_moves(t: RootedTree) -> list[RootedTree]:
    parents = t.parents
    kids = _kids(parents)
    out = []
    for c in range(1, len(parents) + 1):
        outer = parents[c - 1]
        if outer == 0:
            continue
        # c's children leave with it; they land beside ``outer``
        out.append(_delete(parents, c, {x: parents[outer - 1] for x in kids[c]}))
    return _unique_sorted(out)


def meld_moves(t: RootedTree) -> list[RootedTree]:
    parents = t.parents
    kids = _kids(parents)
    out = []
    for v, siblings in kids.items():
        for a_pos, a in enumerate(siblings):
            for b in siblings[a_pos + 1 :]:
                out.append(_delete(parents, b, {x: a for x in kids[b]}))
    return _unique_sorted(out)


def moves(t: RootedTree) -> dict[str, list[RootedTree]]:
    return {"leaf_removal": leaf_removals(t), "fold": fold_moves(t), "meld": meld_moves(t)}


@lru_cache(maxsize=None)
def down_set(t: RootedTree) -> frozenset[RootedTree]:
    """Everything reachable from ``t`` by downward moves, ``t`` included."""
    out = {t}
    for results in moves(t).values():
        for s in results:
            out |= down_set(s)
    return frozenset(out)


def subfold_leq(a: RootedTree, b: RootedTree) -> bool:
    """True iff ``a`` is obtained from ``b`` by leaf removals, folds and melds."""
    if a.loop_count > b.loop_count:
        return False
    return a in down_set(b)


@dataclass(frozen=True)
class CoverRelation:
    lower: RootedTree
    upper: RootedTree
    move: str


@dataclass
class HasseDiagram:
    nodes: list[RootedTree]
    covers: list[tuple[int, int]]
    relations: list[CoverRelation] = field(default_factory=list)

    def edge_set(self) -> set[tuple[str, str]]:
        return {(self.nodes[i].brackets, self.nodes[j].brackets) for i, j in self.covers}

    def to_dot(self) -> str:
        lines = ["digraph subfold {", "  rankdir=LR;"]
        for i, t in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{t}"];')
        for rel, (i, j) in zip(self.relations, self.covers):
            lines.append(f'  n{i} -> n{j} [label="{rel.move}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "nodes": [t.brackets for t in self.nodes],
            "covers": [
                {"lower": i, "upper": j, "move": rel.move} for rel, (i, j) in zip(self.relations, self.covers)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _first_move(lower: RootedTree, upper: RootedTree) -> str:
    for name, results in moves(upper).items():
        if lower in results:
            return name
    raise ValueError(f"{lower} is not one move below {upper}")


def hasse(max_loops: int) -> HasseDiagram:
    """Covering relations of the sub/fold order on trees with at most ``max_loops`` loops."""
    if max_loops < 0:
        raise ValueError("max_loops must be non-negative")
    nodes = [t for n in range(max_loops + 1) for t in enumerate_trees(n)]
    index = {t: i for i, t in enumerate(nodes)}
    below = {t: {s for s in down_set(t) if s != t} for t in nodes}
    covers = []
    for u in nodes:
        for l in below[u]:
            # a cover has nothing strictly between
            if not any(l in below[m] for m in below[u]):
                covers.append((index[l], index[u]))
    covers.sort()
    relations = [CoverRelation(nodes[i], nodes[j], _first_move(nodes[i], nodes[j])) for i, j in covers]
    return HasseDiagram(nodes, covers, relations)


def _full_on(F: RootedTree, G: RootedTree, n: int) -> list[Diagram]:
    return [d for d in enumerate_homs(F, G) if d.propagating_number == n]


def propagating_leq(a: RootedTree, b: RootedTree, max_check: int = 10**6) -> Optional[bool]:
    """Does the identity on ``a`` factor through ``b`` at k = 1?

    Searches basis pairs ``X: a -> b`` and ``Y: b -> a`` for a composite equal
    to a nonzero multiple of the identity on ``a``.  Only diagrams in which
    every loop of ``a`` propagates can contribute.  Returns ``None`` when more
    than ``max_check`` pairs would be needed to decide.
    """
    n = a.loop_count
    if n > b.loop_count:
        return False
    one = identity(a)
    ups = _full_on(a, b, n)
    downs = _full_on(b, a, n)
    checked = 0
    for x in ups:
        for y in downs:
            if checked >= max_check:
                return None
            checked += 1
            s, d = sh_product(x, y)
            if d == one and s.weight().substitute_k(1):
                return True
    return False
