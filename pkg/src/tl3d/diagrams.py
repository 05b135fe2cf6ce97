"""Strong-heterotopy classes of diagrams, modelled as admissible partitions.

A diagram between loop configurations F (bottom) and F' (top) is determined
up to strong heterotopy by which boundary loops its components connect.  The
partitions that occur are exactly the admissible colourings of the tree got
by gluing the trees of F and F' at their roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .partitions import (
    LoopLabel,
    SetPartition,
    Side,
    bottom,
    identity_partition,
    lex_key,
    propagating_number,
    top,
)
from .trees import EdgePermutation, RootedTree, automorphisms, tree_from_parents, tree_from_string


class AdmissibilityError(ValueError):
    """A partition that no diagram realises."""


class JoinedTree:
    """The trees of ``bottom`` and ``top`` glued at their roots.

    Edges are loop labels.  ``ancestors[e]`` is the set of edges on the path
    from edge ``e`` to the shared root, ``e`` included.
    """

    def __init__(self, bottom_tree: RootedTree, top_tree: RootedTree):
        self.bottom = bottom_tree
        self.top = top_tree
        self.parent: dict[LoopLabel, LoopLabel | None] = {}
        for side, tree in ((Side.BOTTOM, bottom_tree), (Side.TOP, top_tree)):
            for i, p in enumerate(tree.parents, start=1):
                self.parent[LoopLabel(i, side)] = LoopLabel(p, side) if p else None
        self.ancestors: dict[LoopLabel, frozenset[LoopLabel]] = {}
        for e in self.edges:
            path = []
            x: LoopLabel | None = e
            while x is not None:
                path.append(x)
                x = self.parent[x]
            self.ancestors[e] = frozenset(path)

    @cached_property
    def edges(self) -> tuple[LoopLabel, ...]:
        return tuple(sorted(self.parent))

    @cached_property
    def depth(self) -> dict[LoopLabel, int]:
        return {e: len(self.ancestors[e]) for e in self.edges}

    def chain(self, e: LoopLabel, f: LoopLabel) -> frozenset[LoopLabel]:
        """Edges strictly between ``e`` and ``f`` on their tree path."""
        return (self.ancestors[e] ^ self.ancestors[f]) - {e, f}


@lru_cache(maxsize=None)
def joined_tree(bottom_tree: RootedTree, top_tree: RootedTree) -> JoinedTree:
    return JoinedTree(bottom_tree, top_tree)


def _pair_ok(j: JoinedTree, colour: dict, e: LoopLabel, f: LoopLabel) -> bool:
    c = colour[e]
    counts: dict = {}
    for x in j.chain(e, f):
        cx = colour[x]
        if cx == c:
            return True
        counts[cx] = counts.get(cx, 0) + 1
    return all(n % 2 == 0 for n in counts.values())


def is_admissible(j: JoinedTree, p: SetPartition) -> bool:
    """Chain-parity test for every pair of edges in a common block."""
    if p.ground != j.edges:
        raise ValueError(f"partition ground {list(map(str, p.ground))} is not the edge set of {j.bottom}|{j.top}")
    colour = {x: k for k, b in enumerate(p.blocks) for x in b}
    for b in p.blocks:
        for a in range(len(b)):
            for c in range(a + 1, len(b)):
                if not _pair_ok(j, colour, b[a], b[c]):
                    return False
    return True


@dataclass(frozen=True)
class Diagram:
    source: RootedTree
    target: RootedTree
    partition: SetPartition

    @classmethod
    def checked(cls, source: RootedTree, target: RootedTree, partition: SetPartition) -> "Diagram":
        if not _admissible_cached(source, target, partition):
            raise AdmissibilityError(f"{partition} is not admissible for {source} -> {target}")
        return cls(source, target, partition)

    @property
    def blocks(self):
        return self.partition.blocks

    def __len__(self) -> int:
        return len(self.partition.blocks)

    @property
    def propagating_number(self) -> int:
        return propagating_number(self.partition)

    def sort_key(self) -> tuple:
        return lex_key(self.partition)

    def __str__(self) -> str:
        return f"{self.partition} : {self.source} -> {self.target}"

    def to_json(self) -> dict:
        return {
            "source": self.source.brackets,
            "target": self.target.brackets,
            "blocks": [[str(x) for x in b] for b in self.partition.blocks],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Diagram":
        return cls.checked(
            tree_from_string(data["source"]),
            tree_from_string(data["target"]),
            SetPartition.of(data["blocks"]),
        )


@lru_cache(maxsize=None)
def _admissible_cached(source: RootedTree, target: RootedTree, p: SetPartition) -> bool:
    return is_admissible(joined_tree(source, target), p)


def admissible(d: Diagram) -> bool:
    return _admissible_cached(d.source, d.target, d.partition)


def _search_order(j: JoinedTree) -> list[LoopLabel]:
    # ancestors before descendants, so every chain is coloured before it is tested
    return sorted(j.edges, key=lambda e: (j.depth[e], e))


@lru_cache(maxsize=None)
def enumerate_homs(F: RootedTree, Fp: RootedTree) -> tuple[Diagram, ...]:
    """All diagrams ``F -> Fp``, in lexicographic order of their partitions.

    Blocks are assigned edge by edge as a restricted growth string; when an
    edge joins a block it is tested against the block's earlier edges, whose
    connecting chains are by then fully coloured.
    """
    j = joined_tree(F, Fp)
    order = _search_order(j)
    colour: dict[LoopLabel, int] = {}
    members: list[list[LoopLabel]] = []
    found: list[SetPartition] = []

    def place(k: int) -> None:
        if k == len(order):
            found.append(SetPartition(tuple(tuple(b) for b in members)))
            return
        e = order[k]
        for c in range(len(members) + 1):
            colour[e] = c
            if c == len(members):
                members.append([e])
                place(k + 1)
                members.pop()
            else:
                if all(_pair_ok(j, colour, f, e) for f in members[c]):
                    members[c].append(e)
                    place(k + 1)
                    members[c].pop()
            del colour[e]

    place(0)
    return tuple(Diagram(F, Fp, p) for p in sorted(found, key=lex_key))


def identity(F: RootedTree) -> Diagram:
    return Diagram(F, F, identity_partition(F.loop_count))


def permutation_diagram(F: RootedTree, sigma: EdgePermutation) -> Diagram:
    """The diagram joining ``i-`` to ``sigma(i)+`` for every loop ``i`` of ``F``."""
    if len(sigma) != F.loop_count or sigma not in set(automorphisms(F)):
        raise ValueError(f"{sigma} is not an automorphism of {F}")
    return Diagram(F, F, SetPartition(tuple((bottom(i), top(sigma(i))) for i in range(1, F.loop_count + 1))))


def flip(d: Diagram) -> Diagram:
    """Turn a diagram upside down."""
    return Diagram(d.target, d.source, d.partition.flipped())


def propagating_config(d: Diagram) -> RootedTree:
    """Loop configuration seen by the propagating components.

    Each propagating block is represented by its lowest-numbered bottom loop
    (the outermost of its loops in the canonical traversal); the source
    configuration is restricted to those loops, keeping their nesting.
    """
    reps = []
    for b in d.partition.blocks:
        if any(x.side == Side.TOP for x in b) and any(x.side == Side.BOTTOM for x in b):
            reps.append(min(x.index for x in b if x.side == Side.BOTTOM))
    keep = set(reps)
    parents = d.source.parents
    order = sorted(keep)
    new_index = {old: k for k, old in enumerate(order, start=1)}
    new_parents = []
    for i in order:
        p = parents[i - 1]
        while p and p not in keep:
            p = parents[p - 1]
        new_parents.append(new_index[p] if p else 0)
    return tree_from_parents(new_parents)


def group_by_propagating(homs) -> dict[int, list[Diagram]]:
    out: dict[int, list[Diagram]] = {}
    for d in homs:
        out.setdefault(d.propagating_number, []).append(d)
    return dict(sorted(out.items()))
