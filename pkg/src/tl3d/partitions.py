"""Set partitions of labelled loops and partition-category composition.

A label is a loop index together with the boundary it lies on: ``1-`` is
loop 1 of the bottom configuration, ``1+`` loop 1 of the top.  Labels are
ordered by ``(index, side)`` with bottom before top, which fixes the
lexicographic order on partitions used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, NamedTuple


class Side(IntEnum):
    BOTTOM = 0
    TOP = 1


class LoopLabel(NamedTuple):
    index: int
    side: Side

    def __str__(self) -> str:
        return f"{self.index}{'-' if self.side == Side.BOTTOM else '+'}"

    def flipped(self) -> "LoopLabel":
        return LoopLabel(self.index, Side(1 - self.side))

    @classmethod
    def parse(cls, text: str) -> "LoopLabel":
        text = text.strip().replace("−", "-")
        if len(text) < 2 or text[-1] not in "+-" or not text[:-1].isdigit():
            raise ValueError(f"bad loop label {text!r}; expected e.g. '3-' or '3+'")
        return cls(int(text[:-1]), Side.BOTTOM if text[-1] == "-" else Side.TOP)


def bottom(i: int) -> LoopLabel:
    return LoopLabel(i, Side.BOTTOM)


def top(i: int) -> LoopLabel:
    return LoopLabel(i, Side.TOP)


class CompositionError(ValueError):
    """Raised when the middle objects of a composition disagree."""


@dataclass(frozen=True)
class SetPartition:
    """A partition of a finite set of loop labels.

    Blocks are normalised on construction: each block sorted, blocks sorted
    by their first element.  The ground set is the union of the blocks.
    """

    blocks: tuple[tuple[LoopLabel, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        seen: set[LoopLabel] = set()
        for b in blocks:
            if not b:
                raise ValueError("empty block in partition")
            for x in b:
                if x in seen:
                    raise ValueError(f"label {x} occurs in two blocks")
                seen.add(x)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, blocks: Iterable[Iterable[LoopLabel | str]]) -> "SetPartition":
        return cls(
            tuple(tuple(x if isinstance(x, tuple) else LoopLabel.parse(x) for x in b) for b in blocks)
        )

    @property
    def ground(self) -> tuple[LoopLabel, ...]:
        return tuple(sorted(x for b in self.blocks for x in b))

    def __len__(self) -> int:
        return len(self.blocks)

    def side_indices(self, side: Side) -> frozenset[int]:
        return frozenset(x.index for b in self.blocks for x in b if x.side == side)

    def block_of(self, label: LoopLabel) -> tuple[LoopLabel, ...]:
        for b in self.blocks:
            if label in b:
                return b
        raise KeyError(label)

    def flipped(self) -> "SetPartition":
        return SetPartition(tuple(tuple(x.flipped() for x in b) for b in self.blocks))

    def relabel(self, bottom_map=None, top_map=None) -> "SetPartition":
        """Rename bottom indices by ``bottom_map`` and top indices by ``top_map``."""

        def f(x: LoopLabel) -> LoopLabel:
            m = bottom_map if x.side == Side.BOTTOM else top_map
            return x if m is None else LoopLabel(m(x.index), x.side)

        return SetPartition(tuple(tuple(f(x) for x in b) for b in self.blocks))

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"

    def to_json(self) -> dict:
        return {
            "ground": [str(x) for x in self.ground],
            "blocks": [[str(x) for x in b] for b in self.blocks],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SetPartition":
        p = cls.of(data["blocks"])
        if "ground" in data:
            ground = sorted(LoopLabel.parse(x) for x in data["ground"])
            if tuple(ground) != p.ground:
                raise ValueError("blocks do not cover the stated ground set")
        return p


def identity_partition(n: int) -> SetPartition:
    return SetPartition(tuple((bottom(i), top(i)) for i in range(1, n + 1)))


def propagating_number(p: SetPartition) -> int:
    """Number of blocks meeting both the bottom and the top."""
    return sum(1 for b in p.blocks if _two_sided(b))


def _two_sided(block: tuple[LoopLabel, ...]) -> bool:
    return any(x.side != block[0].side for x in block)


def lex_key(p: SetPartition) -> tuple:
    return p.blocks


def lex_compare(p1: SetPartition, p2: SetPartition) -> int:
    """Blockwise, then elementwise; a block that is a prefix of another is smaller."""
    if p1.ground != p2.ground:
        raise ValueError("lex_compare needs partitions of the same ground set")
    k1, k2 = lex_key(p1), lex_key(p2)
    return (k1 > k2) - (k1 < k2)


@dataclass(frozen=True)
class GluingResult:
    trace: SetPartition
    merged_components: int
    middle_only_blocks: int


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def _glue(layers: list[SetPartition]) -> GluingResult:
    """Stack partitions bottom to top; layer ``k`` spans boundaries ``k`` and ``k + 1``."""
    uf = _UnionFind()
    for k, p in enumerate(layers):
        for b in p.blocks:
            first = (k + b[0].side, b[0].index)
            uf.find(first)
            for x in b[1:]:
                uf.union(first, (k + x.side, x.index))
    last = len(layers)
    outer: dict = {}
    roots = set()
    for node in list(uf.parent):
        r = uf.find(node)
        roots.add(r)
        level, index = node
        if level == 0:
            outer.setdefault(r, []).append(bottom(index))
        elif level == last:
            outer.setdefault(r, []).append(top(index))
    trace = SetPartition(tuple(tuple(b) for b in outer.values()))
    return GluingResult(trace, len(roots), len(roots) - len(outer))


def _check_middle(lower: SetPartition, upper: SetPartition, names=None) -> None:
    t1, t2 = lower.side_indices(Side.TOP), upper.side_indices(Side.BOTTOM)
    if t1 != t2:
        lo, hi = names or (sorted(t1), sorted(t2))
        raise CompositionError(f"cannot compose: top of {lo} does not match bottom of {hi}")


def compose(a: SetPartition, b: SetPartition, names=None) -> GluingResult:
    """Glue ``a`` (below) to ``b`` (above) along their shared middle labels.

    ``a`` partitions S ⊔ T (bottom S, top T) and ``b`` partitions T ⊔ U.  The
    trace is the induced partition of S ⊔ U; classes that meet neither S nor
    U are counted in ``middle_only_blocks``.
    """
    _check_middle(a, b, names)
    return _glue([a, b])


def compose3(a: SetPartition, x: SetPartition, b: SetPartition, names=None) -> GluingResult:
    """One-shot gluing of three layers, ``a`` lowest."""
    _check_middle(a, x, names)
    _check_middle(x, b, names)
    return _glue([a, x, b])
