"""Rooted trees as objects of the diagram categories.

A loop configuration in the plane is classified up to isotopy by a rooted
tree: each loop is an edge, and a loop drawn inside another is a child of it.
Trees are written as bracket strings, one pair of brackets per loop, e.g.
``"()(())"``.  The root (the unbounded region) carries no brackets.

Every :class:`RootedTree` is stored in left-light canonical order: among all
plane embeddings of the tree, the one whose depth sequence is lexicographically
least.  Loops are numbered ``1..n`` in order of their opening brackets in that
canonical string.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence


class TreeParseError(ValueError):
    """Raised for a bracket string that is not properly nested."""

    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        super().__init__(f"{reason} at position {position} in {text!r}")


@dataclass(frozen=True)
class BracketSeq:
    """A validated, properly nested bracket string."""

    symbols: str

    def __post_init__(self):
        depth = 0
        for pos, ch in enumerate(self.symbols):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth < 0:
                    raise TreeParseError(self.symbols, pos, "unmatched ')'")
            else:
                raise TreeParseError(self.symbols, pos, f"unexpected symbol {ch!r}")
        if depth:
            raise TreeParseError(self.symbols, len(self.symbols), "unclosed '('")

    def __str__(self) -> str:
        return self.symbols

    def __len__(self) -> int:
        return len(self.symbols) // 2


def parse(text: str) -> BracketSeq:
    """Validate ``text`` as a bracket sequence.  Whitespace is ignored."""
    return BracketSeq("".join(text.split()))


@dataclass(frozen=True)
class RootedTree:
    """A rooted tree in left-light canonical order.

    ``children`` are the loops lying directly in the region this node bounds;
    a node of the tree is a loop except at the root.
    """

    children: tuple["RootedTree", ...] = ()

    @cached_property
    def loop_count(self) -> int:
        return sum(1 + c.loop_count for c in self.children)

    def __len__(self) -> int:
        return self.loop_count

    @cached_property
    def brackets(self) -> str:
        return "".join("(" + c.brackets + ")" for c in self.children)

    @cached_property
    def _child_key(self) -> tuple[int, ...]:
        # depth sequence of this node taken as a subtree root, offset so that
        # the node itself sits at depth 0
        seq = [0]
        for c in self.children:
            seq.extend(d + 1 for d in c._child_key)
        return tuple(seq)

    @cached_property
    def depth_sequence(self) -> tuple[int, ...]:
        """Depths of vertices in preorder, the root having depth 0."""
        return self._child_key

    @cached_property
    def parents(self) -> tuple[int, ...]:
        """``parents[i - 1]`` is the loop enclosing loop ``i`` (0 for the root)."""
        out: list[int] = []

        def walk(node: RootedTree, parent: int) -> None:
            for c in node.children:
                out.append(parent)
                me = len(out)
                walk(c, me)

        walk(self, 0)
        return tuple(out)

    def __str__(self) -> str:
        return self.brackets or "∅"

    def __repr__(self) -> str:
        return f"RootedTree({self.brackets!r})"

    def to_json(self) -> dict:
        return {"brackets": self.brackets, "loops": self.loop_count}

    @classmethod
    def from_json(cls, data: dict) -> "RootedTree":
        tree = tree_from_string(data["brackets"])
        if "loops" in data and data["loops"] != tree.loop_count:
            raise ValueError(f"loop count {data['loops']} does not match {data['brackets']!r}")
        return tree


def _canonical(children: Iterable[RootedTree]) -> RootedTree:
    return RootedTree(tuple(sorted(children, key=lambda c: c._child_key)))


def _plane_children(symbols: str) -> list:
    """Nested lists mirroring the bracket structure, order preserved."""
    stack: list[list] = [[]]
    for ch in symbols:
        if ch == "(":
            stack.append([])
        else:
            node = stack.pop()
            stack[-1].append(node)
    return stack[0]


def _from_nested(nodes: list) -> RootedTree:
    return _canonical(_from_nested(n) for n in nodes)


def to_tree(b: BracketSeq) -> RootedTree:
    """Canonical rooted tree of a plane tree given by brackets."""
    return _from_nested(_plane_children(b.symbols))


def to_bracket(t: RootedTree) -> BracketSeq:
    return BracketSeq(t.brackets)


@lru_cache(maxsize=None)
def tree_from_string(text: str) -> RootedTree:
    """Parse and canonicalise in one step; ``"∅"`` denotes the empty tree."""
    text = text.strip()
    if text in ("∅", "empty"):
        text = ""
    return to_tree(parse(text))


def tree_from_parents(parents: Sequence[int]) -> RootedTree:
    """Build the canonical tree for a parent table (loop ``i`` inside ``parents[i-1]``)."""
    kids: dict[int, list[int]] = {0: []}
    for i, p in enumerate(parents, start=1):
        kids.setdefault(p, []).append(i)
        kids.setdefault(i, [])

    def build(v: int) -> RootedTree:
        return _canonical(build(c) for c in kids[v])

    return build(0)


def sort_key(t: RootedTree) -> tuple:
    """Graded order: by loop count, then lexicographically by depth sequence."""
    return (t.loop_count, t.depth_sequence)


def compare(t1: RootedTree, t2: RootedTree) -> int:
    """Three-way comparison under the total order of :func:`sort_key`."""
    k1, k2 = sort_key(t1), sort_key(t2)
    return (k1 > k2) - (k1 < k2)


@lru_cache(maxsize=None)
def enumerate_trees(n: int) -> tuple[RootedTree, ...]:
    """All canonical rooted trees with ``n`` loops, in :func:`compare` order.

    Built by attaching a leaf at every vertex of every tree with ``n - 1``
    loops; this is deliberately independent of :func:`count_trees`.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return (RootedTree(),)
    found = set()
    for t in enumerate_trees(n - 1):
        parents = t.parents
        for v in range(len(parents) + 1):
            found.add(tree_from_parents(parents + (v,)))
    return tuple(sorted(found, key=sort_key))


@lru_cache(maxsize=None)
def count_trees(n: int) -> int:
    """Number of rooted trees with ``n`` loops from the Euler product.

    Coefficients of prod_{k>=1} (1 - x^k)^(-L_{k-1}), by the standard Euler
    transform recurrence  n b_n = sum_{k=1..n} c_k b_{n-k},
    c_k = sum_{d | k} d L_{d-1}.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1
    total = 0
    for k in range(1, n + 1):
        c_k = sum(d * count_trees(d - 1) for d in range(1, k + 1) if k % d == 0)
        total += c_k * count_trees(n - k)
    q, r = divmod(total, n)
    assert r == 0
    return q


@dataclass(frozen=True)
class EdgePermutation:
    """A permutation of loop indices; ``mapping[i - 1]`` is the image of loop ``i``."""

    mapping: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def __len__(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, n: int) -> "EdgePermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "EdgePermutation":
        m = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)(cyc[:1])):
                m[a - 1] = b
        return cls(tuple(m))

    def then(self, other: "EdgePermutation") -> "EdgePermutation":
        """Apply ``self`` first and ``other`` second."""
        return EdgePermutation(tuple(other(self(i)) for i in range(1, len(self) + 1)))

    def inverse(self) -> "EdgePermutation":
        inv = [0] * len(self.mapping)
        for i, j in enumerate(self.mapping, start=1):
            inv[j - 1] = i
        return EdgePermutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(j == i for i, j in enumerate(self.mapping, start=1))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(1, len(self.mapping) + 1):
            if i in seen:
                continue
            cyc = [i]
            seen.add(i)
            j = self(i)
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def _parent_automorphisms(parents: Sequence[int]) -> list[EdgePermutation]:
    n = len(parents)
    kids: dict[int, list[int]] = {v: [] for v in range(n + 1)}
    for i, p in enumerate(parents, start=1):
        kids[p].append(i)

    @lru_cache(maxsize=None)
    def shape(v: int) -> RootedTree:
        return _canonical(shape(c) for c in kids[v])

    @lru_cache(maxsize=None)
    def traversal(v: int) -> tuple[int, ...]:
        # v and its descendants, children visited in canonical order; two
        # vertices of equal shape are matched position by position
        out = [v]
        for c in sorted(kids[v], key=lambda c: shape(c)._child_key):
            out.extend(traversal(c))
        return tuple(out)

    def below(v: int) -> list[dict[int, int]]:
        """Automorphisms of the subtree at ``v``, as maps on its strict descendants."""
        classes: dict[RootedTree, list[int]] = {}
        for c in kids[v]:
            classes.setdefault(shape(c), []).append(c)
        inner = {c: below(c) for c in kids[v]}
        factors: list[list[dict[int, int]]] = []
        for members in classes.values():
            choices = []
            for image in itertools.permutations(members):
                carries = [dict(zip(traversal(c), traversal(d))) for c, d in zip(members, image)]
                for auts in itertools.product(*(inner[c] for c in members)):
                    m: dict[int, int] = {}
                    for carry, aut in zip(carries, auts):
                        for x in carry:
                            m[x] = carry[aut.get(x, x)]
                    choices.append(m)
            factors.append(choices)
        out = []
        for combo in itertools.product(*factors):
            m = {}
            for part in combo:
                m.update(part)
            out.append(m)
        return out

    perms = {EdgePermutation(tuple(m.get(i, i) for i in range(1, n + 1))) for m in below(0)}
    return sorted(perms, key=lambda p: p.mapping)


def automorphisms(t: RootedTree) -> list[EdgePermutation]:
    """The group of loop permutations induced by automorphisms of ``t``.

    Elements are sorted by their mapping tuples, so the identity comes first.
    """
    return _cached_automorphisms(t)


@lru_cache(maxsize=None)
def _cached_automorphisms(t: RootedTree) -> list[EdgePermutation]:
    return _parent_automorphisms(t.parents)


def plane_automorphisms(text: str) -> list[EdgePermutation]:
    """Automorphisms with loops numbered by opening brackets of ``text`` as written.

    Unlike :func:`automorphisms` the string need not be canonical; this is
    the labelling a hand-drawn configuration such as ``"(())()()"`` carries.
    """
    return _parent_automorphisms(plane_parents(parse(text)))


def plane_parents(b: BracketSeq) -> tuple[int, ...]:
    out: list[int] = []
    stack = [0]
    for ch in b.symbols:
        if ch == "(":
            out.append(stack[-1])
            stack.append(len(out))
        else:
            stack.pop()
    return tuple(out)


def group_order(t: RootedTree) -> int:
    """|Aut(t)| as the product over vertices of factorials of child multiplicities."""
    return math.prod(math.factorial(m) for m in Counter(t.children).values()) * math.prod(
        group_order(c) for c in t.children
    )
