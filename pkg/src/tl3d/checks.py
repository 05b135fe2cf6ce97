"""Named invariant suites, shared by ``tl3d check`` and the test-suite.

Each suite returns a :class:`SuiteResult`.  Oracles here are written
independently of the engine: composition by repeated set merging,
admissibility by paths in a networkx tree, and genus by Euler
characteristic over an explicit block/loop graph.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import networkx as nx
from sympy.utilities.iterables import multiset_partitions

from .algebra import (
    LinComb,
    compose_h,
    compose_h_lin,
    compose_sh_lin,
    gram_det,
    gram_sections,
    h_canonical,
    idempotent,
    sh_product,
    singular_locus,
)
from .diagrams import Diagram, enumerate_homs, flip, identity, is_admissible, joined_tree, permutation_diagram
from .partitions import LoopLabel, SetPartition, Side, bottom, compose, top
from .poly import Poly2
from .posets import hasse, propagating_leq, subfold_leq
from .trees import RootedTree, automorphisms, count_trees, enumerate_trees, tree_from_string


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        # keep reports readable when something breaks wholesale
        if len(self.failures) < 20:
            self.failures.append(msg)
        elif len(self.failures) == 20:
            self.failures.append("...")

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures"


# ---- oracles ---------------------------------------------------------------


def all_partitions(labels: list[LoopLabel]) -> Iterable[SetPartition]:
    if not labels:
        yield SetPartition(())
        return
    for blocks in multiset_partitions(labels):
        yield SetPartition(tuple(tuple(b) for b in blocks))


def boundary_labels(n_bottom: int, n_top: int) -> list[LoopLabel]:
    return [bottom(i) for i in range(1, n_bottom + 1)] + [top(i) for i in range(1, n_top + 1)]


def closure_compose(a: SetPartition, b: SetPartition) -> tuple[SetPartition, int]:
    """Trace and middle-only count by merging overlapping sets until stable."""
    sets = [{("S" if x.side == Side.BOTTOM else "T", x.index) for x in blk} for blk in a.blocks]
    sets += [{("T" if x.side == Side.BOTTOM else "U", x.index) for x in blk} for blk in b.blocks]
    changed = True
    while changed:
        changed = False
        for i, j in itertools.combinations(range(len(sets)), 2):
            if sets[i] & sets[j]:
                sets[i] |= sets.pop(j)
                changed = True
                break
    blocks, middle_only = [], 0
    for s in sets:
        outer = [bottom(i) if tag == "S" else top(i) for tag, i in s if tag != "T"]
        if outer:
            blocks.append(tuple(outer))
        else:
            middle_only += 1
    return SetPartition(tuple(blocks)), middle_only


def _tree_graph(F: RootedTree, Fp: RootedTree) -> tuple[nx.Graph, dict]:
    g = nx.Graph()
    ends = {}
    for side, tree in ((Side.BOTTOM, F), (Side.TOP, Fp)):
        for i, p in enumerate(tree.parents, start=1):
            u = (side, p) if p else "root"
            v = (side, i)
            g.add_edge(u, v, label=LoopLabel(i, side))
            ends[LoopLabel(i, side)] = (u, v)
    return g, ends


def oracle_admissible(F: RootedTree, Fp: RootedTree, p: SetPartition) -> bool:
    """Chain-parity rule checked on tree paths computed by networkx."""
    g, ends = _tree_graph(F, Fp)
    colour = {x: n for n, blk in enumerate(p.blocks) for x in blk}
    for blk in p.blocks:
        for e, f in itertools.combinations(blk, 2):
            # the longest endpoint-to-endpoint path runs through both edges
            path = max(
                (nx.shortest_path(g, u, v) for u in ends[e] for v in ends[f]),
                key=len,
            )
            chain = [g.edges[u, v]["label"] for u, v in zip(path, path[1:])]
            chain = [x for x in chain if x not in (e, f)]
            if any(colour[x] == colour[e] for x in chain):
                continue
            counts: dict[int, int] = {}
            for x in chain:
                counts[colour[x]] = counts.get(colour[x], 0) + 1
            if any(c % 2 for c in counts.values()):
                return False
    return True


def surface_scalars(layers: list[SetPartition]) -> tuple[int, int]:
    """Genus and bubble count of a stack, from Euler characteristics.

    Each block is a sphere with one hole per label; gluing along circles adds
    nothing to the Euler characteristic, so a connected piece with ``h``
    outer boundary circles has genus ``(2 - h - chi) / 2``.
    """
    adj: dict = {}

    def link(u, v):
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)

    last = len(layers)
    for k, p in enumerate(layers):
        for j, blk in enumerate(p.blocks):
            node = ("block", k, j)
            adj.setdefault(node, [])
            for x in blk:
                link(node, ("loop", k + x.side, x.index))
    seen = set()
    genus = bubbles = 0
    for start in adj:
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        chi = holes = 0
        while queue:
            u = queue.popleft()
            if u[0] == "block":
                _, k, j = u
                chi += 2 - len(layers[k].blocks[j])
            elif u[1] in (0, last):
                holes += 1
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        g2 = 2 - holes - chi
        if g2 < 0 or g2 % 2:
            raise AssertionError(f"impossible surface piece: chi={chi}, holes={holes}")
        genus += g2 // 2
        bubbles += holes == 0
    return genus, bubbles


class EulerAudit:
    """Recomputes genus and bubbles for every gluing it is shown."""

    def __init__(self):
        self.count = 0
        self.failures: list[str] = []

    def sh(self, A: Diagram, B: Diagram) -> None:
        s, _ = sh_product(A, B)
        self.layers([A.partition, B.partition], (s.genus, s.bubbles))

    def layers(self, layers: list[SetPartition], engine: tuple[int, int]) -> None:
        self.count += 1
        expect = surface_scalars(layers)
        if engine != expect or min(engine) < 0:
            self.failures.append(f"{' | '.join(map(str, layers))}: engine {engine}, euler {expect}")


# ---- helpers ---------------------------------------------------------------


def objects_upto(n: int) -> list[RootedTree]:
    return [t for m in range(n + 1) for t in enumerate_trees(m)]


def _sh_triple(A: Diagram, B: Diagram, C: Diagram, audit: EulerAudit | None) -> bool:
    a, b, c = LinComb.of(A), LinComb.of(B), LinComb.of(C)
    if audit:
        ab = sh_product(A, B)[1]
        bc = sh_product(B, C)[1]
        for x, y in ((A, B), (B, C), (ab, C), (A, bc)):
            audit.sh(x, y)
    return compose_sh_lin(compose_sh_lin(a, b), c) == compose_sh_lin(a, compose_sh_lin(b, c))


def _h_triple(A: Diagram, B: Diagram, C: Diagram) -> bool:
    left = compose_h_lin(compose_h(A, B), LinComb.of(C))
    right = compose_h_lin(LinComb.of(A), compose_h(B, C))
    return left == right


def _exhaustive_triples(max_loops: int):
    objs = objects_upto(max_loops)
    for F, G, H, K in itertools.product(objs, repeat=4):
        for A in enumerate_homs(F, G):
            for B in enumerate_homs(G, H):
                for C in enumerate_homs(H, K):
                    yield A, B, C


def _random_triples(rng: random.Random, count: int, max_loops: int):
    objs = objects_upto(max_loops)
    for _ in range(count):
        F, G, H, K = (rng.choice(objs) for _ in range(4))
        yield tuple(rng.choice(enumerate_homs(X, Y)) for X, Y in ((F, G), (G, H), (H, K)))


# ---- suites ----------------------------------------------------------------


def suite_assoc_sh(seed: int = 1, random_count: int = 1000, audit: EulerAudit | None = None) -> SuiteResult:
    r = SuiteResult("assoc-sh")
    rng = random.Random(seed)
    triples = itertools.chain(_exhaustive_triples(2), _random_triples(rng, random_count, 4))
    for A, B, C in triples:
        r.cases += 1
        if not _sh_triple(A, B, C, audit):
            r.fail(f"{A} ; {B} ; {C}")
    return r


def h_product_oracle(A: Diagram, B: Diagram, audit: EulerAudit | None = None) -> LinComb:
    """Heterotopy product recomputed from three-layer stacks and Euler data."""
    F = A.target
    group = automorphisms(F)
    out = LinComb(A.source, B.target)
    for sigma in group:
        D = permutation_diagram(F, sigma)
        layers = [A.partition, D.partition, B.partition]
        g, b = surface_scalars(layers)
        lower = compose(A.partition, D.partition).trace
        trace = compose(lower, B.partition).trace
        d = h_canonical(Diagram(A.source, B.target, trace))
        out = out + LinComb.of(d, Poly2.monomial(b, g, Fraction(1, len(group))))
        if audit:
            audit.count += 1
            if g < 0 or b < 0:
                audit.failures.append(f"negative scalars in {' | '.join(map(str, layers))}")
    return out


def suite_assoc_h(seed: int = 1, random_count: int = 1000, audit: EulerAudit | None = None) -> SuiteResult:
    r = SuiteResult("assoc-h")
    rng = random.Random(seed)
    triples = itertools.chain(_exhaustive_triples(2), _random_triples(rng, random_count, 4))
    for A, B, C in triples:
        r.cases += 1
        if not _h_triple(A, B, C):
            r.fail(f"{A} ; {B} ; {C}")
        if audit:
            for x, y in ((A, B), (B, C)):
                if compose_h(x, y) != h_product_oracle(x, y, audit):
                    audit.failures.append(f"compose_h disagrees with euler recomputation on {x} ; {y}")
    return r


def suite_oracle_partitions(max_layer: int = 3, audit: EulerAudit | None = None) -> SuiteResult:
    r = SuiteResult("oracle-partitions")
    for s, t, u in itertools.product(range(max_layer + 1), repeat=3):
        lowers = list(all_partitions(boundary_labels(s, t)))
        uppers = list(all_partitions(boundary_labels(t, u)))
        for a in lowers:
            for b in uppers:
                r.cases += 1
                got = compose(a, b)
                trace, middle_only = closure_compose(a, b)
                if (got.trace, got.middle_only_blocks) != (trace, middle_only):
                    r.fail(f"{a} ; {b}: engine {got.trace} +{got.middle_only_blocks}, oracle {trace} +{middle_only}")
                if audit:
                    genus = got.merged_components - len(a) - len(b) + t
                    audit.layers([a, b], (genus, got.middle_only_blocks))
    return r


def suite_oracle_homs(max_total: int = 5) -> SuiteResult:
    r = SuiteResult("oracle-homs")
    objs = objects_upto(max_total)
    for F, Fp in itertools.product(objs, repeat=2):
        if F.loop_count + Fp.loop_count > max_total:
            continue
        r.cases += 1
        labels = boundary_labels(F.loop_count, Fp.loop_count)
        expect = {p for p in all_partitions(labels) if oracle_admissible(F, Fp, p)}
        got = [d.partition for d in enumerate_homs(F, Fp)]
        if len(got) != len(set(got)) or set(got) != expect:
            r.fail(f"hom[{F}, {Fp}]: engine {len(got)}, oracle {len(expect)}")
        # the engine's own predicate must agree on every candidate too
        j = joined_tree(F, Fp)
        for p in all_partitions(labels):
            if is_admissible(j, p) != (p in expect):
                r.fail(f"is_admissible disagrees on {p} for {F} -> {Fp}")
    return r


def suite_idempotents(max_loops: int = 5, audit: EulerAudit | None = None) -> SuiteResult:
    r = SuiteResult("idempotents")
    for F in objects_upto(max_loops):
        r.cases += 1
        eta = idempotent(F)
        if compose_sh_lin(eta, eta) != eta:
            r.fail(f"eta({F}) is not idempotent")
        if audit:
            for A in eta.terms:
                for B in eta.terms:
                    audit.sh(A, B)
    return r


def suite_functoriality(max_loops: int = 2) -> SuiteResult:
    """Identities are units, flip reverses products, and sigma -> D_sigma is a homomorphism."""
    r = SuiteResult("functoriality")
    objs = objects_upto(max_loops)
    for F, G in itertools.product(objs, repeat=2):
        for A in enumerate_homs(F, G):
            r.cases += 1
            if compose_sh_lin(LinComb.of(identity(F)), LinComb.of(A)) != LinComb.of(A):
                r.fail(f"left unit fails on {A}")
            if compose_sh_lin(LinComb.of(A), LinComb.of(identity(G))) != LinComb.of(A):
                r.fail(f"right unit fails on {A}")
    for F, G, H in itertools.product(objs, repeat=3):
        for A in enumerate_homs(F, G):
            for B in enumerate_homs(G, H):
                r.cases += 1
                s, d = sh_product(A, B)
                s2, d2 = sh_product(flip(B), flip(A))
                if (s.weight(), flip(d)) != (s2.weight(), d2):
                    r.fail(f"flip does not reverse {A} ; {B}")
    for F in objects_upto(4):
        group = automorphisms(F)
        for sigma, tau in itertools.product(group, repeat=2):
            r.cases += 1
            s, d = sh_product(permutation_diagram(F, sigma), permutation_diagram(F, tau))
            if s.weight() != 1 or d != permutation_diagram(F, sigma.then(tau)):
                r.fail(f"D_{sigma} ; D_{tau} on {F}")
    return r


def suite_euler(seed: int = 1, random_count: int = 1000) -> SuiteResult:
    """Independent genus/bubble recomputation over the oracle, associativity and idempotent suites."""
    r = SuiteResult("euler")
    audit = EulerAudit()
    for sub in (
        suite_oracle_partitions(audit=audit),
        suite_assoc_sh(seed, random_count, audit=audit),
        suite_assoc_h(seed, random_count, audit=audit),
        suite_idempotents(audit=audit),
    ):
        r.notes.append(sub.summary())
        for f in sub.failures:
            r.fail(f"[{sub.name}] {f}")
    r.cases = audit.count
    for f in audit.failures:
        r.fail(f)
    return r


GRAM_REFERENCE = {
    "": [["q^2", "q"], ["q", "q*k"]],
    "()": [["q", "1"], ["1", "k"]],
    "(())": [["1"]],
}
LOCUS_REFERENCE = "q^2*k - q"


def suite_gram_reference() -> SuiteResult:
    r = SuiteResult("gram-paper")
    sections = gram_sections(tree_from_string("(())"))
    got = {M.section.brackets: M for M in sections}
    if set(got) != set(GRAM_REFERENCE):
        r.fail(f"sections {sorted(got)} differ from reference {sorted(GRAM_REFERENCE)}")
    for key, rows in GRAM_REFERENCE.items():
        r.cases += 1
        M = got.get(key)
        want = [[Poly2.parse(c) for c in row] for row in rows]
        if M is None or M.flagged or [list(row) for row in M.entries] != want:
            r.fail(f"section {key or '∅'}: got {M and [[str(c) for c in row] for row in M.entries]}")
    r.cases += 1
    try:
        locus = singular_locus(gram_det(M) for M in sections)
    except ValueError as exc:
        r.fail(str(exc))
    else:
        if not locus.is_associate(Poly2.parse(LOCUS_REFERENCE)):
            r.fail(f"singular locus {locus}, expected {LOCUS_REFERENCE} up to units")
    return r


HASSE_REFERENCE = {
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


def suite_hasse_reference() -> SuiteResult:
    r = SuiteResult("hasse-reference", cases=1)
    got = hasse(3).edge_set()
    if got != HASSE_REFERENCE:
        r.fail(f"extra {sorted(got - HASSE_REFERENCE)}, missing {sorted(HASSE_REFERENCE - got)}")
    return r


def suite_counts(max_n: int = 8) -> SuiteResult:
    r = SuiteResult("counts")
    for n in range(max_n + 1):
        r.cases += 1
        if len(enumerate_trees(n)) != count_trees(n):
            r.fail(f"n={n}: enumerated {len(enumerate_trees(n))}, recurrence {count_trees(n)}")
    return r


def suite_prop_order(max_loops: int = 4, max_check: int = 10**6) -> SuiteResult:
    """Sub/fold below implies propagating above; the converse is only reported."""
    r = SuiteResult("prop-order")
    objs = objects_upto(max_loops)
    converse_fail, inconclusive = [], 0
    for a, b in itertools.product(objs, repeat=2):
        r.cases += 1
        below = subfold_leq(a, b)
        prop = propagating_leq(a, b, max_check)
        if prop is None:
            inconclusive += 1
            if below:
                r.fail(f"{a} ⊴ {b}: search bound reached")
        elif below and not prop:
            r.fail(f"{a} ⊴ {b} but the identity on {a} does not factor through {b}")
        elif prop and not below:
            converse_fail.append(f"{a} <= {b}")
    r.notes.append(f"converse: {len(converse_fail)} pairs factor without being sub/fold below")
    r.notes.extend(converse_fail)
    if inconclusive:
        r.notes.append(f"{inconclusive} pairs inconclusive at max_check={max_check}")
    return r


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "counts": lambda seed, n: suite_counts(),
    "assoc-sh": lambda seed, n: suite_assoc_sh(seed, n),
    "assoc-h": lambda seed, n: suite_assoc_h(seed, n),
    "oracle-partitions": lambda seed, n: suite_oracle_partitions(),
    "oracle-homs": lambda seed, n: suite_oracle_homs(),
    "idempotents": lambda seed, n: suite_idempotents(),
    "functoriality": lambda seed, n: suite_functoriality(),
    "euler": lambda seed, n: suite_euler(seed, n),
    "gram-paper": lambda seed, n: suite_gram_reference(),
    "hasse-reference": lambda seed, n: suite_hasse_reference(),
    "prop-order": lambda seed, n: suite_prop_order(),
}


def run_suite(name: str, seed: int = 1, random_count: int = 1000) -> SuiteResult:
    try:
        suite = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return suite(seed, random_count)
