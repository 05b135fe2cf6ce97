"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines appear in
the terminal summary) or ``python3 -m tests.test_acceptance``.
Every timed criterion starts from empty caches.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import pytest

from tl3d import algebra, checks, diagrams, posets, trees
from tl3d.algebra import gram_det, gram_matrix, gram_sections, singular_locus
from tl3d.diagrams import enumerate_homs, group_by_propagating
from tl3d.poly import ONE, k, q
from tl3d.trees import automorphisms, count_trees, enumerate_trees, plane_automorphisms, tree_from_string

T = tree_from_string


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    seconds: float
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:>2}: {self.title} ({self.seconds:.2f} s) {self.detail}"


RESULTS: list[Outcome] = []


def cold() -> None:
    for fn in (
        trees.enumerate_trees,
        trees.count_trees,
        trees.tree_from_string,
        trees._cached_automorphisms,
        diagrams.enumerate_homs,
        diagrams.joined_tree,
        diagrams._admissible_cached,
        algebra.sh_product,
        algebra._h_product,
        algebra.h_canonical,
        posets.down_set,
    ):
        fn.cache_clear()


def record(number: int, title: str, limit: float | None, body) -> Outcome:
    cold()
    start = time.perf_counter()
    ok, detail = body()
    seconds = time.perf_counter() - start
    if limit is not None and seconds >= limit:
        ok, detail = False, f"{detail}; took {seconds:.1f} s, limit {limit:g} s"
    out = Outcome(number, title, ok, seconds, detail)
    RESULTS[:] = [r for r in RESULTS if r.number != number] + [out]
    print(out.line())
    return out


# criteria


def tree_counts():
    first = [len(enumerate_trees(n)) for n in range(5)]
    agree = all(len(enumerate_trees(n)) == count_trees(n) for n in range(9))
    ok = first == [1, 1, 2, 4, 9] and [count_trees(n) for n in range(5)] == first and agree
    return ok, f"L_0..L_4 = {first}, enumeration/recurrence agree to n=8: {agree}"


def hom_example():
    homs = enumerate_homs(T("(())"), T("(())"))
    groups = [len(ds) for ds in group_by_propagating(homs).values()]
    return len(homs) == 9 and groups == [4, 4, 1], f"|hom| = {len(homs)}, groups {groups}"


def gram_example():
    F = T("(())")
    want = {
        "": [[q**2, q], [q, q * k]],
        "()": [[q, ONE], [ONE, k]],
        "(())": [[ONE]],
    }
    got = {M.section.brackets: [list(r) for r in M.entries] for M in gram_sections(F)}
    matrices = got == want and all(gram_matrix(F, T(s)).flagged == frozenset() for s in want)
    locus = singular_locus(gram_det(M) for M in gram_sections(F))
    ok = matrices and locus.is_associate(q * (q * k - 1))
    return ok, f"matrices equal: {matrices}, locus {locus}"


def symmetry_example():
    written = [str(s) for s in plane_automorphisms("(())()()")]
    canonical = [str(s) for s in automorphisms(T("(())()()"))]
    ok = written == ["()", "(3 4)"] and canonical == ["()", "(1 2)"]
    return ok, f"numbered (1(2))(3)(4): {written}; canonical ()()(()): {canonical}"


def oracle_equivalence():
    a = checks.suite_oracle_partitions(3)
    b = checks.suite_oracle_homs(5)
    return a.passed and b.passed, f"{a.summary()}; {b.summary()}"


def associativity():
    a = checks.suite_assoc_sh(seed=1, random_count=1000)
    b = checks.suite_assoc_h(seed=1, random_count=1000)
    return a.passed and b.passed, f"{a.summary()}; {b.summary()}"


def idempotency():
    r = checks.suite_idempotents(5)
    return r.passed and r.cases == sum(count_trees(n) for n in range(6)), r.summary()


def euler():
    r = checks.suite_euler(seed=1, random_count=1000)
    return r.passed, r.summary()


def hasse_figure():
    r = checks.suite_hasse_reference()
    return r.passed, "; ".join([r.summary(), *r.failures])


def propagating_order():
    r = checks.suite_prop_order(4)
    return r.passed, "; ".join([r.summary(), *r.notes[:1]])


CRITERIA = [
    (1, "rooted-tree counts", 1.0, tree_counts),
    (2, "hom[(()),(())] has 9 diagrams, 4/4/1", 1.0, hom_example),
    (3, "Gram matrices for (()) and locus q(qk-1)", 1.0, gram_example),
    (4, "symmetry group of (())()()", None, symmetry_example),
    (5, "composition and hom oracles", 30.0, oracle_equivalence),
    (6, "associativity of sh and h products", 60.0, associativity),
    (7, "idempotents for <= 5 loops", None, idempotency),
    (8, "Euler characteristic recomputation", None, euler),
    (9, "Hasse diagram for n <= 3", None, hasse_figure),
    (10, "sub/fold implies propagating order", 300.0, propagating_order),
]


@pytest.mark.parametrize("number, title, limit, body", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, limit, body):
    out = record(number, title, limit, body)
    assert out.passed, out.line()


if __name__ == "__main__":
    for c in CRITERIA:
        record(*c)
    raise SystemExit(0 if all(r.passed for r in RESULTS) else 1)
