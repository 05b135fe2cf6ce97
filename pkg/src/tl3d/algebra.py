"""Linearised diagram categories over Q[q, k].

Diagrams compose bottom to top: in ``compose_sh(A, B)`` the diagram ``A``
is the lower layer, so ``A.target`` must equal ``B.source``.  Gluing two
minimal diagrams can close off components that touch neither outer
boundary (bubbles, weight q) and can create handles (weight k).  Both counts
come from component counts alone:

    genus   = merged - |A| - |B| + |middle loops|
    bubbles = merged classes meeting only the middle

and for a three-layer stack the genus picks up one ``+|middle|`` per glued
interface.  The genus is the cycle rank of the graph whose vertices are the
blocks of the layers and whose edges are the glued loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .diagrams import AdmissibilityError, Diagram, admissible, enumerate_homs, identity, permutation_diagram
from .partitions import CompositionError, compose, compose3
from .poly import ONE, Poly2
from .trees import RootedTree, automorphisms, enumerate_trees


def _require_composable(lower: RootedTree, upper: RootedTree) -> None:
    if lower != upper:
        raise CompositionError(f"cannot compose: lower diagram ends at {lower}, upper starts at {upper}")


@dataclass(frozen=True)
class Term:
    coefficient: Poly2
    diagram: Diagram

    def __str__(self) -> str:
        return f"{self.coefficient} × {self.diagram.partition}"


@dataclass(frozen=True)
class Scalars:
    """Handle and bubble counts of one gluing, with the layer sizes that produced them."""

    genus: int
    bubbles: int
    merged: int

    def weight(self) -> Poly2:
        return Poly2.monomial(self.bubbles, self.genus)


def _finding(result: Diagram) -> Diagram:
    if not admissible(result):
        # geometrically impossible; surfaced rather than silently accepted
        raise AdmissibilityError(f"composite {result} is not admissible")
    return result


@lru_cache(maxsize=1 << 18)
def sh_product(A: Diagram, B: Diagram) -> tuple[Scalars, Diagram]:
    """Glue two diagrams; return the scalar data and the reduced diagram."""
    _require_composable(A.target, B.source)
    r = compose(A.partition, B.partition)
    genus = r.merged_components - len(A) - len(B) + A.target.loop_count
    bubbles = r.middle_only_blocks
    assert genus >= 0 and bubbles >= 0, (A, B, genus, bubbles)
    return Scalars(genus, bubbles, r.merged_components), _finding(Diagram(A.source, B.target, r.trace))


def compose_sh(A: Diagram, B: Diagram) -> Term:
    s, d = sh_product(A, B)
    return Term(s.weight(), d)


class LinComb:
    """A Q[q, k]-linear combination of diagrams with a common source and target."""

    __slots__ = ("source", "target", "terms")

    def __init__(self, source: RootedTree, target: RootedTree, terms: Mapping[Diagram, Poly2] | None = None):
        self.source = source
        self.target = target
        self.terms: dict[Diagram, Poly2] = {}
        for d, c in (terms or {}).items():
            self._add(d, c)

    @classmethod
    def of(cls, d: Diagram, coeff: Poly2 | int | Fraction = 1) -> "LinComb":
        return cls(d.source, d.target, {d: coeff if isinstance(coeff, Poly2) else Poly2.const(coeff)})

    def _add(self, d: Diagram, c: Poly2) -> None:
        if d.source != self.source or d.target != self.target:
            raise CompositionError(f"{d} does not lie in hom[{self.source}, {self.target}]")
        s = self.terms.get(d)
        s = c if s is None else s + c
        if s:
            self.terms[d] = s
        else:
            self.terms.pop(d, None)

    def copy(self) -> "LinComb":
        out = LinComb(self.source, self.target)
        out.terms = dict(self.terms)
        return out

    def __add__(self, other: "LinComb") -> "LinComb":
        out = self.copy()
        for d, c in other.terms.items():
            out._add(d, c)
        return out

    def scale(self, c) -> "LinComb":
        c = c if isinstance(c, Poly2) else Poly2.const(c)
        out = LinComb(self.source, self.target)
        for d, x in self.terms.items():
            out._add(d, x * c)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinComb):
            return NotImplemented
        return (self.source, self.target, self.terms) == (other.source, other.target, other.terms)

    __hash__ = None  # mutable during construction

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Diagram, Poly2]]:
        return iter(sorted(self.terms.items(), key=lambda item: item[0].sort_key()))

    def coefficient(self, d: Diagram) -> Poly2:
        return self.terms.get(d, Poly2())

    def map_coefficients(self, f) -> "LinComb":
        out = LinComb(self.source, self.target)
        for d, c in self.terms.items():
            out._add(d, f(c))
        return out

    def min_propagating(self) -> int | None:
        return min((d.propagating_number for d in self.terms), default=None)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{_paren(c)} × {d.partition}" for d, c in self)

    def __repr__(self) -> str:
        return f"LinComb({self.source!r}, {self.target!r}, {str(self)!r})"

    def to_json(self) -> list[dict]:
        return [{"poly": c.to_json(), "diagram": d.to_json()} for d, c in self]

    @classmethod
    def from_json(cls, data: list, source: RootedTree | None = None, target: RootedTree | None = None) -> "LinComb":
        items = [(Diagram.from_json(t["diagram"]), Poly2.from_json(t["poly"])) for t in data]
        if items:
            source = source or items[0][0].source
            target = target or items[0][0].target
        if source is None or target is None:
            raise ValueError("an empty combination needs explicit source and target")
        out = cls(source, target)
        for d, c in items:
            out._add(d, c)
        return out


def _paren(c: Poly2) -> str:
    s = str(c)
    return f"({s})" if len(c.terms) > 1 else s


def compose_sh_lin(X: LinComb, Y: LinComb) -> LinComb:
    """Bilinear extension of :func:`compose_sh`, ``X`` below ``Y``."""
    _require_composable(X.target, Y.source)
    out = LinComb(X.source, Y.target)
    for a, ca in X.terms.items():
        for b, cb in Y.terms.items():
            s, d = sh_product(a, b)
            out._add(d, ca * cb * s.weight())
    return out


def idempotent(F: RootedTree) -> LinComb:
    """Average of the permutation diagrams of ``F`` over its symmetry group."""
    group = automorphisms(F)
    w = Poly2.const(Fraction(1, len(group)))
    out = LinComb(F, F)
    for sigma in group:
        out._add(permutation_diagram(F, sigma), w)
    return out


@lru_cache(maxsize=1 << 16)
def h_canonical(d: Diagram) -> Diagram:
    """Least diagram, in partition lex order, of the orbit of ``d`` under
    permutations of its bottom and top loops by the symmetry groups of its
    source and target."""
    best = d.partition
    bottoms = automorphisms(d.source)
    tops = automorphisms(d.target)
    for s in bottoms:
        for t in tops:
            p = d.partition.relabel(s, t)
            if p.blocks < best.blocks:
                best = p
    return Diagram(d.source, d.target, best)


def h_orbit(d: Diagram) -> set[Diagram]:
    return {
        Diagram(d.source, d.target, d.partition.relabel(s, t))
        for s in automorphisms(d.source)
        for t in automorphisms(d.target)
    }


@lru_cache(maxsize=1 << 17)
def _h_product(A: Diagram, B: Diagram) -> tuple[tuple[Diagram, Poly2], ...]:
    _require_composable(A.target, B.source)
    F = A.target
    group = automorphisms(F)
    acc: dict[Diagram, Poly2] = {}
    for sigma in group:
        D = permutation_diagram(F, sigma)
        r = compose3(A.partition, D.partition, B.partition)
        genus = r.merged_components - len(A) - len(D) - len(B) + 2 * F.loop_count
        bubbles = r.middle_only_blocks
        assert genus >= 0 and bubbles >= 0, (A, B, sigma, genus, bubbles)
        d = h_canonical(_finding(Diagram(A.source, B.target, r.trace)))
        w = Poly2.monomial(bubbles, genus)
        acc[d] = acc[d] + w if d in acc else w
    scale = Fraction(1, len(group))
    return tuple((d, c * scale) for d, c in acc.items() if c)


def compose_h(A: Diagram, B: Diagram) -> LinComb:
    """Heterotopy composition: average over the symmetries of the middle object,
    with results reduced to orbit-canonical representatives."""
    out = LinComb(A.source, B.target)
    for d, c in _h_product(A, B):
        out._add(d, c)
    return out


def compose_h_lin(X: LinComb, Y: LinComb) -> LinComb:
    _require_composable(X.target, Y.source)
    out = LinComb(X.source, Y.target)
    for a, ca in X.terms.items():
        for b, cb in Y.terms.items():
            cab = ca * cb
            for d, c in _h_product(a, b):
                out._add(d, cab * c)
    return out


def h_reduce(X: LinComb) -> LinComb:
    """Replace every diagram of ``X`` by its orbit-canonical representative."""
    out = LinComb(X.source, X.target)
    for d, c in X.terms.items():
        out._add(h_canonical(d), c)
    return out


# Gram matrices


@dataclass(frozen=True)
class GramMatrix:
    source: RootedTree
    section: RootedTree
    basis: tuple[Diagram, ...]
    entries: tuple[tuple[Poly2, ...], ...]
    flagged: frozenset[tuple[int, int]] = frozenset()

    def __len__(self) -> int:
        return len(self.basis)

    def is_symmetric(self) -> bool:
        n = len(self.basis)
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(n))

    def to_json(self) -> dict:
        return {
            "source": self.source.brackets,
            "section": self.section.brackets,
            "basis": [d.to_json() for d in self.basis],
            "entries": [[str(c) for c in row] for row in self.entries],
            "flagged": sorted([list(ij) for ij in self.flagged]),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GramMatrix":
        from .trees import tree_from_string

        return cls(
            tree_from_string(data["source"]),
            tree_from_string(data["section"]),
            tuple(Diagram.from_json(d) for d in data["basis"]),
            tuple(tuple(Poly2.parse(c) for c in row) for row in data["entries"]),
            frozenset(tuple(ij) for ij in data.get("flagged", [])),
        )


def half_diagrams(F: RootedTree, P: RootedTree) -> tuple[Diagram, ...]:
    """Diagrams ``F -> P`` in which every loop of ``P`` propagates."""
    return tuple(h for h in enumerate_homs(F, P) if h.propagating_number == P.loop_count)


def gram_matrix(F: RootedTree, P: RootedTree) -> GramMatrix:
    """Pairings ``flip(h_i) ∘ h_j`` read against the identity on ``P``."""
    from .diagrams import flip

    basis = half_diagrams(F, P)
    one = identity(P)
    rows = []
    flagged = set()
    for i, hi in enumerate(basis):
        row = []
        for j, hj in enumerate(basis):
            s, d = sh_product(flip(hi), hj)
            if d.propagating_number < P.loop_count:
                row.append(Poly2())
            elif d == one:
                row.append(s.weight())
            else:
                flagged.add((i, j))
                row.append(Poly2())
        rows.append(tuple(row))
    return GramMatrix(F, P, basis, tuple(rows), frozenset(flagged))


def gram_sections(F: RootedTree) -> list[GramMatrix]:
    """Gram matrices of every propagating section with a nonempty basis."""
    out = []
    for n in range(F.loop_count + 1):
        for P in enumerate_trees(n):
            if half_diagrams(F, P):
                out.append(gram_matrix(F, P))
    return out


def determinant(rows: list[list[Poly2]]) -> Poly2:
    """Fraction-free (Bareiss) determinant over Q[q, k]."""
    n = len(rows)
    if n == 0:
        return ONE
    m = [list(r) for r in rows]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not m[k][k]:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return Poly2()
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def gram_det(M: GramMatrix) -> Poly2:
    if M.flagged:
        raise ValueError(f"Gram matrix for section {M.section} has flagged entries {sorted(M.flagged)}")
    return determinant([list(r) for r in M.entries])


def factor(p: Poly2) -> list[tuple[Poly2, int]]:
    """Irreducible factors over Q with multiplicities (constants dropped)."""
    import sympy

    qs, ks = sympy.symbols("q k")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * qs**a * ks**b for (a, b), c in p.terms.items())
    _, facs = sympy.factor_list(sympy.expand(expr), qs, ks)
    out = []
    for f, mult in facs:
        poly = sympy.Poly(f, qs, ks)
        terms = {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}
        out.append((Poly2(terms).monic(), int(mult)))
    return sorted(out, key=lambda fm: str(fm[0]))


def singular_locus(polys: Iterable[Poly2]) -> Poly2:
    """Product of the distinct irreducible factors of the given polynomials."""
    seen: list[Poly2] = []
    for p in polys:
        if not p:
            raise ValueError("a zero determinant is singular everywhere")
        for f, _ in factor(p):
            if not any(f.is_associate(g) for g in seen):
                seen.append(f)
    out = ONE
    for f in sorted(seen, key=str):
        out = out * f
    return out
