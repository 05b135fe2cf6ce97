"""Diagram categories of surfaces in a slab, indexed by loop configurations."""

from .algebra import (
    GramMatrix,
    LinComb,
    compose_h,
    compose_h_lin,
    compose_sh,
    compose_sh_lin,
    gram_det,
    gram_matrix,
    gram_sections,
    h_canonical,
    idempotent,
    singular_locus,
)
from .diagrams import AdmissibilityError, Diagram, enumerate_homs, flip, identity, permutation_diagram
from .partitions import CompositionError, LoopLabel, SetPartition, compose
from .poly import Poly2
from .posets import HasseDiagram, hasse, propagating_leq, subfold_leq
from .trees import EdgePermutation, RootedTree, TreeParseError, automorphisms, count_trees, enumerate_trees, tree_from_string

__all__ = [
    "AdmissibilityError",
    "CompositionError",
    "Diagram",
    "EdgePermutation",
    "GramMatrix",
    "HasseDiagram",
    "LinComb",
    "LoopLabel",
    "Poly2",
    "RootedTree",
    "SetPartition",
    "TreeParseError",
    "automorphisms",
    "compose",
    "compose_h",
    "compose_h_lin",
    "compose_sh",
    "compose_sh_lin",
    "count_trees",
    "enumerate_homs",
    "enumerate_trees",
    "flip",
    "gram_det",
    "gram_matrix",
    "gram_sections",
    "h_canonical",
    "hasse",
    "idempotent",
    "identity",
    "permutation_diagram",
    "propagating_leq",
    "singular_locus",
    "subfold_leq",
    "tree_from_string",
]
