"""Topological classification of anticonformal square roots.

The package decides when two anticonformal square roots of a conformal
surface automorphism are topologically equivalent.  The pipeline runs
from combinatorial signatures and monodromies through coset rewriting to
a small tuple of arithmetic invariants, with an independent homology
check riding along as a cross-validation oracle.

Typical entry points:

>>> from necroots import parse_instance, invariant_tuple, classify_nonorientable
>>> inst = parse_instance(open("instances/ex1.instance").read())
>>> mono = inst.monodromy()
>>> g1, g2 = inst.pair
>>> t1 = invariant_tuple(mono, g1, marking=inst.marking_for("g1"))
>>> t2 = invariant_tuple(mono, g2, marking=inst.marking_for("g2"))
>>> classify_nonorientable(t1, t2).outcome
'NotEquivalent'
"""

from __future__ import annotations

from .classify import (
    EQUIVALENT,
    INCONCLUSIVE,
    NOT_EQUIVALENT,
    InvariantTuple,
    Verdict,
    classify_nonorientable,
    classify_orientable,
    compute_z,
)
from .groups import FiniteGroup, cyclic, direct_product, semidirect_c2
from .harness import (
    homology_oracle,
    paper_example,
    run_bundled_scan,
    scan_cell,
    theorem_prediction,
)
from .instance import InstanceError, InstanceFile, parse_instance, render_instance
from .monodromy import Monodromy, kernel_genus, pair_census, validate
from .schreier import (
    build_schreier,
    homology_invariants,
    invariant_tuple,
    subgroup_signature,
    verify_marking,
)
from .signature import (
    NecConstructionError,
    NecSignature,
    canonical_presentation,
    parse_signature,
)

__version__ = "0.1.0"

__all__ = [
    "EQUIVALENT",
    "INCONCLUSIVE",
    "NOT_EQUIVALENT",
    "FiniteGroup",
    "InstanceError",
    "InstanceFile",
    "InvariantTuple",
    "Monodromy",
    "NecConstructionError",
    "NecSignature",
    "Verdict",
    "build_schreier",
    "canonical_presentation",
    "classify_nonorientable",
    "classify_orientable",
    "compute_z",
    "cyclic",
    "direct_product",
    "homology_invariants",
    "homology_oracle",
    "invariant_tuple",
    "kernel_genus",
    "pair_census",
    "paper_example",
    "parse_instance",
    "parse_signature",
    "render_instance",
    "run_bundled_scan",
    "scan_cell",
    "semidirect_c2",
    "subgroup_signature",
    "theorem_prediction",
    "validate",
    "verify_marking",
]
