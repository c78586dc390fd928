"""specseq: an exact-arithmetic spectral sequence engine.

Computes spectral sequences of filtered cochain complexes and bicomplexes
over Q and F_p, builds the representing objects, cones, cylinders, shift and
decalage, and machine-verifies fibration / weak-equivalence characterizations
of five cofibrantly generated model structures through an exact
lifting-problem solver.
"""

from .fields import GF, QQ, Field, field_from_spec
from .linalg import ExactMatrix, Subspace, kernel, image, preimage, quotient, rref, solve
from .bigraded import (
    BigradedModule,
    BigradedMorphism,
    InvariantError,
    RBigradedComplex,
    cohomology,
    cone,
    is_acyclic,
    is_quasi_iso,
    translation,
)
from .filtered import FilteredComplex, FilteredHomotopy, FilteredMorphism, SpectralPage
from .bicomplex import Bicomplex, BicomplexMorphism
from .model import CheckReport, LiftingProblem, StructureId, solve_lift, classify_fib, classify_weq
from .suite import SuiteParams, run_property_suite

__version__ = "0.1.0"
