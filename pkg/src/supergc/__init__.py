"""Grassmann arithmetic on Taylor jets for checking supersymmetric and
classical Gauss-Codazzi systems, their symmetry superalgebras and their
invariant solutions."""

from .errors import *  # noqa: F401,F403
from .grassmann import (
    SCALARS,
    GrassmannAlgebra,
    GrassmannElement,
    MatrixRing,
    ScalarRing,
    derive,
    grassmann_exp,
    grassmann_log,
    grassmann_pow,
    invert,
    parity,
)
from .jets import BasePoint, Jet, JetRing, compose_univariate, jet_fun, jet_integrate, jet_partial
from .superfield import (
    SuperContext,
    Superfield,
    SuperVector3,
    components,
    d_minus,
    d_plus,
    from_components,
    j_minus,
    j_plus,
    super_dot,
)
from .geometry import (
    FrameCoefficients,
    assemble_frames,
    christoffel_first_kind,
    fundamental_forms,
    gc_residuals,
    immersion_checks,
    normalize_normal,
    susy_curvature,
    zcc_residual,
)
from .classical import ClassicalData, classical_curvatures, classical_gc_residuals
from .liesuper import (
    AlgebraElement,
    BasisSpec,
    StructureConstants,
    adjoint_exp,
    bracket,
    classical_algebra,
    super_jacobi_residual,
    susy_algebra,
    verify_conjugacy,
)
from .vectorfields import PolyVectorField, structure_match, vf_bracket
from .expr import eval_expr, parse, to_string
from .odes import TaylorFn, lift_ode
from .catalog import ReducedAnsatz, FieldSlots, build_reduced_ansatz, verify
from .scenario import Report, Scenario, run

__version__ = "0.1.0"
