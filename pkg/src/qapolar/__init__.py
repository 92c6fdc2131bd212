"""Apolarity of complex polynomials pulled back along a polynomial map."""

from ._accel import BACKEND
from .apolarity import SymForm, bracket, fischer_ip, fischer_norm, is_apolar, sym_eval, symmetrize
from .errors import *  # noqa: F401,F403
from .harness import (
    SplitMix64,
    TrialReport,
    verify_bernstein,
    verify_grace_classical,
    verify_grace_relative,
    verify_walsh_relative,
)
from .polycore import (
    Polynomial,
    RootSet,
    binom,
    check,
    compose,
    elem_sym,
    evaluate,
    poly_from_json,
    poly_to_json,
    roots,
    sharp,
)
from .pullback import (
    OperatorMatrix,
    check_pullback_identity,
    discriminant_data,
    is_q_apolar,
    q_bracket,
    s_eval,
    t_apply,
    t_diagonal,
    t_matrix,
    t_matrix_closed_form,
)
from .regions import (
    CircularDomain,
    EmptyUpToGrid,
    FiberClass,
    Membership,
    NonemptyWitness,
    boundary_samples,
    classify_preimage,
    classify_raster,
    fiber_class,
    in_image,
    in_q_circ,
    is_positive_definite,
    q_circ_empty_scan,
    schur_cohn,
)
from .takagi import (
    ConjugationSpec,
    SkewBasis,
    conjugate_c,
    skew_eigenbasis,
    verify_complex_symmetry,
    verify_double_orthogonality,
)

__version__ = "0.1.0"
