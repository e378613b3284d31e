"""pseudoherm: non-Hermitian Hamiltonians with real spectra, numerically.

Builds truncated Fock-basis and grid Hamiltonians whose spectra are real
despite H != H^dag, computes their biorthogonal eigensystems, constructs
and verifies the involutions J and positive definite metrics Q that restore
a probabilistic interpretation, and produces the similarity transforms to
Hermitian counterparts.
"""

__version__ = "0.1.0"

from .config import DEFAULT_TOLS, Tolerances
from .eigen import (
    SpectralDecomposition,
    biorthogonal_pair,
    classify_reality,
    decompose,
    eig_left,
    eig_right,
)
from .fock import (
    FockBasis,
    OperatorMatrix,
    adjoint,
    build_annihilation,
    build_creation,
    build_momentum,
    build_position,
    commutator,
    hermitian_sqrt,
    is_hermitian,
    matrix_exp,
    residual_hermiticity,
)
from .metric import (
    MetricPair,
    build_involution,
    closed_form_logQ,
    closed_form_metric,
    eta_signature,
    hermitize,
    metric_from_biorthogonal,
    transition_probability,
    verify_metric,
)
from .models import (
    AnalyticEigenfunction,
    ExtendedOscillatorSpec,
    HarmonicSpec,
    SwansonSpec,
    build_extended_oscillator,
    build_harmonic,
    build_swanson,
    eval_eigenfunction,
    extended_oscillator_spectrum,
    hermitian_counterpart,
    similarity_generator,
    swanson_spectrum,
)
from .poeschl_teller import (
    GridBasis,
    PoeschlTellerSpec,
    build_pt,
    build_pt_ladder,
    extract_bound_states,
    pt_bound_spectrum,
    pt_bound_states,
    pt_metric,
    pt_reflection,
)

__all__ = [name for name in dir() if not name.startswith("_")]
