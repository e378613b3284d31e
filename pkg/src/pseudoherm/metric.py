"""Involutions J, metrics Q, and the checks tying them to a Hamiltonian.

Residual conventions (Frobenius norms):

    residual_jh     ||J H - H^dag J|| / ||H||
    residual_qh     ||Q H - H^dag Q|| / (||Q|| ||H||)
    residual_bender ||J log Q J + log Q|| / max(1, ||log Q||)
    residual_jqj    ||(J Q J) Q - I|| / sqrt(m)

residual_qh and residual_jqj accept a window size m: exponential metrics
only intertwine truncated Hamiltonians away from the truncation edge, so
those residuals are meaningful on the top-left block (default the full
matrix).  The Bender residual is evaluated on the exponent matrix directly,
never through a matrix logarithm of a computed Q.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .config import BETA_FLOOR, DEFAULT_TOLS
from .errors import (
    JOrthogonalityError,
    NotPositiveDefiniteError,
    SpecValidationError,
)
from .eigen import SpectralDecomposition
from .fock import OperatorMatrix, build_annihilation, matrix_exp
from .models import (
    ExtendedOscillatorSpec,
    HarmonicSpec,
    OscillatorSpec,
    SwansonSpec,
)


@dataclass(frozen=True)
class MetricPair:
    """An involution J and metric Q for one Hamiltonian, plus residuals.

    ``log_q`` holds the closed-form exponent when one exists; residuals are
    None until verify_metric fills them.  ``eta`` is the +-1 signature of
    the eigenvectors under the indefinite J-product, when computed.
    """

    j: OperatorMatrix
    q: Optional[OperatorMatrix] = None
    log_q: Optional[OperatorMatrix] = None
    residual_jh: Optional[float] = None
    residual_qh: Optional[float] = None
    residual_bender: Optional[float] = None
    residual_jqj: Optional[float] = None
    eta: Optional[np.ndarray] = None


def build_involution(spec: OscillatorSpec) -> OperatorMatrix:
    """Diagonal sign involution rendering the model J-Hermitian.

    Extended oscillator (and the harmonic baseline): parity in the number
    basis, diag(1, -1, 1, -1, ...).  Swanson: two-periodic blocks
    I_2 (+) -I_2 (+) ..., i.e. signs +, +, -, -, +, +, ...
    """
    n = spec.dim
    if isinstance(spec, SwansonSpec):
        signs = np.where(np.arange(n) % 4 < 2, 1.0, -1.0)
    else:
        signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return OperatorMatrix(spec.basis, np.diag(signs).astype(complex))


def closed_form_logQ(spec: OscillatorSpec) -> OperatorMatrix:
    """Exact metric exponent: -2(a^dag + a)/beta, or -i theta (a^2 - a^dag^2).

    Hermitian in both families.  The extended-oscillator form is refused
    below the beta floor, where exponentiating it is numerically untamed.
    """
    a = build_annihilation(spec.basis).mat
    ad = a.conj().T
    if isinstance(spec, ExtendedOscillatorSpec):
        if spec.beta < BETA_FLOOR:
            raise SpecValidationError(
                f"beta = {spec.beta} is below the metric floor {BETA_FLOOR}"
            )
        return OperatorMatrix(spec.basis, -2 * (ad + a) / spec.beta)
    if isinstance(spec, SwansonSpec):
        return OperatorMatrix(spec.basis, -1j * spec.theta * (a @ a - ad @ ad))
    if isinstance(spec, HarmonicSpec):
        return OperatorMatrix(spec.basis, np.zeros((spec.dim, spec.dim), dtype=complex))
    raise TypeError(f"unknown model spec {type(spec).__name__}")


def closed_form_metric(spec: OscillatorSpec) -> MetricPair:
    """J, log Q, and Q = exp(log Q) for one oscillator model."""
    log_q = closed_form_logQ(spec)
    return MetricPair(j=build_involution(spec), q=matrix_exp(log_q), log_q=log_q)


def metric_from_biorthogonal(decomp: SpectralDecomposition) -> OperatorMatrix:
    """Metric assembled from left eigenvectors, Q R_n = (scaled) L_n.

    Each left vector enters with the geometric-mean scale
    |psi_n> = L_n / ||L_n||^(1/2), which undoes the unit-right-vector
    convention of the decomposition; for the J-symmetric models this makes
    the sum match the involution-fixed closed-form metric up to one overall
    positive factor instead of per-mode weights.  The assembled matrix is
    checked for Hermiticity, symmetrized, and checked positive definite.
    """
    L = decomp.left_vectors
    if L.shape[1] < L.shape[0]:
        raise NotPositiveDefiniteError(
            f"decomposition holds {L.shape[1]} pairs on a dimension-"
            f"{L.shape[0]} space; the metric sum would be rank deficient",
            0.0,
        )
    factor = L / np.sqrt(np.linalg.norm(L, axis=0))
    q = factor @ factor.conj().T
    asym = np.linalg.norm(q - q.conj().T) / max(1.0, np.linalg.norm(q))
    if asym > 1e-10:
        raise NotPositiveDefiniteError(
            f"biorthogonal metric assembly asymmetry {asym:.3g} exceeds 1e-10",
            float("nan"),
        )
    q = (q + q.conj().T) / 2
    # positivity certified on the Gram factor: min eig Q = sigma_min^2,
    # which stays resolvable even when Q's dynamic range defeats eigvalsh
    sigma_min = float(np.linalg.svd(factor, compute_uv=False).min())
    if sigma_min <= 0:
        raise NotPositiveDefiniteError(
            f"biorthogonal metric is not positive definite "
            f"(minimum eigenvalue {sigma_min**2:.6g})",
            sigma_min**2,
        )
    return OperatorMatrix(decomp.basis, q)


def _frob(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def verify_metric(
    h: OperatorMatrix, pair: MetricPair, window: Optional[int] = None
) -> MetricPair:
    """Fill the residual fields of a MetricPair against a Hamiltonian.

    ``window`` restricts residual_qh and residual_jqj to the top-left
    block of that size (products are formed at full dimension first).
    residual_jh and the Bender residual are always global: both are sign
    identities that hold at every truncation.
    """
    hm = h.mat
    n = hm.shape[0]
    m = n if window is None else min(window, n)
    jm = pair.j.mat
    res_jh = _frob(jm @ hm - hm.conj().T @ jm) / max(_frob(hm), 1e-300)

    res_qh = None
    res_jqj = None
    if pair.q is not None:
        qm = pair.q.mat
        c = (qm @ hm - hm.conj().T @ qm)[:m, :m]
        res_qh = _frob(c) / max(_frob(qm[:m, :m]) * _frob(hm[:m, :m]), 1e-300)
        if pair.log_q is not None:
            prod = (jm @ qm @ jm @ qm - np.eye(n))[:m, :m]
            res_jqj = _frob(prod) / np.sqrt(m)

    res_bender = None
    if pair.log_q is not None:
        lq = pair.log_q.mat
        res_bender = _frob(jm @ lq @ jm + lq) / max(1.0, _frob(lq))

    return replace(
        pair,
        residual_jh=res_jh,
        residual_qh=res_qh,
        residual_bender=res_bender,
        residual_jqj=res_jqj,
    )


def eta_signature(
    decomp: SpectralDecomposition,
    j: OperatorMatrix,
    window: Optional[int] = None,
    off_diag_tol: float = DEFAULT_TOLS.j_orthogonality,
) -> np.ndarray:
    """Signs eta_i = sgn <R_i|J|R_i> over the converged window.

    The off-diagonal products <R_i|J|R_j>, i != j, must stay below
    off_diag_tol there; a violation raises JOrthogonalityError since it
    means the window is not converged enough for the signature to be
    meaningful.
    """
    m = decomp.size if window is None else min(window, decomp.size)
    r = decomp.right_vectors[:, :m]
    g = r.conj().T @ j.mat @ r
    off = np.abs(g - np.diag(np.diag(g))).max(initial=0.0)
    if off > off_diag_tol:
        raise JOrthogonalityError(
            f"J-orthogonality failure: off-diagonal <R_i|J|R_j> reaches "
            f"{off:.3g} on the {m}-window (tolerance {off_diag_tol:.3g})"
        )
    diag = np.real(np.diag(g))
    return np.where(diag >= 0, 1, -1).astype(int)


def swanson_eta_pattern(m: int) -> np.ndarray:
    """Reference 4-periodic signature +,+,-,-,... of the Swanson model."""
    return np.where(np.arange(m) % 4 < 2, 1, -1).astype(int)


def hermitize(
    h: OperatorMatrix,
    q: OperatorMatrix,
    log_q: Optional[OperatorMatrix] = None,
) -> OperatorMatrix:
    """Similarity transform Q^(1/2) H Q^(-1/2).

    Computed through one Hermitian eigendecomposition with entrywise
    exp-scaling, which is the Q^(1/2) of hermitian_sqrt reused without ever
    inverting Q: with Q = V diag(q_i) V^dag the result is
    V [ (V^dag H V)_ij sqrt(q_i / q_j) ] V^dag.  When the closed-form
    exponent is supplied the scaling uses exp((d_i - d_j)/2) of its
    eigenvalues instead, which is safe for metrics of huge dynamic range.
    """
    if log_q is not None:
        lm = (log_q.mat + log_q.mat.conj().T) / 2
        d, v = np.linalg.eigh(lm)
        scale = np.exp((d[:, None] - d[None, :]) / 2)
    else:
        qm = (q.mat + q.mat.conj().T) / 2
        d, v = np.linalg.eigh(qm)
        if d.min() <= DEFAULT_TOLS.positivity * max(1.0, float(d.max(initial=0.0))):
            bad = float(d.min())
            raise NotPositiveDefiniteError(
                f"metric is not positive definite: eigenvalue {bad:.6g}", bad
            )
        half = np.sqrt(d)
        scale = half[:, None] / half[None, :]
    core = v.conj().T @ h.mat @ v
    return OperatorMatrix(h.basis, v @ (core * scale) @ v.conj().T)


@dataclass(frozen=True)
class ProbabilityResult:
    """Transition probabilities of a state against a paired eigensystem."""

    probabilities: np.ndarray
    norm_before: float
    warning: Optional[str] = None

    @property
    def total(self) -> float:
        return float(self.probabilities.sum())


def transition_probability(
    state: np.ndarray,
    decomp: SpectralDecomposition,
    weight: Union[OperatorMatrix, np.ndarray, None] = None,
    window: Optional[int] = None,
) -> ProbabilityResult:
    """Probabilities p_i = |<L_i|Xi>|^2 after metric-normalizing the state.

    ``weight`` selects the normalization:

    - an involution J (detected via J @ J = I): eigenpairs in the window
      are renormalized to <R_i|J|R_i> = +-1 and the metric
      sum eta_i J|R_i><R_i|J is used, reproducing the J-fixed construction;
    - a positive metric Q: used directly (sums to 1 when Q matches the
      decomposition normalization, e.g. the plain sum of |L_i><L_i|);
    - None: the decomposition's own sum |L_i><L_i| over the window.

    The state is rescaled so <Xi|Q|Xi> = 1; a non-positive norm raises
    NotPositiveDefiniteError (impossible for a sound metric).  Support
    outside the converged window is reported in ``warning``.
    """
    xi = np.asarray(state, dtype=complex).ravel()
    if xi.shape[0] != decomp.dim:
        raise ValueError(
            f"state dimension {xi.shape[0]} does not match decomposition "
            f"dimension {decomp.dim}"
        )
    m = decomp.size if window is None else min(window, decomp.size)

    wm = None
    if weight is not None:
        wm = weight.mat if isinstance(weight, OperatorMatrix) else np.asarray(weight)

    left = decomp.left_vectors[:, :m]
    if wm is not None and _is_involution(wm):
        r = decomp.right_vectors[:, :m]
        d = np.real(np.einsum("ij,jk,ki->i", r.conj().T, wm, r))
        if np.any(np.abs(d) < 1e-12):
            raise JOrthogonalityError(
                "a window eigenvector has vanishing J-norm; cannot renormalize"
            )
        left = (wm @ r) * (np.sign(d) / np.sqrt(np.abs(d)))
        qm = left @ left.conj().T
    elif wm is not None:
        qm = wm
    else:
        qm = left @ left.conj().T

    norm_sq = float(np.real(np.vdot(xi, qm @ xi)))
    if norm_sq <= DEFAULT_TOLS.positivity:
        raise NotPositiveDefiniteError(
            f"<Xi|Q|Xi> = {norm_sq:.6g} is not positive; broken metric "
            "or state orthogonal to the window",
            norm_sq,
        )
    xi = xi / np.sqrt(norm_sq)

    amps = left.conj().T @ xi
    probs = np.abs(amps) ** 2

    warning = None
    if m < decomp.size:
        amps_all = decomp.left_vectors.conj().T @ xi
        outside = float(np.abs(amps_all[m:]).max(initial=0.0))
        inside = float(np.abs(amps_all[:m]).max(initial=1e-300))
        if outside > 1e-8 * inside:
            warning = (
                f"state has support outside the converged window "
                f"(max outside amplitude {outside:.3g})"
            )
    return ProbabilityResult(probabilities=probs, norm_before=norm_sq, warning=warning)


def _is_involution(m: np.ndarray, tol: float = DEFAULT_TOLS.involution) -> bool:
    n = m.shape[0]
    return bool(np.abs(m @ m - np.eye(n)).max() <= max(tol, 1e-12))
