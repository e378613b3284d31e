"""Oscillator model families: extended oscillator, Swanson, harmonic baseline.

Matrix builders produce the truncated Fock-basis representations displayed
below (beta_t = tan(2 theta)/2):

    extended:  diag (2n+1) beta/2,  super +sqrt(n+1),  sub -sqrt(n+1)
    swanson:   diag n + 1/2,  (n, n+2) and (n+2, n) entries i beta_t
               sqrt((n+1)(n+2))

Closed-form eigenfunctions are evaluated as polynomial x Gaussian samples;
the ladder operators are applied symbolically to the polynomial part, never
by finite differencing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .config import BETA_FLOOR, SWANSON_THETA_CEILING  # noqa: F401  (ceiling re-exported for sweeps)
from .errors import GridSupportError, SpecValidationError
from .fock import (
    FockBasis,
    OperatorMatrix,
    build_annihilation,
    matrix_exp,
)


@dataclass(frozen=True)
class HarmonicSpec:
    """Harmonic oscillator baseline, H = diag(n + 1/2)."""

    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise SpecValidationError(f"dim must be >= 2, got {self.dim}")

    @property
    def basis(self) -> FockBasis:
        return FockBasis(self.dim)


@dataclass(frozen=True)
class ExtendedOscillatorSpec:
    """beta/2 (p^2 + x^2) + i sqrt(2) p, truncated at ``dim`` levels."""

    beta: float
    dim: int

    def __post_init__(self):
        if not self.beta > 0:
            raise SpecValidationError(f"beta must be > 0, got {self.beta}")
        if self.dim < 2:
            raise SpecValidationError(f"dim must be >= 2, got {self.dim}")

    @property
    def basis(self) -> FockBasis:
        return FockBasis(self.dim)


@dataclass(frozen=True)
class SwansonSpec:
    """(1/2)(p^2 + x^2) - (i/2) tan(2 theta) (p^2 - x^2), |theta| < pi/4."""

    theta: float
    dim: int

    def __post_init__(self):
        if not abs(self.theta) < np.pi / 4:
            raise SpecValidationError(
                f"theta must satisfy |theta| < pi/4, got {self.theta}"
            )
        if self.dim < 2:
            raise SpecValidationError(f"dim must be >= 2, got {self.dim}")

    @property
    def basis(self) -> FockBasis:
        return FockBasis(self.dim)


OscillatorSpec = Union[HarmonicSpec, ExtendedOscillatorSpec, SwansonSpec]


def build_harmonic(spec: HarmonicSpec) -> OperatorMatrix:
    return OperatorMatrix(spec.basis, np.diag(np.arange(spec.dim) + 0.5).astype(complex))


def build_extended_oscillator(spec: ExtendedOscillatorSpec) -> OperatorMatrix:
    """Tridiagonal truncation of the extended oscillator.

    Agrees entrywise with the ladder assembly
    beta a^dag a + (a - a^dag) + beta/2.
    """
    n = spec.dim
    m = np.zeros((n, n), dtype=complex)
    m[np.diag_indices(n)] = (2 * np.arange(n) + 1) * spec.beta / 2
    for k in range(n - 1):
        root = np.sqrt(k + 1)
        m[k, k + 1] = root
        m[k + 1, k] = -root
    return OperatorMatrix(spec.basis, m)


def extended_oscillator_spectrum(spec: ExtendedOscillatorSpec, k: int) -> np.ndarray:
    """First k exact eigenvalues 1/beta + beta (n + 1/2)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 1 / spec.beta + spec.beta * (np.arange(k) + 0.5)


def build_swanson(spec: SwansonSpec) -> OperatorMatrix:
    """Pentadiagonal-pattern truncation of the Swanson Hamiltonian.

    Agrees entrywise with a^dag a + i (tan 2theta / 2)(a^dag^2 + a^2) + 1/2.
    """
    n = spec.dim
    bt = np.tan(2 * spec.theta) / 2
    m = np.zeros((n, n), dtype=complex)
    m[np.diag_indices(n)] = np.arange(n) + 0.5
    for k in range(n - 2):
        c = 1j * bt * np.sqrt((k + 1) * (k + 2))
        m[k, k + 2] = c
        m[k + 2, k] = c
    return OperatorMatrix(spec.basis, m)


def swanson_frequency(theta: float) -> float:
    return 1 / np.cos(2 * theta)


def swanson_spectrum(spec: SwansonSpec, k: int) -> np.ndarray:
    """First k exact eigenvalues omega (n + 1/2), omega = 1/cos(2 theta)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return swanson_frequency(spec.theta) * (np.arange(k) + 0.5)


def build_model(spec: OscillatorSpec) -> OperatorMatrix:
    if isinstance(spec, HarmonicSpec):
        return build_harmonic(spec)
    if isinstance(spec, ExtendedOscillatorSpec):
        return build_extended_oscillator(spec)
    if isinstance(spec, SwansonSpec):
        return build_swanson(spec)
    raise TypeError(f"unknown model spec {type(spec).__name__}")


def analytic_spectrum(spec: OscillatorSpec, k: int) -> np.ndarray:
    if isinstance(spec, HarmonicSpec):
        return np.arange(k) + 0.5
    if isinstance(spec, ExtendedOscillatorSpec):
        return extended_oscillator_spectrum(spec, k)
    if isinstance(spec, SwansonSpec):
        return swanson_spectrum(spec, k)
    raise TypeError(f"unknown model spec {type(spec).__name__}")


def _similarity_exponent(spec: OscillatorSpec) -> OperatorMatrix:
    a = build_annihilation(spec.basis)
    ad = a.mat.conj().T
    if isinstance(spec, ExtendedOscillatorSpec):
        if spec.beta < BETA_FLOOR:
            raise SpecValidationError(
                f"beta = {spec.beta} is below the similarity floor {BETA_FLOOR}; "
                "exp((a^dag + a)/beta) is numerically untamed there"
            )
        return OperatorMatrix(spec.basis, (ad + a.mat) / spec.beta)
    if isinstance(spec, SwansonSpec):
        return OperatorMatrix(spec.basis, 1j * spec.theta / 2 * (a.mat @ a.mat - ad @ ad))
    if isinstance(spec, HarmonicSpec):
        return OperatorMatrix(spec.basis, np.zeros((spec.dim, spec.dim), dtype=complex))
    raise TypeError(f"unknown model spec {type(spec).__name__}")


def similarity_generator(spec: OscillatorSpec) -> tuple[OperatorMatrix, OperatorMatrix]:
    """The pair (S, S^-1) conjugating the model ladder to a^dag, a.

    S = exp((a^dag + a)/beta) for the extended oscillator and
    S = exp(i theta/2 (a^2 - a^dag^2)) for Swanson; S^-1 is built as
    matrix_exp of the negated exponent rather than by inversion.
    """
    x = _similarity_exponent(spec)
    return matrix_exp(x), matrix_exp(-x)


def hermitian_counterpart(spec: OscillatorSpec) -> OperatorMatrix:
    """S^-1 H S; Hermitian on the truncation window.

    For Swanson the window approaches omega (a^dag a + 1/2), for the
    extended oscillator beta a^dag a + 1/beta + beta/2.
    """
    s, s_inv = similarity_generator(spec)
    h = build_model(spec)
    return OperatorMatrix(spec.basis, s_inv.mat @ h.mat @ s.mat)


# --- closed-form eigenfunctions -------------------------------------------
#
# Polynomial parts are stored as ascending complex coefficient arrays and
# advanced by one ladder application per step:
#   (alpha x + mu - delta d/dx) [P e^g] = [(alpha - 2 delta g2) x P
#                                          + (mu - delta g1) P - delta P'] e^g
# for a quadratic exponent g = g0 + g1 x + g2 x^2.


@dataclass(frozen=True)
class AnalyticEigenfunction:
    """Sampled closed-form eigenfunction.

    ``pair_scale`` is the squared normalization constant K_n^2 shared by
    the left and right members (equal-split convention): both raw
    polynomial x Gaussian samples are multiplied by K_n so the bilinear
    grid pairing of L_n with R_n equals 1.
    """

    model: str
    index: int
    side: str
    x: np.ndarray
    values: np.ndarray
    pair_scale: float

    def __post_init__(self):
        for name in ("x", "values"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def pairing_integral(left: np.ndarray, right: np.ndarray, x: np.ndarray) -> complex:
    """Trapezoidal biorthogonal pairing of sampled functions.

    The left samples are stored in the conjugated-coefficient convention,
    so they multiply the right samples directly and the integrand is the
    paper-style real one; no extra conjugation is applied here.
    """
    return complex(np.trapezoid(np.asarray(left) * np.asarray(right), x))


def _poly_derivative(c: np.ndarray) -> np.ndarray:
    if len(c) == 1:
        return np.zeros(1, dtype=complex)
    return c[1:] * np.arange(1, len(c))


def _ladder_step(c: np.ndarray, lin_x: complex, lin_0: complex, d_coef: complex) -> np.ndarray:
    """Apply (lin_x * x + lin_0 - d_coef * d/dx) to the polynomial part."""
    out = np.zeros(len(c) + 1, dtype=complex)
    out[1:] += lin_x * c
    out[: len(c)] += lin_0 * c
    dp = _poly_derivative(c)
    out[: len(dp)] -= d_coef * dp
    return out


def _raw_samples(spec: OscillatorSpec, n: int, side: str, x: np.ndarray) -> np.ndarray:
    """Unnormalized polynomial x Gaussian samples for one side."""
    if isinstance(spec, HarmonicSpec):
        g1, g2 = 0.0, -0.5
        lin_x, lin_0, d_coef = 1.0, 0.0, 1.0
    elif isinstance(spec, ExtendedOscillatorSpec):
        s = np.sqrt(2) / spec.beta
        if side == "right":
            g1, g2 = s, -0.5          # exp(-(x - s)^2 / 2)
            lin_x, lin_0, d_coef = 1.0, s, 1.0
        else:
            g1, g2 = -s, -0.5         # exp(-(x + s)^2 / 2)
            lin_x, lin_0, d_coef = 1.0, -s, 1.0
    elif isinstance(spec, SwansonSpec):
        phase = np.exp(2j * spec.theta if side == "right" else -2j * spec.theta)
        g1, g2 = 0.0, -phase / 2      # exp(-x^2 e^{+-2 i theta} / 2)
        half = np.exp(1j * spec.theta if side == "right" else -1j * spec.theta)
        lin_x, lin_0, d_coef = half, 0.0, 1.0 / half
    else:
        raise TypeError(f"unknown model spec {type(spec).__name__}")

    c = np.ones(1, dtype=complex)
    for _ in range(n):
        c = _ladder_step(c, lin_x - 2 * d_coef * g2, lin_0 - d_coef * g1, d_coef)
    poly = np.polynomial.polynomial.polyval(x, c)
    return poly * np.exp(g2 * x**2 + g1 * x)


def _model_tag(spec: OscillatorSpec) -> str:
    return {
        HarmonicSpec: "harmonic",
        ExtendedOscillatorSpec: "extended-osc",
        SwansonSpec: "swanson",
    }[type(spec)]


def eval_eigenfunction(
    spec: OscillatorSpec, n: int, side: str, x: np.ndarray
) -> AnalyticEigenfunction:
    """Sample the closed-form eigenfunction L_n or R_n on a symmetric grid.

    Both members of the pair share one real constant K_n chosen so the
    bilinear grid pairing of L_n with R_n is exactly 1; this equal split
    keeps the parity relation L_n(x) = (-1)^n R_n(-x) exact as sampled for
    the extended oscillator.  A grid whose boundary values exceed
    1e-12 x peak raises GridSupportError.
    """
    if n < 0:
        raise ValueError("index n must be >= 0")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    x = np.asarray(x, dtype=float)
    if len(x) < 8 or abs(x[0] + x[-1]) > 1e-9 * max(1.0, abs(x[-1])):
        raise GridSupportError("sample grid must be symmetric about 0")

    raw_l = _raw_samples(spec, n, "left", x)
    raw_r = _raw_samples(spec, n, "right", x)
    pair = pairing_integral(raw_l, raw_r, x)
    if not (pair.real > 0 and abs(pair.imag) <= 1e-8 * pair.real):
        raise GridSupportError(
            f"pairing of raw eigenfunctions is not positive real ({pair:.3g}); "
            "grid too coarse or too small"
        )
    k_sq = 1.0 / pair.real
    values = (raw_l if side == "left" else raw_r) * np.sqrt(k_sq)

    peak = np.abs(values).max()
    tail = max(abs(values[0]), abs(values[-1]))
    if tail > 1e-12 * peak:
        raise GridSupportError(
            f"grid does not contain the eigenfunction: boundary magnitude "
            f"{tail:.3g} exceeds 1e-12 x peak {peak:.3g}"
        )
    return AnalyticEigenfunction(
        model=_model_tag(spec),
        index=n,
        side=side,
        x=x,
        values=values,
        pair_scale=k_sq,
    )
