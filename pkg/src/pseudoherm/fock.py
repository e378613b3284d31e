"""Truncated Fock-basis operators and dense matrix kernels.

Operators act on the span of the lowest N oscillator levels |0>...|N-1>.
Truncation follows the project-then-multiply convention: every operator is
the top-left N x N block of its infinite matrix, and products are formed
from the truncated factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_TOLS
from .errors import (
    DimensionMismatchError,
    MatrixExpOverflowError,
    NotPositiveDefiniteError,
)


@dataclass(frozen=True)
class FockBasis:
    """Truncated oscillator number basis with ``dim`` retained levels."""

    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 2:
            raise ValueError(f"FockBasis.dim must be an integer >= 2, got {self.dim}")


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense square complex matrix tagged with the basis it acts on.

    Immutable: the underlying array is marked read-only so values can be
    shared freely between threads.  ``basis`` may be None for anonymous
    matrices assembled outside any model (dimension checks then only use
    the array shape).
    """

    basis: Any
    mat: np.ndarray

    def __post_init__(self):
        m = np.array(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator matrix contains non-finite entries")
        if self.basis is not None and basis_dim(self.basis) != m.shape[0]:
            raise DimensionMismatchError(
                f"matrix dimension {m.shape[0]} does not match basis dimension "
                f"{basis_dim(self.basis)}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def _check_same(self, other: "OperatorMatrix"):
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"dimension mismatch: {self.dim} vs {other.dim}"
            )

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_same(other)
        return OperatorMatrix(self.basis, self.mat + other.mat)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_same(other)
        return OperatorMatrix(self.basis, self.mat - other.mat)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_same(other)
        return OperatorMatrix(self.basis, self.mat @ other.mat)

    def __mul__(self, scalar: complex) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, self.mat * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, -self.mat)


def basis_dim(basis: Any) -> int:
    """Matrix dimension carried by a basis tag."""
    return basis.dim


def identity(basis: Any) -> OperatorMatrix:
    return OperatorMatrix(basis, np.eye(basis_dim(basis), dtype=complex))


def build_annihilation(basis: FockBasis) -> OperatorMatrix:
    """Annihilation operator a with a|n> = sqrt(n)|n-1>."""
    n = basis.dim
    a = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        a[k - 1, k] = np.sqrt(k)
    return OperatorMatrix(basis, a)


def build_creation(basis: FockBasis) -> OperatorMatrix:
    """Creation operator, exactly the adjoint of build_annihilation."""
    return adjoint(build_annihilation(basis))


def build_position(basis: FockBasis) -> OperatorMatrix:
    """Position x = (a + a^dag)/sqrt(2); Hermitian by construction."""
    a = build_annihilation(basis).mat
    return OperatorMatrix(basis, (a + a.conj().T) / np.sqrt(2))


def build_momentum(basis: FockBasis) -> OperatorMatrix:
    """Momentum p = (a - a^dag)/(i sqrt(2)); Hermitian by construction."""
    a = build_annihilation(basis).mat
    return OperatorMatrix(basis, (a - a.conj().T) / (1j * np.sqrt(2)))


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """AB - BA on a common basis."""
    if a.dim != b.dim:
        raise DimensionMismatchError(
            f"commutator dimension mismatch: {a.dim} vs {b.dim}"
        )
    return OperatorMatrix(a.basis, a.mat @ b.mat - b.mat @ a.mat)


def adjoint(a: OperatorMatrix) -> OperatorMatrix:
    return OperatorMatrix(a.basis, a.mat.conj().T)


def residual_hermiticity(a: OperatorMatrix) -> float:
    """||A - A^dag||_F / max(1, ||A||_F)."""
    num = np.linalg.norm(a.mat - a.mat.conj().T)
    return float(num / max(1.0, np.linalg.norm(a.mat)))


def is_hermitian(a: OperatorMatrix, tol: float = DEFAULT_TOLS.hermiticity) -> bool:
    return residual_hermiticity(a) <= tol


def matrix_exp(a: OperatorMatrix) -> OperatorMatrix:
    """Matrix exponential by Pade scaling-and-squaring.

    Relative backward error stays below 1e-12 for spectral norms up to
    about 50; beyond that the result is still returned as long as it is
    finite.  Overflow raises MatrixExpOverflowError instead of returning
    silent infinities.
    """
    e = sla.expm(a.mat)
    if not np.all(np.isfinite(e)):
        raise MatrixExpOverflowError(
            f"matrix exponential overflowed (exponent norm "
            f"{np.linalg.norm(a.mat, 2):.3g})"
        )
    return OperatorMatrix(a.basis, e)


def hermitian_sqrt(a: OperatorMatrix, tol: float = DEFAULT_TOLS.positivity) -> OperatorMatrix:
    """Principal square root of a Hermitian positive definite matrix.

    The input is symmetrized as (A + A^dag)/2 before the eigendecomposition
    to absorb the O(1e-15) asymmetry of assembled products.  Eigenvalues at
    or below tol * max(eigenvalue) raise NotPositiveDefiniteError naming
    the offending eigenvalue.
    """
    sym = (a.mat + a.mat.conj().T) / 2
    vals, vecs = np.linalg.eigh(sym)
    floor = tol * max(1.0, float(vals.max(initial=0.0)))
    if vals.min() <= floor:
        bad = float(vals.min())
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite: eigenvalue {bad:.6g}", bad
        )
    root = (vecs * np.sqrt(vals)) @ vecs.conj().T
    return OperatorMatrix(a.basis, (root + root.conj().T) / 2)
