"""Dense nonsymmetric eigendecomposition with biorthogonal pairing.

Right and left eigenvectors are obtained from the LAPACK balance ->
Hessenberg -> shifted-QR pipeline (zgeev).  Pairs are matched greedily by
eigenvalue distance and rescaled to <L_n|R_n> = 1 with the scale split
fixed as: right vectors keep unit Euclidean norm, left vectors carry the
full factor.  That convention is recorded on the decomposition so
downstream probability computations are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_TOLS
from .errors import (
    EigConvergenceError,
    EigenvalueMatchingError,
    QuasiDefectivePairError,
)
from .fock import OperatorMatrix

NORMALIZATION = "unit-right-vector; left vector carries the pairing scale"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Paired eigensystem of a (generally non-Hermitian) matrix.

    eigenvalues     sorted ascending by real part, ties by imaginary part
    right_vectors   columns R_n, unit Euclidean norm
    left_vectors    columns L_n with <L_n|R_n> = 1 (conjugating product)
    pair_condition  |<L_n|R_n>| before rescaling, with unit L and R; values
                    near zero flag quasi-defective pairs
    residuals       ||H R_n - lambda_n R_n||, when H was available
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    pair_condition: np.ndarray
    residuals: Optional[np.ndarray] = None
    basis: Optional[object] = None
    normalization: str = field(default=NORMALIZATION)

    @property
    def dim(self) -> int:
        return self.right_vectors.shape[0]

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    def cross_orthogonality(self, window: Optional[int] = None) -> float:
        """max |<L_i|R_j> - delta_ij| over the leading ``window`` pairs."""
        m = self.size if window is None else min(window, self.size)
        g = self.left_vectors[:, :m].conj().T @ self.right_vectors[:, :m]
        return float(np.abs(g - np.eye(m)).max())

    def reconstruct(self) -> np.ndarray:
        """Sum of lambda_n |R_n><L_n| (equals H when pairing is complete)."""
        return (self.right_vectors * self.eigenvalues) @ self.left_vectors.conj().T


def _sorted(w: np.ndarray, *vecs: np.ndarray):
    order = np.lexsort((w.imag, w.real))
    return (w[order],) + tuple(v[:, order] for v in vecs)


def _as_matrix(h) -> np.ndarray:
    return h.mat if isinstance(h, OperatorMatrix) else np.asarray(h, dtype=complex)


def eig_right(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and right eigenvectors, sorted by (Re, Im)."""
    m = _as_matrix(h)
    try:
        w, v = sla.eig(m, right=True)
    except sla.LinAlgError as exc:  # pragma: no cover - rare QR stall
        raise EigConvergenceError(f"QR iteration failed to converge: {exc}") from exc
    return _sorted(w, v)


def eig_left(h) -> tuple[np.ndarray, np.ndarray]:
    """Left eigenvectors as kets: columns v with H^dag v = conj(lambda) v.

    Implemented as the right problem on H^dag with eigenvalues conjugated
    back, so the returned eigenvalue list refers to H itself.
    """
    m = _as_matrix(h)
    w, v = eig_right(m.conj().T)
    return _sorted(np.conj(w), v)


def _match_greedy(wr: np.ndarray, wl: np.ndarray, rtol: float) -> np.ndarray:
    """Index into wl pairing each wr entry with its nearest unused match."""
    n = len(wr)
    if len(wl) != n:
        raise EigenvalueMatchingError(
            f"spectra have different sizes: {n} vs {len(wl)}"
        )
    dist = np.abs(wr[:, None] - wl[None, :])
    diameter = float(dist.max(initial=0.0))
    tol = rtol * max(diameter, 1.0)
    taken = np.zeros(n, dtype=bool)
    out = np.empty(n, dtype=int)
    for i in range(n):
        row = np.where(taken, np.inf, dist[i])
        j = int(np.argmin(row))
        if row[j] > tol:
            raise EigenvalueMatchingError(
                f"eigenvalue {wr[i]:.8g} has no left partner within {tol:.3g}"
            )
        out[i] = j
        taken[j] = True
    return out


def biorthogonal_pair(
    right: tuple[np.ndarray, np.ndarray],
    left: tuple[np.ndarray, np.ndarray],
    pairing_tol: float = DEFAULT_TOLS.defect,
    matching_rtol: float = DEFAULT_TOLS.matching_rel,
    h=None,
) -> SpectralDecomposition:
    """Match right and left eigensystems and binormalize the pairs.

    ``right`` and ``left`` are (eigenvalues, vector-columns) as returned by
    eig_right / eig_left; the two eigenvalue lists must agree as multisets
    within matching_rtol of the spectral diameter.  Pairs whose unit-vector
    overlap falls below pairing_tol raise QuasiDefectivePairError.
    Residuals are filled when the source matrix ``h`` is provided.
    """
    wr, vr = right
    wl, vl = left
    perm = _match_greedy(wr, wl, matching_rtol)
    n = len(wr)
    R = np.empty_like(vr)
    L = np.empty_like(vl)
    cond = np.empty(n)
    for i in range(n):
        r = vr[:, i] / np.linalg.norm(vr[:, i])
        u = vl[:, perm[i]] / np.linalg.norm(vl[:, perm[i]])
        ov = np.vdot(u, r)
        cond[i] = abs(ov)
        if cond[i] < pairing_tol:
            raise QuasiDefectivePairError(
                f"quasi-defective pair {i}: eigenvalue {wr[i]:.8g} has "
                f"|<L|R>| = {cond[i]:.3g} below tolerance {pairing_tol:.3g}",
                i,
                complex(wr[i]),
            )
        R[:, i] = r
        L[:, i] = u / np.conj(ov)
    residuals = None
    basis = None
    if h is not None:
        m = _as_matrix(h)
        residuals = np.linalg.norm(m @ R - R * wr, axis=0)
        basis = h.basis if isinstance(h, OperatorMatrix) else None
    return SpectralDecomposition(
        eigenvalues=wr,
        right_vectors=R,
        left_vectors=L,
        pair_condition=cond,
        residuals=residuals,
        basis=basis,
    )


def decompose(
    h,
    pairing_tol: float = DEFAULT_TOLS.defect,
    matching_rtol: float = DEFAULT_TOLS.matching_rel,
) -> SpectralDecomposition:
    """Full biorthogonal decomposition of a dense matrix.

    Right and left systems come from one LAPACK call (a single Schur
    reduction serves both), then go through the same greedy matching and
    binormalization as the separate eig_right / eig_left route.
    """
    m = _as_matrix(h)
    try:
        w, vl, vr = sla.eig(m, left=True, right=True)
    except sla.LinAlgError as exc:  # pragma: no cover
        raise EigConvergenceError(f"QR iteration failed to converge: {exc}") from exc
    w, vl, vr = _sorted(w, vl, vr)
    dec = biorthogonal_pair((w, vr), (w, vl), pairing_tol, matching_rtol, h=h)
    if isinstance(h, OperatorMatrix) and dec.basis is None:
        dec = SpectralDecomposition(
            dec.eigenvalues,
            dec.right_vectors,
            dec.left_vectors,
            dec.pair_condition,
            dec.residuals,
            h.basis,
        )
    return dec


def classify_reality(
    eigenvalues: np.ndarray, im_tol: float = DEFAULT_TOLS.reality_im
) -> tuple[int, list[tuple[complex, Optional[complex]]]]:
    """Split a spectrum into real members and complex-conjugate pairs.

    An eigenvalue counts as real when |Im| <= im_tol * max(1, |Re|).  The
    remaining ones are grouped greedily with their nearest conjugate; an
    unmatched leftover appears as (value, None).
    """
    w = np.asarray(eigenvalues, dtype=complex)
    is_real = np.abs(w.imag) <= im_tol * np.maximum(1.0, np.abs(w.real))
    real_count = int(is_real.sum())
    rest = list(w[~is_real])
    pairs: list[tuple[complex, Optional[complex]]] = []
    while rest:
        z = rest.pop(0)
        if not rest:
            pairs.append((z, None))
            break
        d = [abs(np.conj(z) - u) for u in rest]
        j = int(np.argmin(d))
        scale = max(1.0, abs(z))
        if d[j] <= 2 * im_tol * scale + 1e-12 * scale:
            pairs.append((z, rest.pop(j)))
        else:
            pairs.append((z, None))
    return real_count, pairs
