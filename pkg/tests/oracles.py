"""Independent oracles used by the test suite.

The eigenvalue oracle never touches a matrix eigensolver: characteristic
polynomial coefficients come from the Faddeev-LeVerrier trace recursion and
roots from the Durand-Kerner simultaneous iteration, so it is a genuinely
separate route from the LAPACK QR path it checks.
"""

from __future__ import annotations

import numpy as np


def charpoly_coeffs(a: np.ndarray) -> np.ndarray:
    """Coefficients [1, c1, ..., cn] of det(lambda I - A), descending powers.

    Faddeev-LeVerrier: M_0 = I, c_k = -tr(A M_{k-1})/k,
    M_k = A M_{k-1} + c_k I.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    m = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        am = a @ m
        coeffs[k] = -np.trace(am) / k
        m = am + coeffs[k] * np.eye(n)
    return coeffs


def polyroots_durand_kerner(
    coeffs: np.ndarray, max_iter: int = 500, tol: float = 1e-14
) -> np.ndarray:
    """All roots of a monic polynomial by Weierstrass simultaneous iteration."""
    coeffs = np.asarray(coeffs, dtype=complex)
    coeffs = coeffs / coeffs[0]
    n = len(coeffs) - 1
    if n == 0:
        return np.array([], dtype=complex)
    radius = 1.0 + np.abs(coeffs[1:]).max()
    seed = (0.4 + 0.9j) ** np.arange(1, n + 1)
    roots = radius * seed / np.abs(seed)

    def p(z):
        return np.polyval(coeffs, z)

    for _ in range(max_iter):
        num = p(roots)
        denom = np.ones_like(roots)
        for i in range(n):
            diff = roots[i] - np.delete(roots, i)
            denom[i] = np.prod(diff)
        step = num / denom
        roots = roots - step
        if np.abs(step).max() <= tol * max(1.0, np.abs(roots).max()):
            break
    return roots


def eigenvalues_oracle(a: np.ndarray) -> np.ndarray:
    """Eigenvalues via charpoly + root finding, sorted by (Re, Im)."""
    roots = polyroots_durand_kerner(charpoly_coeffs(a))
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def match_multisets(x: np.ndarray, y: np.ndarray) -> float:
    """Greedy nearest matching; returns the largest pair distance."""
    y = list(y)
    worst = 0.0
    for xv in x:
        d = [abs(xv - yv) for yv in y]
        j = int(np.argmin(d))
        worst = max(worst, d[j])
        y.pop(j)
    return worst
