"""Shared numerical thresholds and model validity floors.

Every residual threshold used by the library lives in this one record so
that sweeps can override them coherently instead of patching scattered
constants.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # matrix predicates
    hermiticity: float = 1e-12        # is_hermitian default
    involution: float = 1e-14        # ||J^2 - I||
    positivity: float = 1e-12        # relative floor for positive definiteness

    # eigensystem pairing
    pairing: float = 1e-8            # |<L_i|R_j> - delta_ij| ceiling on converged windows
    defect: float = 1e-7             # quasi-defective threshold on |<L|R>| (unit vectors);
                                     # flags degenerate truncation artifacts while letting
                                     # merely ill-conditioned edge modes through
    matching_rel: float = 1e-6       # eigenvalue matching, fraction of spectral diameter
    residual_rel: float = 1e-10      # ||H r - lambda r|| relative to ||H||

    # diagnostics
    reality_im: float = 1e-10        # default imaginary cutoff in classify_reality
    j_orthogonality: float = 1e-8    # off-diagonal <R_i|J|R_j> ceiling
    probability_sum: float = 1e-8    # |sum p - 1| ceiling for window-supported states

    def override(self, **kwargs: float) -> "Tolerances":
        """Copy with selected thresholds replaced."""
        return replace(self, **kwargs)


DEFAULT_TOLS = Tolerances()

# Below this, exp((a^dag + a)/beta) is too ill-conditioned at practical
# truncations for similarity and closed-form metric work.
BETA_FLOOR = 0.75

# Truncation studies beyond this |theta| routinely produce complex
# eigenvalue artifacts at fixed dimension; runs past it get a warning and
# a reality classification rather than a hard stop.
SWANSON_THETA_CEILING = 0.55

# matrix_exp backward-error guarantee holds up to this spectral norm.
MATRIX_EXP_NORM_BOUND = 50.0
