"""Batch run drivers and structured report emission (CSV / JSON).

Every driver turns a fully resolved RunConfig into a report dict

    {"config": ..., "results": ..., "residuals": ..., "warnings": ...,
     "version": ...}

which the writers serialize; both emissions carry the same numeric values
(floats are printed in shortest round-trip form, exact to the IEEE double).
Reports contain no timestamps, so reruns with the same config are
byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .config import DEFAULT_TOLS, SWANSON_THETA_CEILING
from .errors import SpecValidationError
from .eigen import classify_reality, decompose, eig_right
from .metric import (
    build_involution,
    closed_form_metric,
    eta_signature,
    hermitize,
    metric_from_biorthogonal,
    swanson_eta_pattern,
    transition_probability,
    verify_metric,
)
from .models import (
    ExtendedOscillatorSpec,
    HarmonicSpec,
    SwansonSpec,
    analytic_spectrum,
    build_model,
)
from .poeschl_teller import (
    GridBasis,
    PoeschlTellerSpec,
    build_pt,
    metric_commutator_residuals,
    pt_bound_spectrum,
    pt_bound_states,
    pt_metric,
    pt_metric_exponent_norm,
    pt_reflection,
)

MODELS = ("harmonic", "extended-osc", "swanson", "pt")


@dataclass
class RunConfig:
    """Resolved run parameters; mirrors the CLI flags one-to-one."""

    model: str
    beta: float = 2.0
    theta: float = 0.3
    gamma: float = 3.0
    alpha: float = 0.0
    pt_theta: float = 0.0
    dim: int = 64
    grid_l: float = 12.0
    grid_m: int = 2399
    k: int = 5
    ladder: list[int] = field(default_factory=list)
    format: str = "json"
    out: Optional[str] = None
    tol_overrides: dict[str, float] = field(default_factory=dict)
    seed: int = 0
    state_index: Optional[int] = None
    state_coeffs: Optional[list[complex]] = None

    def validate(self):
        if self.model not in MODELS:
            raise SpecValidationError(
                f"unknown model {self.model!r}; expected one of {MODELS}"
            )
        if self.format not in ("csv", "json"):
            raise SpecValidationError(f"format must be csv or json, got {self.format}")
        if self.k < 1:
            raise SpecValidationError(f"k must be >= 1, got {self.k}")
        if self.ladder and any(
            b <= a for a, b in zip(self.ladder, self.ladder[1:])
        ):
            raise SpecValidationError(
                f"ladder must be strictly increasing, got {self.ladder}"
            )

    def tol(self, key: str, default: float) -> float:
        return float(self.tol_overrides.get(key, default))


def _oscillator_spec(cfg: RunConfig, dim: Optional[int] = None):
    d = dim if dim is not None else cfg.dim
    if cfg.model == "harmonic":
        return HarmonicSpec(dim=d)
    if cfg.model == "extended-osc":
        return ExtendedOscillatorSpec(beta=cfg.beta, dim=d)
    if cfg.model == "swanson":
        return SwansonSpec(theta=cfg.theta, dim=d)
    raise SpecValidationError(f"model {cfg.model!r} is not an oscillator family")


def _pt_spec(cfg: RunConfig, grid_m: Optional[int] = None) -> PoeschlTellerSpec:
    grid = GridBasis(half_width=cfg.grid_l, points=grid_m or cfg.grid_m)
    return PoeschlTellerSpec(
        gamma=cfg.gamma, grid=grid, alpha=cfg.alpha, theta=cfg.pt_theta
    )


def _base_report(cfg: RunConfig) -> dict:
    config = asdict(cfg)
    if config.get("state_coeffs"):
        config["state_coeffs"] = [
            [c.real, c.imag] for c in map(complex, config["state_coeffs"])
        ]
    return {
        "config": config,
        "results": [],
        "residuals": {},
        "warnings": [],
        "version": __version__,
    }


def _theta_warning(cfg: RunConfig, report: dict):
    if cfg.model == "swanson" and abs(cfg.theta) > SWANSON_THETA_CEILING:
        report["warnings"].append(
            f"theta = {cfg.theta} exceeds the truncation-study ceiling "
            f"{SWANSON_THETA_CEILING}; reality classification appended"
        )


# ---------------------------------------------------------------- spectrum


def run_spectrum(cfg: RunConfig) -> dict:
    cfg.validate()
    report = _base_report(cfg)
    im_tol = cfg.tol("im_tol", 1e-8)

    if cfg.model == "pt":
        spec = _pt_spec(cfg)
        default_im = 1e-6 if spec.deformation == "none" else 1e-3
        energies, _ = pt_bound_states(
            spec,
            im_tol=cfg.tol("im_tol", default_im),
            loc_tol=cfg.tol("loc_tol", 1e-6),
        )
        exact = pt_bound_spectrum(cfg.gamma)
        rows = []
        for i, ex in enumerate(exact):
            est = energies[i] if i < len(energies) else np.nan
            rows.append(
                {
                    "index": i,
                    "eigenvalue_re": float(np.real(est)),
                    "eigenvalue_im": 0.0,
                    "analytic": float(ex),
                    "abs_error": float(abs(est - ex)),
                    "rel_error": float(abs(est - ex) / max(abs(ex), 1e-300)),
                    "real": True,
                }
            )
        if len(energies) != len(exact):
            report["warnings"].append(
                f"expected {len(exact)} bound states, extracted {len(energies)}"
            )
        report["results"] = rows
        return report

    spec = _oscillator_spec(cfg)
    _theta_warning(cfg, report)
    # eigenvalues only: the retained (lowest-k) modes never need pairing,
    # and full pairing is impossible for edge-defective truncations
    w_all, _ = eig_right(build_model(spec))
    exact = analytic_spectrum(spec, cfg.k)
    w = w_all[: cfg.k]
    real_count, pairs = classify_reality(w, im_tol)
    rows = []
    for i in range(cfg.k):
        err = abs(w[i] - exact[i])
        rows.append(
            {
                "index": i,
                "eigenvalue_re": float(w[i].real),
                "eigenvalue_im": float(w[i].imag),
                "analytic": float(exact[i]),
                "abs_error": float(err),
                "rel_error": float(err / max(abs(exact[i]), 1e-300)),
                "real": bool(abs(w[i].imag) <= im_tol * max(1.0, abs(w[i].real))),
            }
        )
    report["results"] = rows
    report["residuals"]["reality_real_count"] = real_count
    report["residuals"]["reality_complex_pairs"] = len(pairs)
    if pairs:
        report["warnings"].append(
            f"{len(pairs)} complex conjugate pair(s) in the retained spectrum"
        )
    return report


# ------------------------------------------------------------------ metric


def run_metric(cfg: RunConfig) -> dict:
    cfg.validate()
    report = _base_report(cfg)

    if cfg.model == "pt":
        spec = _pt_spec(cfg)
        h = build_pt(spec)
        j = pt_reflection(spec.grid)
        hm = h.mat
        res_jh = float(
            np.linalg.norm(j.mat @ hm - hm.conj().T @ j.mat) / np.linalg.norm(hm)
        )
        report["residuals"]["residual_jh"] = res_jh
        if spec.deformation == "scale":
            report["warnings"].append(
                "reflection pseudo-Hermiticity holds for the shift deformation "
                "only; residual_jh reported as computed"
            )
        q = pt_metric(spec)
        xnorm = pt_metric_exponent_norm(spec)
        report["residuals"]["metric_exponent_norm"] = xnorm
        if xnorm > 50.0:
            report["warnings"].append(
                f"metric exponent norm {xnorm:.3g} exceeds the matrix_exp "
                "guarantee (50); use a coarser grid for metric checks"
            )
        res = metric_commutator_residuals(h, q, spec.grid)
        report["residuals"]["qh_testvector_residuals"] = [float(r) for r in res]
        report["results"] = [
            {"quantity": "residual_jh", "value": res_jh},
            {"quantity": "qh_testvector_max", "value": float(res.max())},
        ]
        return report

    spec = _oscillator_spec(cfg)
    _theta_warning(cfg, report)
    h = build_model(spec)
    window = int(cfg.tol("window", max(2, cfg.dim // 4)))
    pair = closed_form_metric(spec)
    pair = verify_metric(h, pair, window=window)
    dec = decompose(h)
    q_bio = metric_from_biorthogonal(dec)
    res_qh_bio = float(
        np.linalg.norm(q_bio.mat @ h.mat - h.mat.conj().T @ q_bio.mat)
        / (np.linalg.norm(q_bio.mat) * np.linalg.norm(h.mat))
    )
    eta = eta_signature(dec, pair.j, window=window)
    herm = hermitize(h, pair.q, log_q=pair.log_q)
    wblock = herm.mat[:window, :window]
    res_herm = float(
        np.linalg.norm(wblock - wblock.conj().T) / max(np.linalg.norm(wblock), 1e-300)
    )

    report["residuals"] = {
        "residual_jh": pair.residual_jh,
        "residual_qh_closed_form": pair.residual_qh,
        "residual_qh_biorthogonal": res_qh_bio,
        "residual_bender": pair.residual_bender,
        "residual_jqj": pair.residual_jqj,
        "hermitize_window_residual": res_herm,
        "window": window,
    }
    report["results"] = [
        {"quantity": k, "value": v}
        for k, v in report["residuals"].items()
        if isinstance(v, float)
    ]
    report["results"].append(
        {"quantity": "eta_signature", "value": "".join("+" if s > 0 else "-" for s in eta)}
    )
    if cfg.model == "swanson":
        expected = swanson_eta_pattern(len(eta))
        if not np.array_equal(eta, expected):
            report["warnings"].append(
                "computed eta signature deviates from the 4-periodic "
                f"reference pattern: {eta.tolist()}"
            )
    return report


# ---------------------------------------------------------------- converge


def run_converge(cfg: RunConfig) -> dict:
    cfg.validate()
    if len(cfg.ladder) < 3:
        raise SpecValidationError(
            f"convergence mode needs a ladder of >= 3 levels, got {cfg.ladder}"
        )
    report = _base_report(cfg)
    noise_floor = cfg.tol("noise_floor", 1e-12)

    levels = []
    if cfg.model == "pt":
        exact = pt_bound_spectrum(cfg.gamma)
        for m_pts in cfg.ladder:
            spec = _pt_spec(cfg, grid_m=m_pts)
            energies, _ = pt_bound_states(spec)
            errs = [
                float(abs(energies[i] - exact[i])) if i < len(energies) else np.nan
                for i in range(len(exact))
            ]
            levels.append(
                {"level": m_pts, "h": spec.grid.spacing, "errors": errs}
            )
        ratios = []
        for a, b in zip(levels, levels[1:]):
            ratios.append(
                [
                    float(ea / eb) if eb and np.isfinite(ea) and np.isfinite(eb) else np.nan
                    for ea, eb in zip(a["errors"], b["errors"])
                ]
            )
        report["residuals"]["refinement_ratios"] = ratios
    else:
        for n in cfg.ladder:
            spec = _oscillator_spec(cfg, dim=n)
            w, _ = eig_right(build_model(spec))
            exact = analytic_spectrum(spec, cfg.k)
            errs = [float(abs(w[i] - exact[i])) for i in range(cfg.k)]
            levels.append({"level": n, "errors": errs})

    worst = [max(lv["errors"]) for lv in levels]
    monotone = all(
        b <= max(a, noise_floor) for a, b in zip(worst, worst[1:])
    )
    if not monotone:
        report["warnings"].append(
            "divergent truncation: errors do not decay monotonically "
            f"across the ladder {cfg.ladder}"
        )
    # fitted order: log-log slope of the worst error against the level,
    # floor-censored levels excluded
    lv = np.array([lv["level"] for lv in levels], dtype=float)
    we = np.array(worst)
    mask = we > noise_floor
    order = float("nan")
    if mask.sum() >= 2:
        order = float(-np.polyfit(np.log(lv[mask]), np.log(we[mask]), 1)[0])

    report["results"] = levels
    report["residuals"]["monotone_decay"] = bool(monotone)
    report["residuals"]["fitted_order"] = order
    report["residuals"]["noise_floor"] = noise_floor
    return report


# -------------------------------------------------------------- probability


def run_probability(cfg: RunConfig) -> dict:
    cfg.validate()
    if cfg.model == "pt":
        raise SpecValidationError("probability mode applies to oscillator models")
    report = _base_report(cfg)
    _theta_warning(cfg, report)
    spec = _oscillator_spec(cfg)
    h = build_model(spec)
    dec = decompose(h)
    window = int(cfg.tol("window", max(2, cfg.dim // 4)))
    j = build_involution(spec)

    if cfg.state_coeffs is not None:
        xi = np.zeros(cfg.dim, dtype=complex)
        coeffs = np.asarray(cfg.state_coeffs, dtype=complex)
        if len(coeffs) > cfg.dim:
            raise SpecValidationError(
                f"state has {len(coeffs)} coefficients but dim = {cfg.dim}"
            )
        xi[: len(coeffs)] = coeffs
    elif cfg.state_index is not None:
        if not 0 <= cfg.state_index < dec.size:
            raise SpecValidationError(
                f"state_index {cfg.state_index} outside [0, {dec.size})"
            )
        xi = dec.right_vectors[:, cfg.state_index].copy()
    else:
        raise SpecValidationError(
            "probability mode needs state_index or state_coeffs"
        )

    result = transition_probability(xi, dec, weight=j, window=window)
    report["results"] = [
        {"index": i, "probability": float(p)}
        for i, p in enumerate(result.probabilities)
    ]
    report["residuals"]["probability_sum"] = result.total
    report["residuals"]["state_norm_before"] = result.norm_before
    report["residuals"]["window"] = window
    if result.warning:
        report["warnings"].append(result.warning)
    return report


# ----------------------------------------------------------------- writers


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def report_to_csv(report: dict) -> str:
    """Flatten the results table; header row mandatory, LF line endings."""
    buf = io.StringIO()
    rows = report["results"]
    if rows:
        fields = list(rows[0].keys())
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([_fmt(row[f]) for f in fields])
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([])
    for key, val in sorted(report["residuals"].items()):
        writer.writerow([key, _fmt(val)])
    for warning in report["warnings"]:
        writer.writerow(["warning", warning])
    writer.writerow(["version", report["version"]])
    return buf.getvalue()


def write_report(report: dict, fmt: str, path: Optional[str]) -> str:
    text = report_to_json(report) if fmt == "json" else report_to_csv(report)
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
