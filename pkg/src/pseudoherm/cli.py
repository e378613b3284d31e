"""Command-line interface: spectrum | metric | converge | probability.

Batch only; every run writes a CSV or JSON report.  Exit codes:
0 success, 2 validation error (message names the offending field),
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .errors import SpecValidationError, ToolkitError
from .report import (
    MODELS,
    RunConfig,
    run_converge,
    run_metric,
    run_probability,
    run_spectrum,
    write_report,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--model", choices=MODELS, required=False)
    p.add_argument("--beta", type=float, help="extended oscillator parameter (> 0)")
    p.add_argument("--theta", type=float, help="swanson angle (|theta| < pi/4) or pt scale angle")
    p.add_argument("--gamma", type=float, help="poeschl-teller well depth (> 1)")
    p.add_argument("--alpha", type=float, help="poeschl-teller shift deformation")
    p.add_argument("--dim", type=int, help="fock truncation dimension")
    p.add_argument("--grid-l", type=float, dest="grid_l", help="grid half width")
    p.add_argument("--grid-m", type=int, dest="grid_m", help="grid interior points")
    p.add_argument("--k", type=int, help="number of eigenvalues to report")
    p.add_argument(
        "--ladder",
        type=str,
        help="comma-separated strictly increasing truncations / grid sizes",
    )
    p.add_argument("--format", choices=("csv", "json"), dest="fmt")
    p.add_argument("--out", type=str, help="report file path")
    p.add_argument(
        "--tol-override",
        action="append",
        default=[],
        metavar="KEY=VAL",
        help="override a named tolerance (repeatable)",
    )
    p.add_argument("--seed", type=int, help="seed recorded in the report")
    p.add_argument("--config", type=str, help="JSON config file (flags win)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudoherm",
        description="spectra, metrics, and probabilities of non-Hermitian "
        "Hamiltonians with real spectra",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in (
        ("spectrum", "eigenvalues against the analytic formulas"),
        ("metric", "involution / metric residuals and the eta signature"),
        ("converge", "eigenvalue errors across a truncation ladder"),
        ("probability", "transition probabilities of a state"),
    ):
        p = sub.add_parser(name, help=desc)
        _add_common(p)
        if name == "probability":
            p.add_argument("--state-index", type=int, dest="state_index")
            p.add_argument(
                "--state-coeffs",
                type=str,
                dest="state_coeffs",
                help="comma-separated complex coefficients over the Fock basis",
            )
    return parser


def _parse_overrides(items: list[str]) -> dict[str, float]:
    out = {}
    for item in items:
        if "=" not in item:
            raise SpecValidationError(
                f"tol-override must look like KEY=VAL, got {item!r}"
            )
        key, val = item.split("=", 1)
        try:
            out[key.strip()] = float(val)
        except ValueError as exc:
            raise SpecValidationError(
                f"tol-override {key!r} has non-numeric value {val!r}"
            ) from exc
    return out


def _parse_coeffs(text: str) -> list[complex]:
    try:
        return [complex(tok.strip().replace("i", "j")) for tok in text.split(",")]
    except ValueError as exc:
        raise SpecValidationError(
            f"state-coeffs could not be parsed as complex numbers: {text!r}"
        ) from exc


def make_config(args: argparse.Namespace) -> RunConfig:
    file_vals: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            file_vals = json.load(fh)

    def pick(flag, key, default):
        if flag is not None:
            return flag
        if key in file_vals:
            return file_vals[key]
        return default

    model = pick(args.model, "model", None)
    if model is None:
        raise SpecValidationError("field 'model' is required")
    ladder_text = pick(getattr(args, "ladder", None), "ladder", "")
    if isinstance(ladder_text, list):
        ladder = [int(v) for v in ladder_text]
    elif ladder_text:
        ladder = [int(tok) for tok in str(ladder_text).split(",")]
    else:
        ladder = []
    overrides = dict(file_vals.get("tol_overrides", {}))
    overrides.update(_parse_overrides(args.tol_override))

    coeffs = getattr(args, "state_coeffs", None)
    if coeffs is None:
        coeffs = file_vals.get("state_coeffs")
        if coeffs is not None:
            coeffs = [complex(c[0], c[1]) if isinstance(c, list) else complex(c) for c in coeffs]
    elif isinstance(coeffs, str):
        coeffs = _parse_coeffs(coeffs)

    # --theta names the Swanson angle for oscillator runs and the scale
    # deformation angle for pt runs
    theta = pick(args.theta, "theta", None)
    swanson_theta = theta if (model == "swanson" and theta is not None) else 0.3
    pt_theta = theta if (model == "pt" and theta is not None) else 0.0

    state_index = getattr(args, "state_index", None)
    if state_index is None:
        state_index = file_vals.get("state_index")

    return RunConfig(
        model=model,
        beta=pick(args.beta, "beta", 2.0),
        theta=swanson_theta,
        gamma=pick(args.gamma, "gamma", 3.0),
        alpha=pick(args.alpha, "alpha", 0.0),
        pt_theta=pt_theta,
        dim=int(pick(args.dim, "dim", 64)),
        grid_l=pick(args.grid_l, "grid_l", 12.0),
        grid_m=int(pick(args.grid_m, "grid_m", 2399)),
        k=int(pick(args.k, "k", 5)),
        ladder=ladder,
        format=pick(args.fmt, "format", "json"),
        out=pick(args.out, "out", None),
        tol_overrides=overrides,
        seed=int(pick(args.seed, "seed", 0)),
        state_index=state_index,
        state_coeffs=coeffs,
    )


COMMANDS = {
    "spectrum": run_spectrum,
    "metric": run_metric,
    "converge": run_converge,
    "probability": run_probability,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        report = COMMANDS[args.command](cfg)
    except SpecValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ToolkitError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    text = write_report(report, cfg.format, cfg.out)
    if not cfg.out:
        sys.stdout.write(text)
    else:
        print(f"wrote {cfg.format} report to {cfg.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
