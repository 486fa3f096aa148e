"""Command-line front end.

Subcommands:
    theory-scan        analytic idler-scan curves and peak-shift summary
    simulate-fit       Monte Carlo scans per channel, fitted fringe reports
    spectrum           per-channel wavelengths, rates and ratio estimates
    qkd                per-channel key exchange and the multiplexed totals
    reproduce-figures  theory scans for the four standard parameter sets

Every command takes --config/--seed/--out/--period, writes its outputs plus a
resolved-config echo into the output directory, and is byte-deterministic
under a fixed seed.  Exit status is 0 on success (degenerate scans are
flagged in the summaries, not errors), 2 for configuration problems and 1
for I/O failures.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .biphoton import BiphotonPureState, ProductState, coincidence_probability, MeasurementSetting
from .config import (
    ConfigError,
    RunConfig,
    config_to_dict,
    default_run_config,
    load_config,
    source_channels,
)
from .correlation import estimate_f, find_theta_max, shift_table
from .detection import simulate_scan, scan_to_csv
from .qkd import report_to_dict, reports_to_csv, run_bbm92, wdm_aggregate
from .scanfit import fit_result_to_dict, fit_scan, scan_metrics
from .spectral import channel_state

__all__ = [
    "main",
    "cmd_theory_scan",
    "cmd_simulate_and_fit",
    "cmd_spectrum",
    "cmd_qkd",
    "cmd_reproduce_figures",
]

FIXED_SIGNAL_ANGLES_DEG = (0.0, 45.0, 90.0, 135.0)
SCAN_ANGLES_DEG = tuple(float(a) for a in range(0, 181, 10))

# Parameter sets of the standard model plots: (directory, f, alpha_deg).
FIGURE_SETS = (
    ("f1_alpha0", 1.0, 0.0),
    ("f1_alpha180", 1.0, 180.0),
    ("f1_alpha60", 1.0, 60.0),
    ("f173_alpha0", 1.73, 0.0),
)


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _write_json(path: Path, obj) -> None:
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_echo(cfg: RunConfig, out: Path) -> None:
    _write_json(out / "config_echo.json", config_to_dict(cfg))


def _angle_label(theta: float) -> str:
    return format(float(theta), "g")


def _state_dict(state: BiphotonPureState | ProductState) -> dict:
    if isinstance(state, ProductState):
        return {"kind": "product"}
    return {"kind": "entangled", "f": state.f, "alpha_deg": math.degrees(state.alpha)}


def cmd_theory_scan(
    cfg: RunConfig,
    f: float | None = None,
    alpha_deg: float | None = None,
    theta_s_list=None,
    product: bool = False,
    out_dir: Path | None = None,
) -> dict:
    """Write analytic scan curves and the peak-shift summary.

    One CSV per fixed signal angle (idler on a 1-degree grid) plus a JSON
    summary with peak positions, shifts against theta_s = 0, visibilities
    and degeneracy flags.
    """
    out = Path(out_dir) if out_dir is not None else Path(cfg.out_dir)
    if product or (f is None and cfg.source.kind == "product"):
        state: BiphotonPureState | ProductState = ProductState()
    else:
        state = BiphotonPureState.from_degrees(
            f if f is not None else 1.0,
            alpha_deg if alpha_deg is not None else cfg.source.alpha_deg,
        )
    thetas = tuple(theta_s_list) if theta_s_list else (0.0, 45.0, 135.0)
    grid = np.arange(0.0, 180.0, 1.0)
    for ts in thetas:
        lines = ["theta_i_deg,rate"]
        for ti in grid:
            p = coincidence_probability(state, MeasurementSetting(ts, float(ti)))
            lines.append(f"{float(ti)!r},{p!r}")
        _write_text(out / f"theory_scan_thetas_{_angle_label(ts)}.csv", "\n".join(lines) + "\n")
    rows = []
    for entry in shift_table(state, thetas, reference=0.0):
        res = find_theta_max(state, entry.theta_s)
        rows.append(
            {
                "theta_s_deg": entry.theta_s,
                "theta_max_deg": entry.theta_max,
                "shift_deg": entry.shift,
                "visibility": res.visibility,
                "degenerate": entry.degenerate,
            }
        )
    summary = {"state": _state_dict(state), "rows": rows}
    _write_json(out / "theory_scan_summary.json", summary)
    return summary


def cmd_simulate_and_fit(cfg: RunConfig, out_dir: Path | None = None) -> dict:
    """Simulate idler scans per channel and fixed signal angle, then fit them.

    Writes one scan CSV and one fit JSON per (channel, angle) and a summary
    with fitted peaks and visibilities.  Failures (a fit that cannot run, a
    channel whose ratio is infinite under the configured convention) are
    recorded per row and do not abort the run.
    """
    out = Path(out_dir) if out_dir is not None else Path(cfg.out_dir)
    channels = source_channels(cfg.source)
    rows = []
    for k, channel in enumerate(channels):
        try:
            state = (
                ProductState()
                if cfg.source.kind == "product"
                else channel_state(channel, cfg.source.f_convention)
            )
        except ValueError as exc:
            rows.append({"channel": k, "lambda_signal_nm": channel.lambda_signal, "error": str(exc)})
            continue
        for ts in FIXED_SIGNAL_ANGLES_DEG:
            scan = simulate_scan(state, ("signal", ts), SCAN_ANGLES_DEG, cfg.detection, channel_id=k)
            stem = f"ch{k:02d}_thetas_{_angle_label(ts)}"
            _write_text(out / f"scan_{stem}.csv", scan_to_csv(scan))
            row = {"channel": k, "lambda_signal_nm": channel.lambda_signal, "theta_s_deg": ts}
            try:
                fit = fit_scan(scan, period=cfg.fit_period)
            except ValueError as exc:
                row["error"] = str(exc)
                rows.append(row)
                continue
            _write_json(out / f"fit_{stem}.json", fit_result_to_dict(fit))
            metrics = scan_metrics(fit)
            row.update(
                {
                    "theta_max_deg": metrics.theta_max,
                    "theta_max_err_deg": metrics.theta_max_err,
                    "visibility": metrics.visibility,
                    "visibility_err": metrics.visibility_err,
                    "converged": fit.converged,
                }
            )
            rows.append(row)
    summary = {"period_deg": cfg.fit_period, "rows": rows}
    _write_json(out / "simulate_fit_summary.json", summary)
    return summary


def cmd_spectrum(cfg: RunConfig, out_dir: Path | None = None) -> list[dict]:
    """Write the per-channel wavelength/rate table with both ratio readings."""
    out = Path(out_dir) if out_dir is not None else Path(cfg.out_dir)
    lines = ["lambda_signal_nm,lambda_idler_nm,rate_hv,rate_vh,f_hat,f_hat_inv"]
    rows = []
    for channel in source_channels(cfg.source):
        est = estimate_f(channel.rate_HV, channel.rate_VH)
        rows.append(
            {
                "lambda_signal_nm": channel.lambda_signal,
                "lambda_idler_nm": channel.lambda_idler,
                "rate_hv": channel.rate_HV,
                "rate_vh": channel.rate_VH,
                "f_hat": est.f_hat,
                "f_hat_inv": est.f_hat_inverse,
            }
        )
        lines.append(
            f"{channel.lambda_signal!r},{channel.lambda_idler!r},{channel.rate_HV!r},"
            f"{channel.rate_VH!r},{est.f_hat!r},{est.f_hat_inverse!r}"
        )
    _write_text(out / "spectrum.csv", "\n".join(lines) + "\n")
    return rows


def cmd_qkd(cfg: RunConfig, out_dir: Path | None = None) -> dict:
    """Run the key exchange on every channel and write reports plus totals."""
    out = Path(out_dir) if out_dir is not None else Path(cfg.out_dir)
    channels = source_channels(cfg.source)
    reports = []
    for k, channel in enumerate(channels):
        state = (
            ProductState()
            if cfg.source.kind == "product"
            else channel_state(channel, cfg.source.f_convention)
        )
        reports.append(
            run_bbm92(state, cfg.qkd, channel_id=k, lambda_signal=channel.lambda_signal)
        )
    summary = wdm_aggregate(reports)
    _write_text(out / "key_reports.csv", reports_to_csv(summary.channels))
    _write_json(out / "key_reports.json", [report_to_dict(r) for r in summary.channels])
    totals = {
        "n_channels": len(summary.channels),
        "total_sifted_bits": summary.total_sifted_bits,
        "total_secret_bits": summary.total_secret_bits,
    }
    _write_json(out / "qkd_summary.json", totals)
    return totals


def cmd_reproduce_figures(cfg: RunConfig, out_dir: Path | None = None) -> dict:
    """Regenerate the analytic curves behind the standard model plots.

    Runs theory-scan for the four parameter sets (f, alpha_deg) =
    (1, 0), (1, 180), (1, 60), (1.73, 0) at signal angles 0/45/90/135 and
    collects the peak shifts into one summary.
    """
    out = Path(out_dir) if out_dir is not None else Path(cfg.out_dir)
    collected = {}
    for name, f, alpha_deg in FIGURE_SETS:
        summary = cmd_theory_scan(
            cfg,
            f=f,
            alpha_deg=alpha_deg,
            theta_s_list=FIXED_SIGNAL_ANGLES_DEG,
            out_dir=out / name,
        )
        collected[name] = summary
    _write_json(out / "figure_summary.json", collected)
    return collected


def _parse_theta_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise ConfigError(f"--theta-s expects comma-separated degrees, got {text!r}") from None
    if not values:
        raise ConfigError("--theta-s lists no angles")
    return values


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", default=None, help="JSON config file")
    parser.add_argument("--seed", type=int, default=None, help="override the master seed")
    parser.add_argument("--out", metavar="DIR", default=None, help="override the output directory")
    parser.add_argument(
        "--period",
        type=float,
        choices=(180.0, 360.0),
        default=None,
        help="fringe period for fits, degrees",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wdmqkd",
        description="Pair-source polarization correlations, scan fits and per-channel key rates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_theory = sub.add_parser("theory-scan", help="analytic scan curves and peak shifts")
    _add_common_options(p_theory)
    p_theory.add_argument("--f", type=float, default=None, help="amplitude ratio (default 1)")
    p_theory.add_argument("--alpha-deg", type=float, default=None, help="relative phase, degrees")
    p_theory.add_argument(
        "--theta-s", default="0,45,135", help="comma-separated fixed signal angles, degrees"
    )
    p_theory.add_argument("--product", action="store_true", help="use the +45 product state")

    p_sim = sub.add_parser("simulate-fit", help="Monte Carlo scans and fringe fits per channel")
    _add_common_options(p_sim)

    p_spec = sub.add_parser("spectrum", help="per-channel wavelength and rate table")
    _add_common_options(p_spec)

    p_qkd = sub.add_parser("qkd", help="per-channel key exchange and totals")
    _add_common_options(p_qkd)

    p_fig = sub.add_parser(
        "reproduce-figures", help="theory scans for the four standard parameter sets"
    )
    _add_common_options(p_fig)
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else default_run_config()
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError(f"--seed must be >= 0, got {args.seed}")
        cfg = replace(
            cfg,
            seed=args.seed,
            detection=replace(cfg.detection, seed=args.seed),
            qkd=replace(cfg.qkd, seed=args.seed),
        )
    if args.out is not None:
        cfg = replace(cfg, out_dir=str(args.out))
    if args.period is not None:
        cfg = replace(cfg, fit_period=float(args.period))
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        out = Path(cfg.out_dir)
        if args.command == "theory-scan":
            cmd_theory_scan(
                cfg,
                f=args.f,
                alpha_deg=args.alpha_deg,
                theta_s_list=_parse_theta_list(args.theta_s),
                product=args.product,
            )
        elif args.command == "simulate-fit":
            cmd_simulate_and_fit(cfg)
        elif args.command == "spectrum":
            cmd_spectrum(cfg)
        elif args.command == "qkd":
            cmd_qkd(cfg)
        elif args.command == "reproduce-figures":
            cmd_reproduce_figures(cfg)
        _write_echo(cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
