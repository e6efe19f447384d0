"""Command-line front end.

Subcommands mirror the library surfaces: ``dephasing`` tabulates the kernel,
heat and QSNR against time; ``tradeoff`` emits the parametric error-vs-heat
curve; ``timeopt`` runs time-optimization sweeps over parameter grids;
``channel`` compares cat-state probes against the channel bound;
``selfcheck`` runs the built-in oracle suite.  All numeric output is
nondimensionalized by the cutoff frequency and written as commented CSV.

Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence,
4 partial sweep (some rows carry error markers).
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .channel import compare_timeopt_cat_vs_optimal
from .config import (
    ChannelConfig,
    ConfigError,
    KernelScanConfig,
    TimeOptConfig,
    config_hash,
    load_config_file,
    parse_channel,
    parse_kernel_scan,
    parse_timeopt,
)
from .dephasing import DephasingEvaluator, delta_dT, delta_kernel
from .errors import InformationFreeError, OptimizerError, QuadratureError
from .metrology import qfi_temperature
from .output import (
    CsvTable,
    plot_channel,
    plot_kernel_scan,
    plot_timeopt,
    plot_tradeoff,
    write_table,
)
from .spectral import DEFAULT_REL_TOL
from .thermo import absorbed_heat, q_kernel
from .timeopt import evaluate_sweep_row, sweep_tasks

_EXIT_OK = 0
_EXIT_CONFIG = 2
_EXIT_NUMERIC = 3
_EXIT_PARTIAL = 4


def _base_metadata(subcommand: str, hash_hex: str, seed: int, threads: int) -> dict:
    return {
        "tool": f"thermoprobe {__version__}",
        "subcommand": subcommand,
        "config_hash": hash_hex,
        "seed": seed,
        "threads": threads,
        "quad_rel_tol": format(DEFAULT_REL_TOL, ".1e"),
    }


def _kernel_scan_rows(cfg: KernelScanConfig):
    omega_c = cfg.sd.omega_c
    rows = []
    for temp_tilde in cfg.temperatures:
        ev = DephasingEvaluator(cfg.sd, temp_tilde * omega_c, cfg.method)
        for t_tilde in cfg.times:
            t = t_tilde / omega_c
            delta = delta_kernel(ev, t)
            ddelta = delta_dT(ev, t)
            kernel = q_kernel(cfg.sd, t)
            heat = absorbed_heat(cfg.probe, cfg.sd, t).heat
            point = qfi_temperature(cfg.probe, ev, t)
            rows.append(
                [
                    temp_tilde,
                    t_tilde,
                    delta,
                    ddelta * omega_c,
                    kernel / omega_c,
                    heat / omega_c,
                    point.qfi * omega_c**2,
                    point.qsnr,
                    point.rate / omega_c,
                ]
            )
    return rows


def cmd_dephasing(cfg: KernelScanConfig, hash_hex: str) -> CsvTable:
    return CsvTable(
        metadata=_base_metadata("dephasing", hash_hex, cfg.seed, cfg.threads),
        header=[
            "T_tilde",
            "t_tilde",
            "delta",
            "ddelta_dT_wc",
            "q_kernel_wc",
            "heat_wc",
            "qfi_wc2",
            "qsnr",
            "qsnr_rate_wc",
        ],
        rows=_kernel_scan_rows(cfg),
    )


def cmd_tradeoff(cfg: KernelScanConfig, hash_hex: str) -> CsvTable:
    rows = []
    for full in _kernel_scan_rows(cfg):
        temp_tilde, t_tilde, heat_wc, qsnr = full[0], full[1], full[5], full[7]
        inv = math.inf if qsnr == 0.0 else 1.0 / qsnr
        rows.append([temp_tilde, t_tilde, heat_wc, inv])
    return CsvTable(
        metadata=_base_metadata("tradeoff", hash_hex, cfg.seed, cfg.threads),
        header=["T_tilde", "t_tilde", "heat_wc", "inv_qsnr"],
        rows=rows,
    )


def cmd_timeopt(cfg: TimeOptConfig, hash_hex: str) -> tuple[CsvTable, bool]:
    bracket = cfg.bracket
    tasks = sweep_tasks(cfg.sds, cfg.temperatures, cfg.probes, bracket)
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(evaluate_sweep_row, tasks))
    else:
        results = [evaluate_sweep_row(task) for task in tasks]
    rows = [
        [
            r.s,
            r.cutoff,
            r.temperature,
            r.coupling,
            r.spin,
            r.t_opt,
            r.rate,
            r.heat,
            r.boundary,
            r.error,
        ]
        for r in results
    ]
    metadata = _base_metadata("timeopt", hash_hex, cfg.seed, cfg.threads)
    metadata["bracket_t_tilde"] = (
        f"[{bracket[0] * cfg.omega_c:.6g}, {bracket[1] * cfg.omega_c:.6g}]"
    )
    boundary_rows = [i for i, r in enumerate(results) if r.boundary]
    metadata["boundary_rows"] = boundary_rows if boundary_rows else "none"
    table = CsvTable(
        metadata=metadata,
        header=[
            "s",
            "cutoff",
            "T_tilde",
            "coupling",
            "spin",
            "t_opt_wc",
            "rate_wc",
            "heat_wc",
            "boundary",
            "error",
        ],
        rows=rows,
    )
    partial = any(r.error for r in results)
    return table, partial


def cmd_channel(cfg: ChannelConfig, hash_hex: str) -> tuple[CsvTable, bool]:
    omega_c = cfg.sd.omega_c
    ev = DephasingEvaluator(cfg.sd, cfg.temperature)
    rows = []
    partial = False
    for lam in cfg.couplings:
        for spin in cfg.spins:
            try:
                res = compare_timeopt_cat_vs_optimal(
                    spin,
                    lam,
                    ev,
                    bracket=cfg.bracket,
                    grid_points=cfg.grid_points,
                    restarts=cfg.restarts,
                    seed=cfg.seed,
                )
                rows.append(
                    [
                        spin,
                        lam,
                        res.cat_rate / omega_c,
                        res.optimal_rate / omega_c,
                        res.cat_rate / res.optimal_rate,
                        res.t_opt_cat * omega_c,
                        res.t_opt_optimal * omega_c,
                        "",
                    ]
                )
            except Exception as exc:  # row marker; the table must complete
                partial = True
                nan = math.nan
                rows.append([spin, lam, nan, nan, nan, nan, nan, str(exc)])
    metadata = _base_metadata("channel", hash_hex, cfg.seed, cfg.threads)
    metadata["restarts"] = cfg.restarts
    metadata["grid_points"] = cfg.grid_points
    table = CsvTable(
        metadata=metadata,
        header=[
            "spin",
            "coupling",
            "cat_rate_wc",
            "optimal_rate_wc",
            "ratio",
            "t_opt_cat_wc",
            "t_opt_optimal_wc",
            "error",
        ],
        rows=rows,
    )
    return table, partial


def cmd_selfcheck() -> int:
    """Fast oracle suite: one pass/fail line per check, exit 0 or 3."""
    import numpy as np

    from .channel import build_dephasing_matrix, channel_qfi
    from .dephasing import DephasingMethod, delta_closed_exp
    from .metrology import classical_fisher_x
    from .special import gamma, hurwitz_zeta, hyp1f1
    from .spectral import CutoffKind, SpectralDensity
    from .thermo import HeatMethod, ProbeConfig

    checks = []

    def check(name, ok, detail=""):
        checks.append(ok)
        print(f"[{'ok' if ok else 'FAIL'}] {name}{': ' + detail if detail else ''}")

    g = gamma(0.5)
    check("gamma(1/2) = sqrt(pi)", abs(g - math.sqrt(math.pi)) < 1e-13 * g)
    z = hurwitz_zeta(3.0, 2.5) - hurwitz_zeta(3.0, 3.5)
    check("hurwitz zeta recurrence", abs(z - 2.5**-3.0) < 1e-12)
    k = hyp1f1(1.2, 2.3, -5.0) - math.exp(-5.0) * hyp1f1(1.1, 2.3, 5.0)
    check("kummer transform", abs(k) < 1e-10)
    sd = SpectralDensity(0.5, 1.0, CutoffKind.EXPONENTIAL)
    ev_q = DephasingEvaluator(sd, 1.0, DephasingMethod.QUADRATURE)
    closed = delta_closed_exp(0.5, 1.0, 1.0, 1.0)
    quad = delta_kernel(ev_q, 1.0)
    check("dephasing closed vs quadrature", abs(closed - quad) < 1e-8 * abs(quad))
    for cutoff in CutoffKind:
        sdx = SpectralDensity(1.5, 1.0, cutoff)
        c = q_kernel(sdx, 2.0, HeatMethod.CLOSED_FORM)
        q = q_kernel(sdx, 2.0, HeatMethod.QUADRATURE)
        check(f"heat closed vs quadrature ({cutoff.value})", abs(c - q) < 1e-8 * abs(q))
    probe = ProbeConfig(coupling=1.0)
    ev = DephasingEvaluator(sd, 1.0)
    qfi = qfi_temperature(probe, ev, 1.0).qfi
    cfi = classical_fisher_x(probe, ev, 1.0)
    check("qfi equals sigma_x fisher", abs(qfi - cfi) < 1e-12 * qfi)
    got = channel_qfi(build_dephasing_matrix(2, 0.5))
    expect = 1.0 / math.expm1(1.0)
    check("channel qfi qubit oracle", abs(got - expect) < 1e-6 * expect)
    rng = np.random.default_rng(3)
    x = float(rng.uniform(0.5, 5.0))
    check("gamma recurrence", abs(gamma(x + 1.0) - x * gamma(x)) < 1e-12 * gamma(x + 1.0))
    return _EXIT_OK if all(checks) else _EXIT_NUMERIC


_PLOTTERS = {
    "dephasing": plot_kernel_scan,
    "tradeoff": plot_tradeoff,
    "timeopt": plot_timeopt,
    "channel": plot_channel,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermoprobe",
        description="Accuracy and invasiveness of pure-dephasing quantum thermometry.",
    )
    parser.add_argument("--version", action="version", version=f"thermoprobe {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in (
        ("dephasing", "kernel, heat and QSNR against time"),
        ("tradeoff", "parametric estimation-error versus absorbed-heat curve"),
        ("timeopt", "time-optimal QSNR rate sweeps over parameter grids"),
        ("channel", "cat-state probes against the optimal channel bound"),
        ("selfcheck", "run the built-in oracle suite"),
    ):
        p = sub.add_parser(name, help=help_text)
        if name != "selfcheck":
            p.add_argument("--config", required=True, help="YAML configuration file")
            p.add_argument("--out", required=True, help="output CSV path")
            p.add_argument("--threads", type=int, default=None, help="worker count")
            p.add_argument("--seed", type=int, default=None, help="restart seed")
            p.add_argument(
                "--format", choices=["csv"], default="csv", help="output format"
            )
            p.add_argument(
                "--plot",
                action="store_true",
                help="render a figure next to the CSV output",
            )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.subcommand == "selfcheck":
        return cmd_selfcheck()
    try:
        raw = load_config_file(args.config)
        overrides = {"seed": args.seed, "threads": args.threads, "plot": args.plot}
        hash_hex = config_hash(raw, {k: v for k, v in overrides.items() if v})
        partial = False
        if args.subcommand == "dephasing":
            cfg = parse_kernel_scan(raw, args.seed, args.threads, args.plot)
            table = cmd_dephasing(cfg, hash_hex)
        elif args.subcommand == "tradeoff":
            cfg = parse_kernel_scan(raw, args.seed, args.threads, args.plot)
            table = cmd_tradeoff(cfg, hash_hex)
        elif args.subcommand == "timeopt":
            cfg = parse_timeopt(raw, args.seed, args.threads, args.plot)
            table, partial = cmd_timeopt(cfg, hash_hex)
        else:
            cfg = parse_channel(raw, args.seed, args.threads, args.plot)
            table, partial = cmd_channel(cfg, hash_hex)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except (QuadratureError, OptimizerError, InformationFreeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC

    write_table(table, args.out)
    if cfg.plot:
        stem = args.out[: -len(".csv")] if args.out.endswith(".csv") else args.out
        _PLOTTERS[args.subcommand](table, stem + ".png")
    if partial:
        print("warning: some sweep rows failed; see error column", file=sys.stderr)
        return _EXIT_PARTIAL
    return _EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
