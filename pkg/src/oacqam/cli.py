"""Command-line front end.

Examples::

    oacqam optimize --k 100 --q 4 --snr-db 10
    oacqam mse --k 10 --q 4 --gamma 0.1 --trials 100000
    oacqam sweep --k 100 --q 8 --trials 50000 --seed 1 --out q8_K100.dat
    oacqam validate --quick

Exit status: 0 success, 2 usage error, 3 domain error, 4 I/O error,
5 validation failure.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels, validation
from .analysis import EXACT, LEMMA, closed_form_mse
from .grid import ConstellationParams, DomainError
from .noise import NoiseModel
from .optimizer import CAPTION, POWER_MATCHED, PowerBudget, solve_t_star
from .simulator import PER_NODE_UNIFORM, UNIFORM_GRID, McConfig, SweepRecord, run_monte_carlo, snr_grid, sweep_snr

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4
EXIT_VALIDATION = 5

DATA_COLUMNS = ("xi_dB", "mse_opt", "mse_eq", "se_opt", "se_eq")
_MODES = {"per-node-uniform": PER_NODE_UNIFORM, "uniform-grid": UNIFORM_GRID}

__all__ = ["main", "SweepRecord", "format_table", "read_table", "DATA_COLUMNS"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_table(records, comments=()) -> str:
    """Plot-ready text table: ``#`` comment lines, header row, space-delimited rows."""
    lines = [f"# {c}" for c in comments]
    lines.append(" ".join(DATA_COLUMNS))
    for r in records:
        lines.append(" ".join(_fmt(v) for v in (r.xi_db, r.mse_opt, r.mse_eq, r.se_opt, r.se_eq)))
    return "\n".join(lines) + "\n"


def read_table(path) -> list[SweepRecord]:
    """Parse a file written by ``sweep`` (comma or whitespace delimited)."""
    rows, header = [], None
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.replace(",", " ").split()
        if header is None:
            header = fields
            continue
        vals = dict(zip(header, map(float, fields)))
        rows.append(SweepRecord(vals["xi_dB"], vals["mse_opt"], vals["mse_eq"], vals["se_opt"], vals["se_eq"]))
    return rows


def _noise(args) -> NoiseModel:
    if args.gamma is not None:
        return NoiseModel(args.gamma)
    return NoiseModel.from_snr_db(args.snr_db, args.power)


def _design(args):
    params = ConstellationParams(args.q, args.k, 1.0, 1.0)
    model = _noise(args)
    budget = PowerBudget(args.power, params.Q)
    res = solve_t_star(params.q, params.N, model.gamma, budget.rho)
    d_eq = budget.equal_spacing(args.baseline)
    return params, model, budget, res, d_eq


def cmd_optimize(args) -> int:
    params, model, budget, res, d_eq = _design(args)
    opt = params.with_spacing(res.d1_star, res.d2_star)
    eq = params.with_spacing(d_eq, d_eq)
    report = {
        "K": params.K, "q": params.q, "N": params.N, "P": budget.P, "gamma": model.gamma,
        "rho": budget.rho, "t_star": res.t_star, "d1_star": res.d1_star, "d2_star": res.d2_star,
        "g_residual": res.g_residual, "kkt_residual": res.kkt_residual, "method": res.method,
        "baseline": args.baseline, "d_equal": d_eq,
        "mse_opt": closed_form_mse(opt, model), "mse_eq": closed_form_mse(eq, model),
        "mse_opt_exact": closed_form_mse(opt, model, EXACT), "mse_eq_exact": closed_form_mse(eq, model, EXACT),
    }
    width = max(map(len, report))
    for k, v in report.items():
        print(f"{k:<{width}}  {v:.10g}" if isinstance(v, float) else f"{k:<{width}}  {v}")
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_mse(args) -> int:
    params, model, budget, res, d_eq = _design(args)
    designs = {"optimized": (res.d1_star, res.d2_star), "equal": (d_eq, d_eq)}
    if args.d1 is not None or args.d2 is not None:
        if args.d1 is None or args.d2 is None:
            raise DomainError("--d1 and --d2 must be given together")
        designs = {"given": (args.d1, args.d2)}
    print(f"K={params.K} q={params.q} N={params.N} gamma={model.gamma:.10g}")
    for name, (d1, d2) in designs.items():
        p = params.with_spacing(d1, d2)
        line = (f"{name:<9} d1={d1:.8g} d2={d2:.8g} "
                f"lemma={closed_form_mse(p, model, LEMMA):.8g} exact={closed_form_mse(p, model, EXACT):.8g}")
        if args.trials:
            mc = run_monte_carlo(McConfig(p, model, args.trials, args.seed, _MODES[args.mode]), args.workers)
            line += f" mc={mc.mse:.8g} se={mc.std_error:.3g}"
        print(line)
    return EXIT_OK


def _manifest(args, data: str) -> dict:
    return {
        "tool": "oacqam",
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "argv": sys.argv[1:],
        "inputs": {
            "K": args.k, "q": args.q, "P": args.power, "seed": args.seed, "trials": args.trials,
            "mode": args.mode, "baseline": args.baseline, "snr_start": args.snr_start,
            "snr_stop": args.snr_stop, "snr_step": args.snr_step, "workers": args.workers,
        },
        "backend": _kernels.backend_name(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "data_sha256": hashlib.sha256(data.encode("utf-8")).hexdigest(),
    }


def cmd_sweep(args) -> int:
    params = ConstellationParams(args.q, args.k, 1.0, 1.0)
    budget = PowerBudget(args.power, params.Q)
    grid = snr_grid(args.snr_start, args.snr_stop, args.snr_step)
    base = McConfig(params, NoiseModel(1.0), args.trials, args.seed, _MODES[args.mode])
    records = sweep_snr(base, budget, grid, baseline=args.baseline, workers=args.workers)
    comments = [
        f"oacqam {__version__} sweep K={args.k} q={args.q} P={_fmt(args.power)} trials={args.trials} "
        f"seed={args.seed} mode={args.mode} baseline={args.baseline}",
        "xi_dB = 10*log10(P/gamma); se_* = standard error of the MSE estimate",
    ]
    data = format_table(records, comments)
    out = Path(args.out)
    out.write_text(data, encoding="utf-8")
    Path(str(out) + ".manifest.json").write_text(json.dumps(_manifest(args, data), indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(records)} rows)")
    return EXIT_OK


def cmd_validate(args) -> int:
    checks = validation.run_all(quick=args.quick, fault=args.inject_fault, workers=args.workers)
    for c in checks:
        print(c.line())
    failed = [c.name for c in checks if c.gating and not c.passed]
    if failed:
        print("FAILED: " + ", ".join(failed))
        return EXIT_VALIDATION
    print("all checks passed")
    return EXIT_OK


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oacqam", description="QAM spacing design for sum computation under Cauchy noise.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def design_flags(p, need_noise=True):
        p.add_argument("--k", type=int, required=True, help="number of transmitters K")
        p.add_argument("--q", type=int, required=True, help="per-axis alphabet size q (Q = q^2)")
        p.add_argument("--power", type=float, default=1.0, help="average power P (default 1)")
        p.add_argument("--baseline", choices=[POWER_MATCHED, CAPTION], default=POWER_MATCHED,
                       help="equal-spacing reference: d=rho/sqrt(2) (power-matched) or d=rho (caption)")
        if need_noise:
            g = p.add_mutually_exclusive_group(required=True)
            g.add_argument("--gamma", type=float, help="Cauchy scale")
            g.add_argument("--snr-db", type=float, help="10*log10(P/gamma)")

    def mc_flags(p, trials_default):
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--mode", choices=list(_MODES), default="per-node-uniform")
        p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("optimize", help="solve for the optimal spacings")
    design_flags(p)
    p.add_argument("--out", help="also write the report as JSON")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("mse", help="closed-form (and optional Monte-Carlo) MSE")
    design_flags(p)
    p.add_argument("--d1", type=float)
    p.add_argument("--d2", type=float)
    mc_flags(p, 0)
    p.set_defaults(func=cmd_mse)

    p = sub.add_parser("sweep", help="Monte-Carlo MSE vs SNR for optimized and equal spacing")
    design_flags(p, need_noise=False)
    p.add_argument("--snr-start", type=float, default=0.0)
    p.add_argument("--snr-stop", type=float, default=20.0)
    p.add_argument("--snr-step", type=float, default=1.0)
    mc_flags(p, 50_000)
    p.add_argument("--out", required=True, help="data file path; manifest goes to <out>.manifest.json")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="run the self-check suite")
    p.add_argument("--quick", action="store_true", help="reduced budgets and wider tolerances")
    p.add_argument("--inject-fault", choices=list(validation.FAULTS), help="corrupt coefficients to test the harness")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except DomainError as e:
        print(f"oacqam: domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as e:
        print(f"oacqam: I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
