"""Command-line interface: ``renyidep {measure,sweep,rate-region,simulate,verify}``.

Exit codes: 0 success, 1 usage or input error, 2 solver did not converge,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import sys
import warnings

import numpy as np

from . import io
from .dependence_solver import MeasureResult, SolverConfig, SolverError, compute_j_alpha, compute_k_alpha
from .info_measures import mutual_information, product_divergence, renyi_entropy
from .prob_core import AlphaOrder, JointPmf, PmfError, marginal_x, marginal_y
from .task_encoding import SimulationError, rate_region, simulate_list_moment

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 2
EXIT_VERIFY_FAILED = 3

MEASURES = ("J", "K", "I", "D", "Delta", "H")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(v: float, fmt: str) -> str:
    if fmt != "human":
        return repr(float(v))
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.6f}"


def _emit(fmt: str, rows: list[dict], human_lines: list[str], out) -> None:
    if fmt == "json":
        payload = rows[0] if len(rows) == 1 else rows
        out.write(json.dumps(payload, indent=2, default=_json_default) + "\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (_fmt(v, "csv") if isinstance(v, float) else v) for k, v in r.items()})
    else:
        out.write("\n".join(human_lines) + "\n")


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _config(args) -> SolverConfig:
    return SolverConfig(
        tol=args.tol, max_iters=args.max_iters, n_starts=args.starts, grid_steps=args.grid_steps, seed=args.seed
    )


def _load(args) -> JointPmf:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        j = io.load_joint(args.file)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return j


def _witness_row(res: MeasureResult) -> dict:
    return {
        "qx_opt": [float(v) for v in res.qx_opt.p],
        "qy_opt": [float(v) for v in res.qy_opt.p],
        "iters": res.iters,
        "converged": res.converged,
        "starts_used": res.starts_used,
        "regime": res.regime,
    }


# -- subcommands -------------------------------------------------------------------


def cmd_measure(args, out) -> int:
    j = _load(args)
    alpha = AlphaOrder(args.alpha)
    m = args.measure
    row = {"measure": m, "alpha": alpha.value}
    lines = []
    code = EXIT_OK
    if m in ("J", "K"):
        fn = compute_j_alpha if m == "J" else compute_k_alpha
        res = fn(j, alpha, _config(args))
        row["value"] = res.value
        row.update(_witness_row(res))
        lines.append(f"{m}_{alpha.value:g}(X;Y) = {_fmt(res.value, 'human')} bits")
        lines.append("qx_opt = " + " ".join(f"{lab}:{v:.6f}" for lab, v in zip(j.x_labels, res.qx_opt.p)))
        lines.append("qy_opt = " + " ".join(f"{lab}:{v:.6f}" for lab, v in zip(j.y_labels, res.qy_opt.p)))
        lines.append(f"iterations = {res.iters}, starts = {res.starts_used}, regime = {res.regime}")
        lines.append(f"converged = {res.converged}")
        if not res.converged:
            code = EXIT_NOT_CONVERGED
    elif m == "I":
        row["value"] = mutual_information(j)
        lines.append(f"I(X;Y) = {_fmt(row['value'], 'human')} bits")
    elif m in ("D", "Delta"):
        # divergence of the joint from the product of its marginals
        row["value"] = product_divergence(j, marginal_x(j), marginal_y(j), alpha, m)
        name = "D" if m == "D" else "Delta"
        lines.append(f"{name}_{alpha.value:g}(P_XY||P_X P_Y) = {_fmt(row['value'], 'human')} bits")
    else:
        hx = renyi_entropy(marginal_x(j), alpha)
        hy = renyi_entropy(marginal_y(j), alpha)
        hxy = renyi_entropy(j.flatten(), alpha)
        row.update({"value": hxy, "h_x": hx, "h_y": hy})
        lines.append(f"H_{alpha.value:g}(X,Y) = {_fmt(hxy, 'human')} bits")
        lines.append(f"H_{alpha.value:g}(X) = {_fmt(hx, 'human')} bits")
        lines.append(f"H_{alpha.value:g}(Y) = {_fmt(hy, 'human')} bits")
    _emit(args.format, [row], lines, out)
    return code


SWEEP_COLUMNS = ("alpha", "j_value", "k_value", "j_converged", "k_converged", "j_iters", "k_iters")


def cmd_sweep(args, out) -> int:
    if not 0 < args.alpha_min < args.alpha_max:
        raise UsageError("need 0 < alpha-min < alpha-max")
    if args.steps < 2:
        raise UsageError("steps must be >= 2")
    j = _load(args)
    cfg = _config(args)
    wanted = {m.strip() for m in args.measures.split(",")}
    if not wanted <= {"J", "K"}:
        raise UsageError("sweep measures must be drawn from J,K")
    rows = []
    all_converged = True
    for a in np.linspace(args.alpha_min, args.alpha_max, args.steps):
        row = dict.fromkeys(SWEEP_COLUMNS, "")
        row["alpha"] = float(a)
        for m, fn in (("J", compute_j_alpha), ("K", compute_k_alpha)):
            if m not in wanted:
                continue
            key = m.lower()
            try:
                res = fn(j, float(a), cfg)
            except (SolverError, ValueError) as exc:
                row[f"{key}_value"] = "error"
                row[f"{key}_converged"] = False
                print(f"warning: alpha={a:g} {m}: {exc}", file=sys.stderr)
                all_converged = False
                continue
            row[f"{key}_value"] = res.value
            row[f"{key}_converged"] = res.converged
            row[f"{key}_iters"] = res.iters
            all_converged &= res.converged
        rows.append(row)
    lines = ["  ".join(f"{c:>11}" for c in SWEEP_COLUMNS)]
    for r in rows:
        lines.append(
            "  ".join(
                f"{(_fmt(v, 'human') if isinstance(v, float) else str(v)):>11}" for v in (r[c] for c in SWEEP_COLUMNS)
            )
        )
    _emit(args.format, rows, lines, out)
    return EXIT_OK if all_converged else EXIT_NOT_CONVERGED


def cmd_rate_region(args, out) -> int:
    if not args.rho > 0:
        raise UsageError("rho must be positive")
    j = _load(args)
    r = rate_region(j, args.rho, _config(args))
    c1, c2 = r.corner_points
    row = {
        "rho": r.rho,
        "rx_min": r.rx_min,
        "ry_min": r.ry_min,
        "sum_min": r.sum_min,
        "k_value": r.k_value,
        "corner_1": list(c1),
        "corner_2": list(c2),
        "converged": r.converged,
    }
    f = lambda v: _fmt(v, "human")  # noqa: E731
    lines = [
        f"rho = {r.rho:g} (order {1 / (1 + r.rho):g})",
        f"R_X >= {f(r.rx_min)} bits/symbol",
        f"R_Y >= {f(r.ry_min)} bits/symbol",
        f"R_X + R_Y >= {f(r.sum_min)} bits/symbol  (K = {f(r.k_value)})",
        f"corner points: ({f(c1[0])}, {f(c1[1])}) and ({f(c2[0])}, {f(c2[1])})",
    ]
    if args.format == "csv":
        row = {k: v for k, v in row.items() if not k.startswith("corner")}
        row.update({"corner1_rx": c1[0], "corner1_ry": c1[1], "corner2_rx": c2[0], "corner2_ry": c2[1]})
    _emit(args.format, [row], lines, out)
    return EXIT_OK if r.converged else EXIT_NOT_CONVERGED


def cmd_simulate(args, out) -> int:
    j = _load(args)
    s = simulate_list_moment(
        j, args.n, args.rx, args.ry, args.rho, trials=args.trials, seed=args.seed, exact=args.exact, binning=args.binning
    )
    region = rate_region(j, args.rho, _config(args))
    inside = region.contains(args.rx, args.ry)
    row = {
        "n": s.n,
        "rx": s.rx,
        "ry": s.ry,
        "rho": s.rho,
        "moment_estimate": s.moment_estimate,
        "std_error": s.std_error,
        "method": s.method,
        "binning": s.binning,
        "trials": s.trials,
        "seed": s.seed,
        "bins_x": s.bins_x,
        "bins_y": s.bins_y,
        "in_rate_region": inside,
    }
    lines = [
        f"n = {s.n}, R_X = {s.rx:g}, R_Y = {s.ry:g}, rho = {s.rho:g}",
        f"bins: {s.bins_x} x {s.bins_y} ({s.binning})",
        f"E[|list|^rho] = {s.moment_estimate:.6f}"
        + ("" if s.method == "exact" else f" +/- {s.std_error:.6f} (SE, {s.trials} trials)")
        + f"  [{s.method}, seed {s.seed}]",
        f"rate pair is {'inside' if inside else 'outside'} the rate region",
    ]
    _emit(args.format, [row], lines, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .verify import run_checks

    k_fn = compute_k_alpha
    if args.perturb_k:
        delta = args.perturb_k

        def k_fn(j, alpha, cfg=None):
            res = compute_k_alpha(j, alpha, cfg)
            return MeasureResult(**{**res.__dict__, "value": res.value + delta})

    results = run_checks(k_fn)
    rows = [{"check": r.name, "passed": r.passed, "detail": r.detail} for r in results]
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}" for r in results]
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    _emit(args.format, rows, lines, out)
    return EXIT_OK if n_fail == 0 else EXIT_VERIFY_FAILED


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "csv", "json"), default="human")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--tol", type=float, default=SolverConfig.tol)
    solver.add_argument("--max-iters", type=int, default=SolverConfig.max_iters)
    solver.add_argument("--starts", type=int, default=None, help="multi-start count (default depends on alpha)")
    solver.add_argument("--grid-steps", type=int, default=SolverConfig.grid_steps)
    solver.add_argument("--seed", type=int, default=SolverConfig.seed)

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--file", "-f", required=True, help="joint PMF file (JSON or bare matrix)")

    p = _Parser(prog="renyidep", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", parents=[common, solver, src], help="evaluate one measure")
    m.add_argument("--measure", choices=MEASURES, default="J")
    m.add_argument("--alpha", type=float, default=1.0)
    m.set_defaults(func=cmd_measure)

    s = sub.add_parser("sweep", parents=[common, solver, src], help="J and K over an alpha grid")
    s.add_argument("--alpha-min", type=float, required=True)
    s.add_argument("--alpha-max", type=float, required=True)
    s.add_argument("--steps", type=int, default=20)
    s.add_argument("--measures", default="J,K")
    s.set_defaults(func=cmd_sweep)

    r = sub.add_parser("rate-region", parents=[common, solver, src], help="task-encoding rate region")
    r.add_argument("--rho", type=float, required=True)
    r.set_defaults(func=cmd_rate_region)

    sim = sub.add_parser("simulate", parents=[common, solver, src], help="list-size moment under random binning")
    sim.add_argument("--n", type=int, required=True, help="block length")
    sim.add_argument("--rx", type=float, required=True)
    sim.add_argument("--ry", type=float, required=True)
    sim.add_argument("--rho", type=float, default=1.0)
    sim.add_argument("--trials", type=int, default=10_000)
    sim.add_argument("--exact", action="store_true")
    sim.add_argument("--binning", choices=("balanced", "iid"), default="balanced")
    sim.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", parents=[common], help="run the built-in self-check suite")
    v.add_argument("--perturb-k", type=float, default=0.0, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args, out)
    except (UsageError, PmfError, SolverError, SimulationError, ValueError) as exc:
        print(f"renyidep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
