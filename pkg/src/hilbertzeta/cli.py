"""Batch command-line front end.

Usage:
    hilbertzeta constants --sigma 1.5,2,3,5 --m 1 --n 1 --alpha 1 --beta 1 --p 2
    hilbertzeta weights --m 2 --alpha 2 --sigma 2 --ynorm 0.01,1,100
    hilbertzeta verify --preset forward --sigma 1.5,2 --p 1.5,2,3
    hilbertzeta sharpness --eps 0.2,0.02,0.002
    hilbertzeta opnorm --family eps
    hilbertzeta suite --output-format json -o report.json

Exit status: 0 all checks pass, 1 a check failed, 2 configuration error,
3 numerical non-convergence.  Reports carry schema_version "1".
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, specfun
from .errors import ConvergenceError, HilbertZetaError
from .quad import QuadConfig
from .sharp import extrapolate_to_zero, opnorm_search, sharpness_sweep
from .specfun import ProblemParams
from .suite import CRITERIA, DETERMINISM, _jsonable, run_suite
from .verify import (
    check_full_coth,
    check_holder_chain,
    check_inequality,
    full_coth_battery,
    forward_battery,
    reverse_battery,
)
from .weights import omega, varpi

__all__ = ["RunConfig", "Report", "build_parser", "run", "main", "SCHEMA_VERSION", "CSV_COLUMNS"]

SCHEMA_VERSION = "1"
OUTPUT_DIR_ENV = "HILBERTZETA_OUTPUT_DIR"

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NONCONVERGENCE = 0, 1, 2, 3

PRESETS = {
    "forward": None,
    "reverse-p-half": 0.5,
    "reverse-p-neg-one": -1.0,
    "full-coth": None,
    "holder-chain": None,
}

CSV_COLUMNS = {
    "constants": ["index", "status", "sigma", "K", "K1", "K2", "mellin_constant"],
    "weights": ["index", "status", "kind", "sigma", "point_norm", "computed", "closed_form", "rel_deviation"],
    "verify": ["index", "status", "check", "label", "sigma", "p", "I", "J", "bound", "ratio", "J_bound", "J_ratio",
               "holds", "passed"],
    "sharpness": ["index", "status", "eps", "sigma_tilde", "I_tilde", "product_norms", "ratio", "gap"],
    "opnorm": ["index", "status", "family_id", "best_ratio", "K_value", "relative_to_K", "within_bound",
               "converged"],
    "suite": ["index", "status", "id", "name", "passed", "measured", "tolerance", "elapsed_s", "budget_s"],
}


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    params: dict
    grids: dict
    quad: QuadConfig = field(default_factory=QuadConfig)
    output_format: str = "json"
    output_path: Optional[str] = None
    seed: int = 0
    options: dict = field(default_factory=dict)

    def echo(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "params": self.params,
            "grids": self.grids,
            "quad": {"rel_tol": self.quad.rel_tol, "abs_tol": self.quad.abs_tol,
                     "max_subdivisions": self.quad.max_subdivisions},
            "seed": self.seed,
            "options": self.options,
        }


@dataclass
class Report:
    config: dict
    rows: list
    summary: dict
    timestamp: str
    schema_version: str = SCHEMA_VERSION
    tool_version: str = __version__

    def as_dict(self) -> dict:
        return _jsonable({
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "config": self.config,
            "rows": self.rows,
            "summary": self.summary,
        })


# ---------------------------------------------------------------- parsing


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from exc


def _add_common(p: argparse.ArgumentParser, dims: bool = True, p_default: Optional[float] = 2.0):
    if dims:
        p.add_argument("--m", type=int, default=1, help="dimension of the x-space")
        p.add_argument("--n", type=int, default=1, help="dimension of the y-space")
        p.add_argument("--alpha", type=float, default=1.0, help="norm parameter on the x-space")
        p.add_argument("--beta", type=float, default=1.0, help="norm parameter on the y-space")
    if p_default is not None:
        p.add_argument("--p", type=float, default=p_default, help="exponent p (q = p/(p-1))")
    p.add_argument("--rel-tol", type=float, default=QuadConfig.rel_tol)
    p.add_argument("--abs-tol", type=float, default=QuadConfig.abs_tol)
    p.add_argument("--max-subdivisions", type=int, default=QuadConfig.max_subdivisions)
    p.add_argument("--output-format", choices=("json", "csv", "human"), default="human")
    p.add_argument("-o", "--output", default=None, help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for the Monte-Carlo oracle")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hilbertzeta",
                                     description="Numerical checks of a coth-kernel Hilbert-type inequality.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("constants", help="table of K, K1, K2 and the Mellin constant per sigma")
    p.add_argument("--sigma", type=_float_list, required=True)
    _add_common(p)

    p = sub.add_parser("weights", help="weight functions at several point norms against their constants")
    p.add_argument("--sigma", type=_float_list, required=True)
    p.add_argument("--ynorm", type=_float_list, required=True, help="point norms ||y|| (or ||x|| for varpi)")
    p.add_argument("--kind", choices=("omega", "varpi"), default="omega")
    p.add_argument("--tolerance", type=float, default=1e-8)
    _add_common(p, p_default=None)

    p = sub.add_parser("verify", help="inequality batteries on built-in profile pairs")
    p.add_argument("--preset", choices=tuple(PRESETS), required=True)
    p.add_argument("--sigma", type=_float_list, default=[2.0])
    p.add_argument("--p", type=_float_list, default=None, help="p values (fixed by the reverse presets)")
    _add_common(p, p_default=None)

    p = sub.add_parser("sharpness", help="ratios of the extremal eps-family")
    p.add_argument("--eps", type=_float_list, default=[0.2, 0.02, 0.002])
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--no-direct-check", action="store_true", help="skip the raw double integral at the largest eps")
    _add_common(p)

    p = sub.add_parser("opnorm", help="search for the operator norm over a profile family")
    p.add_argument("--family", choices=("eps", "exp"), default="eps")
    p.add_argument("--sigma", type=_float_list, default=[2.0])
    _add_common(p)

    p = sub.add_parser("suite", help="the full acceptance battery")
    p.add_argument("--only", type=_int_list, default=None,
                   help=f"criteria to run, from 1..{DETERMINISM[0]} (default: all)")
    _add_common(p, dims=False, p_default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    try:
        quad = QuadConfig(args.rel_tol, args.abs_tol, args.max_subdivisions)
    except HilbertZetaError as exc:
        raise ConfigError(str(exc)) from exc
    params = {k: getattr(args, k) for k in ("m", "n", "alpha", "beta") if hasattr(args, k)}
    grids, options = {}, {}
    cmd = args.subcommand
    if cmd == "constants":
        grids["sigma"] = args.sigma
        params["p"] = args.p
    elif cmd == "weights":
        grids = {"sigma": args.sigma, "point_norm": args.ynorm}
        options = {"kind": args.kind, "tolerance": args.tolerance}
    elif cmd == "verify":
        fixed = PRESETS[args.preset]
        if fixed is not None:
            if args.p is not None and args.p != [fixed]:
                raise ConfigError(f"preset {args.preset} fixes p = {fixed}")
            ps = [fixed]
        else:
            ps = args.p if args.p is not None else [2.0]
        grids = {"sigma": args.sigma, "p": ps}
        options = {"preset": args.preset}
    elif cmd == "sharpness":
        grids["eps"] = args.eps
        params.update(sigma=args.sigma, p=args.p)
        options = {"direct_check": not args.no_direct_check}
    elif cmd == "opnorm":
        grids["sigma"] = args.sigma
        params["p"] = args.p
        options = {"family": args.family}
    elif cmd == "suite":
        ids = args.only if args.only is not None else sorted(CRITERIA) + [DETERMINISM[0]]
        bad = [i for i in ids if i not in CRITERIA and i != DETERMINISM[0]]
        if bad:
            raise ConfigError(f"unknown criteria {bad}")
        grids["criteria"] = ids
    for name, grid in grids.items():
        if not grid:
            raise ConfigError(f"grid {name!r} is empty")
    return RunConfig(cmd, params, grids, quad, args.output_format, args.output, args.seed, options)


# ---------------------------------------------------------------- execution


def _params(cfg: RunConfig, sigma: float, p: float) -> ProblemParams:
    pr = cfg.params
    try:
        return ProblemParams(pr.get("m", 1), pr.get("n", 1), pr.get("alpha", 1.0), pr.get("beta", 1.0), sigma, p)
    except HilbertZetaError as exc:
        raise ConfigError(str(exc)) from exc


def _rows_constants(cfg: RunConfig) -> list[dict]:
    rows = []
    for sigma in cfg.grids["sigma"]:
        params = _params(cfg, sigma, cfg.params["p"])
        vals = {c.formula_id.value: c.value for c in specfun.constant_table(params)}
        rows.append({"sigma": sigma, "K": vals["K"], "K1": vals["K1"], "K2": vals["K2"],
                     "mellin_constant": specfun.mellin_coth_constant(sigma),
                     "passed": all(v > 0 and math.isfinite(v) for v in vals.values())})
    return rows


def _rows_weights(cfg: RunConfig) -> list[dict]:
    kind, tol = cfg.options["kind"], cfg.options["tolerance"]
    pr = cfg.params
    rows = []
    for sigma in cfg.grids["sigma"]:
        _params(cfg, sigma, 2.0)
        for y in cfg.grids["point_norm"]:
            if not y > 0:
                raise ConfigError(f"point norms must be positive, got {y!r}")
            if kind == "omega":
                rep = omega(sigma, y, pr["m"], pr["alpha"], cfg.quad)
            else:
                rep = varpi(sigma, y, pr["n"], pr["beta"], cfg.quad, alpha=pr["alpha"], m=pr["m"])
            rows.append({"kind": kind, "sigma": sigma, "point_norm": y, "computed": rep.computed,
                         "closed_form": rep.closed_form, "rel_deviation": rep.rel_deviation,
                         "converged": rep.converged, "passed": rep.converged and rep.rel_deviation <= tol})
    return rows


def _rows_verify(cfg: RunConfig) -> list[dict]:
    preset = cfg.options["preset"]
    jobs = []
    for sigma in cfg.grids["sigma"]:
        for p in cfg.grids["p"]:
            params = _params(cfg, sigma, p)
            try:
                if preset == "forward":
                    jobs += [(params, lab, f, g, check_inequality) for lab, f, g in forward_battery(params)]
                elif preset.startswith("reverse"):
                    jobs += [(params, lab, f, g, check_inequality) for lab, f, g in reverse_battery(params)]
                elif preset == "full-coth":
                    jobs += [(params, lab, f, g, check_full_coth) for lab, f, g in full_coth_battery(params)]
                else:
                    battery = forward_battery(params) if params.p > 1 else reverse_battery(params)
                    jobs += [(params, lab, f, None, check_holder_chain) for lab, f, _ in battery]
            except HilbertZetaError as exc:
                raise ConfigError(str(exc)) from exc
    rows = []
    for params, label, f, g, check in jobs:
        try:
            rep = check(f, params, cfg.quad, label) if g is None else check(f, g, params, cfg.quad, label)
        except ConvergenceError as exc:
            rows.append({"label": label, "sigma": params.sigma, "p": params.p, "status": "nonconvergent",
                         "error": str(exc), "passed": False})
            continue
        row = rep.as_dict()
        row.update(sigma=params.sigma, p=params.p)
        rows.append(row)
    return rows


def _rows_sharpness(cfg: RunConfig) -> list[dict]:
    params = _params(cfg, cfg.params["sigma"], cfg.params["p"])
    eps = cfg.grids["eps"]
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ConfigError("the eps list must be strictly decreasing")
    pts = sharpness_sweep(params, eps, cfg.quad, cfg.options["direct_check"])
    rows = []
    for i, pt in enumerate(pts):
        row = pt.as_dict()
        # gaps shrink along the decreasing eps list (ties within 1e-10 allowed)
        row["passed"] = i == 0 or pt.gap <= pts[i - 1].gap + 1e-10
        rows.append(row)
    if len(pts) >= 3:
        limit, residual = extrapolate_to_zero(pts)
        rows[-1]["extrapolated_limit"] = limit
        rows[-1]["extrapolation_residual"] = residual
        rows[-1]["passed"] = rows[-1]["passed"] and abs(limit - 1.0) <= 2.0 * residual
    return rows


def _rows_opnorm(cfg: RunConfig) -> list[dict]:
    rows = []
    for sigma in cfg.grids["sigma"]:
        params = _params(cfg, sigma, cfg.params["p"])
        est = opnorm_search(params, cfg.options["family"], cfg.quad)
        row = est.as_dict()
        row.update(sigma=sigma, relative_to_K=est.relative_to_K, within_bound=est.within_bound(1e-8))
        row["passed"] = row["within_bound"]
        rows.append(row)
    return rows


def _rows_suite(cfg: RunConfig) -> list[dict]:
    def progress(res):
        if cfg.output_format == "human" or cfg.output_path:
            print(f"  criterion {res.id:2d} {'PASS' if res.passed else 'FAIL'} ({res.elapsed_s:.1f} s)",
                  file=sys.stderr, flush=True)

    return [r.as_dict() for r in run_suite(cfg.grids["criteria"], cfg.seed, progress)]


_RUNNERS = {
    "constants": _rows_constants,
    "weights": _rows_weights,
    "verify": _rows_verify,
    "sharpness": _rows_sharpness,
    "opnorm": _rows_opnorm,
    "suite": _rows_suite,
}


def _summary(rows: list[dict]) -> dict:
    passed = sum(1 for r in rows if r.get("passed"))
    out = {"rows": len(rows), "passed": passed, "failed": len(rows) - passed,
           "nonconvergent": sum(1 for r in rows if r.get("status") == "nonconvergent")}
    devs = [r["rel_deviation"] for r in rows if "rel_deviation" in r]
    if devs:
        out["worst_rel_deviation"] = max(devs)
    ratios = [r["ratio"] for r in rows if isinstance(r.get("ratio"), float) and math.isfinite(r["ratio"])]
    if ratios:
        out["ratio_range"] = [min(ratios), max(ratios)]
    return out


def _timestamp() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")


def run(cfg: RunConfig) -> tuple[int, Report]:
    """Execute one configuration; returns (exit status, report)."""
    status = EXIT_OK
    try:
        rows = _RUNNERS[cfg.subcommand](cfg)
    except ConvergenceError as exc:
        rows = [{"status": "nonconvergent", "error": str(exc), "passed": False}]
        status = EXIT_NONCONVERGENCE
    except HilbertZetaError as exc:
        # domain, parameter and admissibility errors all trace back to the configuration
        raise ConfigError(f"{type(exc).__name__}: {exc}") from exc
    for i, row in enumerate(rows):
        row["index"] = i
        if row.get("converged") is False:
            row["status"] = "nonconvergent"
        row.setdefault("status", "ok" if row.get("passed") else "failed")
    report = Report(cfg.echo(), rows, _summary(rows), _timestamp())
    if status == EXIT_OK:
        if any(r["status"] == "nonconvergent" for r in rows):
            status = EXIT_NONCONVERGENCE
        elif not all(r.get("passed") for r in rows):
            status = EXIT_CHECK
    return status, report


# ---------------------------------------------------------------- output


def render(report: Report, fmt: str, subcommand: str) -> str:
    doc = report.as_dict()
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS[subcommand], extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in doc["rows"]:
            writer.writerow({k: row.get(k, "") for k in CSV_COLUMNS[subcommand]})
        return buf.getvalue()
    return _render_human(doc, subcommand)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _render_human(doc: dict, subcommand: str) -> str:
    lines = [f"hilbertzeta {doc['tool_version']} {subcommand}  ({doc['timestamp']})"]
    if subcommand == "suite":
        lines.append(f"{'#':>3}  {'result':6}  {'measured':>14}  {'tolerance':42}  {'time':>8}  name")
        for r in doc["rows"]:
            lines.append(f"{r['id']:>3}  {'PASS' if r['passed'] else 'FAIL':6}  {_fmt(r['measured']):>14}  "
                         f"{r['tolerance']:42}  {r['elapsed_s']:7.1f}s  {r['name']}")
            if r.get("error"):
                lines.append(f"     error: {r['error']}")
    else:
        cols = [c for c in CSV_COLUMNS[subcommand] if c != "index"]
        lines.append("  ".join(cols))
        for r in doc["rows"]:
            lines.append("  ".join(_fmt(r.get(c, "")) for c in cols))
    s = doc["summary"]
    lines.append(f"{s['passed']}/{s['rows']} passed")
    return "\n".join(lines) + "\n"


def _resolve_output(path: str) -> Path:
    out = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not out.is_absolute():
        out = Path(base) / out
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        status, report = run(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = render(report, cfg.output_format, cfg.subcommand)
    if cfg.output_path:
        out = _resolve_output(cfg.output_path)
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text)
        except OSError as exc:
            print(f"configuration error: cannot write {out}: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
