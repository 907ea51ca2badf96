"""Command-line front end: problem files in, traces and reports out.

A problem file is a JSON document:

    {
      "problem": {"catalog": "abs_power", "params": {...}}
               | {"structured": "quadratic", "data": {...}}
               | {"inline": {"name": ..., "partition": [n, m1, m2],
                             "lower": [...], "upper": [...],
                             "g": "<expr>", "ineq": [...], "eq": [...]}},
      "solver": { ... optional solver parameters ... },
      "start":  [ ... optional full start vector ... ]
    }

Expressions use the text grammar, e.g. "(+ (sq (aff x0 1 0)) (neg z0))".
Box bounds use null for an unbounded end.  Every float printed by the CLI
carries 9 significant digits, and a fixed seed makes solve output and trace
files byte-identical across runs.

Exit codes: 0 success, 1 usage or parse errors, 2 infeasible / failed
results.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import catalog as cat
from . import expr as ex
from .audit import GridSpec, identity_audit, load_registry
from .forms import (
    Box,
    FormError,
    SaddleForm,
    SaddlePoint,
    VarPartition,
    WitnessAbsentError,
    WitnessInfeasibleError,
    membership,
    witness_eval,
)
from .solver import (
    InnerParams,
    SolverParams,
    alternating_penalty_solve,
    kkt_residual,
    trace_to_csv,
)


class CliError(Exception):
    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


def _round_floats(obj):
    """Clamp every float to 9 significant digits; non-finite becomes None."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.9g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_round_floats(float(v)) for v in obj]
    if isinstance(obj, (np.floating,)):
        return _round_floats(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _emit(obj) -> None:
    print(json.dumps(_round_floats(obj), sort_keys=True))


def _x_resolver(name: str) -> int:
    if name.startswith("x") and name[1:].isdigit():
        return int(name[1:])
    raise KeyError(name)


_EXPR_FIELDS = ("q", "d", "c", "b")


def load_form(doc: dict) -> SaddleForm:
    prob = doc.get("problem")
    if not isinstance(prob, dict):
        raise CliError("problem file needs a 'problem' object")
    if "catalog" in prob:
        params = dict(prob.get("params", {}))
        for key in _EXPR_FIELDS:
            if key in params and isinstance(params[key], str):
                params[key] = ex.parse_sexpr(params[key], _x_resolver)
        try:
            return cat.make_catalog_form(prob["catalog"], **params)
        except KeyError as err:
            raise CliError(f"unknown catalog id: {err.args[0]}", 1)
    if "structured" in prob:
        data = dict(prob.get("data", {}))
        for key in _EXPR_FIELDS:
            if key in data and isinstance(data[key], str):
                data[key] = ex.parse_sexpr(data[key], _x_resolver)
        try:
            return cat.make_structured(prob["structured"], data)
        except KeyError as err:
            raise CliError(f"unknown structured kind: {err.args[0]}", 1)
    if "inline" in prob:
        return inline_form(prob["inline"])
    raise CliError("'problem' must contain 'catalog', 'structured', or 'inline'")


def inline_form(doc: dict) -> SaddleForm:
    try:
        n, m1, m2 = (int(v) for v in doc["partition"])
    except (KeyError, ValueError, TypeError):
        raise CliError("inline form needs 'partition': [n, m1, m2]")
    part = VarPartition(n, m1, m2)

    def resolve(name: str) -> int:
        return part.index_of(name)

    def bounds(key: str, default: float) -> tuple[float, ...]:
        vals = doc.get(key)
        if vals is None:
            return (default,) * part.total
        if len(vals) != part.total:
            raise CliError(f"'{key}' must have {part.total} entries")
        return tuple(default if v is None else float(v) for v in vals)

    box = Box(bounds("lower", -math.inf), bounds("upper", math.inf))
    g = ex.parse_sexpr(doc["g"], resolve)
    ineq = tuple(ex.parse_sexpr(s, resolve) for s in doc.get("ineq", []))
    eq = tuple(ex.parse_sexpr(s, resolve) for s in doc.get("eq", []))
    window = None
    if "window_lower" in doc or "window_upper" in doc:
        window = Box(bounds("window_lower", -math.inf), bounds("window_upper", math.inf))
    return SaddleForm(
        name=str(doc.get("name", "inline")),
        partition=part,
        box=box,
        g=g,
        ineq=ineq,
        eq=eq,
        window=window,
    )


def form_to_inline(form: SaddleForm) -> dict:
    """Serialize the structural part of a form (round-trips via inline_form)."""
    part = form.partition

    def bounds_or_null(vals):
        return [None if not math.isfinite(v) else v for v in vals]

    doc = {
        "name": form.name,
        "partition": [part.n, part.m1, part.m2],
        "lower": bounds_or_null(form.box.lower),
        "upper": bounds_or_null(form.box.upper),
        "g": ex.to_sexpr(form.g, part.name_of),
        "ineq": [ex.to_sexpr(e, part.name_of) for e in form.ineq],
        "eq": [ex.to_sexpr(e, part.name_of) for e in form.eq],
    }
    if form.window is not None:
        doc["window_lower"] = bounds_or_null(form.window.lower)
        doc["window_upper"] = bounds_or_null(form.window.upper)
    return doc


def load_solver_params(doc: dict) -> SolverParams:
    raw = dict(doc.get("solver", {}))
    inner = InnerParams(**raw.pop("inner", {}))
    try:
        return SolverParams(inner=inner, **raw)
    except (TypeError, ValueError) as err:
        raise CliError(f"bad solver parameters: {err}")


def load_problem_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}")
    except json.JSONDecodeError as err:
        raise CliError(f"parse error in {path}: {err.msg} (line {err.lineno}, column {err.colno})")
    try:
        form = load_form(doc)
    except ex.ParseError as err:
        raise CliError(f"parse error in {path}: {err}")
    except FormError as err:
        raise CliError(f"bad form in {path}: {err}")
    params = load_solver_params(doc)
    start = doc.get("start")
    if start is not None:
        start = np.asarray(start, dtype=float)
        if start.shape != (form.partition.total,):
            raise CliError(
                f"start vector must have length {form.partition.total}, got {start.size}"
            )
    return form, params, start


def _parse_vector(text: str, expected: int, what: str) -> np.ndarray:
    try:
        vals = np.array([float(t) for t in text.split(",") if t.strip() != ""])
    except ValueError:
        raise CliError(f"could not parse {what}: {text!r}")
    if vals.size != expected:
        raise CliError(f"{what} must have {expected} entries, got {vals.size}")
    return vals


# ---------------------------------------------------------------------------
# subcommands


def cmd_solve(args) -> int:
    form, params, start = load_problem_file(args.file)
    result = alternating_penalty_solve(form, params, start=start, seed=args.seed)
    p = result.point
    summary = {
        "form": form.name,
        "status": result.status,
        "x": p.x,
        "y": p.y,
        "z": p.z,
        "f_ref": form.reference(p.x) if form.reference is not None else None,
        "outer_iterations": len(result.trace),
        "rho_final": result.trace[-1].rho if result.trace else None,
        "violation": result.trace[-1].violation if result.trace else None,
        "eps": params.eps,
        "diagnostic": result.diagnostic,
    }
    _emit(summary)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(trace_to_csv(result.trace))
    return 0 if result.converged else 2


def cmd_audit(args) -> int:
    form, _, _ = load_problem_file(args.file)
    if form.reference is None:
        raise CliError("audit needs a problem with a reference evaluator", 2)
    rng = np.random.default_rng(args.seed)
    xs = form.sample_x(rng, args.samples)
    report = identity_audit(form, xs, GridSpec(resolution=args.grid), tol=args.tol)
    registry = load_registry()
    listed = registry.get(form.name)
    _emit(
        {
            "form": report.form,
            "classification": report.classification,
            "counterexample": report.counterexample,
            "samples": len(report.rows),
            "grid_resolution": args.grid,
            "tol": args.tol,
            "registry": listed.classification if listed else None,
            "rows": [
                {
                    "x": r.x,
                    "reference": r.reference,
                    "witness_value": r.witness_value,
                    "witness_feasible": r.witness_feasible,
                    "oracle": r.oracle,
                    "allowance": r.allowance,
                }
                for r in report.rows
            ],
        }
    )
    return 0 if report.classification != "failed" else 2


def cmd_kkt(args) -> int:
    form, _, _ = load_problem_file(args.file)
    p = SaddlePoint(form.partition, _parse_vector(args.point, form.partition.total, "--point"))
    s, r = len(form.ineq), len(form.eq)
    alpha = _parse_vector(args.alpha, s + r, "--alpha") if args.alpha else None
    beta = _parse_vector(args.beta, s + r, "--beta") if args.beta else None
    try:
        report = kkt_residual(form, p, alpha=alpha, beta=beta, feas_tol=args.feas_tol)
    except FormError as err:
        _emit({"form": form.name, "error": str(err)})
        return 2
    _emit(
        {
            "form": form.name,
            "alpha": report.alpha,
            "beta": report.beta,
            "stationarity_residual_xy": report.stationarity_residual_xy,
            "stationarity_residual_z": report.stationarity_residual_z,
            "complementarity_residual": report.complementarity_residual,
            "sign_violation": report.sign_violation,
        }
    )
    return 0


def cmd_witness(args) -> int:
    form, _, _ = load_problem_file(args.file)
    x = _parse_vector(args.x, form.partition.n, "--x")
    try:
        p = witness_eval(form, x, check=True)
    except (WitnessAbsentError, WitnessInfeasibleError) as err:
        _emit({"form": form.name, "error": str(err)})
        return 2
    rep = membership(form, p)
    out = {
        "form": form.name,
        "x": p.x,
        "y": p.y,
        "z": p.z,
        "g_value": form.g.value(p.vec),
        "reference": form.reference(x) if form.reference is not None else None,
        "max_violation": rep.max_violation,
        "feasible": rep.feasible,
    }
    if form.reference is not None:
        out["witness_gap"] = abs(out["g_value"] - out["reference"])
    _emit(out)
    return 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        registry = load_registry()
        for name in cat.list_catalog():
            d = cat.describe(name)
            flag = " [known-issues]" if name in registry else ""
            print(
                f"{name}: {d['summary']}  partition={d['partition']} "
                f"ineq={d['inequalities']} eq={d['equalities']}{flag}"
            )
        return 0
    if args.action == "describe":
        if not args.id:
            raise CliError("catalog describe needs an id")
        try:
            _emit(cat.describe(args.id))
        except KeyError:
            raise CliError(f"unknown catalog id: {args.id}")
        return 0
    raise CliError("catalog action must be 'list' or 'describe'")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="saddlelift", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the alternating penalty solver")
    p.add_argument("file")
    p.add_argument("--trace", help="write the iteration trace CSV here")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("audit", help="grid-oracle audit of the form identities")
    p.add_argument("file")
    p.add_argument("--grid", type=int, default=201, help="grid resolution per axis")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-2)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("kkt", help="stationarity residuals at a point")
    p.add_argument("file")
    p.add_argument("--point", required=True, help="comma-separated full vector")
    p.add_argument("--alpha", help="use these multipliers instead of estimating")
    p.add_argument("--beta", help="use these multipliers instead of estimating")
    p.add_argument("--feas-tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_kkt)

    p = sub.add_parser("witness", help="evaluate and check the witness map")
    p.add_argument("file")
    p.add_argument("--x", required=True, help="comma-separated x vector")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("catalog", help="list or describe catalog entries")
    p.add_argument("action", choices=["list", "describe"])
    p.add_argument("id", nargs="?")
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code
    except ex.ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
