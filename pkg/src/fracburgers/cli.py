"""Command-line entry point.

Exit codes: 0 success (or audit finished), 1 an asserted check failed,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, checks, lie, numfrac, subspace, verify
from .errors import FracBurgersError
from .fracpoly import expr as E
from .fracpoly import rules
from .fracpoly.family import CoeffFamily, FracOrders
from .fracpoly.parser import _RAW_VARS, parse_tree, tree_to_powersum
from .fracpoly.powersum import frac_primitive_power, mrl_derivative_power
from .report import to_csv, to_json
from .solutions import SOLUTION_IDS, make_solution

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# built-in defaults; argparse defaults stay None so a config file can fill gaps
DEFAULTS = {
    "alpha": 1.0,
    "beta": 1.0,
    "cf": 1.0,
    "nu": 0.0,
    "k": 1.0,
    "out": None,
    "tol": None,
    "assert_zero": False,
}


class UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser, fmt_default: str = "json"):
    p.add_argument("--config", help="key=value file; flags override its entries")
    p.add_argument("--alpha", type=float, help="time order in (0, 1] (default 1)")
    p.add_argument("--beta", type=float, help="space order in (0, 1] (default 1)")
    p.add_argument("--cf", type=float, help="f(t) = cf * t^nu (default 1)")
    p.add_argument("--nu", type=float, help="time exponent of f and g (default 0)")
    p.add_argument("--k", type=float, help="ratio g/f (default 1)")
    p.add_argument("--format", choices=("json", "csv"), help=f"report format (default {fmt_default})")
    p.add_argument("--out", help="output path (default standard output)")
    p.set_defaults(_fmt_default=fmt_default)


def _add_gate(p):
    p.add_argument("--assert-zero", dest="assert_zero", action="store_true", default=None,
                   help="exit 1 when the residual exceeds --tol")
    p.add_argument("--tol", type=float, help="threshold for --assert-zero (1e-8 canonical, 1e-3 numeric)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fracburgers", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, helptext in (("derivative", "fractional derivative of an expression"),
                           ("integral", "fractional integral of an expression")):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        p.add_argument("--expr", help="expression in x and t, e.g. 'x^1.5 + t'")
        p.add_argument("--order", type=float, help="operator order")
        p.add_argument("--var", choices=("x", "t"), help="variable (default x)")
        p.add_argument("--method", choices=("power", "numeric"), help="power rule or quadrature")
        p.add_argument("--points", help="comma-separated evaluation points (default 0.5,1,2)")
        p.add_argument("--at", type=float, help="value of the other variable (default 1)")

    p = sub.add_parser("rules-audit", help="check the fractional calculus rules on sample sums")
    _add_common(p)

    p = sub.add_parser("bracket-table", help="commutator table audit against the printed one")
    _add_common(p, fmt_default="csv")

    p = sub.add_parser("determining", help="residuals of the determining equations")
    _add_common(p)
    _add_gate(p)
    for i in range(1, 7):
        p.add_argument(f"--a{i}", type=float, help=f"parameter a{i} (default 1)")
    p.add_argument("--npoints", type=int, help="random sample points (default 100)")
    p.add_argument("--seed", type=int, help="sampling seed (default 42)")
    p.add_argument("--time", choices=lie.TIME_SEMANTICS, help="time derivative reading (default power)")

    p = sub.add_parser("flows", help="integrated flows against the printed group maps")
    _add_common(p)
    p.add_argument("--index", type=int, help="generator 1..6 (default all)")
    p.add_argument("--epsilon", type=float, help="group parameter (default 0.3)")

    p = sub.add_parser("transform", help="push a catalog solution through a flow")
    _add_common(p)
    _add_gate(p)
    _add_solution(p)
    p.add_argument("--index", type=int, help="generator 1..6")
    p.add_argument("--epsilon", type=float, help="group parameter (default 0.3)")

    p = sub.add_parser("verify", help="PDE residual of a catalog solution")
    _add_common(p)
    _add_gate(p)
    _add_solution(p)
    p.add_argument("--mode", help="canonical | power | numeric | all (default canonical)")
    p.add_argument("--grid", help="x0:x1:nx,t0:t1:nt (default 0.5:2:30,0.5:2:30)")
    p.add_argument("--second", choices=verify.SECOND_CHOICES,
                   help="u_x^(2b) as D^b applied twice (composed, default) or one operator (single)")

    p = sub.add_parser("subspace", help="invariant subspace solution and audit")
    _add_common(p)
    _add_gate(p)
    p.add_argument("--s1", type=float, help="default 1")
    p.add_argument("--B0", type=float, help="amplitude, default 0")
    p.add_argument("--s3", type=float, help="default 0")
    p.add_argument("--system", choices=subspace.SYSTEMS, help="coefficient system (default printed)")
    p.add_argument("--grid", help="x0:x1:nx,t0:t1:nt")

    p = sub.add_parser("selftest", help="run the embedded acceptance checks")
    p.add_argument("--filter", help="group name (e.g. lie) or substring of check names")
    p.add_argument("--config", help=argparse.SUPPRESS)
    ap.set_defaults(_subparsers=sub.choices)
    return ap


def _add_solution(p):
    p.add_argument("--solution", help=f"one of {', '.join(SOLUTION_IDS)}")
    p.add_argument("--param", action="append", help="solution parameter name=value (repeatable)")
    p.add_argument("--s1", type=float, help=argparse.SUPPRESS)
    p.add_argument("--B0", type=float, help=argparse.SUPPRESS)
    p.add_argument("--s3", type=float, help=argparse.SUPPRESS)
    p.add_argument("--system", choices=subspace.SYSTEMS, help=argparse.SUPPRESS)


# ------------------------------------------------------------------ config


def read_config(path: str) -> dict:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _merge(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the config file, then from built-in defaults."""
    known = {a.dest: a for a in args._subparsers[args.command]._actions}
    conf = read_config(args.config) if getattr(args, "config", None) else {}
    for key, raw in conf.items():
        if key not in known or key in ("config", "help") or key.startswith("_"):
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        if getattr(args, key) is not None:
            continue
        action = known[key]
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        elif isinstance(action, argparse._AppendAction):
            value = [s.strip() for s in raw.split(",") if s.strip()]
        else:
            try:
                value = action.type(raw) if action.type else raw
            except ValueError as exc:
                raise UsageError(f"bad value for {key}: {raw!r}") from exc
            if action.choices and value not in action.choices:
                raise UsageError(f"{key} must be one of {list(action.choices)}")
        setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    if getattr(args, "format", "json") is None:
        args.format = args._fmt_default
    return args


def _v(args, key, default):
    value = getattr(args, key, None)
    return default if value is None else value


def _orders(args) -> FracOrders:
    return FracOrders(args.alpha, args.beta)


def _family(args) -> CoeffFamily:
    return CoeffFamily(args.cf, args.nu, args.k)


def _emit(data: bytes, args) -> None:
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _render(obj, args) -> bytes:
    return verify.render_report(obj, args.format)


# ---------------------------------------------------------------- commands


def _points(args):
    text = _v(args, "points", "0.5,1,2")
    try:
        return np.array([float(s) for s in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad --points {text!r}") from exc


def cmd_operator(args, integral: bool) -> int:
    if args.expr is None or args.order is None:
        raise UsageError("--expr and --order are required")
    var = _v(args, "var", "x")
    method = _v(args, "method", "power")
    other = _v(args, "at", 1.0)
    pts = _points(args)
    tree = parse_tree(args.expr)
    data = {"expr": args.expr, "order": args.order, "var": var, "method": method}
    if method == "power":
        p = tree_to_powersum(tree, _RAW_VARS)
        op = frac_primitive_power if integral else mrl_derivative_power
        res = op(p, args.order, var)
        data["result"] = str(res)
        xs, ts = (pts, other) if var == "x" else (other, pts)
        vals = np.asarray(res.evaluate(xs, ts), dtype=float) * np.ones_like(pts)
    else:
        if var == "x":
            fn = lambda y: E.evaluate(tree, {"x": y, "t": other})  # noqa: E731
        else:
            fn = lambda y: E.evaluate(tree, {"t": y, "x": other})  # noqa: E731
        op = numfrac.rl_integral_num if integral else numfrac.mrl_derivative_any
        vals = np.asarray(op(fn, args.order, pts), dtype=float)
    data["points"] = pts
    data["values"] = vals
    if args.format == "csv":
        out = to_csv([var, "value"], zip(pts.tolist(), vals.tolist()))
    else:
        out = to_json(data)
    _emit(out, args)
    return EXIT_OK


def cmd_rules(args) -> int:
    o = _orders(args)
    rep = rules.audit_jumarie_rules(o, rules.default_samples(o))
    _emit(_render(rep, args), args)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_brackets(args) -> int:
    gens = lie.standard_generators(_family(args), _orders(args))
    audit = lie.bracket_table_audit(gens, strict=False)
    _emit(_render(audit, args), args)
    return EXIT_OK


def _gate(args, value: float, numeric: bool) -> int:
    if not args.assert_zero:
        return EXIT_OK
    tol = args.tol if args.tol is not None else (1e-3 if numeric else 1e-8)
    return EXIT_OK if value <= tol else EXIT_FAIL


def cmd_determining(args) -> int:
    fam = lie.InfinitesimalFamily(*(_v(args, f"a{i}", 1.0) for i in range(1, 7)))
    rng = np.random.default_rng(_v(args, "seed", 42))
    n = _v(args, "npoints", 100)
    pts = np.column_stack([rng.uniform(0.5, 2, n), rng.uniform(0.5, 2, n), rng.uniform(-1, 1, n)])
    time = _v(args, "time", "power")
    data = {"alpha": args.alpha, "beta": args.beta, "time": time,
            "parameters": [fam.a1, fam.a2, fam.a3, fam.a4, fam.a5, fam.a6], "points": n}
    try:
        res = lie.check_determining(fam, _family(args), _orders(args), pts, time)
    except FracBurgersError as exc:
        data["error"] = f"{type(exc).__name__}: {exc}"
        _emit(_render(data, args), args)
        return EXIT_FAIL
    data["residuals"] = res
    data["maxAbs"] = max(res.values())
    if args.format == "csv":
        _emit(to_csv(["equation", "maxAbs"], sorted(res.items())), args)
    else:
        _emit(to_json(data), args)
    return _gate(args, data["maxAbs"], numeric=False)


def cmd_flows(args) -> int:
    fam, o = _family(args), _orders(args)
    eps = _v(args, "epsilon", 0.3)
    idx = [args.index] if args.index else list(range(1, 7))
    rows = []
    for i in idx:
        if not 1 <= i <= 6:
            raise UsageError("--index must be 1..6")
        flow = lie.exponentiate_flow(i, eps, fam, o)
        rows.append({
            "index": i,
            "X": str(flow.x_expr),
            "T": str(flow.t_expr),
            "shift": str(flow.shift),
            "groupLawDefect": lie.group_law_defect(i, eps, 0.5 * eps, fam, o),
            "tangentDefect": lie.tangent_defect(i, fam, o),
            "printedDeviation": lie.flow_deviation(i, eps, fam, o),
        })
    if args.format == "csv":
        keys = ["index", "X", "T", "shift", "groupLawDefect", "tangentDefect", "printedDeviation"]
        _emit(to_csv(keys, [[r[k] for k in keys] for r in rows]), args)
    else:
        _emit(to_json({"alpha": o.alpha, "beta": o.beta, "epsilon": eps, "flows": rows}), args)
    return EXIT_OK


def _solution(args):
    sid = _v(args, "solution", None)
    if sid is None:
        raise UsageError("--solution is required")
    fam, o = _family(args), _orders(args)
    if sid == "subspace":
        s = subspace.solve_coefficient_system(
            fam, o, _v(args, "s1", 1.0), _v(args, "B0", 0.0), _v(args, "s3", 0.0),
            _v(args, "system", "printed"))
        return subspace.assemble_subspace_solution(s)
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise UsageError(f"--param expects name=value, got {item!r}")
        key, value = item.split("=", 1)
        try:
            params[key.strip()] = float(value)
        except ValueError as exc:
            raise UsageError(f"bad value in --param {item!r}") from exc
    try:
        return make_solution(sid, params, fam, o)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _grid(args):
    text = _v(args, "grid", None)
    return verify.GridSpec.parse(text) if text else verify.GridSpec()


def cmd_transform(args) -> int:
    if args.index is None:
        raise UsageError("--index is required")
    sol = _solution(args)
    flow = lie.exponentiate_flow(args.index, _v(args, "epsilon", 0.3), sol.family, sol.orders)
    new = lie.transform_solution(sol.expr, flow, sol.family, sol.orders)
    moved = type(sol)(sol.id, sol.params, sol.family, sol.orders, new)
    rep = verify.pde_residual(moved, "canonical", verify.GridSpec())
    data = {"solutionId": sol.id, "index": args.index, "epsilon": flow.epsilon,
            "original": str(sol.expr), "transformed": str(new),
            "canonicalMaxAbs": rep.maxAbs}
    _emit(_render(data, args), args)
    return _gate(args, rep.maxAbs, numeric=False)


def cmd_verify(args) -> int:
    sol = _solution(args)
    grid = _grid(args)
    mode_text = _v(args, "mode", "canonical")
    if mode_text == "all":
        rep = verify.semantics_discrepancy(sol, grid)
        _emit(_render(rep, args), args)
        return EXIT_OK if (rep.consistent or not args.assert_zero) else EXIT_FAIL
    try:
        mode = verify.SemanticsMode.parse(mode_text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = verify.pde_residual(sol, mode, grid, _v(args, "second", "composed"))
    _emit(_render(rep, args), args)
    return _gate(args, rep.maxAbs, numeric=mode is verify.SemanticsMode.NUMERIC_MRL)


def cmd_subspace(args) -> int:
    fam, o = _family(args), _orders(args)
    s = subspace.solve_coefficient_system(
        fam, o, _v(args, "s1", 1.0), _v(args, "B0", 0.0), _v(args, "s3", 0.0),
        _v(args, "system", "printed"))
    sol = subspace.assemble_subspace_solution(s)
    rep = verify.pde_residual(sol, "canonical", _grid(args))
    # x^(2b) mismatch left by the printed identification, for c = 1 at t = 1
    w = subspace.check_w3_invariance(0.0, 0.0, 1.0, fam, o)
    data = {
        "system": s.system,
        "a": str(s.a),
        "b": str(s.b),
        "c": str(s.c),
        "u": str(sol.expr),
        "odeResidualChain": subspace.coefficient_ode_residuals(s),
        "odeResidualNumeric": subspace.coefficient_ode_residuals(s, semantics="numeric"),
        "canonicalMaxAbs": rep.maxAbs,
        "offBasisRemainderUnitC": str(w.offBasisRemainder),
        "offBasisCoefficientUnitC": w.remainder_coefficient(),
    }
    _emit(_render(data, args), args)
    return _gate(args, rep.maxAbs, numeric=False)


def cmd_selftest(args) -> int:
    results = checks.run_checks(args.filter)
    if not results:
        raise UsageError(f"no checks match {args.filter!r}")
    for r in results:
        print(r.line())
    failed = sum(not r.ok for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


COMMANDS = {
    "derivative": lambda a: cmd_operator(a, integral=False),
    "integral": lambda a: cmd_operator(a, integral=True),
    "rules-audit": cmd_rules,
    "bracket-table": cmd_brackets,
    "determining": cmd_determining,
    "flows": cmd_flows,
    "transform": cmd_transform,
    "verify": cmd_verify,
    "subspace": cmd_subspace,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command != "selftest":
            args = _merge(args)
        elif args.config:
            raise UsageError("selftest takes no config file")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"fracburgers: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FracBurgersError as exc:
        print(f"fracburgers: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
