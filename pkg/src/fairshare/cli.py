"""Command-line front end.

    fairshare allocate  --rule th --theta 1 --kind good --values 1,3
    fairshare evaluate  problem.json --rule bh
    fairshare optimal   problem.json
    fairshare worstcase --rule th --theta 1 --n 2 --kind good --mode both
    fairshare simulate  --dist uniform:0,1 --rule th --kind good --n 200
    fairshare instance  hard-bad --n 3

Exit codes: 0 ok, 2 bad input, 3 rule/kind mismatch, 4 Fair Share
violated, 5 LP solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import asymptotics as asy
from .core import DiscreteProblem, ObjectKind, normalize_problem, validate_problem
from .errors import FairDivisionError, Infeasible, IterationLimit, RuleKindMismatch, Unbounded
from .fairness import FS_TOL, verify_fair_share
from .opt import optimal_fair_rule, unconstrained_optimum
from .rules import RuleId, RuleName, allocate
from . import worstcase as wc

EXIT_OK, EXIT_PARSE, EXIT_MISMATCH, EXIT_FS, EXIT_SOLVER = 0, 2, 3, 4, 5


class InputError(Exception):
    pass


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".12g")
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if not math.isfinite(v) else float(format(v, ".12g"))
    return v


# problem files ----------------------------------------------------------------

def problem_from_json(text: str) -> DiscreteProblem:
    try:
        doc = json.loads(text)
        kind = ObjectKind(doc["kind"])
        states = [(float(s["prob"]), [float(v) for v in s["values"]]) for s in doc["states"]]
        labels = doc.get("agents")
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed problem file: {exc}") from exc
    try:
        return validate_problem(DiscreteProblem.from_states(kind, states, labels))
    except FairDivisionError as exc:
        raise InputError(f"invalid problem: {exc}") from exc


def problem_to_json(p: DiscreteProblem) -> str:
    doc = {"kind": p.kind.value}
    if p.labels is not None:
        doc["agents"] = list(p.labels)
    doc["states"] = [{"prob": float(q), "values": [float(v) for v in row]}
                     for q, row in zip(p.probs, p.values)]
    return json.dumps(doc, indent=2)


def _read_problem(path: str) -> DiscreteProblem:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc
    return problem_from_json(text)


# argument helpers -------------------------------------------------------------

def _rule(args) -> RuleId:
    name = RuleName(args.rule)
    if name is RuleName.TOP_HEAVY:
        return RuleId.top_heavy(1.0 if args.theta is None else args.theta)
    if name is RuleName.BOTTOM_HEAVY_THETA:
        return RuleId.bottom_heavy(1.0 if args.theta is None else args.theta)
    return RuleId(name)


def _values(text: str) -> np.ndarray:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse values {text!r}") from exc
    if len(vals) < 2 or any(not math.isfinite(v) or v < 0 for v in vals):
        raise InputError("values must be at least two nonnegative numbers")
    return np.array(vals)


def parse_dist(spec: str) -> asy.Distribution1D:
    name, _, params = spec.partition(":")
    try:
        nums = [float(t) for t in params.split(",")] if params else []
        if name == "uniform" and len(nums) == 2:
            return asy.uniform(*nums)
        if name == "exp" and not nums:
            return asy.exponential()
        if name == "poly32" and not nums:
            return asy.poly32()
        if name == "power" and len(nums) == 1:
            return asy.power_law(nums[0])
        if name == "atom" and nums and len(nums) % 2 == 0:
            return asy.point_masses(nums[1::2], nums[0::2])
    except ValueError as exc:
        raise InputError(f"bad distribution {spec!r}: {exc}") from exc
    raise InputError(f"unknown distribution {spec!r}")


# rendering --------------------------------------------------------------------

def render(report: dict, fmt_name: str, out) -> None:
    """Scalars print as key/value rows; list-of-dict entries print as tables."""
    if fmt_name == "json":
        out.write(json.dumps(_jsonable(report), indent=2) + "\n")
        return
    scalars = {k: v for k, v in report.items() if not _is_table(v)}
    tables = {k: v for k, v in report.items() if _is_table(v)}
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for k, v in scalars.items():
            w.writerow([k] + _cells(v))
        for k, rows in tables.items():
            w.writerow([k])
            w.writerow(list(rows[0]))
            for row in rows:
                w.writerow([_cell(x) for x in row.values()])
        out.write(buf.getvalue())
        return
    width = max((len(k) for k in scalars), default=0)
    for k, v in scalars.items():
        out.write(f"{k.ljust(width)}  {' '.join(_cells(v))}\n")
    for k, rows in tables.items():
        out.write(f"\n{k}\n")
        head = list(rows[0])
        body = [[_cell(x) for x in row.values()] for row in rows]
        widths = [max(len(h), *(len(r[j]) for r in body)) for j, h in enumerate(head)]
        out.write("  ".join(h.ljust(w) for h, w in zip(head, widths)).rstrip() + "\n")
        for r in body:
            out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def _is_table(v) -> bool:
    return isinstance(v, list) and v and all(isinstance(r, dict) for r in v)


def _cell(x) -> str:
    if isinstance(x, (list, tuple, np.ndarray)):
        return " ".join(fmt(y) for y in x)
    return fmt(x)


def _cells(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return [fmt(y) for y in v]
    return [fmt(v)]


# commands ---------------------------------------------------------------------

def cmd_allocate(args, out):
    rule = _rule(args)
    shares = allocate(rule, _values(args.values), args.kind)
    if args.format == "table":
        out.write(" ".join(fmt(s) for s in shares) + "\n")
    else:
        render({"shares": shares}, args.format, out)
    return EXIT_OK


def cmd_evaluate(args, out):
    p = _read_problem(args.problem)
    rule = _rule(args)
    rep = verify_fair_share(p, rule, args.tol)
    labels = p.labels or tuple(str(i) for i in range(p.n))
    means = p.means()
    same_mean = bool(np.all(means == means[0]))
    rows = []
    for i in range(p.n):
        row = {"agent": labels[i], "normalized": rep.per_agent[i]}
        if same_mean:
            row["absolute"] = rep.absolute[i]
        row["margin"] = rep.fs_margin[i]
        row["fair_share"] = "OK" if rep.fs_ok[i] else "VIOLATED"
        rows.append(row)
    report = {"rule": rule.label, "kind": p.kind.value, "social_value": rep.social_value}
    if same_mean:
        report["social_value_absolute"] = rep.social_value * means[0]
    report["fair_share"] = "OK" if rep.fair else "VIOLATED"
    report["agents"] = rows
    render(report, args.format, out)
    return EXIT_OK if rep.fair else EXIT_FS


def cmd_optimal(args, out):
    p = _read_problem(args.problem)
    rule, value = optimal_fair_rule(p)
    rep = verify_fair_share(p, rule, FS_TOL)
    means = p.means()
    same_mean = bool(np.all(means == means[0]))
    labels = p.labels or tuple(str(i) for i in range(p.n))
    report = {"kind": p.kind.value, "objective": value}
    if same_mean:
        report["objective_absolute"] = value * means[0]
    report["unconstrained"] = unconstrained_optimum(p)
    if same_mean:
        report["unconstrained_absolute"] = report["unconstrained"] * means[0]
    report["states"] = [
        {"state": k, "prob": float(q), **{f"share_{labels[i]}": rule.allocations[k, i] for i in range(p.n)}}
        for k, q in enumerate(p.probs)
    ]
    report["agents"] = [
        {"agent": labels[i], "normalized": rep.per_agent[i], "margin": rep.fs_margin[i]}
        for i in range(p.n)
    ]
    render(report, args.format, out)
    return EXIT_OK


def cmd_worstcase(args, out):
    rule = _rule(args)
    kind = ObjectKind(args.kind)
    rule.check(kind)
    if args.n < 2:
        raise InputError("n must be at least 2")
    report = {"rule": rule.label, "kind": kind.value, "n": args.n}
    closed = None
    if args.mode in ("closed-form", "both"):
        if rule.name is RuleName.TOP_HEAVY:
            closed = wc.cr_closed_form_top_heavy(args.n, rule.theta)
        elif rule.name is RuleName.PROPORTIONAL:
            closed = wc.cr_closed_form_proportional(args.n, kind)
        elif rule.name is RuleName.EQUAL_SPLIT and kind is ObjectKind.GOOD:
            closed = float(args.n)
        elif rule.name is RuleName.EQUAL_SPLIT:
            closed = math.inf
        if rule.name is RuleName.BOTTOM_HEAVY:
            report["bounds"] = list(wc.cr_bounds_bottom_heavy(args.n))
        elif closed is None:
            raise InputError(f"no closed form for rule {rule.label}")
        else:
            report["closed_form"] = closed
    if args.mode in ("search", "both"):
        res = wc.cr_search(rule, args.n, kind, args.restarts, args.seed)
        report["search"] = res.value
        report["witness"] = res.witness
        report["seed"] = args.seed
        report["restarts"] = args.restarts
        if closed is not None and math.isfinite(closed):
            report["delta"] = abs(res.value - closed) / closed
    render(report, args.format, out)
    return EXIT_OK


def _formula(d, rule, kind, n):
    if kind is ObjectKind.GOOD and rule.name is RuleName.TOP_HEAVY:
        return asy.pi_th_limit_good(d, rule.theta, n)
    if kind is ObjectKind.GOOD and rule.name is RuleName.PROPORTIONAL:
        return asy.pi_pro_limit_good(d, n)
    if kind is ObjectKind.BAD and rule.name is RuleName.BOTTOM_HEAVY:
        return asy.pi_bh_limit_bad(d, n)
    if kind is ObjectKind.BAD and rule.name is RuleName.PROPORTIONAL:
        return asy.pi_pro_limit_bad(d, n)
    return None


def cmd_simulate(args, out):
    d = parse_dist(args.dist)
    rule = _rule(args)
    kind = ObjectKind(args.kind)
    rule.check(kind)
    if args.n < 2 or args.samples < 1:
        raise InputError("need n >= 2 and samples >= 1")
    est = asy.monte_carlo_pi(d, rule, kind, args.n, args.samples, args.seed, args.workers)
    report = {
        "dist": d.name, "rule": rule.label, "kind": kind.value, "n": args.n,
        "samples": est.samples, "seed": est.seed, "estimate": est.mean, "std_error": est.std_error,
    }
    for key, n in (("limit", math.inf), ("formula_at_n", args.n)):
        try:
            val = _formula(d, rule, kind, n)
        except FairDivisionError:
            val = None
        if val is None:
            continue
        report[key] = val
        if est.std_error > 0 and math.isfinite(val):
            report[f"z_{key}"] = (est.mean - val) / est.std_error
    render(report, args.format, out)
    return EXIT_OK


def cmd_instance(args, out):
    if args.family == "hard-good":
        p = wc.hard_instance_good(args.n, args.m if args.m is not None else max(1, round(math.sqrt(args.n))))
    else:
        p = wc.hard_instance_bad(args.n)
    if args.normalize:
        p = normalize_problem(p)
    out.write(problem_to_json(p) + "\n")
    return EXIT_OK


# parser -----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _add_rule(p, kinds=True):
    p.add_argument("--rule", required=True, choices=[r.value for r in RuleName])
    p.add_argument("--theta", type=float, default=None)
    if kinds:
        p.add_argument("--kind", required=True, choices=[k.value for k in ObjectKind])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairshare", description="Fair division of a random good or bad.")
    parser.add_argument("--format", choices=["table", "csv", "json"], default="table")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("allocate", help="divide one realized profile")
    _add_rule(p)
    p.add_argument("--values", required=True)
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("evaluate", help="expected (dis)utilities and Fair Share check")
    p.add_argument("problem")
    _add_rule(p, kinds=False)
    p.add_argument("--tol", type=float, default=FS_TOL)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("optimal", help="optimal fair prior-dependent rule via LP")
    p.add_argument("problem")
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("worstcase", help="worst-case efficiency ratio")
    _add_rule(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["search", "closed-form", "both"], default="both")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1000)
    p.set_defaults(func=cmd_worstcase)

    p = sub.add_parser("simulate", help="Monte Carlo efficiency ratio under an i.i.d. prior")
    p.add_argument("--dist", required=True)
    _add_rule(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("instance", help="emit a hard instance as a problem file")
    p.add_argument("family", choices=["hard-good", "hard-bad"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(func=cmd_instance)
    return parser


def _split_format(argv):
    """Accept --format anywhere on the command line."""
    argv = list(argv)
    fmt_name = None
    rest = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "--format" and i + 1 < len(argv):
            fmt_name = argv[i + 1]
            i += 2
            continue
        if a.startswith("--format="):
            fmt_name = a.split("=", 1)[1]
            i += 1
            continue
        rest.append(a)
        i += 1
    return (["--format", fmt_name] if fmt_name else []) + rest


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(_split_format(argv))
        return args.func(args, out)
    except RuleKindMismatch as exc:
        err.write(f"error: {exc}\n")
        return EXIT_MISMATCH
    except (Infeasible, Unbounded, IterationLimit) as exc:
        err.write(f"error: solver failed: {exc}\n")
        return EXIT_SOLVER
    except (InputError, FairDivisionError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
