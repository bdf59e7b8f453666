"""Command-line front end.

Exit status: 0 on success, 2 for unreadable or malformed input, 3 when a
computation is infeasible (the library error is printed as is).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from decimal import Decimal
from typing import List, Optional, Sequence

from . import report
from .claims import ClaimConfig, claim_check
from .core import ExpSum, ExpTerm, derivative, evaluate
from .errors import ExpSumError
from .irr import DEFAULT_RATE_WINDOW, CashFlow, CashFlowSchedule, irr_solve
from .roots import DEFAULT_TOL, analyze
from .sync import PointKind, Side, add_strong_terms, split_sum, synchronize_sum

EXIT_OK, EXIT_INPUT, EXIT_MATH = 0, 2, 3
MAX_SAMPLES = 1_000_000
_KEYS = {"terms", "begin_value", "end_value", "horizon", "flows", "window", "tol", "seed"}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _reject_constant(name):
    raise ValueError(f"non-finite literal {name}")


def load_document(path: str) -> dict:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: cannot read input: {exc}") from None
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except (ValueError, RecursionError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: $: expected a JSON object")
    unknown = sorted(set(doc) - _KEYS)
    if unknown:
        raise InputError(f"{path}: $.{unknown[0]}: unknown field")
    if ("terms" in doc) == ("flows" in doc):
        raise InputError(f"{path}: $: exactly one of 'terms' and 'flows' is required")
    return doc


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{where}: expected a number")
    try:
        x = float(value)
    except OverflowError:
        raise InputError(f"{where}: number out of range") from None
    if not math.isfinite(x):
        raise InputError(f"{where}: number must be finite")
    return x


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected an array")
    return value


def _object(value, where: str, keys: Sequence[str]) -> dict:
    if not isinstance(value, dict):
        raise InputError(f"{where}: expected an object")
    for k in keys:
        if k not in value:
            raise InputError(f"{where}.{k}: missing field")
    extra = sorted(set(value) - set(keys))
    if extra:
        raise InputError(f"{where}.{extra[0]}: unknown field")
    return value


def parse_terms(doc: dict) -> ExpSum:
    if "terms" not in doc:
        raise InputError("$.terms: this command needs an exponential sum")
    terms = []
    for i, item in enumerate(_list(doc["terms"], "$.terms")):
        where = f"$.terms[{i}]"
        obj = _object(item, where, ("c", "t"))
        c = _number(obj["c"], where + ".c")
        t = _number(obj["t"], where + ".t")
        if not t > 0:
            raise InputError(f"{where}.t: base must be positive")
        terms.append(ExpTerm(c, t))
    if not terms:
        raise InputError("$.terms: at least one term is required")
    return ExpSum(tuple(terms))


def parse_schedule(doc: dict) -> CashFlowSchedule:
    if "flows" not in doc:
        raise InputError("$.flows: this command needs a cash-flow schedule")
    for key in ("begin_value", "end_value"):
        if key not in doc:
            raise InputError(f"$.{key}: missing field")
    begin = _number(doc["begin_value"], "$.begin_value")
    end = _number(doc["end_value"], "$.end_value")
    if begin < 0:
        raise InputError("$.begin_value: must be nonnegative")
    if end < 0:
        raise InputError("$.end_value: must be nonnegative")
    horizon = None
    if "horizon" in doc:
        horizon = _number(doc["horizon"], "$.horizon")
        if horizon < 0:
            raise InputError("$.horizon: must be nonnegative")
    flows = []
    for i, item in enumerate(_list(doc["flows"], "$.flows")):
        where = f"$.flows[{i}]"
        obj = _object(item, where, ("amount", "time_remaining"))
        amount = _number(obj["amount"], where + ".amount")
        t = _number(obj["time_remaining"], where + ".time_remaining")
        if t < 0:
            raise InputError(f"{where}.time_remaining: must be nonnegative")
        if horizon is not None and t > horizon:
            raise InputError(f"{where}.time_remaining: exceeds the horizon")
        flows.append(CashFlow(amount, t))
    if horizon is None and not flows:
        raise InputError("$.horizon: required when there are no flows")
    return CashFlowSchedule(begin, end, tuple(flows), horizon)


def _doc_window(doc: dict):
    if "window" not in doc:
        return None
    w = _list(doc["window"], "$.window")
    if len(w) != 2:
        raise InputError("$.window: expected [lo, hi]")
    lo, hi = _number(w[0], "$.window[0]"), _number(w[1], "$.window[1]")
    if not lo < hi:
        raise InputError("$.window: lo must be below hi")
    return lo, hi


def _doc_tol(doc: dict) -> float:
    if "tol" not in doc:
        return DEFAULT_TOL
    tol = _number(doc["tol"], "$.tol")
    if not tol > 0:
        raise InputError("$.tol: must be positive")
    return tol


def _doc_seed(doc: dict) -> Optional[int]:
    if "seed" not in doc:
        return None
    seed = doc["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise InputError("$.seed: expected an integer")
    return seed


def parse_window(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise InputError(f"--window: expected lo:hi, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise InputError(f"--window: expected lo:hi, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise InputError(f"--window: need finite lo < hi, got {text!r}")
    return lo, hi


def _finite_arg(text: str) -> float:
    x = float(text)
    if not math.isfinite(x):
        raise ValueError(text)
    return x


def _positive_arg(text: str) -> float:
    x = _finite_arg(text)
    if not x > 0:
        raise ValueError(text)
    return x


def _nonnegative_int(text: str) -> int:
    n = int(text)
    if n < 0:
        raise ValueError(text)
    return n


def _point_arg(text: str) -> PointKind:
    try:
        return PointKind.parse(text)
    except ExpSumError:
        raise ValueError(text) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="expsum", description="Analyze finite sums of exponential functions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="roots, extrema, inflections and asymptotes")
    a.add_argument("input", help="JSON file with a terms list")
    a.add_argument("--window", type=str, help="LO:HI in k; write --window=-2:3 when LO is negative")
    a.add_argument("--tol", type=_positive_arg, help="scaled-value tolerance for tangential roots")

    s = sub.add_parser("sync", help="synchronize pairs at a common characteristic point")
    s.add_argument("input", help="JSON file with a terms list")
    s.add_argument("--point", type=_point_arg, required=True, help="zero, extremum, inflection or dN")
    s.add_argument("--at", type=_finite_arg, help="common point k0; defaults to the outermost individual point")
    s.add_argument("--side", choices=["pi", "mi"], default="pi", help="which coefficient is adjusted")
    s.add_argument("--d", type=_finite_arg, default=0.0, help="amount held back from the strongest coefficient before splitting")

    sp = sub.add_parser("split", help="share one negative term among positive terms")
    sp.add_argument("input", help="JSON file with a terms list")
    sp.add_argument("--point", type=_point_arg, required=True, help="zero, extremum, inflection or dN")
    sp.add_argument("--strong-above", type=_finite_arg, dest="strong_above",
                    help="terms with larger bases are added afterwards as strong terms")

    i = sub.add_parser("irr", help="all internal rates of return of a schedule")
    i.add_argument("input", help="JSON file with a cash flow schedule")
    i.add_argument("--window", type=str, help="LO:HI in the rate R, with LO > -1")
    i.add_argument("--tol", type=_positive_arg, help="scaled-value tolerance for tangential roots")

    c = sub.add_parser("claimcheck", help="measure counts against fixed claimed bounds")
    c.add_argument("--trials", type=int, default=20, help="number of random instances")
    c.add_argument("--seed", type=int, help="overrides EXPSUM_SEED and the document seed")
    c.add_argument("--max-terms", type=int, default=5, dest="max_terms", help="terms per random instance")
    c.add_argument("--k-max", type=int, default=200, dest="k_max", help="last integer k for the series scan")
    c.add_argument("--in", dest="input", help="check the sums in this JSON file instead")

    sa = sub.add_parser("sample", help="tabulate the sum or a derivative as CSV")
    sa.add_argument("input", help="JSON file with a terms list")
    sa.add_argument("--from", type=_finite_arg, required=True, dest="start")
    sa.add_argument("--to", type=_finite_arg, required=True, dest="stop")
    sa.add_argument("--step", type=_positive_arg, required=True)
    sa.add_argument("--derivative", type=_nonnegative_int, default=0, help="derivative order to tabulate")
    return p


def _cmd_analyze(args) -> str:
    doc = load_document(args.input)
    s = parse_terms(doc)
    window = parse_window(args.window) if args.window else _doc_window(doc)
    tol = args.tol if args.tol is not None else _doc_tol(doc)
    rep = analyze(s, window, tol)
    echo = {**report.expsum_doc(s), "window": list(window) if window else None, "tol": tol}
    return report.dumps(report.document("analyze", echo, report.root_report_doc(rep)))


def _cmd_sync(args) -> str:
    s = parse_terms(load_document(args.input))
    side = Side(args.side)
    res = synchronize_sum(s, args.point, k0=args.at, adjust=side, residual_side=side, d=args.d)
    echo = {**report.expsum_doc(s), "point": args.point.name, "at": args.at, "side": side.value, "d": args.d}
    return report.dumps(report.document("sync", echo, report.sync_result_doc(res)))


def _cmd_split(args) -> str:
    s = parse_terms(load_document(args.input))
    cut = args.strong_above
    strong = [t for t in s.terms if cut is not None and t.base > cut]
    weak = ExpSum(tuple(t for t in s.terms if cut is None or t.base <= cut))
    res, unsplit = split_sum(weak, args.point)
    res = add_strong_terms(res, strong, args.point)
    echo = {**report.expsum_doc(s), "point": args.point.name, "strong_above": cut}
    return report.dumps(report.document("split", echo, report.split_result_doc(res, unsplit)))


def _cmd_irr(args) -> str:
    doc = load_document(args.input)
    sched = parse_schedule(doc)
    window = parse_window(args.window) if args.window else (_doc_window(doc) or DEFAULT_RATE_WINDOW)
    tol = args.tol if args.tol is not None else _doc_tol(doc)
    sol = irr_solve(sched, window, tol)
    echo = {**report.schedule_doc(sched), "window": list(window), "tol": tol}
    return report.dumps(report.document("irr", echo, report.irr_solution_doc(sol)))


def _env_seed() -> Optional[int]:
    raw = os.environ.get("EXPSUM_SEED")
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"EXPSUM_SEED: expected an integer, got {raw!r}") from None


def _cmd_claimcheck(args) -> str:
    if args.trials < 1:
        raise InputError("--trials: must be at least 1")
    if args.max_terms < 1:
        raise InputError("--max-terms: must be at least 1")
    if args.k_max < 2:
        raise InputError("--k-max: must be at least 2")
    instances, window, tol, doc_seed = (), None, DEFAULT_TOL, None
    if args.input:
        doc = load_document(args.input)
        instances = (parse_terms(doc),)
        window, tol, doc_seed = _doc_window(doc), _doc_tol(doc), _doc_seed(doc)
    seed = args.seed
    if seed is None:
        seed = _env_seed()
    if seed is None:
        seed = doc_seed if doc_seed is not None else 0
    config = ClaimConfig(trials=args.trials, seed=seed, max_terms=args.max_terms, window=window,
                         k_max=args.k_max, tol=tol, instances=instances)
    reports = claim_check(config)
    echo = {
        "trials": args.trials, "seed": seed, "max_terms": args.max_terms, "k_max": args.k_max,
        "instances": [report.terms_doc(s.terms) for s in instances],
    }
    return report.dumps(report.document("claimcheck", echo, [report.claim_report_doc(r) for r in reports]))


def _cmd_sample(args) -> str:
    s = parse_terms(load_document(args.input))
    if args.stop < args.start:
        raise InputError("--to: must not be below --from")
    start, step = Decimal(repr(args.start)), Decimal(repr(args.step))
    count = int((Decimal(repr(args.stop)) - start) / step) + 1
    if count > MAX_SAMPLES:
        raise InputError(f"--step: more than {MAX_SAMPLES} samples requested")
    d = derivative(s, args.derivative)
    rows = []
    for n in range(count):
        k = float(start + n * step)
        rows.append((k, evaluate(d, k)))
    return report.emit_csv(rows)


COMMANDS = {
    "analyze": _cmd_analyze,
    "sync": _cmd_sync,
    "split": _cmd_split,
    "irr": _cmd_irr,
    "claimcheck": _cmd_claimcheck,
    "sample": _cmd_sample,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"expsum: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ExpSumError, ArithmeticError, ValueError) as exc:
        print(f"expsum: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
