"""JSON-ready views of result objects and CSV output.

Every serializer returns plain dicts built in a fixed key order, so the
encoded text is identical across runs. Floats are left to ``json`` which
writes the shortest decimal that round-trips.
"""

from __future__ import annotations

import io
import json
from typing import Iterable, List, Sequence, Tuple

from . import __version__
from .claims import ClaimReport
from .core import ExpSum, ExpTerm
from .irr import CashFlowSchedule, IrrSolution
from .pairfn import PairFunction, characteristic_point
from .roots import RootReport
from .sync import SplitResult, SyncResult

ARTIFACT = "expsum"


def terms_doc(terms: Iterable[ExpTerm]) -> List[dict]:
    return [{"c": t.coefficient, "t": t.base} for t in terms]


def pair_doc(p: PairFunction) -> dict:
    return {"c_p": p.c_p, "t_p": p.t_p, "c_m": p.c_m, "t_m": p.t_m, "kind": p.kind.value}


def root_report_doc(r: RootReport) -> dict:
    return {
        "roots": list(r.roots),
        "tangential_roots": list(r.tangential_roots),
        "extrema": list(r.extrema),
        "extremum_kinds": list(r.extremum_kinds),
        "inflections": list(r.inflections),
        "sign_change_bound": r.sign_change_bound,
        "window": list(r.window),
        "left_asymptote": r.left_asymptote.value,
        "right_asymptote": r.right_asymptote.value,
    }


def sync_result_doc(r: SyncResult) -> dict:
    j = r.point_kind.order
    rows = []
    for before, after in zip(r.original, r.synchronized):
        rows.append({
            "original": pair_doc(before),
            "individual_point": characteristic_point(before, j),
            "synchronized": pair_doc(after),
        })
    return {
        "point_kind": r.point_kind.name,
        "sync_point": r.sync_point,
        "pairs": rows,
        "residuals": terms_doc(r.residuals),
    }


def split_result_doc(r: SplitResult, unsplit: Sequence[ExpTerm] = ()) -> dict:
    members = []
    for p, shares in zip(r.pairs, r.shares):
        members.append({"pair": pair_doc(p), "shares": terms_doc(shares)})
    return {
        "point_kind": r.point_kind.name,
        "common_point": r.common_point,
        "history": list(r.history),
        "alternatives": list(r.alternatives),
        "members": members,
        "unsplit": terms_doc(unsplit),
    }


def irr_solution_doc(r: IrrSolution) -> dict:
    return {
        "rates": list(r.rates),
        "residuals": list(r.residuals),
        "conventional": r.conventional,
        "sign_change_bound": r.sign_change_bound,
        "multiplicity_note": r.multiplicity_note,
    }


def claim_report_doc(r: ClaimReport) -> dict:
    return {
        "claim": r.claim,
        "instance": terms_doc(r.instance.terms),
        "measured": dict(r.measured),
        "bound": r.bound,
        "violated": r.violated,
        "note": r.note,
    }


def schedule_doc(s: CashFlowSchedule) -> dict:
    return {
        "begin_value": s.begin_value,
        "end_value": s.end_value,
        "horizon": s.horizon,
        "flows": [{"amount": f.amount, "time_remaining": f.time_remaining} for f in s.flows],
    }


def expsum_doc(s: ExpSum) -> dict:
    return {"terms": terms_doc(s.terms)}


def document(command: str, echo: dict, result) -> dict:
    return {"artifact": ARTIFACT, "version": __version__, "command": command, "input": echo, "result": result}


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def format_number(x: float) -> str:
    """Shortest round-trip decimal, without a trailing ``.0`` on integers."""
    text = repr(float(x))
    return text[:-2] if text.endswith(".0") else text


def emit_csv(samples: Iterable[Tuple[float, float]]) -> str:
    out = io.StringIO()
    out.write("k,value\n")
    for k, v in samples:
        out.write(f"{format_number(k)},{format_number(v)}\n")
    return out.getvalue()
