"""Rendering of diagnoses: human-readable text and a stable structured form.

The structured form is a JSON document with fixed key order, rationals as
canonical ``p/q`` strings and infinities as ``+inf``/``-inf``; identical
input produces byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .conditions import Diagnosis
from .engine import ValueReport
from .exactlp import rat_str
from .funcexpr import ExtReal
from .probfile import SetFactsInstance
from .setexpr import FactStatus


def render_extreal(v: Optional[ExtReal]) -> str:
    if v is None:
        return "unknown"
    return repr(v)


def _render_solution(sol) -> Optional[str]:
    if sol is None:
        return None
    if isinstance(sol, str):
        return sol
    if isinstance(sol, tuple):
        return "(" + ", ".join(rat_str(c) for c in sol) + ")"
    return str(sol)


def _values_dict(v: ValueReport) -> dict:
    return {
        "primal": render_extreal(v.vp),
        "primal_attained": v.vp_attained,
        "primal_solution": _render_solution(v.primal_solution),
        "dual": render_extreal(v.vd),
        "dual_attained": v.vd_attained,
        "dual_solution": _render_solution(v.dual_solution),
        "gap": render_extreal(v.gap) if v.gap_applicable else "n/a",
    }


def diagnosis_to_structured(d: Diagnosis) -> dict:
    conditions = []
    provenance = []
    for index, verdict in d.verdicts:
        blocking = verdict.blocking_clause()
        conditions.append(
            {
                "id": f"RC{index}",
                "status": verdict.status.value,
                "blocking_clause": blocking.text if blocking is not None else None,
                "clauses": [
                    {"text": c.text, "status": c.status.value} for c in verdict.clauses
                ],
            }
        )
        for c in verdict.clauses:
            steps = [
                {
                    "rule": s.rule,
                    "detail": s.detail,
                    "cites": [list(x) for x in s.cites if x != ("", "")],
                }
                for s in c.prov
            ]
            if steps:
                provenance.append(
                    {"condition": f"RC{index}", "clause": c.text, "steps": steps}
                )
    doc = {
        "problem": d.instance_id,
        "family": d.family,
        "conditions": conditions,
        "values": _values_dict(d.values),
        "strong_duality": {"verdict": d.strong_duality[0], "detail": d.strong_duality[1]},
        "consistency": {"ok": d.consistency[0], "violations": list(d.consistency[1])},
    }
    if d.reverse_check is not None:
        doc["reverse_check"] = {"ok": d.reverse_check[0], "detail": d.reverse_check[1]}
    doc["provenance"] = provenance
    return doc


def dumps_structured(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=True, sort_keys=False) + "\n"


def diagnosis_to_text(d: Diagnosis) -> str:
    lines = []
    lines.append(f"problem   {d.instance_id}")
    lines.append(f"family    {d.family}")
    lines.append("")
    lines.append("condition  status   blocking clause")
    lines.append("---------  -------  ---------------")
    for index, verdict in d.verdicts:
        blocking = verdict.blocking_clause()
        note = blocking.text if blocking is not None and verdict.status is not FactStatus.HOLDS else ""
        lines.append(f"{('RC' + index):<9}  {verdict.status.value:<7}  {note}")
    lines.append("")
    vals = _values_dict(d.values)
    lines.append(f"primal    {vals['primal']}" + ("  (attained)" if vals["primal_attained"] else ""))
    if vals["primal_solution"]:
        lines.append(f"          solution {vals['primal_solution']}")
    lines.append(f"dual      {vals['dual']}" + ("  (attained)" if vals["dual_attained"] else ""))
    if vals["dual_solution"]:
        lines.append(f"          solution {vals['dual_solution']}")
    lines.append(f"gap       {vals['gap']}")
    lines.append(f"strong duality: {d.strong_duality[0]} ({d.strong_duality[1]})")
    ok, violations = d.consistency
    lines.append("consistency: " + ("pass" if ok else "VIOLATION: " + "; ".join(violations)))
    if d.reverse_check is not None:
        lines.append(
            "reverse check: " + ("pass" if d.reverse_check[0] else "FAIL") + f" ({d.reverse_check[1]})"
        )
    return "\n".join(lines) + "\n"


def setfacts_to_results(instance: SetFactsInstance):
    from .inference import Engine

    engine = Engine()
    out = []
    for q in instance.queries:
        fact = engine.infer(q.notion, q.point, q.sexpr)
        out.append((q, fact))
    return out


def setfacts_to_structured(instance: SetFactsInstance) -> dict:
    results = setfacts_to_results(instance)
    return {
        "problem": instance.instance_id,
        "family": "sets",
        "queries": [
            {
                "query": q.text,
                "status": fact.status.value,
                "steps": [
                    {
                        "rule": s.rule,
                        "detail": s.detail,
                        "cites": [list(x) for x in s.cites if x != ("", "")],
                    }
                    for s in fact.prov
                ],
            }
            for q, fact in results
        ],
    }


def setfacts_to_text(instance: SetFactsInstance) -> str:
    results = setfacts_to_results(instance)
    lines = [f"problem   {instance.instance_id}", "family    sets", ""]
    for q, fact in results:
        lines.append(f"{fact.status.value:<8} {q.text}")
    return "\n".join(lines) + "\n"
