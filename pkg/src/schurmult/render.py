"""Text and JSON renderings of results, trees and reports."""

from __future__ import annotations

import json


def _bracketed(items):
    items = list(items)
    return "[ " + ", ".join(items) + " ]" if items else "[ ]"


def _p_power(e):
    return "p" if e == 1 else f"p^{e}"


def result_text(res):
    if res.symbolic:
        text = (f"norm := {_bracketed(_p_power(e) for e in res.norm)}, "
                f"pseudounits := {_bracketed(str(u) for u in res.pseudo_units)}")
    else:
        text = f"norm := {_bracketed(str(d) for d in res.norm)}"
    if res.budget_exceeded:
        text += f"\nbudget exceeded (partial result): {res.diagnostic}"
    elif not res.valid:
        text += f"\ninvalid: {res.diagnostic}"
    return text


def result_data(res):
    data = {
        "norm": list(res.norm),
        "pseudo_units": [str(u) for u in res.pseudo_units],
        "budget_exceeded": res.budget_exceeded,
    }
    if res.symbolic:
        data["norm_kind"] = "exponents"
    else:
        data["norm_kind"] = "integers"
        data["prime"] = res.prime
    if res.exceeded:
        data["exceeded"] = res.exceeded
    if not res.valid:
        data["valid"] = False
    if res.diagnostic:
        data["diagnostic"] = res.diagnostic
    if res.bad_primes:
        data["bad_primes"] = list(res.bad_primes)
    return data


def tree_text(tree):
    lines = []

    def visit(node, depth):
        pad = "  " * depth
        if node.infeasible:
            lines.append(f"{pad}{node.label}: N/A")
            return
        lines.append(f"{pad}{node.label}: {result_text(node.result).splitlines()[0]}")
        if node.result.budget_exceeded:
            lines.append(f"{pad}  BUDGET EXCEEDED: {node.result.diagnostic}")
        for f in node.unresolved:
            lines.append(f"{pad}  UNRESOLVED: {f}")
        for child in node.children:
            visit(child, depth + 1)

    visit(tree, 0)
    return "\n".join(lines)


def tree_data(node):
    data = {
        "substitutions": [[k, str(v)] for k, v in node.chain],
        "label": node.label,
        "infeasible": node.infeasible,
    }
    if node.result is not None:
        data["result"] = result_data(node.result)
    data["unresolved"] = [str(f) for f in node.unresolved]
    data["children"] = [tree_data(c) for c in node.children]
    return data


def _assign_text(assign):
    return ",".join(f"{k}={v}" for k, v in assign.items()) or "-"


def verify_text(report):
    s = report.summary
    lines = [f"{report.name}: " + ", ".join(f"{k} {v}" for k, v in s.items())]
    for prime, exhaustive in sorted(report.exhaustive.items()):
        n = sum(1 for r in report.records if r.prime == prime)
        lines.append(f"  p={prime}: {n} tuples ({'exhaustive' if exhaustive else 'sampled'})")
    for r in report.records:
        if r.status == "match":
            continue
        line = f"  {r.status.upper()} p={r.prime} {_assign_text(r.assignment)}"
        if r.concrete is not None:
            line += f" concrete={list(r.concrete)}"
        if r.symbolic is not None:
            line += f" symbolic={list(r.symbolic)} at {r.node}"
        lines.append(line)
    return "\n".join(lines)


def verify_data(report):
    return {
        "name": report.name,
        "summary": report.summary,
        "exhaustive": {str(k): v for k, v in sorted(report.exhaustive.items())},
        "records": [
            {"prime": r.prime, "assignment": r.assignment, "status": r.status,
             "concrete": None if r.concrete is None else list(r.concrete),
             "symbolic": None if r.symbolic is None else list(r.symbolic),
             "node": r.node}
            for r in report.records
        ],
    }


def consistency_text(rep):
    if rep.ok:
        tag = f" (probabilistic, {rep.samples} samples)" if rep.probabilistic else ""
        return "consistent" + tag
    lines = ["inconsistent" + (" (probabilistic)" if rep.probabilistic else "")]
    for v in rep.violations:
        kind, idx, left, right = v[:4]
        where = "" if len(v) == 4 else f" at p={v[4]} {_assign_text(v[5])}"
        lines.append(f"  {kind} {list(idx)}: {list(left)} != {list(right)}{where}")
    return "\n".join(lines)


def consistency_data(rep):
    return {
        "ok": rep.ok,
        "probabilistic": rep.probabilistic,
        "violations": [
            {"kind": v[0], "indices": list(v[1]), "left": list(v[2]), "right": list(v[3]),
             **({"prime": v[4], "assignment": v[5]} if len(v) > 4 else {})}
            for v in rep.violations
        ],
    }


def dumps(data):
    return json.dumps(data, indent=2, sort_keys=True)


def render(obj, fmt="text"):
    """Render any result object of this package as text or JSON."""
    from .casesplit import CaseTree
    from .presentation import ConsistencyReport
    from .smith import SchurResult
    from .verify import VerifyReport

    table = {
        SchurResult: (result_text, result_data),
        CaseTree: (tree_text, tree_data),
        VerifyReport: (verify_text, verify_data),
        ConsistencyReport: (consistency_text, consistency_data),
    }
    text_fn, data_fn = table[type(obj)]
    return text_fn(obj) if fmt == "text" else dumps(data_fn(obj))
