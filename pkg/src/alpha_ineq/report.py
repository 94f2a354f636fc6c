"""Deterministic JSON and CSV serialization of suite reports and certificates.

Reals are written with 17 significant digits and keys in a fixed order, so
two runs with identical inputs produce identical bytes apart from
``runtime_ms``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from typing import Any, Iterable

from .catalog import (
    Bernoulli,
    Case,
    ConjugatePair,
    ExponentTuple,
    FormVariant,
    Multi,
    NaryYoung,
    Paired,
    Radon,
    TolerancePolicy,
    Verdict,
    Young,
)
from .certifier import EqualityCertificate
from .core import Dimension
from .errors import UsageError
from .harness import SuiteReport

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_ERROR = 2


def format_real(v: float) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def dumps(obj: Any, indent: int | None = 2, _level: int = 0) -> str:
    """JSON text with 17-significant-digit reals; dict order is preserved.

    ``indent=None`` gives the compact single-line form.
    """
    if obj is None or isinstance(obj, (bool, int, float)):
        return "null" if obj is None else format_real(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        parts = [(json.dumps(str(k)), v) for k, v in obj.items()]
    elif isinstance(obj, (list, tuple)):
        parts = [(None, v) for v in obj]
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    opening, closing = ("{", "}") if isinstance(obj, dict) else ("[", "]")
    if not parts:
        return opening + closing
    flat = indent is None or all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for _, v in parts
    )
    sep = ":" if indent is None else ": "
    items = [(f"{k}{sep}" if k is not None else "") + dumps(v, indent, _level + 1) for k, v in parts]
    if flat:
        return opening + (", " if indent is not None else ",").join(items) + closing
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    return opening + "\n" + ",\n".join(pad + item for item in items) + "\n" + end + closing


# ---------------------------------------------------------------------------
# cases


def instance_to_dict(inst) -> dict:
    if isinstance(inst, Bernoulli):
        return {"y": inst.y, "m": inst.m}
    if isinstance(inst, Young):
        return {"a": inst.a, "b": inst.b}
    if isinstance(inst, NaryYoung):
        return {"a": list(inst.a)}
    if isinstance(inst, Radon):
        return {"x": list(inst.x), "y": list(inst.y), "r": inst.r}
    if isinstance(inst, Paired):
        return {"x": list(inst.x), "y": list(inst.y)}
    if isinstance(inst, Multi):
        return {"x": [list(row) for row in inst.x]}
    raise TypeError(f"unknown instance type {type(inst).__name__}")


def exponent_to_dict(case: Case) -> dict:
    e = case.exponent
    if isinstance(e, ConjugatePair):
        out = {"p": e.p, "q": e.q}
    elif isinstance(e, ExponentTuple):
        out = {"exponents": list(e.exponents)}
    elif e is None:
        out = {}
    else:
        out = {"p": e}
    if case.r is not None:
        out["r"] = case.r
    return out


def case_to_dict(case: Case) -> dict:
    return {
        "inequality": case.ineq,
        "variant": case.variant.value,
        "alpha": case.dim.alpha,
        "exponent": exponent_to_dict(case),
        "instance": instance_to_dict(case.instance),
    }


def case_from_dict(data: dict) -> Case:
    """Inverse of :func:`case_to_dict`."""
    ineq = data["inequality"]
    dim = Dimension(data["alpha"])
    e = data.get("exponent", {})
    i = data["instance"]
    if ineq == "bernoulli":
        inst = Bernoulli(i["y"], i["m"], dim)
    elif ineq == "young":
        inst = Young(i["a"], i["b"], dim)
    elif ineq == "nary_young":
        inst = NaryYoung(tuple(i["a"]), dim)
    elif ineq == "radon":
        inst = Radon(tuple(i["x"]), tuple(i["y"]), i["r"], dim)
    elif ineq in ("holder", "minkowski"):
        inst = Paired(tuple(i["x"]), tuple(i["y"]), dim)
    else:
        inst = Multi(tuple(tuple(row) for row in i["x"]), dim)
    if "exponents" in e:
        exponent = ExponentTuple(tuple(e["exponents"]))
    elif "q" in e:
        exponent = ConjugatePair(e["p"], e["q"])
    elif "p" in e:
        exponent = float(e["p"])
    else:
        exponent = None
    return Case(ineq, inst, exponent, FormVariant(data.get("variant", "normalized")), r=e.get("r") if ineq == "radon_multi" else None)


def verdict_to_dict(v: Verdict) -> dict:
    return {"lhs": v.lhs, "rhs": v.rhs, "gap": v.gap, "direction": v.direction,
            "status": v.status.value, "scale": v.scale}


# ---------------------------------------------------------------------------
# reports


def _tolerance(tol: TolerancePolicy) -> dict:
    return {"rel": tol.tol_rel, "eq": tol.tol_eq}


def _results(r: SuiteReport) -> dict:
    worst = None
    if r.worst_case is not None:
        worst = {**case_to_dict(r.worst_case), "trial": r.worst_index, "verdict": verdict_to_dict(r.worst_verdict)}
    return {
        "holds": r.holds,
        "equality": r.equality,
        "violations": r.violations,
        "min_gap": r.min_gap,
        "first_violation": r.first_violation,
        "worst_instance": worst,
    }


def suite_status(r: SuiteReport) -> str:
    return "verified" if r.violations == 0 else "violated"


def suite_to_dict(r: SuiteReport) -> dict:
    return {
        "inequality": r.ineq,
        "variant": r.variant.value,
        "regime": r.regime.value,
        "alpha_policy": r.alpha_policy,
        "trials": r.trials,
        "tolerance": _tolerance(r.tolerance),
        "seed": r.seed,
        "results": _results(r),
        "status": suite_status(r),
        "runtime_ms": r.runtime_ms,
    }


def sweep_to_dict(reports: list) -> dict:
    first = reports[0]
    rows = []
    for r in reports:
        rows.append({"alpha": r.alpha_policy["value"], "results": _results(r),
                     "status": suite_status(r), "runtime_ms": r.runtime_ms})
    return {
        "inequality": first.ineq,
        "variant": first.variant.value,
        "regime": first.regime.value,
        "alpha_policy": {"kind": "grid", "values": [r.alpha_policy["value"] for r in reports]},
        "trials": first.trials,
        "tolerance": _tolerance(first.tolerance),
        "seed": first.seed,
        "rows": rows,
        "runtime_ms": sum(r.runtime_ms for r in reports),
    }


def certificate_to_dict(c: EqualityCertificate, extra: dict | None = None) -> dict:
    out = {
        "inequality": c.ineq,
        "variant": c.variant,
        "params": c.params,
        "results": {
            "converged": c.converged,
            "consistent": c.consistent,
            "gap_at_argmin": c.gap_at_argmin,
            "scale": c.scale,
            "condition_residual": c.condition_residual,
            "evaluations": c.evaluations,
            "restarts": c.restarts,
            "best_restart": c.best_restart,
            "argmin": instance_to_dict(c.argmin.instance),
        },
    }
    if extra:
        out["results"].update(extra)
    return out


def counterexample_to_dict(r: SuiteReport, shrunk: Case | None, shrunk_verdict: Verdict | None,
                           sizes: tuple | None) -> dict:
    out = suite_to_dict(r)
    runtime = out.pop("runtime_ms")
    if shrunk is None:
        out["counterexample"] = None
    else:
        out["counterexample"] = {
            **case_to_dict(shrunk),
            "verdict": verdict_to_dict(shrunk_verdict),
            "size_before": sizes[0],
            "size_after": sizes[1],
        }
    out["runtime_ms"] = runtime
    return out


def exit_code(report) -> int:
    if isinstance(report, EqualityCertificate):
        return EXIT_OK if (report.converged and report.consistent) else EXIT_FINDING
    if isinstance(report, SuiteReport):
        return EXIT_OK if report.violations == 0 else EXIT_FINDING
    if isinstance(report, list):
        return EXIT_OK if all(r.violations == 0 for r in report) else EXIT_FINDING
    raise TypeError(f"no exit-code rule for {type(report).__name__}")


# ---------------------------------------------------------------------------
# CSV

SUITE_COLUMNS = ("inequality", "variant", "regime", "alpha_policy", "alpha", "trials", "tol_rel",
                 "tol_eq", "seed", "holds", "equality", "violations", "min_gap", "first_violation",
                 "status", "worst_instance", "runtime_ms")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return format_real(v)
    if isinstance(v, (dict, list)):
        return dumps(v, indent=None)
    return str(v)


def suite_rows(reports: Iterable[SuiteReport]) -> list:
    rows = []
    for r in reports:
        res = _results(r)
        rows.append({
            "inequality": r.ineq,
            "variant": r.variant.value,
            "regime": r.regime.value,
            "alpha_policy": r.alpha_policy["kind"],
            "alpha": r.alpha_policy.get("value"),
            "trials": r.trials,
            "tol_rel": r.tolerance.tol_rel,
            "tol_eq": r.tolerance.tol_eq,
            "seed": r.seed,
            "holds": r.holds,
            "equality": r.equality,
            "violations": r.violations,
            "min_gap": r.min_gap,
            "first_violation": r.first_violation,
            "status": suite_status(r),
            "worst_instance": res["worst_instance"],
            "runtime_ms": r.runtime_ms,
        })
    return rows


def _flatten(obj: dict, prefix: str = "", out: dict | None = None) -> dict:
    out = {} if out is None else out
    for k, v in obj.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict) and k != "argmin":
            _flatten(v, key + ".", out)
        else:
            out[key] = v
    return out


def to_csv(rows: list, columns: Iterable[str] | None = None) -> str:
    columns = list(columns or rows[0].keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def render(payload: dict, rows: list | None, fmt: str) -> str:
    if fmt == "json":
        return dumps(payload) + "\n"
    if fmt == "csv":
        if rows is None:
            rows = [_flatten(payload)]
        return to_csv(rows)
    raise UsageError(f"unknown format {fmt!r}")


def emit_report(report, fmt: str = "json", path: str | None = None, extra: dict | None = None) -> int:
    """Serialize ``report`` to ``path`` (stdout for ``None`` or ``-``) and return the exit code.

    ``report`` is a :class:`SuiteReport`, a list of them (an alpha sweep) or an
    :class:`EqualityCertificate`.  Returns 2 if the destination cannot be
    written.
    """
    rows = None
    if isinstance(report, SuiteReport):
        payload = suite_to_dict(report)
        rows = suite_rows([report])
    elif isinstance(report, list):
        payload = sweep_to_dict(report)
        rows = suite_rows(report)
    elif isinstance(report, EqualityCertificate):
        payload = certificate_to_dict(report, extra)
    else:
        raise TypeError(f"cannot emit {type(report).__name__}")
    status = write_text(render(payload, rows, fmt), path)
    if status != EXIT_OK:
        return status
    return exit_code(report)


def write_text(text: str, path: str | None) -> int:
    """Write ``text``; returns 0 on success and 2 on an I/O error (reported on stderr)."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK
