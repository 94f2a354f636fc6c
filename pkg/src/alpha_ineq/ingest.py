"""CSV instance files.

Layouts, one header row each:

* ``bernoulli``: columns ``y,m``; ``young``: ``a,b``;
  ``nary_young``: ``a1..an`` -- one instance per row;
* ``holder``/``minkowski``: ``x1..xn,y1..yn``; ``radon`` adds an optional
  ``r`` column -- one instance per row;
* matrix forms: ``x1..xm``, one matrix row per line, with an optional
  leading ``instance`` column grouping lines into several matrices.
"""

from __future__ import annotations

import csv
import math
import re
from typing import Iterable

from .catalog import (
    INEQUALITIES,
    Bernoulli,
    Case,
    Multi,
    NaryYoung,
    Paired,
    Radon,
    Young,
    normalize_id,
)
from .core import Dimension
from .errors import AlphaIneqError, IngestionError

__all__ = ["load_instances", "write_instances"]

_INDEXED = re.compile(r"^([a-z]+)(\d+)$")


def _number(text: str, line: int, column: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise IngestionError(f"column {column!r}: {text!r} is not a number", line) from None
    if not math.isfinite(v):
        raise IngestionError(f"column {column!r}: {text!r} is not finite", line)
    return v


def _indexed(header: list, letter: str) -> list:
    """Positions of ``letter1..letterN`` in ``header``, ordered by index."""
    found = {}
    for pos, name in enumerate(header):
        m = _INDEXED.match(name)
        if m and m.group(1) == letter:
            found[int(m.group(2))] = pos
    if sorted(found) != list(range(1, len(found) + 1)):
        raise IngestionError(f"columns {letter}1..{letter}N must be numbered consecutively", 1)
    return [found[k] for k in sorted(found)]


def _read(path: str) -> tuple:
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise IngestionError(f"cannot open {path}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        rows = []
        header = None
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            cells = [cell.strip() for cell in row]
            if header is None:
                header = [c.lower() for c in cells]
                continue
            rows.append((reader.line_num, cells))
    if header is None:
        raise IngestionError(f"{path} is empty")
    if not rows:
        raise IngestionError(f"{path} has a header but no data rows", 1)
    return header, rows


def _field(header: list, cells: list, name: str, line: int) -> float:
    try:
        pos = header.index(name)
    except ValueError:
        raise IngestionError(f"missing column {name!r}", 1) from None
    return _number(cells[pos], line, name)


def load_instances(
    path: str,
    ineq: str,
    dim: Dimension | float = 1.0,
    r: float | None = None,
    template: Case | None = None,
) -> list:
    """Parse ``path`` into instances of the type ``ineq`` expects.

    ``r`` fills Radon instances whose file has no ``r`` column.  When a
    ``template`` case is given, each instance is also evaluated with the
    template's exponents, so pole and regime problems are reported with the
    offending line number.
    """
    ineq = normalize_id(ineq)
    dim = dim if isinstance(dim, Dimension) else Dimension(dim)
    kind = INEQUALITIES[ineq].instance_type
    header, rows = _read(path)
    out = []
    lines = []

    def build(line: int, make):
        try:
            inst = make()
        except IngestionError:
            raise
        except AlphaIneqError as exc:
            raise IngestionError(str(exc), line) from None
        out.append(inst)
        lines.append(line)

    for line, cells in rows:
        if len(cells) != len(header):
            raise IngestionError(f"expected {len(header)} fields, found {len(cells)}", line)

    if kind is Multi:
        cols = _indexed(header, "x")
        if not cols:
            raise IngestionError("matrix files need columns x1..xm", 1)
        groups: dict = {}
        first_line: dict = {}
        for line, cells in rows:
            key = cells[header.index("instance")] if "instance" in header else ""
            groups.setdefault(key, []).append(tuple(_number(cells[c], line, header[c]) for c in cols))
            first_line.setdefault(key, line)
            _check_nonnegative(groups[key][-1], line)
        for key, matrix in groups.items():
            build(first_line[key], lambda m=matrix: Multi(tuple(m), dim))
    else:
        for line, cells in rows:
            if kind is Bernoulli:
                build(line, lambda: Bernoulli(_field(header, cells, "y", line), _field(header, cells, "m", line), dim))
                continue
            if kind is Young:
                vals = (_field(header, cells, "a", line), _field(header, cells, "b", line))
                _check_nonnegative(vals, line)
                build(line, lambda: Young(*vals, dim))
                continue
            if kind is NaryYoung:
                vals = tuple(_number(cells[c], line, header[c]) for c in _indexed(header, "a"))
                _check_nonnegative(vals, line)
                build(line, lambda: NaryYoung(vals, dim))
                continue
            xs = tuple(_number(cells[c], line, header[c]) for c in _indexed(header, "x"))
            ys = tuple(_number(cells[c], line, header[c]) for c in _indexed(header, "y"))
            _check_nonnegative(xs + ys, line)
            if kind is Radon:
                rr = _field(header, cells, "r", line) if "r" in header else r
                if rr is None:
                    raise IngestionError("Radon instances need an r column or an explicit r", line)
                build(line, lambda: Radon(xs, ys, rr, dim))
            else:
                build(line, lambda: Paired(xs, ys, dim))

    if template is not None:
        for inst, line in zip(out, lines):
            try:
                template.with_instance(inst).evaluate()
            except AlphaIneqError as exc:
                raise IngestionError(str(exc), line) from None
    return out


def _check_nonnegative(values: Iterable[float], line: int) -> None:
    for v in values:
        if v < 0:
            raise IngestionError(f"negative magnitude {v!r}", line)


def _fmt(v: float) -> str:
    return repr(float(v))


def write_instances(path: str, instances: list) -> None:
    """Write ``instances`` (all of one type) in the layout :func:`load_instances` reads."""
    if not instances:
        raise ValueError("nothing to write")
    first = instances[0]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if isinstance(first, Bernoulli):
            w.writerow(["y", "m"])
            w.writerows([_fmt(i.y), _fmt(i.m)] for i in instances)
        elif isinstance(first, Young):
            w.writerow(["a", "b"])
            w.writerows([_fmt(i.a), _fmt(i.b)] for i in instances)
        elif isinstance(first, NaryYoung):
            w.writerow([f"a{k + 1}" for k in range(len(first.a))])
            w.writerows([_fmt(v) for v in i.a] for i in instances)
        elif isinstance(first, Multi):
            w.writerow(["instance"] + [f"x{k + 1}" for k in range(first.m)])
            for idx, inst in enumerate(instances):
                w.writerows([str(idx)] + [_fmt(v) for v in row] for row in inst.x)
        else:
            n = first.n
            head = [f"x{k + 1}" for k in range(n)] + [f"y{k + 1}" for k in range(n)]
            radon = isinstance(first, Radon)
            w.writerow(head + (["r"] if radon else []))
            for inst in instances:
                w.writerow([_fmt(v) for v in inst.x + inst.y] + ([_fmt(inst.r)] if radon else []))
