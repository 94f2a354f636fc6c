"""Signed-gap evaluators for the fractal Young, Hölder, Minkowski and Radon families.

Every evaluator uses value semantics: a token ``x^alpha`` is the real number
``|x| ** alpha`` and the sums, quotients and coefficients around it are plain
real arithmetic.  Under that reading each inequality at dimension alpha is the
classical one applied to ``u = x ** alpha``; :func:`classical_reduce` performs
that substitution and is the oracle the test suite checks against.

Power sums are accumulated in the log domain, so reverse-regime exponents close
to 0 or large negative conjugates do not overflow intermediate terms.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence, Union

from .core import Dimension
from .errors import DomainError, PoleError, RangeError, RegimeError, ShapeError, UsageError

__all__ = [
    "Regime",
    "FormVariant",
    "Status",
    "TolerancePolicy",
    "DEFAULT_TOLERANCE",
    "ConjugatePair",
    "ExponentTuple",
    "Bernoulli",
    "Young",
    "NaryYoung",
    "Paired",
    "Multi",
    "Radon",
    "Verdict",
    "Case",
    "INEQUALITIES",
    "eval_bernoulli",
    "eval_young",
    "eval_nary_young",
    "eval_holder",
    "eval_minkowski",
    "eval_holder_multi",
    "eval_minkowski_multi",
    "eval_radon",
    "eval_radon_multi",
    "classical_reduce",
    "normalize_id",
    "DegenerateRegimeWarning",
]

CONJUGACY_TOL = 1e-12
MAX_MAGNITUDE = 1e6
LE = "<="
GE = ">="


class Regime(str, enum.Enum):
    HOLDER = "holder"
    REVERSE = "reverse"


class FormVariant(str, enum.Enum):
    NORMALIZED = "normalized"
    AS_WRITTEN = "as_written"


class Status(str, enum.Enum):
    HOLDS = "holds"
    EQUALITY = "equality"
    VIOLATION = "violation"


class DegenerateRegimeWarning(UserWarning):
    """Exponent at a regime boundary; the instance is checked for equality only."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Relative tolerances applied to ``scale = max(|lhs|, |rhs|, 1)``.

    ``abs_floor`` is the smallest absolute slack ever granted.
    """

    tol_rel: float = 1e-9
    tol_eq: float = 1e-8
    abs_floor: float = 1e-12

    def __post_init__(self):
        if not (0 < self.abs_floor <= self.tol_rel <= self.tol_eq < 1):
            raise UsageError(
                "tolerances must satisfy 0 < abs_floor <= tol_rel <= tol_eq < 1, got "
                f"{self.abs_floor}, {self.tol_rel}, {self.tol_eq}"
            )


DEFAULT_TOLERANCE = TolerancePolicy()


# ---------------------------------------------------------------------------
# exponent parameters


def _regime_of(p: float) -> Regime:
    if p > 1:
        return Regime.HOLDER
    if 0 < p < 1:
        return Regime.REVERSE
    raise RegimeError(f"exponent p={p!r} is in neither the Hölder (p > 1) nor the reverse (0 < p < 1) regime")


@dataclass(frozen=True)
class ConjugatePair:
    """Exponents with ``1/p + 1/q = 1``; ``q`` is derived from ``p`` when omitted."""

    p: float
    q: float = None  # type: ignore[assignment]
    regime: Regime = field(init=False)

    def __post_init__(self):
        p = float(self.p)
        if not math.isfinite(p):
            raise RegimeError(f"p must be finite, got {p!r}")
        regime = _regime_of(p)
        q = p / (p - 1.0) if self.q is None else float(self.q)
        if not math.isfinite(q) or q == 0:
            raise RegimeError(f"q must be finite and nonzero, got {q!r}")
        if abs(1.0 / p + 1.0 / q - 1.0) > CONJUGACY_TOL:
            raise RegimeError(f"1/p + 1/q = {1.0 / p + 1.0 / q!r} differs from 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "regime", regime)

    @classmethod
    def from_q(cls, q: float) -> "ConjugatePair":
        q = float(q)
        if q == 1 or q == 0:
            raise RegimeError(f"q={q!r} has no finite conjugate")
        return cls(q / (q - 1.0), q)

    def as_tuple(self) -> "ExponentTuple":
        return ExponentTuple((self.p, self.q))


@dataclass(frozen=True)
class ExponentTuple:
    """Exponents ``p_1..p_n`` with reciprocals summing to one.

    Hölder regime: every ``p_i > 1``.  Reverse regime: ``0 < p_1 < 1`` and
    ``p_i < 0`` for the rest.
    """

    exponents: tuple
    regime: Regime = field(init=False)

    def __post_init__(self):
        ps = tuple(float(p) for p in self.exponents)
        if len(ps) < 2:
            raise ShapeError("an exponent tuple needs at least two entries")
        if not all(math.isfinite(p) and p != 0 for p in ps):
            raise RegimeError(f"exponents must be finite and nonzero: {ps!r}")
        total = math.fsum(1.0 / p for p in ps)
        if abs(total - 1.0) > CONJUGACY_TOL:
            raise RegimeError(f"reciprocals sum to {total!r}, not 1")
        if all(p > 1 for p in ps):
            regime = Regime.HOLDER
        elif 0 < ps[0] < 1 and all(p < 0 for p in ps[1:]):
            regime = Regime.REVERSE
        else:
            raise RegimeError(
                f"exponents {ps!r} fit neither regime (all > 1, or 0 < p_1 < 1 with the rest negative)"
            )
        object.__setattr__(self, "exponents", ps)
        object.__setattr__(self, "regime", regime)

    def __len__(self) -> int:
        return len(self.exponents)


# ---------------------------------------------------------------------------
# instances


def _magnitudes(values, what: str) -> tuple:
    out = []
    for v in values:
        v = float(v)
        if not math.isfinite(v) or v < 0:
            raise DomainError(f"{what} entries must be finite and nonnegative, got {v!r}")
        out.append(v)
    return tuple(out)


def _check_range(values: Sequence[float]) -> None:
    for v in values:
        if v > MAX_MAGNITUDE:
            raise RangeError(f"magnitude {v!r} exceeds the supported maximum {MAX_MAGNITUDE:g}")


def _dim(dim) -> Dimension:
    return dim if isinstance(dim, Dimension) else Dimension(dim)


@dataclass(frozen=True)
class Bernoulli:
    y: float
    m: float
    dim: Dimension = Dimension(1.0)

    def __post_init__(self):
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "m", float(self.m))
        object.__setattr__(self, "dim", _dim(self.dim))
        if not (math.isfinite(self.y) and self.y > 0):
            raise DomainError(f"Bernoulli needs y > 0, got {self.y!r}")
        if not math.isfinite(self.m):
            raise DomainError(f"Bernoulli needs a finite m, got {self.m!r}")

    def magnitudes(self) -> list:
        return [self.y]

    def with_magnitudes(self, values) -> "Bernoulli":
        (y,) = values
        return replace(self, y=y)


@dataclass(frozen=True)
class Young:
    a: float
    b: float
    dim: Dimension = Dimension(1.0)

    def __post_init__(self):
        a, b = _magnitudes((self.a, self.b), "Young")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "dim", _dim(self.dim))

    def magnitudes(self) -> list:
        return [self.a, self.b]

    def with_magnitudes(self, values) -> "Young":
        a, b = values
        return replace(self, a=a, b=b)


@dataclass(frozen=True)
class NaryYoung:
    a: tuple
    dim: Dimension = Dimension(1.0)

    def __post_init__(self):
        object.__setattr__(self, "a", _magnitudes(self.a, "n-ary Young"))
        object.__setattr__(self, "dim", _dim(self.dim))
        if not self.a:
            raise ShapeError("n-ary Young needs at least one entry")

    def magnitudes(self) -> list:
        return list(self.a)

    def with_magnitudes(self, values) -> "NaryYoung":
        return replace(self, a=tuple(values))


@dataclass(frozen=True)
class Paired:
    x: tuple
    y: tuple
    dim: Dimension = Dimension(1.0)

    def __post_init__(self):
        object.__setattr__(self, "x", _magnitudes(self.x, "x"))
        object.__setattr__(self, "y", _magnitudes(self.y, "y"))
        object.__setattr__(self, "dim", _dim(self.dim))
        if len(self.x) != len(self.y):
            raise ShapeError(f"x has {len(self.x)} entries but y has {len(self.y)}")
        if not self.x:
            raise ShapeError("paired vectors must be nonempty")

    @property
    def n(self) -> int:
        return len(self.x)

    def magnitudes(self) -> list:
        return list(self.x) + list(self.y)

    def with_magnitudes(self, values) -> "Paired":
        values = list(values)
        n = len(values) // 2
        return replace(self, x=tuple(values[:n]), y=tuple(values[n:]))


@dataclass(frozen=True)
class Multi:
    """An ``n x m`` matrix: row ``i`` holds the ``i``-th terms of the ``m`` sequences."""

    x: tuple
    dim: Dimension = Dimension(1.0)

    def __post_init__(self):
        rows = tuple(_magnitudes(row, "matrix") for row in self.x)
        if not rows or not rows[0]:
            raise ShapeError("matrix must have at least one row and one column")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ShapeError("matrix rows have different lengths")
        object.__setattr__(self, "x", rows)
        object.__setattr__(self, "dim", _dim(self.dim))

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def m(self) -> int:
        return len(self.x[0])

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.x)

    def magnitudes(self) -> list:
        return [v for row in self.x for v in row]

    def with_magnitudes(self, values) -> "Multi":
        values = list(values)
        m = self.m
        return replace(self, x=tuple(tuple(values[i : i + m]) for i in range(0, len(values), m)))


@dataclass(frozen=True)
class Radon:
    x: tuple
    y: tuple
    r: float
    dim: Dimension = Dimension(1.0)

    def __post_init__(self):
        object.__setattr__(self, "x", _magnitudes(self.x, "x"))
        object.__setattr__(self, "y", _magnitudes(self.y, "y"))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "dim", _dim(self.dim))
        if len(self.x) != len(self.y):
            raise ShapeError(f"x has {len(self.x)} entries but y has {len(self.y)}")
        if not self.x:
            raise ShapeError("paired vectors must be nonempty")
        if not any(self.x) or not any(self.y):
            raise DomainError("each Radon sequence needs a strictly positive entry")

    @property
    def n(self) -> int:
        return len(self.x)

    def magnitudes(self) -> list:
        return list(self.x) + list(self.y)

    def with_magnitudes(self, values) -> "Radon":
        values = list(values)
        n = len(values) // 2
        return replace(self, x=tuple(values[:n]), y=tuple(values[n:]))


Instance = Union[Bernoulli, Young, NaryYoung, Paired, Multi, Radon]


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    """Outcome of one evaluation.

    ``gap`` is the claimed-larger side minus the claimed-smaller side, so a
    nonnegative gap means the inequality holds whatever its direction.
    """

    lhs: float
    rhs: float
    gap: float
    direction: str
    status: Status
    scale: float

    @property
    def relative_gap(self) -> float:
        return self.gap / self.scale


def _verdict(lhs: float, rhs: float, direction: str, tol: TolerancePolicy, equality_only: bool = False) -> Verdict:
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        raise RangeError(f"non-finite sides lhs={lhs!r}, rhs={rhs!r}")
    gap = rhs - lhs if direction == LE else lhs - rhs
    scale = max(abs(lhs), abs(rhs), 1.0)
    if abs(gap) <= max(tol.tol_eq * scale, tol.abs_floor):
        status = Status.EQUALITY
    elif not equality_only and gap >= -max(tol.tol_rel * scale, tol.abs_floor):
        status = Status.HOLDS
    else:
        status = Status.VIOLATION
    return Verdict(lhs, rhs, gap, direction, status, scale)


# ---------------------------------------------------------------------------
# log-domain helpers

_NEG_INF = -math.inf


def _log(t: float) -> float:
    return math.log(t) if t > 0 else _NEG_INF


def _exp(v: float) -> float:
    try:
        return math.exp(v)
    except OverflowError:
        raise RangeError(f"exp({v!r}) overflows") from None


def _lse(values: Sequence[float]) -> float:
    top = max(values)
    if top == _NEG_INF:
        return _NEG_INF
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


def _log_power_sum(logs: Sequence[float], s: float) -> float:
    """``ln sum_i t_i**s`` given ``ln t_i``; zero entries need ``s > 0``."""
    if s < 0 and _NEG_INF in logs:
        raise PoleError(f"zero entry raised to negative exponent {s!r}")
    return _lse([s * v for v in logs])


def _log_norm(logs: Sequence[float], s: float) -> float:
    """``ln (sum_i t_i**s) ** (1/s)``."""
    return _log_power_sum(logs, s) / s


def _log_ratio_mean(logs: Sequence[float], p: float, r: float) -> float:
    """``ln (sum t**p / sum t**r) ** (1/(p-r))``."""
    num = _log_power_sum(logs, p)
    den = _log_power_sum(logs, r)
    if den == _NEG_INF:
        raise PoleError("power-sum ratio of an all-zero sequence")
    return (num - den) / (p - r)


def _value_logs(values: Sequence[float], alpha: float) -> list:
    """``ln(t ** alpha)`` for each magnitude ``t``."""
    _check_range(values)
    return [alpha * _log(t) for t in values]


def _term(t: float, e: float, alpha: float) -> float:
    """``t ** (e * alpha)``, with zero to a negative power as a pole."""
    if t == 0:
        if e < 0:
            raise PoleError(f"0 raised to negative exponent {e * alpha!r}")
        return 0.0
    return _exp(e * alpha * math.log(t))


# ---------------------------------------------------------------------------
# evaluators


def eval_bernoulli(inst: Bernoulli, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Verdict:
    """Fractal Bernoulli inequality.

    ``y^(alpha m) - 1`` against ``m (y - 1)^alpha``: at most for ``0 < m < 1``,
    at least for ``m > 1``.  ``m`` in {0, 1} is a boundary case, checked for
    equality with a :class:`DegenerateRegimeWarning`.
    """
    y, m, alpha = inst.y, inst.m, inst.dim.alpha
    if y <= 0:
        raise DomainError(f"Bernoulli needs y > 0, got {y!r}")
    _check_range([y])
    if m < 0:
        raise RegimeError(f"Bernoulli exponent m={m!r} is negative")
    lhs = math.pow(y, alpha * m) - 1.0
    d = y - 1.0
    rhs = m * math.copysign(abs(d) ** alpha, d) if d else 0.0
    if m in (0.0, 1.0):
        warnings.warn(
            f"Bernoulli exponent m={m!r} is a regime boundary; checking equality only",
            DegenerateRegimeWarning,
            stacklevel=2,
        )
        return _verdict(lhs, rhs, LE, tol, equality_only=True)
    return _verdict(lhs, rhs, LE if m < 1 else GE, tol)


def _direction(regime: Regime) -> str:
    return LE if regime is Regime.HOLDER else GE


def eval_young(inst: Young, pair: ConjugatePair, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Verdict:
    """``a^alpha b^alpha`` against ``a^(p alpha)/p + b^(q alpha)/q``."""
    alpha = inst.dim.alpha
    _check_range([inst.a, inst.b])
    lhs = _exp(alpha * (_log(inst.a) + _log(inst.b))) if inst.a and inst.b else 0.0
    rhs = _term(inst.a, pair.p, alpha) / pair.p + _term(inst.b, pair.q, alpha) / pair.q
    return _verdict(lhs, rhs, _direction(pair.regime), tol)


def eval_nary_young(inst: NaryYoung, exps: ExponentTuple, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Verdict:
    """``prod a_i^alpha`` against ``sum a_i^(p_i alpha) / p_i``."""
    if len(inst.a) != len(exps):
        raise ShapeError(f"{len(inst.a)} magnitudes but {len(exps)} exponents")
    alpha = inst.dim.alpha
    _check_range(inst.a)
    terms = [_term(a, p, alpha) / p for a, p in zip(inst.a, exps.exponents)]
    lhs = 0.0 if 0.0 in inst.a else _exp(alpha * math.fsum(math.log(a) for a in inst.a))
    return _verdict(lhs, math.fsum(terms), _direction(exps.regime), tol)


def eval_holder(inst: Paired, pair: ConjugatePair, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Verdict:
    """``sum |x_i|^alpha |y_i|^alpha`` against the product of the ``p``- and ``q``-norms."""
    alpha = inst.dim.alpha
    lx = _value_logs(inst.x, alpha)
    ly = _value_logs(inst.y, alpha)
    lhs = math.fsum(_exp(a + b) for a, b in zip(lx, ly) if a != _NEG_INF and b != _NEG_INF)
    rhs = _exp(_log_norm(lx, pair.p) + _log_norm(ly, pair.q))
    return _verdict(lhs, rhs, _direction(pair.regime), tol)


def _sum_logs(la: Sequence[float], lb: Sequence[float]) -> list:
    return [_lse((a, b)) for a, b in zip(la, lb)]


def eval_minkowski(
    inst: Paired,
    p: float,
    variant: FormVariant = FormVariant.NORMALIZED,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Verdict:
    """``p``-norm of ``|x_i|^alpha + |y_i|^alpha`` against the sum of the two norms.

    The as-written variant measures ``y`` with the conjugate ``q = p/(p-1)``
    instead of ``p``; it differs from the normalized form only for ``p > 1``.
    """
    regime = _regime_of(p)
    variant = FormVariant(variant)
    alpha = inst.dim.alpha
    lx = _value_logs(inst.x, alpha)
    ly = _value_logs(inst.y, alpha)
    lhs = _exp(_log_norm(_sum_logs(lx, ly), p))
    s = p / (p - 1.0) if (variant is FormVariant.AS_WRITTEN and regime is Regime.HOLDER) else p
    rhs = _exp(_log_norm(lx, p)) + _exp(_log_norm(ly, s))
    return _verdict(lhs, rhs, _direction(regime), tol)


def _columns_logs(inst: Multi) -> list:
    alpha = inst.dim.alpha
    return [_value_logs(inst.column(j), alpha) for j in range(inst.m)]


def eval_holder_multi(inst: Multi, exps: ExponentTuple, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Verdict:
    """``sum_i prod_j |x_ij|^alpha`` against ``prod_j`` of the column ``p_j``-norms."""
    if inst.m != len(exps):
        raise ShapeError(f"matrix has {inst.m} columns but {len(exps)} exponents")
    cols = _columns_logs(inst)
    row_logs = [math.fsum(col[i] for col in cols) if all(col[i] != _NEG_INF for col in cols) else _NEG_INF
                for i in range(inst.n)]
    lhs = math.fsum(_exp(v) for v in row_logs if v != _NEG_INF)
    rhs = _exp(math.fsum(_log_norm(col, p) for col, p in zip(cols, exps.exponents)))
    return _verdict(lhs, rhs, _direction(exps.regime), tol)


def _row_sum_logs(cols: list, n: int) -> list:
    return [_lse([col[i] for col in cols]) for i in range(n)]


def eval_minkowski_multi(
    inst: Multi,
    p: float,
    variant: FormVariant = FormVariant.NORMALIZED,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Verdict:
    """``p``-norm of the row sums against a sum of ``p``-norms.

    Normalized: the outer sum runs over the ``m`` sequences (columns).
    As written: it runs over the ``n`` rows.
    """
    regime = _regime_of(p)
    variant = FormVariant(variant)
    cols = _columns_logs(inst)
    lhs = _exp(_log_norm(_row_sum_logs(cols, inst.n), p))
    if variant is FormVariant.AS_WRITTEN:
        parts = [_log_norm([col[i] for col in cols], p) for i in range(inst.n)]
    else:
        parts = [_log_norm(col, p) for col in cols]
    rhs = math.fsum(_exp(v) for v in parts)
    return _verdict(lhs, rhs, _direction(regime), tol)


def _check_radon_exponents(p: float, r: float) -> None:
    if not (0 < r < 1 < p) or not math.isfinite(p):
        raise RegimeError(f"Radon-type bounds need 0 < r < 1 < p, got r={r!r}, p={p!r}")


def eval_radon(inst: Radon, p: float, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Verdict:
    """Power-sum ratio ``(sum w^p / sum w^r)^(1/(p-r))`` of ``x + y`` against the ratios of ``x`` and ``y``."""
    r = inst.r
    _check_radon_exponents(p, r)
    alpha = inst.dim.alpha
    lx = _value_logs(inst.x, alpha)
    ly = _value_logs(inst.y, alpha)
    lhs = _exp(_log_ratio_mean(_sum_logs(lx, ly), p, r))
    rhs = _exp(_log_ratio_mean(lx, p, r)) + _exp(_log_ratio_mean(ly, p, r))
    return _verdict(lhs, rhs, LE, tol)


def eval_radon_multi(
    inst: Multi,
    p: float,
    r: float,
    variant: FormVariant = FormVariant.NORMALIZED,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> Verdict:
    """Power-sum ratio of the row sums against a sum of ratios (columns, or rows as written)."""
    _check_radon_exponents(p, r)
    variant = FormVariant(variant)
    cols = _columns_logs(inst)
    lhs = _exp(_log_ratio_mean(_row_sum_logs(cols, inst.n), p, r))
    if variant is FormVariant.AS_WRITTEN:
        parts = [_log_ratio_mean([col[i] for col in cols], p, r) for i in range(inst.n)]
    else:
        parts = [_log_ratio_mean(col, p, r) for col in cols]
    rhs = math.fsum(_exp(v) for v in parts)
    return _verdict(lhs, rhs, LE, tol)


def classical_reduce(inst: Instance) -> Instance:
    """Same-shape instance at alpha = 1 with every magnitude ``t`` replaced by ``t ** alpha``.

    The Bernoulli instance has no such reduction (``(y - 1)^alpha`` is not a
    function of ``y^alpha``) and is rejected.
    """
    if isinstance(inst, Bernoulli):
        raise UsageError("the Bernoulli inequality has no classical reduction")
    alpha = inst.dim.alpha
    reduced = [t**alpha for t in inst.magnitudes()]
    return replace(inst.with_magnitudes(reduced), dim=Dimension(1.0))


# ---------------------------------------------------------------------------
# registry and uniform dispatch


@dataclass(frozen=True)
class InequalityInfo:
    id: str
    instance_type: type
    exponent_kind: str  # "none", "pair", "tuple", "p", "p_r"
    regimes: tuple
    has_as_written: bool
    summary: str


INEQUALITIES = {
    info.id: info
    for info in (
        InequalityInfo("bernoulli", Bernoulli, "none", (Regime.HOLDER, Regime.REVERSE), False,
                       "y^(alpha m) - 1 vs m (y-1)^alpha"),
        InequalityInfo("young", Young, "pair", (Regime.HOLDER, Regime.REVERSE), False,
                       "a^alpha b^alpha vs a^(p alpha)/p + b^(q alpha)/q"),
        InequalityInfo("nary_young", NaryYoung, "tuple", (Regime.HOLDER, Regime.REVERSE), False,
                       "prod a_i^alpha vs sum a_i^(p_i alpha)/p_i"),
        InequalityInfo("holder", Paired, "pair", (Regime.HOLDER, Regime.REVERSE), False,
                       "sum |x_i^alpha||y_i^alpha| vs ||x^alpha||_p ||y^alpha||_q"),
        InequalityInfo("minkowski", Paired, "p", (Regime.HOLDER, Regime.REVERSE), True,
                       "||x^alpha + y^alpha||_p vs ||x^alpha||_p + ||y^alpha||_p"),
        InequalityInfo("holder_multi", Multi, "tuple", (Regime.HOLDER, Regime.REVERSE), False,
                       "sum_i prod_j |x_ij^alpha| vs prod_j ||x_.j^alpha||_(p_j)"),
        InequalityInfo("minkowski_multi", Multi, "p", (Regime.HOLDER, Regime.REVERSE), True,
                       "||sum_j x_.j^alpha||_p vs sum_j ||x_.j^alpha||_p"),
        InequalityInfo("radon", Radon, "p", (Regime.HOLDER,), False,
                       "(S_p/S_r)^(1/(p-r)) of x+y vs the same of x plus of y"),
        InequalityInfo("radon_multi", Multi, "p_r", (Regime.HOLDER,), True,
                       "(S_p/S_r)^(1/(p-r)) of row sums vs the sum over sequences"),
    )
}


def normalize_id(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    if key not in INEQUALITIES:
        raise UsageError(f"unknown inequality {name!r}; choose from {', '.join(sorted(INEQUALITIES))}")
    return key


Exponent = Union[None, ConjugatePair, ExponentTuple, float]


@dataclass(frozen=True)
class Case:
    """One inequality instance together with its exponent parameters.

    ``exponent`` is ``None`` (Bernoulli), a :class:`ConjugatePair`
    (Young, Hölder), an :class:`ExponentTuple` (n-ary Young, multi Hölder) or
    the power ``p`` (Minkowski and Radon forms).  ``r`` is only used by
    ``radon_multi``; the two-sequence Radon form keeps ``r`` on its instance.
    """

    ineq: str
    instance: Instance
    exponent: Exponent = None
    variant: FormVariant = FormVariant.NORMALIZED
    r: float | None = None

    def __post_init__(self):
        info = INEQUALITIES[normalize_id(self.ineq)]
        object.__setattr__(self, "ineq", info.id)
        object.__setattr__(self, "variant", FormVariant(self.variant))
        if not isinstance(self.instance, info.instance_type):
            raise UsageError(f"{info.id} needs a {info.instance_type.__name__} instance, "
                             f"got {type(self.instance).__name__}")
        expected = {"none": type(None), "pair": ConjugatePair, "tuple": ExponentTuple,
                    "p": float, "p_r": float}[info.exponent_kind]
        e = self.exponent
        if expected is float and isinstance(e, (int, float)) and not isinstance(e, bool):
            object.__setattr__(self, "exponent", float(e))
        elif not isinstance(e, expected):
            raise UsageError(f"{info.id} needs a {expected.__name__} exponent, got {e!r}")
        if info.exponent_kind == "p_r" and self.r is None:
            raise UsageError("radon_multi needs r")

    @property
    def dim(self) -> Dimension:
        return self.instance.dim

    @property
    def regime(self) -> Regime:
        e = self.exponent
        if self.ineq == "bernoulli":
            return Regime.HOLDER if self.instance.m < 1 else Regime.REVERSE
        if isinstance(e, (ConjugatePair, ExponentTuple)):
            return e.regime
        return _regime_of(e)

    def evaluate(self, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Verdict:
        return _DISPATCH[self.ineq](self, tol)

    def with_instance(self, instance: Instance) -> "Case":
        return replace(self, instance=instance)

    def reduced(self) -> "Case":
        return replace(self, instance=classical_reduce(self.instance))


_DISPATCH: dict[str, Callable[[Case, TolerancePolicy], Verdict]] = {
    "bernoulli": lambda c, t: eval_bernoulli(c.instance, t),
    "young": lambda c, t: eval_young(c.instance, c.exponent, t),
    "nary_young": lambda c, t: eval_nary_young(c.instance, c.exponent, t),
    "holder": lambda c, t: eval_holder(c.instance, c.exponent, t),
    "minkowski": lambda c, t: eval_minkowski(c.instance, c.exponent, c.variant, t),
    "holder_multi": lambda c, t: eval_holder_multi(c.instance, c.exponent, t),
    "minkowski_multi": lambda c, t: eval_minkowski_multi(c.instance, c.exponent, c.variant, t),
    "radon": lambda c, t: eval_radon(c.instance, c.exponent, t),
    "radon_multi": lambda c, t: eval_radon_multi(c.instance, c.exponent, c.r, c.variant, t),
}
