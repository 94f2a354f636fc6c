"""Randomized verification suites with deterministic seeding and shrinking.

Each trial gets its own ``random.Random`` seeded from ``(master seed, trial
index)`` through a SplitMix64 mixer, so results do not depend on execution
order and suites can be split across worker processes.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

from .catalog import (
    DEFAULT_TOLERANCE,
    INEQUALITIES,
    Bernoulli,
    Case,
    ConjugatePair,
    ExponentTuple,
    FormVariant,
    Multi,
    NaryYoung,
    Paired,
    Radon,
    Regime,
    Status,
    TolerancePolicy,
    Verdict,
    Young,
    normalize_id,
)
from .core import Dimension
from .errors import AlphaIneqError, UsageError

__all__ = [
    "TolerancePolicy",
    "Sampling",
    "SuiteReport",
    "mix_seed",
    "trial_rng",
    "sample_dimension",
    "sample_conjugate_pair",
    "sample_exponent_tuple",
    "sample_magnitudes",
    "generate_case",
    "run_suite",
    "shrink",
    "case_size",
]

EXPONENT_MARGIN = 1e-3
# Reverse-regime p-norms grow like n**(1/p); this floor keeps them finite.
REVERSE_NORM_P_FLOOR = 0.05
# Sampled magnitudes satisfy |exponent * ln t| <= LOG_WINDOW_CAP.
LOG_WINDOW_CAP = 300.0

_MASK64 = (1 << 64) - 1


def mix_seed(seed: int, index: int) -> int:
    """SplitMix64 finalizer applied to ``seed`` advanced by ``index`` steps."""
    z = (seed * 0x9E3779B97F4A7C15 + (index + 1) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_rng(seed: int, index: int) -> random.Random:
    return random.Random(mix_seed(seed, index))


# ---------------------------------------------------------------------------
# samplers


def sample_dimension(u: float) -> Dimension:
    """Map a uniform draw ``u`` in (0, 1] to alpha in (0.001, 1]."""
    if not (0.0 < u <= 1.0):
        raise UsageError(f"dimension draw must lie in (0, 1], got {u!r}")
    return Dimension(min(0.001 + u * 0.999, 1.0))


def sample_conjugate_pair(regime: Regime | str, u: float, p_max: float = 8.0) -> ConjugatePair:
    regime = Regime(regime)
    if regime is Regime.HOLDER:
        if p_max <= 1:
            raise UsageError(f"p_max must exceed 1, got {p_max!r}")
        p = max(1.0 + u * (p_max - 1.0), 1.0 + EXPONENT_MARGIN)
    else:
        p = min(max(u, EXPONENT_MARGIN), 1.0 - EXPONENT_MARGIN)
    return ConjugatePair(p)


def sample_exponent_tuple(n: int, regime: Regime | str, draws: Sequence[float]) -> ExponentTuple:
    """Exponents with reciprocals summing to one.

    Hölder: reciprocals proportional to ``draw + 1e-3``.  Reverse: ``1/p_1``
    in roughly (1, 1000], with the negative deficit ``1 - 1/p_1`` split across
    the remaining entries by weight.  The last reciprocal absorbs rounding.
    """
    regime = Regime(regime)
    if n < 2:
        raise UsageError(f"exponent tuples need n >= 2, got {n}")
    if len(draws) != n:
        raise UsageError(f"expected {n} draws, got {len(draws)}")
    if regime is Regime.HOLDER:
        weights = [d + EXPONENT_MARGIN for d in draws]
        total = math.fsum(weights)
        recips = [w / total for w in weights]
    else:
        first = 1.0 / (1.0 - EXPONENT_MARGIN) + draws[0] * (1000.0 - 1.0 / (1.0 - EXPONENT_MARGIN))
        deficit = 1.0 - first
        weights = [d + EXPONENT_MARGIN for d in draws[1:]]
        total = math.fsum(weights)
        recips = [first] + [deficit * w / total for w in weights]
    exps = [1.0 / s for s in recips[:-1]]
    exps.append(1.0 / (1.0 - math.fsum(1.0 / p for p in exps)))
    return ExponentTuple(tuple(exps))


def sample_magnitudes(
    n: int,
    draws: Sequence[float],
    lo: float = 1e-3,
    hi: float = 1e3,
    zero_draws: Sequence[float] | None = None,
    zero_fraction: float = 0.0,
) -> tuple:
    """Log-uniform magnitudes in [lo, hi]; entry ``i`` is zeroed when ``zero_draws[i] < zero_fraction``."""
    if n < 1:
        raise UsageError(f"need at least one magnitude, got n={n}")
    if not (0 < lo <= hi):
        raise UsageError(f"need 0 < lo <= hi, got lo={lo!r}, hi={hi!r}")
    if len(draws) != n:
        raise UsageError(f"expected {n} draws, got {len(draws)}")
    llo, lhi = math.log(lo), math.log(hi)
    out = [math.exp(llo + d * (lhi - llo)) for d in draws]
    if zero_draws is not None and zero_fraction > 0:
        out = [0.0 if z < zero_fraction else t for t, z in zip(out, zero_draws)]
    return tuple(out)


@dataclass(frozen=True)
class Sampling:
    """Instance-generation settings shared by all trials of a suite.

    ``alpha`` fixes the dimension (``None`` samples it per trial).  ``p``,
    ``q``, ``r`` and ``exponents`` pin exponent parameters; unset ones are
    sampled in the suite's regime.
    """

    alpha: float | None = None
    p: float | None = None
    q: float | None = None
    r: float | None = None
    exponents: tuple | None = None
    p_max: float = 8.0
    n_max: int = 16
    nary_max: int = 8
    m_max: int = 8
    lo: float = 1e-3
    hi: float = 1e3
    zero_fraction: float = 0.05
    y_range: tuple | None = None

    def __post_init__(self):
        if self.alpha is not None:
            Dimension(self.alpha)
        if self.n_max < 1 or self.m_max < 1 or self.nary_max < 2:
            raise UsageError("shape limits must be positive (nary_max >= 2)")
        if not (0 < self.lo <= self.hi):
            raise UsageError(f"need 0 < lo <= hi, got {self.lo!r}, {self.hi!r}")
        if self.y_range is not None and not (0 < self.y_range[0] <= self.y_range[1]):
            raise UsageError(f"y_range must satisfy 0 < lo <= hi, got {self.y_range!r}")

    @property
    def alpha_policy(self) -> dict:
        if self.alpha is None:
            return {"kind": "sampled", "low": 0.001, "high": 1.0}
        return {"kind": "fixed", "value": float(self.alpha)}


class _Draws:
    def __init__(self, rng: random.Random):
        self._rng = rng

    def one(self) -> float:
        return self._rng.random()

    def open_unit(self) -> float:
        return 1.0 - self._rng.random()

    def many(self, k: int) -> list:
        r = self._rng.random
        return [r() for _ in range(k)]

    def count(self, low: int, high: int) -> int:
        return low + min(int(self._rng.random() * (high - low + 1)), high - low)


def _window(sampling: Sampling, exponent: float) -> tuple:
    e = abs(exponent)
    cap = LOG_WINDOW_CAP / e if e > 0 else math.inf
    return (math.exp(max(math.log(sampling.lo), -cap)), math.exp(min(math.log(sampling.hi), cap)))


def _vector(d: _Draws, n: int, sampling: Sampling, exponent: float, zeros: bool) -> tuple:
    lo, hi = _window(sampling, exponent)
    draws = d.many(n)
    zero_draws = d.many(n)
    frac = sampling.zero_fraction if zeros else 0.0
    return sample_magnitudes(n, draws, lo, hi, zero_draws, frac)


def _pair(sampling: Sampling, regime: Regime, d: _Draws) -> ConjugatePair:
    u = d.one()
    if sampling.p is not None:
        pair = ConjugatePair(sampling.p, sampling.q)
    elif sampling.q is not None:
        pair = ConjugatePair.from_q(sampling.q)
    else:
        return sample_conjugate_pair(regime, u, sampling.p_max)
    if pair.regime is not regime:
        raise UsageError(f"p={pair.p!r} is not in the {regime.value} regime")
    return pair


def _norm_power(sampling: Sampling, regime: Regime, d: _Draws) -> float:
    u = d.one()
    if sampling.p is not None:
        pair = ConjugatePair(sampling.p)
        if pair.regime is not regime:
            raise UsageError(f"p={pair.p!r} is not in the {regime.value} regime")
        return pair.p
    if regime is Regime.HOLDER:
        return sample_conjugate_pair(regime, u, sampling.p_max).p
    return min(max(u, REVERSE_NORM_P_FLOOR), 1.0 - EXPONENT_MARGIN)


def _tuple(sampling: Sampling, regime: Regime, d: _Draws, n: int) -> ExponentTuple:
    draws = d.many(n)
    if sampling.exponents is not None:
        exps = ExponentTuple(tuple(sampling.exponents))
        if exps.regime is not regime:
            raise UsageError(f"exponents {exps.exponents!r} are not in the {regime.value} regime")
        return exps
    return sample_exponent_tuple(n, regime, draws)


def _radon_r(sampling: Sampling, d: _Draws) -> float:
    u = d.one()
    if sampling.r is not None:
        return float(sampling.r)
    return min(max(u, EXPONENT_MARGIN), 1.0 - EXPONENT_MARGIN)


def generate_case(
    ineq: str,
    variant: FormVariant | str,
    regime: Regime | str,
    rng: random.Random,
    sampling: Sampling = Sampling(),
) -> Case:
    """Draw one regime-valid case.

    The alpha draw is always consumed first, so two suites that differ only in
    their fixed alpha see identical magnitudes and exponents.
    """
    ineq = normalize_id(ineq)
    variant = FormVariant(variant)
    regime = Regime(regime)
    info = INEQUALITIES[ineq]
    if regime not in info.regimes:
        raise UsageError(f"{ineq} has no {regime.value} regime")
    d = _Draws(rng)
    u_alpha = d.open_unit()
    dim = Dimension(sampling.alpha) if sampling.alpha is not None else sample_dimension(u_alpha)
    zeros = regime is Regime.HOLDER

    if ineq == "bernoulli":
        u = d.one()
        if regime is Regime.HOLDER:
            m = min(max(u, EXPONENT_MARGIN), 1.0 - EXPONENT_MARGIN)
        else:
            m = max(1.0 + u * (sampling.p_max - 1.0), 1.0 + EXPONENT_MARGIN)
        lo, hi = sampling.y_range or (sampling.lo, sampling.hi)
        (y,) = sample_magnitudes(1, d.many(1), lo, hi)
        return Case(ineq, Bernoulli(y, m, dim), None, variant)

    if ineq == "young":
        pair = _pair(sampling, regime, d)
        (a,) = _vector(d, 1, sampling, pair.p, zeros)
        (b,) = _vector(d, 1, sampling, pair.q, zeros)
        return Case(ineq, Young(a, b, dim), pair, variant)

    if ineq == "nary_young":
        n = len(sampling.exponents) if sampling.exponents is not None else d.count(2, sampling.nary_max)
        exps = _tuple(sampling, regime, d, n)
        a = tuple(_vector(d, 1, sampling, p, zeros)[0] for p in exps.exponents)
        return Case(ineq, NaryYoung(a, dim), exps, variant)

    if ineq == "holder":
        pair = _pair(sampling, regime, d)
        n = d.count(1, sampling.n_max)
        x = _vector(d, n, sampling, pair.p, zeros)
        y = _vector(d, n, sampling, pair.q, zeros)
        return Case(ineq, Paired(x, y, dim), pair, variant)

    if ineq == "minkowski":
        p = _norm_power(sampling, regime, d)
        n = d.count(1, sampling.n_max)
        q = p / (p - 1.0)
        x = _vector(d, n, sampling, p, zeros)
        y = _vector(d, n, sampling, max(p, abs(q)) if variant is FormVariant.AS_WRITTEN else p, zeros)
        return Case(ineq, Paired(x, y, dim), p, variant)

    if ineq == "holder_multi":
        m = len(sampling.exponents) if sampling.exponents is not None else d.count(2, sampling.m_max)
        exps = _tuple(sampling, regime, d, m)
        n = d.count(1, sampling.n_max)
        cols = [_vector(d, n, sampling, p, zeros) for p in exps.exponents]
        rows = tuple(zip(*cols))
        return Case(ineq, Multi(rows, dim), exps, variant)

    if ineq == "minkowski_multi":
        p = _norm_power(sampling, regime, d)
        n = d.count(1, sampling.n_max)
        m = d.count(1, sampling.m_max)
        cols = [_vector(d, n, sampling, p, zeros) for _ in range(m)]
        return Case(ineq, Multi(tuple(zip(*cols)), dim), p, variant)

    # Radon forms: no zeroing, every denominator stays positive.
    p = _norm_power(sampling, Regime.HOLDER, d)
    r = _radon_r(sampling, d)
    n = d.count(1, sampling.n_max)
    if ineq == "radon":
        x = _vector(d, n, sampling, p, False)
        y = _vector(d, n, sampling, p, False)
        return Case(ineq, Radon(x, y, r, dim), p, variant)
    m = d.count(1, sampling.m_max)
    cols = [_vector(d, n, sampling, p, False) for _ in range(m)]
    return Case(ineq, Multi(tuple(zip(*cols)), dim), p, variant, r=r)


# ---------------------------------------------------------------------------
# suites


@dataclass
class SuiteReport:
    """Aggregate of one suite.

    ``min_gap`` is the smallest scale-normalized gap (``gap / scale``) seen;
    ``worst_case`` and ``worst_verdict`` belong to that trial (lowest index on
    ties).
    """

    ineq: str
    variant: FormVariant
    regime: Regime
    trials: int
    seed: int
    tolerance: TolerancePolicy
    alpha_policy: dict
    holds: int = 0
    equality: int = 0
    violations: int = 0
    min_gap: float = math.inf
    worst_index: int | None = None
    worst_case: Case | None = None
    worst_verdict: Verdict | None = None
    first_violation: int | None = None
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass
class _Partial:
    holds: int = 0
    equality: int = 0
    violations: int = 0
    min_gap: float = math.inf
    worst_index: int | None = None
    worst_case: Case | None = None
    worst_verdict: Verdict | None = None
    first_violation: int | None = None

    def merge(self, other: "_Partial") -> None:
        self.holds += other.holds
        self.equality += other.equality
        self.violations += other.violations
        if other.worst_index is not None and (
            self.worst_index is None or (other.min_gap, other.worst_index) < (self.min_gap, self.worst_index)
        ):
            self.min_gap = other.min_gap
            self.worst_index = other.worst_index
            self.worst_case = other.worst_case
            self.worst_verdict = other.worst_verdict
        if other.first_violation is not None and (
            self.first_violation is None or other.first_violation < self.first_violation
        ):
            self.first_violation = other.first_violation


def _run_range(ineq, variant, regime, seed, tol, sampling, start, stop) -> _Partial:
    part = _Partial()
    for i in range(start, stop):
        case = generate_case(ineq, variant, regime, trial_rng(seed, i), sampling)
        verdict = case.evaluate(tol)
        status = verdict.status
        if status is Status.VIOLATION:
            part.violations += 1
            if part.first_violation is None:
                part.first_violation = i
        elif status is Status.EQUALITY:
            part.equality += 1
        else:
            part.holds += 1
        g = verdict.gap / verdict.scale
        if g < part.min_gap:
            part.min_gap = g
            part.worst_index = i
            part.worst_case = case
            part.worst_verdict = verdict
    return part


def run_suite(
    ineq: str,
    variant: FormVariant | str = FormVariant.NORMALIZED,
    regime: Regime | str = Regime.HOLDER,
    trials: int = 1000,
    seed: int = 0,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
    sampling: Sampling = Sampling(),
    workers: int = 1,
) -> SuiteReport:
    """Evaluate ``trials`` generated cases and aggregate their statuses.

    With ``workers > 1`` contiguous index ranges run in separate processes;
    the merged report is identical to a serial run.
    """
    ineq = normalize_id(ineq)
    variant = FormVariant(variant)
    regime = Regime(regime)
    if trials < 1:
        raise UsageError(f"trials must be at least 1, got {trials}")
    info = INEQUALITIES[ineq]
    if regime not in info.regimes:
        raise UsageError(f"{ineq} has no {regime.value} regime")
    if variant is FormVariant.AS_WRITTEN and not info.has_as_written:
        raise UsageError(f"{ineq} has no separate as-written form")

    start = time.perf_counter()
    args = (ineq, variant, regime, seed, tol, sampling)
    if workers > 1 and trials >= 2 * workers:
        bounds = [trials * k // workers for k in range(workers + 1)]
        total = _Partial()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_range, *args, lo, hi) for lo, hi in zip(bounds, bounds[1:])]
            for fut in futures:
                total.merge(fut.result())
    else:
        total = _run_range(*args, 0, trials)
    runtime_ms = (time.perf_counter() - start) * 1000.0

    return SuiteReport(
        ineq=ineq,
        variant=variant,
        regime=regime,
        trials=trials,
        seed=seed,
        tolerance=tol,
        alpha_policy=sampling.alpha_policy,
        holds=total.holds,
        equality=total.equality,
        violations=total.violations,
        min_gap=total.min_gap,
        worst_index=total.worst_index,
        worst_case=total.worst_case,
        worst_verdict=total.worst_verdict,
        first_violation=total.first_violation,
        runtime_ms=runtime_ms,
    )


# ---------------------------------------------------------------------------
# shrinking


def _exponent_log_size(case: Case) -> float:
    e = case.exponent
    if e is None:
        return abs(math.log(case.instance.m)) if case.instance.m > 0 else 0.0
    if isinstance(e, ConjugatePair):
        return abs(math.log(e.p))
    if isinstance(e, ExponentTuple):
        return math.fsum(abs(math.log(abs(p))) for p in e.exponents)
    return abs(math.log(e))


def case_size(case: Case) -> float:
    """Entry count plus total ``|ln magnitude|`` plus ``|ln p|``."""
    mags = case.instance.magnitudes()
    return len(mags) + math.fsum(abs(math.log(t)) for t in mags if t > 0) + _exponent_log_size(case)


def _halvings(case: Case):
    inst = case.instance
    if isinstance(inst, (Paired, Radon)) and inst.n > 1:
        k = inst.n // 2
        yield case.with_instance(replace(inst, x=inst.x[:k], y=inst.y[:k]))
        yield case.with_instance(replace(inst, x=inst.x[k:], y=inst.y[k:]))
    if isinstance(inst, Multi):
        if inst.n > 1:
            k = inst.n // 2
            yield case.with_instance(replace(inst, x=inst.x[:k]))
            yield case.with_instance(replace(inst, x=inst.x[k:]))
        if inst.m > 1 and not isinstance(case.exponent, ExponentTuple):
            k = inst.m // 2
            yield case.with_instance(replace(inst, x=tuple(row[:k] for row in inst.x)))
            yield case.with_instance(replace(inst, x=tuple(row[k:] for row in inst.x)))


def _toward(value: float, target: float, log_scale: bool) -> list:
    if value == target:
        return []
    if log_scale:
        if value <= 0 or abs(math.log(value / target)) < 1e-3:
            return [target] if value > 0 else []
        return [target, math.sqrt(value * target)]
    if abs(value - target) < 1e-3:
        return [target]
    return [target, 0.5 * (value + target)]


def _magnitude_moves(case: Case):
    mags = case.instance.magnitudes()
    for i, t in enumerate(mags):
        for new in _toward(t, 1.0, True):
            moved = list(mags)
            moved[i] = new
            yield case.with_instance(case.instance.with_magnitudes(moved))


def _alpha_moves(case: Case):
    for new in _toward(case.dim.alpha, 1.0, False):
        yield case.with_instance(replace(case.instance, dim=Dimension(new)))


def _exponent_moves(case: Case):
    e = case.exponent
    if e is None:
        inst = case.instance
        target = 0.5 if inst.m < 1 else 2.0
        for new in _toward(inst.m, target, False):
            yield case.with_instance(replace(inst, m=new))
        return
    if isinstance(e, ExponentTuple):
        return
    p = e.p if isinstance(e, ConjugatePair) else e
    target = 2.0 if p > 1 else 0.5
    for new in _toward(p, target, False):
        yield replace(case, exponent=ConjugatePair(new) if isinstance(e, ConjugatePair) else new)


def shrink(case: Case, tol: TolerancePolicy = DEFAULT_TOLERANCE, max_steps: int = 1000) -> Case:
    """Greedily simplify a violating case while it keeps violating.

    Moves, in order: halve vector lengths, pull magnitudes toward 1, pull
    alpha toward 1, pull the exponent toward 2 (0.5 in the reverse regime).
    A move is kept only if the result still violates and its
    :func:`case_size` does not grow.
    """
    if case.evaluate(tol).status is not Status.VIOLATION:
        raise UsageError("shrink needs a violating case")
    current, size = case, case_size(case)
    steps = 0
    while steps < max_steps:
        for gen in (_halvings, _magnitude_moves, _alpha_moves, _exponent_moves):
            accepted = None
            for cand in gen(current):
                try:
                    if cand.evaluate(tol).status is not Status.VIOLATION:
                        continue
                except (AlphaIneqError, ArithmeticError):
                    continue
                cand_size = case_size(cand)
                if cand_size <= size:
                    accepted = (cand, cand_size)
                    break
            if accepted is not None:
                current, size = accepted
                steps += 1
                break
        else:
            break
    return current
