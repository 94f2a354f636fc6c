"""Numerical certification of equality conditions.

Three checks per inequality:

* :func:`check_equality_manifold` evaluates the gap on points that satisfy the
  stated equality condition (it must vanish there);
* :func:`minimize_gap` searches instance space for the smallest gap with a
  bounded Nelder-Mead simplex and reports how far the minimizer is from the
  condition (the "only if" direction);
* :func:`perturb_check` confirms the gap becomes strictly positive off the
  manifold.

Search runs over log-magnitudes, so positivity needs no constraint.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .catalog import (
    DEFAULT_TOLERANCE,
    INEQUALITIES,
    Case,
    ConjugatePair,
    ExponentTuple,
    Multi,
    NaryYoung,
    Paired,
    Radon,
    Regime,
    TolerancePolicy,
    Young,
)
from .core import Dimension
from .errors import AlphaIneqError, UsageError

__all__ = [
    "EqualityCertificate",
    "project_to_manifold",
    "condition_residual",
    "proportionality_residual",
    "check_equality_manifold",
    "minimize_gap",
    "perturb_check",
    "sample_template",
]

CERTIFIABLE = ("young", "nary_young", "holder", "minkowski", "holder_multi",
               "minkowski_multi", "radon", "radon_multi")
DEFAULT_REGION = (0.1, 10.0)
_FAILED = 1e300


def _moderate_tuple(rng: random.Random, width: int, regime: Regime) -> ExponentTuple:
    weights = [0.2 + rng.random() for _ in range(width)]
    if regime is Regime.HOLDER:
        total = sum(weights)
        return ExponentTuple(tuple(total / w for w in weights))
    inv_first = 1.1 + 0.9 * rng.random()
    rest = weights[1:]
    total = sum(rest)
    recips = [inv_first] + [-(inv_first - 1.0) * w / total for w in rest]
    return ExponentTuple(tuple(1.0 / v for v in recips))


def sample_template(ineq: str, rng: random.Random, regime: Regime | str = Regime.HOLDER) -> Case:
    """A random certifiable case with moderate parameters.

    Exponents stay well inside their regime (p in [1.25, 6] or [0.1, 0.9]),
    alpha in [0.1, 1], at most 4 entries per sequence and 3 sequences, so a
    few Nelder-Mead restarts reach the minimum reliably.  Magnitudes are all 1.
    """
    regime = Regime(regime)
    if ineq not in CERTIFIABLE:
        raise UsageError(f"{ineq} has no parametrized equality manifold")
    if regime not in INEQUALITIES[ineq].regimes:
        raise UsageError(f"{ineq} has no {regime.value} regime")
    dim = Dimension(0.1 + 0.9 * rng.random())
    n = rng.randint(2, 4)
    m = rng.randint(2, 3)
    if regime is Regime.HOLDER:
        p = 1.25 + 4.75 * rng.random()
    else:
        p = 0.1 + 0.8 * rng.random()
    r = 0.1 + 0.8 * rng.random()
    ones = (1.0,) * n
    if ineq == "young":
        return Case(ineq, Young(1.0, 1.0, dim), ConjugatePair(p))
    if ineq == "nary_young":
        return Case(ineq, NaryYoung((1.0,) * m, dim), _moderate_tuple(rng, m, regime))
    if ineq == "holder":
        return Case(ineq, Paired(ones, ones, dim), ConjugatePair(p))
    if ineq == "minkowski":
        return Case(ineq, Paired(ones, ones, dim), p)
    if ineq == "radon":
        return Case(ineq, Radon(ones, ones, r, dim), p)
    matrix = Multi(((1.0,) * m,) * n, dim)
    if ineq == "holder_multi":
        return Case(ineq, matrix, _moderate_tuple(rng, m, regime))
    if ineq == "radon_multi":
        return Case(ineq, matrix, p, r=r)
    return Case(ineq, matrix, p)


def _require_certifiable(case: Case) -> None:
    if case.ineq not in CERTIFIABLE:
        raise UsageError(f"{case.ineq} has no parametrized equality manifold")


def _logs(values: Sequence[float]) -> list:
    return [math.log(v) for v in values]


def _equalize(logs: Sequence[float], exps: Sequence[float]) -> list:
    """Nearest point (in log space) where all ``a_j ** p_j`` coincide."""
    level = math.fsum(v / p for p, v in zip(exps, logs)) / math.fsum(1.0 / (p * p) for p in exps)
    return [level / p for p in exps]


def _proportional(ref: Sequence[float], other: Sequence[float]) -> list:
    """Replace ``other`` by ``lambda * ref`` with ``lambda`` preserving its sum."""
    lam = math.fsum(other) / math.fsum(ref)
    return [lam * v for v in ref]


def project_to_manifold(case: Case) -> Case:
    """Overwrite the dependent coordinates of ``case`` so its equality condition holds.

    Young and n-ary Young equalize ``a_j ** p_j``; Hölder sets
    ``|y_i|**q`` proportional to ``|x_i|**p``; Minkowski and Radon make ``y``
    proportional to ``x``; the matrix forms do the same column by column
    against column 0.  Magnitudes must be positive.
    """
    _require_certifiable(case)
    inst = case.instance
    mags = inst.magnitudes()
    if min(mags) <= 0:
        raise UsageError("manifold projection needs positive magnitudes")
    e = case.exponent
    if case.ineq == "young":
        la, lb = _equalize(_logs(mags), (e.p, e.q))
        return case.with_instance(inst.with_magnitudes([math.exp(la), math.exp(lb)]))
    if case.ineq == "nary_young":
        logs = _equalize(_logs(mags), e.exponents)
        return case.with_instance(inst.with_magnitudes([math.exp(v) for v in logs]))
    if case.ineq == "holder":
        lx, ly = _logs(inst.x), _logs(inst.y)
        shift = (e.q * math.fsum(ly) - e.p * math.fsum(lx)) / len(lx)
        y = tuple(math.exp((shift + e.p * v) / e.q) for v in lx)
        return case.with_instance(replace(inst, y=y))
    if case.ineq in ("minkowski", "radon"):
        return case.with_instance(replace(inst, y=tuple(_proportional(inst.x, inst.y))))
    cols = [list(inst.column(j)) for j in range(inst.m)]
    if case.ineq == "holder_multi":
        # column j becomes exp((level_j + w_i) / p_j); the shared row pattern
        # w is the least-squares fit in log space
        ps = e.exponents
        z = [[p * v for v in _logs(col)] for p, col in zip(ps, cols)]
        levels = [math.fsum(zj) / len(zj) for zj in z]
        weight = math.fsum(1.0 / (p * p) for p in ps)
        pattern = [math.fsum((z[j][i] - levels[j]) / (ps[j] * ps[j]) for j in range(inst.m)) / weight
                   for i in range(inst.n)]
        new_cols = [[math.exp((levels[j] + w) / ps[j]) for w in pattern] for j in range(inst.m)]
    else:
        new_cols = [cols[0]] + [_proportional(cols[0], cols[j]) for j in range(1, inst.m)]
    return case.with_instance(replace(inst, x=tuple(zip(*new_cols))))


def proportionality_residual(ref: Sequence[float], other: Sequence[float]) -> float:
    """``||other - lambda ref|| / ||other||`` for the least-squares ``lambda``.

    This is the sine of the angle between the two vectors: 0 exactly when
    they are proportional, scale-free in both arguments.
    """
    a = np.asarray(ref, dtype=float)
    b = np.asarray(other, dtype=float)
    nb = np.linalg.norm(b)
    na = np.linalg.norm(a)
    if nb == 0 or na == 0:
        return 0.0 if nb == na else 1.0
    lam = float(a @ b) / float(a @ a)
    return float(np.linalg.norm(b - lam * a) / nb)


def _value_logs(case: Case, values: Sequence[float]) -> np.ndarray:
    return case.dim.alpha * np.log(np.asarray(values, dtype=float))


def condition_residual(case: Case) -> float:
    """Scale-free distance of ``case`` from its stated equality condition.

    Computed on values ``u = t ** alpha``.  Young forms: spread of
    ``u_j ** p_j`` relative to the largest.  Hölder: proportionality of
    ``u**p`` and ``v**q``.  Minkowski and Radon: proportionality of the
    sequences themselves (columns for matrix forms, worst column reported).
    """
    _require_certifiable(case)
    inst = case.instance
    e = case.exponent
    if case.ineq in ("young", "nary_young"):
        exps = (e.p, e.q) if isinstance(e, ConjugatePair) else e.exponents
        levels = np.asarray(exps) * _value_logs(case, inst.magnitudes())
        top = levels.max()
        return float(1.0 - np.exp(levels.min() - top))
    if case.ineq == "holder":
        w = np.exp(e.p * _value_logs(case, inst.x))
        z = np.exp(e.q * _value_logs(case, inst.y))
        return proportionality_residual(w, z)
    if case.ineq in ("minkowski", "radon"):
        return proportionality_residual(np.exp(_value_logs(case, inst.x)), np.exp(_value_logs(case, inst.y)))
    cols = [_value_logs(case, inst.column(j)) for j in range(inst.m)]
    if case.ineq == "holder_multi":
        cols = [p * c for p, c in zip(e.exponents, cols)]
    ref = np.exp(cols[0] - cols[0].max())
    return max((proportionality_residual(ref, np.exp(c - c.max())) for c in cols[1:]), default=0.0)


def _random_case(template: Case, rng: random.Random, region: tuple) -> Case:
    lo, hi = math.log(region[0]), math.log(region[1])
    k = len(template.instance.magnitudes())
    mags = [math.exp(lo + rng.random() * (hi - lo)) for _ in range(k)]
    return template.with_instance(template.instance.with_magnitudes(mags))


def check_equality_manifold(
    template: Case,
    samples: int = 100,
    seed: int = 0,
    region: tuple = DEFAULT_REGION,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> float:
    """Largest ``|gap| / scale`` over ``samples`` random points on the equality manifold.

    Points are drawn log-uniformly in ``region`` and then projected with
    :func:`project_to_manifold`; ``template`` supplies shape, exponents and
    alpha.
    """
    _require_certifiable(template)
    if samples < 1:
        raise UsageError("samples must be at least 1")
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(samples):
        v = project_to_manifold(_random_case(template, rng, region)).evaluate(tol)
        worst = max(worst, abs(v.gap) / v.scale)
    return worst


@dataclass
class EqualityCertificate:
    """Best point found by :func:`minimize_gap`.

    ``gap_at_argmin`` is scale-normalized; ``converged`` means it is at most
    ``tol_eq``.  ``condition_residual`` measures the argmin's distance from
    the stated equality condition.
    """

    ineq: str
    variant: str
    params: dict
    argmin: Case
    gap_at_argmin: float
    scale: float
    condition_residual: float
    evaluations: int
    converged: bool
    restarts: int
    best_restart: int
    restart_gaps: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        """A converged minimizer must satisfy the equality condition."""
        return (not self.converged) or self.condition_residual <= 1e-3


def case_params(case: Case) -> dict:
    e = case.exponent
    if isinstance(e, ConjugatePair):
        exp = {"p": e.p, "q": e.q}
    elif isinstance(e, ExponentTuple):
        exp = {"exponents": list(e.exponents)}
    elif e is None:
        exp = {}
    else:
        exp = {"p": e}
    r = getattr(case.instance, "r", None) if case.r is None else case.r
    if r is not None:
        exp["r"] = r
    inst = case.instance
    if isinstance(inst, Multi):
        shape = [inst.n, inst.m]
    else:
        shape = [getattr(inst, "n", len(inst.magnitudes()))]
    return {**exp, "alpha": case.dim.alpha, "regime": case.regime.value, "shape": shape}


def _bounds(region, k: int) -> np.ndarray:
    if len(region) == 2 and all(isinstance(v, (int, float)) for v in region):
        region = [region] * k
    if len(region) != k:
        raise UsageError(f"region has {len(region)} boxes for {k} coordinates")
    b = np.log(np.asarray(region, dtype=float))
    if np.any(b[:, 0] > b[:, 1]):
        raise UsageError("each region box needs lo <= hi")
    return b


def minimize_gap(
    template: Case,
    region=DEFAULT_REGION,
    restarts: int = 8,
    budget: int = 2000,
    seed: int = 0,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> EqualityCertificate:
    """Minimize the scale-normalized gap over magnitudes in ``region``.

    ``region`` is one ``(lo, hi)`` box for every coordinate or a list of boxes.
    Each restart runs a bounded Nelder-Mead (reflection 1, expansion 2,
    contraction 0.5, shrink 0.5) from a scrambled Halton start, capped at
    ``budget`` evaluations; the lowest gap wins, ties to the lowest restart.
    """
    _require_certifiable(template)
    if restarts < 1 or budget < 1:
        raise UsageError("restarts and budget must be positive")
    k = len(template.instance.magnitudes())
    bounds = _bounds(region, k)
    lo, hi = bounds[:, 0], bounds[:, 1]
    width = hi - lo

    def objective(z):
        try:
            case = template.with_instance(template.instance.with_magnitudes(np.exp(z).tolist()))
            v = case.evaluate(tol)
        except (AlphaIneqError, ArithmeticError):
            return _FAILED
        return v.gap / v.scale

    starts = qmc.Halton(d=k, scramble=True, seed=seed).random(restarts)
    best = None
    evaluations = 0
    gaps = []
    for i, u in enumerate(starts):
        x0 = lo + u * width
        simplex = [x0]
        for j in range(k):
            step = 0.1 * width[j] if width[j] > 0 else 0.0
            pt = x0.copy()
            pt[j] = pt[j] + step if pt[j] + step <= hi[j] else pt[j] - step
            simplex.append(pt)
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            bounds=list(zip(lo, hi)),
            options={"maxfev": budget, "xatol": 1e-12, "fatol": 1e-18,
                     "initial_simplex": np.asarray(simplex), "adaptive": False},
        )
        evaluations += int(res.nfev)
        g = float(res.fun)
        gaps.append(g)
        if best is None or g < best[0]:
            best = (g, i, np.clip(res.x, lo, hi))

    g, idx, z = best
    argmin = template.with_instance(template.instance.with_magnitudes(np.exp(z).tolist()))
    verdict = argmin.evaluate(tol)
    rel = verdict.gap / verdict.scale
    return EqualityCertificate(
        ineq=template.ineq,
        variant=template.variant.value,
        params=case_params(template),
        argmin=argmin,
        gap_at_argmin=rel,
        scale=verdict.scale,
        condition_residual=condition_residual(argmin),
        evaluations=evaluations,
        converged=rel <= tol.tol_eq,
        restarts=restarts,
        best_restart=idx,
        restart_gaps=gaps,
    )


def perturb_check(
    case: Case,
    delta: float,
    index: int | None = None,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> bool:
    """True iff scaling one magnitude by ``1 + delta`` makes the gap exceed ``tol_eq * scale``.

    ``index`` picks the coordinate; by default the most sensitive one is used
    (the coordinate whose perturbation gives the largest normalized gap).
    """
    if delta < 0:
        raise UsageError("delta must be nonnegative")
    mags = case.instance.magnitudes()
    indices = range(len(mags)) if index is None else [index]
    for i in indices:
        moved = list(mags)
        moved[i] *= 1.0 + delta
        v = case.with_instance(case.instance.with_magnitudes(moved)).evaluate(tol)
        if v.gap > tol.tol_eq * v.scale:
            return True
    return False
