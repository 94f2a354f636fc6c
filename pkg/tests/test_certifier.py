import math
import random

import numpy as np
import pytest

from alpha_ineq.catalog import (
    Bernoulli,
    Case,
    ConjugatePair,
    ExponentTuple,
    Multi,
    NaryYoung,
    Paired,
    Radon,
    Regime,
    Young,
)
from alpha_ineq.certifier import (
    CERTIFIABLE,
    DEFAULT_REGION,
    check_equality_manifold,
    condition_residual,
    minimize_gap,
    perturb_check,
    project_to_manifold,
    proportionality_residual,
    sample_template,
)
from alpha_ineq.errors import UsageError


def young_case(p, alpha=1.0, a=1.0, b=1.0):
    return Case("young", Young(a, b, alpha), ConjugatePair(p))


def test_manifold_examples():
    assert check_equality_manifold(young_case(2, 0.7), samples=3) <= 1e-10
    x = (0.5, 1.0, 2.0)
    mink = Case("minkowski", Paired(x, tuple(2 * t for t in x), 1.0), 3.0)
    assert mink.evaluate().gap == pytest.approx(0, abs=1e-12)
    assert check_equality_manifold(mink, samples=50) <= 1e-10
    radon = Case("radon", Radon(x, x, 0.5, 1.0), 2.0)
    assert check_equality_manifold(radon, samples=50) <= 1e-10


def test_projection_satisfies_condition():
    rng = random.Random(4)
    for ineq in CERTIFIABLE:
        for regime in (Regime.HOLDER, Regime.REVERSE):
            try:
                tpl = sample_template(ineq, rng, regime)
            except UsageError:
                continue
            mags = [math.exp(rng.uniform(-2, 2)) for _ in tpl.instance.magnitudes()]
            on = project_to_manifold(tpl.with_instance(tpl.instance.with_magnitudes(mags)))
            assert condition_residual(on) <= 1e-9


def test_young_projection_matches_closed_form():
    case = project_to_manifold(young_case(3.0, 0.5, a=2.0, b=7.0))
    a, b = case.instance.a, case.instance.b
    # a^(p alpha) = b^(q alpha)
    assert (a**0.5) ** 3 == pytest.approx((b**0.5) ** 1.5, rel=1e-12)


def test_not_certifiable():
    with pytest.raises(UsageError):
        check_equality_manifold(Case("bernoulli", Bernoulli(2, 0.5)))
    with pytest.raises(UsageError):
        minimize_gap(Case("bernoulli", Bernoulli(2, 0.5)))
    with pytest.raises(UsageError):
        sample_template("bernoulli", random.Random(0))
    with pytest.raises(UsageError):
        sample_template("radon", random.Random(0), "reverse")


def test_proportionality_residual():
    assert proportionality_residual([1, 2, 3], [2, 4, 6]) == pytest.approx(0, abs=1e-15)
    assert proportionality_residual([1, 0], [0, 1]) == pytest.approx(1.0)


def _grid_young_oracle(p, n=801):
    """Dense-grid minimum of the Young gap over [0.1, 10]^2, written out directly."""
    q = p / (p - 1)
    t = np.exp(np.linspace(math.log(0.1), math.log(10), n))
    a, b = np.meshgrid(t, t, indexing="ij")
    lhs = a * b
    rhs = a**p / p + b**q / q
    rel = (rhs - lhs) / np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    near = rel <= rel.min() + 1e-6
    return rel.min(), a[near], b[near]


def test_minimize_young_against_dense_grid():
    gmin, a_near, b_near = _grid_young_oracle(3.0)
    # the near-minimal grid points all sit on a^3 = b^1.5
    assert np.all(np.abs(np.log(a_near**3) - np.log(b_near**1.5)) < 0.1)
    cert = minimize_gap(young_case(3.0), DEFAULT_REGION, restarts=8, budget=2000)
    assert cert.converged
    assert cert.gap_at_argmin <= 1e-8
    assert cert.gap_at_argmin <= gmin + 1e-12
    a, b = cert.argmin.instance.a, cert.argmin.instance.b
    assert abs(a**3 - b**1.5) / max(a**3, b**1.5, 1.0) <= 1e-3
    assert cert.condition_residual <= 1e-3 and cert.consistent


def test_minimize_holder_two_two_dense_grid():
    # at p = q = 2 the printed condition |x_i| proportional to |y_i| is the classical one
    t = np.exp(np.linspace(math.log(0.1), math.log(10), 41))
    best, best_pt = math.inf, None
    for x1 in t[::4]:
        for x2 in t[::4]:
            y1, y2 = np.meshgrid(t, t, indexing="ij")
            lhs = x1 * y1 + x2 * y2
            rhs = math.sqrt(x1**2 + x2**2) * np.sqrt(y1**2 + y2**2)
            rel = (rhs - lhs) / np.maximum(np.maximum(lhs, rhs), 1.0)
            k = np.unravel_index(np.argmin(rel), rel.shape)
            if rel[k] < best:
                best, best_pt = rel[k], (x1, x2, y1[k], y2[k])
    x1, x2, y1, y2 = best_pt
    assert abs(x1 * y2 - x2 * y1) / math.hypot(x1, x2) / math.hypot(y1, y2) < 0.1
    tpl = Case("holder", Paired((1, 1), (1, 1), 1.0), ConjugatePair(2))
    cert = minimize_gap(tpl, restarts=8, budget=2000)
    assert cert.converged and cert.gap_at_argmin <= best + 1e-12
    x, y = cert.argmin.instance.x, cert.argmin.instance.y
    assert proportionality_residual(x, y) <= 1e-3


def test_minimize_away_from_manifold():
    region = [(4, 10), (0.1, 0.2)]
    cert = minimize_gap(young_case(2.0), region, restarts=4, budget=1000)
    assert not cert.converged
    corner = young_case(2.0, a=4.0, b=0.2).evaluate()
    assert cert.gap_at_argmin == pytest.approx(corner.gap / corner.scale, rel=1e-6)
    assert cert.argmin.instance.a == pytest.approx(4.0)
    assert cert.argmin.instance.b == pytest.approx(0.2)


def test_minimize_deterministic():
    tpl = Case("nary_young", NaryYoung((1, 1, 1), 0.5), ExponentTuple((2, 4, 4)))
    c1 = minimize_gap(tpl, restarts=3, budget=500, seed=5)
    c2 = minimize_gap(tpl, restarts=3, budget=500, seed=5)
    assert c1 == c2


def test_perturb_examples():
    assert perturb_check(young_case(2.0), 0.01)
    # 1.01 * 1 against 1.01^2 / 2 + 1 / 2
    assert (1.01**2 / 2 + 0.5) - 1.01 > 1e-8
    assert not perturb_check(young_case(2.0), 0.0)
    x = (0.7, 1.3, 2.0)
    assert perturb_check(Case("minkowski", Paired(x, x, 1.0), 2.0), 0.01)
    with pytest.raises(UsageError):
        perturb_check(young_case(2.0), -0.1)


def test_perturb_gap_is_second_order():
    # lopsided manifold points at small alpha give an off-manifold gap below tol_eq
    x = (0.10495721613409309, 9.22926791209366)
    case = Case("minkowski", Paired(x, tuple(0.2089 * t for t in x), 0.53), 4.35)
    assert case.evaluate().gap == pytest.approx(0, abs=1e-12)
    assert not perturb_check(case, 0.01)
    assert perturb_check(case, 0.1)


def test_matrix_templates():
    tpl = Case("holder_multi", Multi([[1, 1, 1]] * 3, 0.6), ExponentTuple((3, 3, 3)))
    assert check_equality_manifold(tpl, samples=30) <= 1e-10
    cert = minimize_gap(tpl, restarts=3, budget=3000)
    assert cert.converged and cert.condition_residual <= 1e-3
    tpl = Case("radon_multi", Multi([[1, 1]] * 3, 0.6), 3.0, r=0.4)
    assert check_equality_manifold(tpl, samples=30) <= 1e-10
