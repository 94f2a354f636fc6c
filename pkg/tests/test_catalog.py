import math
import random
import warnings

import pytest

from alpha_ineq.catalog import (
    INEQUALITIES,
    Bernoulli,
    Case,
    ConjugatePair,
    DegenerateRegimeWarning,
    ExponentTuple,
    Multi,
    NaryYoung,
    Paired,
    Radon,
    Regime,
    Status,
    TolerancePolicy,
    Young,
    classical_reduce,
    eval_bernoulli,
    eval_holder,
    eval_holder_multi,
    eval_minkowski,
    eval_minkowski_multi,
    eval_nary_young,
    eval_radon,
    eval_radon_multi,
    eval_young,
    normalize_id,
)
from alpha_ineq.errors import DomainError, PoleError, RangeError, RegimeError, ShapeError, UsageError
from alpha_ineq.harness import Sampling, generate_case, trial_rng

from . import oracle

HOLDS, EQ, VIOL = Status.HOLDS, Status.EQUALITY, Status.VIOLATION


def close(v, lhs, rhs, rel=1e-12):
    assert v.lhs == pytest.approx(float(lhs), rel=rel, abs=1e-15)
    assert v.rhs == pytest.approx(float(rhs), rel=rel, abs=1e-15)


# ---------------------------------------------------------------------------
# exponent types


def test_conjugate_pair():
    pair = ConjugatePair(2)
    assert (pair.p, pair.q, pair.regime) == (2.0, 2.0, Regime.HOLDER)
    rev = ConjugatePair(0.5)
    assert rev.q == pytest.approx(-1.0) and rev.regime is Regime.REVERSE
    assert ConjugatePair.from_q(1.5).p == pytest.approx(3.0)
    for bad in (1, 0, -2, math.inf):
        with pytest.raises(RegimeError):
            ConjugatePair(bad)
    with pytest.raises(RegimeError):
        ConjugatePair(2, 3)


def test_exponent_tuple():
    t = ExponentTuple((3, 3, 3))
    assert t.regime is Regime.HOLDER and len(t) == 3
    r = ExponentTuple((0.5, -2, -2))
    assert r.regime is Regime.REVERSE
    with pytest.raises(RegimeError):
        ExponentTuple((2, 3))
    with pytest.raises(RegimeError):
        ExponentTuple((0.5, 2, -2 / 3.0))
    with pytest.raises(ShapeError):
        ExponentTuple((1.0,))


def test_tolerance_policy_invariants():
    TolerancePolicy(1e-9, 1e-8, 1e-12)
    with pytest.raises(UsageError):
        TolerancePolicy(1e-7, 1e-8)
    with pytest.raises(UsageError):
        TolerancePolicy(1e-9, 1e-8, 0)


# ---------------------------------------------------------------------------
# worked examples


def test_bernoulli_examples():
    v = eval_bernoulli(Bernoulli(1, 0.5, 0.8))
    assert (v.lhs, v.rhs, v.status) == (0.0, 0.0, EQ)
    v = eval_bernoulli(Bernoulli(4, 0.5, 0.5))
    close(v, *oracle.bernoulli(4, 0.5, 0.5))
    assert v.lhs == pytest.approx(0.414214, abs=1e-6)
    assert v.rhs == pytest.approx(0.866025, abs=1e-6)
    assert v.status is HOLDS


def test_bernoulli_below_one_violates():
    v = eval_bernoulli(Bernoulli(0.25, 0.5, 0.5))
    close(v, *oracle.bernoulli(0.25, 0.5, 0.5))
    # 0.25 ** 0.25 - 1
    assert v.lhs == pytest.approx(-0.292893, abs=1e-6)
    assert v.rhs == pytest.approx(-0.433013, abs=1e-6)
    assert v.status is VIOL


def test_bernoulli_errors_and_degenerate():
    with pytest.raises(DomainError):
        Bernoulli(0, 0.5)
    with pytest.raises(RegimeError):
        eval_bernoulli(Bernoulli(2, -1))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        v = eval_bernoulli(Bernoulli(3, 1, 1.0))
    assert v.status is EQ
    assert any(issubclass(w.category, DegenerateRegimeWarning) for w in caught)


def test_bernoulli_m_above_one_fails_near_one_for_small_alpha():
    # y^(alpha m) - 1 is smooth at y = 1 while m (y - 1)^alpha has infinite slope
    v = eval_bernoulli(Bernoulli(1.001, 2, 0.5))
    lhs, rhs = oracle.bernoulli(1.001, 2, 0.5)
    close(v, lhs, rhs)
    assert v.status is VIOL
    assert eval_bernoulli(Bernoulli(1.001, 2, 1.0)).status is HOLDS


def test_young_examples():
    for alpha in (0.1, 0.5, 1.0):
        v = eval_young(Young(1, 1, alpha), ConjugatePair(2))
        assert (v.lhs, v.rhs, v.status) == (1.0, 1.0, EQ)
    v = eval_young(Young(2, 1, 0.5), ConjugatePair(2))
    assert v.lhs == pytest.approx(math.sqrt(2), rel=1e-15)
    assert v.rhs == pytest.approx(1.5, rel=1e-15)
    assert v.status is HOLDS and v.direction == "<="
    v = eval_young(Young(2, 1, 1.0), ConjugatePair(0.5))
    assert v.lhs == pytest.approx(2.0)
    assert v.rhs == pytest.approx(2 * math.sqrt(2) - 1, rel=1e-14)
    assert v.status is HOLDS and v.direction == ">="
    with pytest.raises(PoleError):
        eval_young(Young(1, 0, 0.5), ConjugatePair(0.5))


def test_nary_young_examples():
    c = 1.7
    v = eval_nary_young(NaryYoung((c, c, c), 1.0), ExponentTuple((3, 3, 3)))
    assert v.status is EQ and v.lhs == pytest.approx(c**3)
    v = eval_nary_young(NaryYoung((1, 2, 3), 1.0), ExponentTuple((3, 3, 3)))
    assert (v.lhs, v.status) == (pytest.approx(6.0), HOLDS)
    assert v.rhs == pytest.approx(12.0, rel=1e-14)
    with pytest.raises(ShapeError):
        eval_nary_young(NaryYoung((1, 2), 1.0), ExponentTuple((3, 3, 3)))
    with pytest.raises(PoleError):
        eval_nary_young(NaryYoung((1, 0), 0.5), ExponentTuple((0.5, -1)))


def test_nary_two_matches_young():
    rng = random.Random(5)
    for _ in range(200):
        a, b, alpha = rng.uniform(0.01, 50), rng.uniform(0.01, 50), rng.uniform(0.01, 1)
        pair = ConjugatePair(rng.choice([rng.uniform(1.01, 8), rng.uniform(0.01, 0.99)]))
        v1 = eval_young(Young(a, b, alpha), pair)
        v2 = eval_nary_young(NaryYoung((a, b), alpha), pair.as_tuple())
        assert abs(v1.gap - v2.gap) <= 1e-12 * v1.scale
        assert v1.status is v2.status


def test_holder_examples():
    rng = random.Random(2)
    for _ in range(20):
        x, y, alpha, p = rng.uniform(0, 9), rng.uniform(0, 9), rng.uniform(0.01, 1), rng.uniform(1.1, 7)
        assert eval_holder(Paired((x,), (y,), alpha), ConjugatePair(p)).status is EQ
    v = eval_holder(Paired((1, 2), (1, 1), 1.0), ConjugatePair(2))
    assert v.lhs == 3.0 and v.rhs == pytest.approx(math.sqrt(10), rel=1e-14)
    assert v.status is HOLDS
    v = eval_holder(Paired((1, 2), (1, 1), 1.0), ConjugatePair(0.5))
    assert v.rhs == pytest.approx((1 + math.sqrt(2)) ** 2 / 2, rel=1e-14)
    assert v.status is HOLDS and v.direction == ">="
    with pytest.raises(PoleError):
        eval_holder(Paired((1, 2), (1, 0), 1.0), ConjugatePair(0.5))
    with pytest.raises(ShapeError):
        Paired((1, 2), (1,))


def test_minkowski_examples():
    v = eval_minkowski(Paired((1, 2), (3, 1), 1.0), 2)
    assert v.lhs == pytest.approx(5.0) and v.rhs == pytest.approx(math.sqrt(5) + math.sqrt(10))
    v = eval_minkowski(Paired((1, 2), (3, 1), 1.0), 0.5)
    assert v.lhs == pytest.approx((2 + math.sqrt(3)) ** 2, rel=1e-14)
    assert v.rhs == pytest.approx(13.292529, abs=1e-6)
    assert v.status is HOLDS
    x = (0.3, 4.0, 2.2)
    for lam in (0.1, 1.0, 7.5):
        for p in (0.3, 2.0, 5.0):
            v = eval_minkowski(Paired(x, tuple(lam * t for t in x), 0.6), p)
            assert v.status is EQ
    for p in (1, 0, -1):
        with pytest.raises(RegimeError):
            eval_minkowski(Paired((1,), (1,)), p)


def test_minkowski_as_written_uses_conjugate_for_y():
    inst = Paired((1, 2), (3, 1), 0.7)
    v = eval_minkowski(inst, 3, "as_written")
    close(v, *oracle.minkowski(inst.x, inst.y, 3, 0.7, as_written=True))
    rev = Paired((1, 2), (3, 1), 1.0)
    assert eval_minkowski(rev, 0.5, "as_written") == eval_minkowski(rev, 0.5)


def test_holder_multi_examples():
    v = eval_holder_multi(Multi([[1, 1], [2, 1]], 1.0), ExponentTuple((2, 2)))
    assert v.lhs == 3.0 and v.rhs == pytest.approx(3.162278, abs=1e-6)
    assert eval_holder_multi(Multi([[2, 3, 5]], 0.4), ExponentTuple((3, 3, 3))).status is EQ
    with pytest.raises(ShapeError):
        eval_holder_multi(Multi([[1, 1]], 1.0), ExponentTuple((3, 3, 3)))


def test_holder_multi_two_columns_matches_holder():
    rng = random.Random(8)
    for _ in range(200):
        n = rng.randint(1, 6)
        x = [rng.uniform(0.01, 20) for _ in range(n)]
        y = [rng.uniform(0.01, 20) for _ in range(n)]
        alpha = rng.uniform(0.01, 1)
        pair = ConjugatePair(rng.choice([rng.uniform(1.01, 8), rng.uniform(0.01, 0.99)]))
        v1 = eval_holder(Paired(x, y, alpha), pair)
        v2 = eval_holder_multi(Multi(list(zip(x, y)), alpha), pair.as_tuple())
        assert abs(v1.gap - v2.gap) <= 1e-12 * v1.scale


def test_minkowski_multi_examples():
    assert eval_minkowski_multi(Multi([[1], [2], [3]], 0.5), 2).status is EQ
    v = eval_minkowski_multi(Multi([[1, 1]], 1.0), 2, "as_written")
    assert v.lhs == 2.0 and v.rhs == pytest.approx(math.sqrt(2))
    assert v.status is VIOL
    v = eval_minkowski_multi(Multi([[1, 1]], 1.0), 2, "normalized")
    assert (v.lhs, v.rhs, v.status) == (2.0, 2.0, EQ)


def test_minkowski_multi_two_columns_matches_minkowski():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(1, 6)
        x = [rng.uniform(0, 20) for _ in range(n)]
        y = [rng.uniform(0.01, 20) for _ in range(n)]
        p = rng.choice([rng.uniform(1.01, 8), rng.uniform(0.05, 0.99)])
        v1 = eval_minkowski(Paired(x, y, 0.8), p)
        v2 = eval_minkowski_multi(Multi(list(zip(x, y)), 0.8), p)
        assert abs(v1.gap - v2.gap) <= 1e-12 * v1.scale


def test_radon_examples():
    v = eval_radon(Radon((1, 2), (1, 1), 0.5, 1.0), 2)
    assert v.lhs == pytest.approx((13 / (math.sqrt(2) + math.sqrt(3))) ** (2 / 3), rel=1e-14)
    assert v.lhs == pytest.approx(2.5749, abs=1e-4)
    assert v.rhs == pytest.approx(2.6248, abs=1e-4)
    assert v.status is HOLDS
    v = eval_radon(Radon((1,), (1,), 0.5, 1.0), 2)
    assert v.lhs == pytest.approx(2.0) and v.status is EQ
    x = (0.4, 1.3, 2.0)
    assert eval_radon(Radon(x, x, 0.3, 0.7), 4).status is EQ
    with pytest.raises(DomainError):
        Radon((0, 0), (1, 1), 0.5)
    for p, r in ((2, 1.5), (0.5, 0.2), (2, 0)):
        with pytest.raises(RegimeError):
            eval_radon(Radon((1,), (1,), r), p)


def test_radon_multi_examples():
    assert eval_radon_multi(Multi([[1], [2]], 0.5), 2, 0.5).status is EQ
    v = eval_radon_multi(Multi([[1, 1], [2, 1]], 1.0), 2, 0.5)
    ref = eval_radon(Radon((1, 2), (1, 1), 0.5, 1.0), 2)
    assert abs(v.gap - ref.gap) <= 1e-12 * ref.scale
    rng = random.Random(9)
    for _ in range(100):
        n = rng.randint(1, 6)
        x = [rng.uniform(0.01, 20) for _ in range(n)]
        y = [rng.uniform(0.01, 20) for _ in range(n)]
        p, r, alpha = rng.uniform(1.01, 8), rng.uniform(0.01, 0.99), rng.uniform(0.01, 1)
        v1 = eval_radon(Radon(x, y, r, alpha), p)
        v2 = eval_radon_multi(Multi(list(zip(x, y)), alpha), p, r)
        assert abs(v1.gap - v2.gap) <= 1e-12 * v1.scale


def test_magnitude_cap():
    with pytest.raises(RangeError):
        eval_young(Young(2e6, 1), ConjugatePair(2))


# ---------------------------------------------------------------------------
# against the high-precision oracle


@pytest.mark.parametrize("ineq", sorted(INEQUALITIES))
@pytest.mark.parametrize("regime", ["holder", "reverse"])
def test_evaluators_match_oracle(ineq, regime):
    if Regime(regime) not in INEQUALITIES[ineq].regimes:
        pytest.skip("no such regime")
    variants = ["normalized"] + (["as_written"] if INEQUALITIES[ineq].has_as_written else [])
    sampling = Sampling(lo=1e-2, hi=1e2)
    for variant in variants:
        for i in range(150):
            case = generate_case(ineq, variant, regime, trial_rng(101, i), sampling)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DegenerateRegimeWarning)
                v = case.evaluate()
            lhs, rhs = oracle.sides(case)
            assert v.lhs == pytest.approx(float(lhs), rel=1e-10, abs=1e-300)
            assert v.rhs == pytest.approx(float(rhs), rel=1e-10, abs=1e-300)


# ---------------------------------------------------------------------------
# reductions and structural properties


def test_classical_reduce_examples():
    assert classical_reduce(Young(4, 9, 0.5)) == Young(2, 3, 1.0)
    inst = Paired((1, 4), (9, 16), 0.5)
    assert classical_reduce(inst) == Paired((1, 2), (3, 4), 1.0)
    same = Multi([[1.5, 2.0]], 1.0)
    assert classical_reduce(same) == same
    with pytest.raises(UsageError):
        classical_reduce(Bernoulli(2, 0.5))


@pytest.mark.parametrize("ineq", sorted(set(INEQUALITIES) - {"bernoulli"}))
def test_reduction_invariance(ineq):
    for regime in INEQUALITIES[ineq].regimes:
        for i in range(300):
            case = generate_case(ineq, "normalized", regime, trial_rng(17, i), Sampling())
            v = case.evaluate()
            w = case.reduced().evaluate()
            assert abs(v.gap - w.gap) <= 1e-9 * v.scale


def test_young_regime_duality():
    rng = random.Random(12)
    for _ in range(500):
        a, b = rng.uniform(0.05, 20), rng.uniform(0.05, 20)
        alpha = rng.uniform(0.05, 1)
        inst = Young(a, b, alpha)
        la, lb = alpha * math.log(a), alpha * math.log(b)
        for pair in (ConjugatePair(rng.uniform(1.05, 6)), ConjugatePair(rng.uniform(0.05, 0.95))):
            if abs(pair.p * la - pair.q * lb) < 1e-2:
                continue  # too close to the equality manifold for a strict gap
            v = eval_young(inst, pair)
            assert v.gap > 0
            assert v.direction == ("<=" if pair.regime is Regime.HOLDER else ">=")


def test_homogeneity():
    rng = random.Random(21)
    for _ in range(300):
        n = rng.randint(1, 5)
        x = [rng.uniform(0.1, 10) for _ in range(n)]
        y = [rng.uniform(0.1, 10) for _ in range(n)]
        alpha, t = rng.uniform(0.05, 1), rng.uniform(0.1, 10)
        base, scaled = Paired(x, y, alpha), Paired([t * v for v in x], [t * v for v in y], alpha)
        pair = ConjugatePair(rng.uniform(1.1, 6))
        v0, v1 = eval_holder(base, pair), eval_holder(scaled, pair)
        assert v1.lhs == pytest.approx(v0.lhs * t ** (2 * alpha), rel=1e-12)
        assert v1.rhs == pytest.approx(v0.rhs * t ** (2 * alpha), rel=1e-12)
        assert v0.status is v1.status
        for p in (pair.p, 1 / pair.p):
            v0, v1 = eval_minkowski(base, p), eval_minkowski(scaled, p)
            assert v1.lhs == pytest.approx(v0.lhs * t**alpha, rel=1e-12)
            assert v1.rhs == pytest.approx(v0.rhs * t**alpha, rel=1e-12)
            assert v0.status is v1.status


def test_equality_conditions():
    rng = random.Random(31)
    for _ in range(200):
        alpha = rng.uniform(0.05, 1)
        p = rng.uniform(1.1, 6)
        pair = ConjugatePair(p)
        # a^(p alpha) = b^(q alpha)
        a = rng.uniform(0.2, 5)
        b = a ** (p / pair.q)
        assert eval_young(Young(a, b, alpha), pair).status is EQ
        assert eval_young(Young(a, a ** (0.5 / ConjugatePair(0.5).q), alpha), ConjugatePair(0.5)).status is EQ
        # |x_i|^p proportional to |y_i|^q
        x = [rng.uniform(0.2, 5) for _ in range(4)]
        lam = rng.uniform(0.2, 5)
        y = [lam * v ** (p / pair.q) for v in x]
        assert eval_holder(Paired(x, y, alpha), pair).status is EQ
        # n-ary: all a_j^(p_j) equal
        ps = (3.0, 3.0, 3.0)
        t = rng.uniform(0.2, 5)
        assert eval_nary_young(NaryYoung([t ** (1 / q) for q in ps], alpha), ExponentTuple(ps)).status is EQ


def test_printed_holder_condition_only_sufficient_at_two():
    x = (1.0, 2.0, 3.0)
    y = tuple(2 * v for v in x)
    assert eval_holder(Paired(x, y, 0.5), ConjugatePair(2)).status is EQ
    assert eval_holder(Paired(x, y, 0.5), ConjugatePair(3)).status is HOLDS


def test_case_validation_and_ids():
    assert normalize_id("Nary-Young") == "nary_young"
    with pytest.raises(UsageError):
        normalize_id("cauchy")
    with pytest.raises(UsageError):
        Case("young", Paired((1,), (1,)), ConjugatePair(2))
    with pytest.raises(UsageError):
        Case("minkowski", Paired((1,), (1,)), ConjugatePair(2))
    with pytest.raises(UsageError):
        Case("radon_multi", Multi([[1, 1]]), 2.0)
    c = Case("bernoulli", Bernoulli(2, 3))
    assert c.regime is Regime.REVERSE
    assert Case("minkowski", Paired((1,), (1,)), 0.5).regime is Regime.REVERSE
