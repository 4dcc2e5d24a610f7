from fractions import Fraction

import mpmath
import pytest

from conftest import gp, gr
from qapery import qde
from qapery.apery import (
    INTEGRAL_PRIMITIVE,
    EmptyRatioError,
    ExtrapolationError,
    apery_class,
    apery_constants,
    componentwise_check,
    convergence_diagnostic,
    detect_period,
    extrapolate,
    normalized_seeds,
    pairing,
    poincare_dual_index,
    point_seed,
    ratio_for_seed,
    ratio_sequence,
    strain_compare,
)
from qapery.zetaid import identify, zeta_value


def test_ratio_sequence_masks_zero_denominators():
    rs = ratio_sequence([1, 2, 3, 4], [0, 1, 0, 2])
    assert rs.indices == (1, 3)
    assert rs.values == (2, 2)
    assert rs.mask == (0, 2)


def test_ratio_sequence_errors():
    with pytest.raises(EmptyRatioError):
        ratio_sequence([0, 1], [0, 0])
    with pytest.raises(ValueError):
        ratio_sequence([1, 2], [1])


def test_extrapolate_harmonic_tail():
    est = extrapolate([1 + Fraction(1, n) for n in range(1, 61)])
    assert abs(est.value - 1) < mpmath.mpf(10) ** -25
    assert est.oscillation_period == 1


def test_extrapolate_geometric_tail():
    L = mpmath.mpf(7) / 3
    with mpmath.workdps(60):
        seq = [L + mpmath.mpf(2) ** -n for n in range(1, 61)]
        est = extrapolate(seq)
        assert abs(est.value - L) < mpmath.mpf(10) ** -15
        assert abs(est.value - L) <= 10 * est.error_estimate + mpmath.mpf(10) ** -30


def test_extrapolate_too_short():
    with pytest.raises(ExtrapolationError):
        extrapolate([1, 2, 3], max_order=8)


def test_period_two_common_limit():
    est = extrapolate([2 + Fraction((-1) ** n, n * n) + Fraction(1, n) for n in range(1, 81)])
    assert abs(est.value - 2) < mpmath.mpf(10) ** -15
    assert not est.oscillating


def test_period_two_distinct_limits():
    seq = [(1 if n % 2 == 0 else 3) + Fraction(1, n) for n in range(1, 81)]
    est = extrapolate(seq)
    assert est.oscillation_period == 2
    assert est.oscillating
    assert sorted(round(float(x), 10) for x in est.class_limits) == [1.0, 3.0]


def test_detect_period_three():
    xs = [mpmath.mpf(n % 3) + mpmath.mpf(1) / n for n in range(1, 91)]
    assert detect_period(xs, mpmath.mpf(10) ** -30) == 3


def test_gr25_zeta2():
    (est,) = apery_constants(gr(2, 5), N=200, precision=40)
    assert est.primitive_codim == 2
    with mpmath.workdps(50):
        assert abs(est.value - zeta_value(2, 50)) < mpmath.mpf(10) ** -35


def test_gr24_truncated_zero():
    (est,) = apery_constants(gr(2, 4), N=60)
    assert est.truncated and est.value == 0


@pytest.mark.parametrize("spec", [("A", 3, 2), ("A", 4, 2), ("B", 4, 4), ("C", 3, 2)])
def test_seeds_pair_to_zero_with_point(spec):
    # every seed is coprimitive: it differs from the point seed in codimension
    op = gp(*spec)
    for c, v, _ in normalized_seeds(op, INTEGRAL_PRIMITIVE):
        assert qde.in_kernel(op, v)
        assert c < op.dim_X


def test_apery_class_reproduces_constants():
    op = gr(2, 5)
    seeds = [v for _, v, _ in normalized_seeds(op)]
    consts = [e.value for e in apery_constants(op)]
    report = apery_class(op, consts, seeds)
    dual = poincare_dual_index(op)
    with mpmath.workdps(50):
        for seed, val in report.functional:
            assert abs(pairing(dual, report.values, seed) - val) < mpmath.mpf(10) ** -40
    assert pairing(dual, report.values, point_seed(op)) == 1


def test_componentwise_ratios_converge():
    op = gr(2, 5)
    seeds = [v for _, v, _ in normalized_seeds(op)]
    consts = [e.value for e in apery_constants(op)]
    rep = componentwise_check(op, seeds, 120, consts)
    assert rep["block_residuals"]
    assert all(b["residual"] < mpmath.mpf(10) ** -30 for b in rep["block_residuals"])


def test_strain_hyperplane_section():
    # SGr(2,6) against Gr(2,6): the weight-2 constants agree, the truncated zero is Gr-only
    X = apery_constants(gr(2, 6))
    Y = apery_constants(gp("C", 3, 2))
    r = strain_compare(X, Y)
    assert len(r["matched"]) == 1
    assert [e.truncated for e in r["x_only"]] == [True]
    assert not r["y_only"]


@pytest.mark.parametrize(
    "spec,codim,alpha,sign",
    [
        (("A", 4, 2), 4, lambda d: zeta_value(2, d), -1),
        (("D", 5, 4), 7, lambda d: -2 * zeta_value(3, d), -1),
        (("A", 8, 2), 12, lambda d: 5 * zeta_value(2, d), 1),
    ],
)
def test_convergence_diagnostic_sign(spec, codim, alpha, sign):
    op = gp(*spec)
    (v,) = [v for c, v, _ in normalized_seeds(op) if c == codim]
    d = convergence_diagnostic(ratio_for_seed(op, v, 120), alpha)
    assert min(n for n, _ in d["values"]) >= 20
    assert d["tail_sign"] == sign


@pytest.mark.parametrize("spec", [("A", 5, 2), ("A", 5, 3), ("B", 4, 4), ("E", 6, 6)])
def test_identification_stable(spec):
    op = gp(*spec)
    a = apery_constants(op, N=200, precision=40)
    b = apery_constants(op, N=300, precision=50)
    for x, y in zip(a, b):
        p = identify(x.value, x.weight, digits=25).polynomial
        q = identify(y.value, y.weight, digits=35).polynomial
        assert p is not None and p == q
