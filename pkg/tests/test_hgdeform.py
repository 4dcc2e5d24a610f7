from fractions import Fraction as F
from math import factorial

import mpmath
import pytest

from qapery.hgdeform import (
    DeformParams,
    FormalSeries,
    ParameterCollision,
    deform_residual,
    formal_solution_coeffs,
    gamma_normalization,
    sine_check,
    wronskian,
)

TUPLES = {
    5: [(F(1, 7), F(1, 5)), (F(1, 6), F(-1, 9)), (F(1, 8), F(2, 11))],
    6: [(F(1, 7), F(1, 5), F(1, 9)), (F(-1, 5), F(1, 6)), (F(1, 10), F(2, 13), F(-1, 8))],
    7: [(F(1, 11), F(2, 13), F(1, 6)), (F(1, 5),), (F(-1, 7), F(1, 8), F(1, 9))],
}


@pytest.mark.parametrize(
    "N,u",
    [(2, (F(1, 2),)), (2, (0,)), (3, (F(1, 4), F(1, 5))), (5, (F(1, 7), F(1, 7))), (5, (F(1, 4), F(-1, 4))), (1, ())],
)
def test_parameter_collisions(N, u):
    with pytest.raises(ParameterCollision):
        DeformParams(N, u)


def test_undeformed_coefficients():
    p = DeformParams(3, ())
    s = formal_solution_coeffs(p, 0, 12)
    with mpmath.workdps(60):
        for m, c in enumerate(s.coeffs):
            assert abs(c - mpmath.mpf(1) / factorial(m) ** 3) < mpmath.mpf(10) ** -55


def test_non_exponent_rejected():
    with pytest.raises(ValueError):
        formal_solution_coeffs(DeformParams(2, (F(1, 4),)), F(1, 3), 5)


@pytest.mark.parametrize("N", [2, 5, 6, 7])
def test_residuals(N):
    u = TUPLES.get(N, [(F(1, 4),)])[0]
    p = DeformParams(N, u, digits=50)
    for a in p.exponents():
        s = formal_solution_coeffs(p, a, 300)
        assert s.coeffs[0] == 1
        assert deform_residual(p, s) < mpmath.mpf(10) ** -30


def test_perturbed_coefficient_spikes():
    p = DeformParams(5, (F(1, 7), F(1, 5)))
    s = formal_solution_coeffs(p, F(1, 7), 40)
    c = list(s.coeffs)
    c[17] *= 1 + mpmath.mpf(10) ** -10
    assert deform_residual(p, FormalSeries(s.offset, tuple(c))) > mpmath.mpf(10) ** -12


def test_wronskian_trivial_and_antisymmetric():
    one = (mpmath.mpf(1),) + (mpmath.mpf(0),) * 4
    S = wronskian(FormalSeries(F(1, 5), one), FormalSeries(F(-1, 5), one))
    with mpmath.workdps(60):
        assert abs(S[0] - mpmath.mpf(2) / 5) < mpmath.mpf(10) ** -40
    assert not any(S[1:])
    p = DeformParams(5, (F(1, 7), F(1, 5)))
    r1, r2 = formal_solution_coeffs(p, F(1, 7), 30), formal_solution_coeffs(p, F(-1, 7), 30)
    a, b = wronskian(r1, r2), wronskian(r2, r1)
    with mpmath.workdps(60):
        assert all(abs(x + y) < mpmath.mpf(10) ** -40 for x, y in zip(a, b))
    with pytest.raises(ValueError):
        wronskian(r1, r1)


def test_coefficients_match_gamma_ratio():
    # c_m = Gamma-normalization(a + m) / Gamma-normalization(a), checked at a few indices
    p = DeformParams(5, (F(1, 7), F(2, 9)), digits=40)
    a = F(2, 9)
    s = formal_solution_coeffs(p, a, 60)
    base = gamma_normalization(p, a, 40)
    with mpmath.workdps(60):
        for m in (1, 7, 23, 59):
            want = gamma_normalization(p, a + m, 40) / base
            assert abs(s.coeffs[m] / want - 1) < mpmath.mpf(10) ** -35


def test_sine_formula_small():
    rows = sine_check(DeformParams(5, (F(1, 7), F(2, 7))), 200)
    by = {(r.i, r.j): r for r in rows}
    assert by[0, 0].empirical == 1 and by[0, 0].deviation == 0
    with mpmath.workdps(30):
        assert abs(by[0, 1].predicted - mpmath.mpf("0.8019377358048382524722046390148901023")) < mpmath.mpf(10) ** -25
        assert abs(by[0, 1].empirical * by[1, 0].empirical - 1) < mpmath.mpf(10) ** -20
    assert max(r.deviation for r in rows) < mpmath.mpf(10) ** -8


def test_sine_check_needs_terms():
    with pytest.raises(ValueError):
        sine_check(DeformParams(5, (F(1, 7), F(2, 7))), 100)
