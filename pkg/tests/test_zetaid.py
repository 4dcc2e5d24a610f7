from fractions import Fraction

import mpmath
import pytest

from qapery.zetaid import (
    ZetaMonomial,
    ZetaPolynomial,
    bernoulli,
    euler_gamma,
    even_zeta_factor,
    format_paper_style,
    identify,
    lll_reduce,
    monomial_basis,
    parse_paper_style,
    zeta_value,
)


def test_bernoulli():
    assert [bernoulli(n) for n in range(7)] == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0, Fraction(1, 42)]
    assert bernoulli(12) == Fraction(-691, 2730)


def test_even_zeta_factor():
    # zeta(2)^2 = pi^4/36 = (90/36) zeta(4)
    assert even_zeta_factor(1) == 1
    assert even_zeta_factor(2) == Fraction(5, 2)
    assert even_zeta_factor(3) == Fraction(35, 8)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 7, 9, 10, 11])
def test_zeta_against_mpmath(k):
    with mpmath.workdps(70):
        ref = mpmath.zeta(k)
        assert abs(zeta_value(k, 50) - ref) < mpmath.mpf(10) ** -50


def test_euler_gamma_against_mpmath():
    with mpmath.workdps(70):
        assert abs(euler_gamma(50) - mpmath.euler) < mpmath.mpf(10) ** -50


def test_zeta_reference_digits():
    # first digits of zeta(3) (Apery's constant) and of the Euler-Mascheroni constant
    with mpmath.workdps(50):
        assert mpmath.nstr(zeta_value(3, 40), 30).startswith("1.2020569031595942853997381615")
        assert mpmath.nstr(euler_gamma(40), 30).startswith("0.57721566490153286060651209008")


def test_zeta_bad_argument():
    with pytest.raises(ValueError):
        zeta_value(1)


def test_monomial_basis():
    assert [str(m) for m in monomial_basis(2)] == ["ζ(2)"]
    assert [str(m) for m in monomial_basis(5)] == ["ζ(5)", "ζ(2)ζ(3)"]
    assert len(monomial_basis(6)) == 2  # zeta(2)^3, zeta(3)^2
    assert len(monomial_basis(2, include_euler=True)) == 2
    assert all(m.weight == 9 for m in monomial_basis(9))


def test_lll_properties():
    basis = [[1, 0, 0, 31415], [0, 1, 0, 27182], [0, 0, 1, 14142]]
    red, T = lll_reduce(basis, return_transform=True)
    # unimodular transform reproduces the reduced basis
    for i, row in enumerate(red):
        assert row == [sum(T[i][k] * basis[k][j] for k in range(3)) for j in range(4)]
    # size reduced: first vector no longer than the shortest input
    assert sum(x * x for x in red[0]) <= min(sum(x * x for x in b) for b in basis)


def test_lll_finds_planted_relation():
    with mpmath.workdps(40):
        x = 3 * mpmath.zeta(3) - 2 * mpmath.pi**2
        vals = [x, mpmath.zeta(3), mpmath.pi**2]
        s = mpmath.mpf(10) ** 30
        rows = [[int(i == j) for j in range(3)] + [int(mpmath.nint(v * s))] for i, v in enumerate(vals)]
    red = lll_reduce(rows)
    assert any(r[:3] in ([1, -3, 2], [-1, 3, -2]) for r in red)


@pytest.mark.parametrize(
    "text,weight",
    [("ζ(2)", 2), ("27/4 ζ(4)", 4), ("-8 ζ(2)ζ(3) - 4 ζ(5)", 5), ("-32 ζ(3)^2 - 62 ζ(6)", 6), ("1/2 C^2 + 7/2 ζ(2)", 2)],
)
def test_identify_roundtrip(text, weight):
    p = parse_paper_style(text, weight)
    assert format_paper_style(p) == text
    res = identify(p.value(60), weight, digits=40, include_euler="C" in text)
    assert res.identified and res.polynomial == p


def test_identify_rejects_non_zeta():
    with mpmath.workdps(60):
        res = identify(mpmath.sqrt(2) * mpmath.pi, 2, digits=40)
    assert not res.identified


def test_identify_zero():
    res = identify(mpmath.mpf(0), 4)
    assert res.identified and res.polynomial.is_zero()


def test_identification_stable_under_more_digits():
    p = parse_paper_style("-27/2 ζ(2)ζ(3) - 9/2 ζ(5)", 5)
    for d in (30, 40, 50):
        assert identify(p.value(d + 20), 5, digits=d).polynomial == p


def test_zeta2_power_display():
    p = ZetaPolynomial.build([(ZetaMonomial(((2, 2),)), Fraction(27, 10))], 4)
    # 27/10 zeta(2)^2 = 27/10 * 5/2 zeta(4)
    assert format_paper_style(p) == "27/4 ζ(4)"


def test_build_rejects_wrong_weight():
    with pytest.raises(ValueError):
        ZetaPolynomial.build([(ZetaMonomial(((3, 1),)), 1)], 2)
