"""Deformed hypergeometric equation for P^{N-1} and the sine formula.

The operator is prod_i (D - u_i)(D + u_i) * D^{N-2n} - q with D = q d/dq.  For
each exponent a in {+-u_i} it has a formal solution R_a = sum_m c_m q^{a+m},
and the Wronskians S_i = R_{u_i}' R_{-u_i} - R_{-u_i}' R_{u_i} are power series
in q whose coefficient ratios tend to sin(2 pi u_i) / sin(2 pi u_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .apery import extrapolate


class ParameterCollision(ValueError):
    pass


@dataclass(frozen=True)
class DeformParams:
    N: int
    u: tuple
    digits: int = 50

    def __post_init__(self):
        u = tuple(Fraction(x) for x in self.u)
        object.__setattr__(self, "u", u)
        if self.N < 2:
            raise ParameterCollision("N must be at least 2")
        if 2 * len(u) > self.N:
            raise ParameterCollision("need 2n <= N")
        if len(set(u)) != len(u):
            raise ParameterCollision("u_i must be distinct")
        for i, x in enumerate(u):
            if x == 0 or abs(x) >= Fraction(1, 2):
                raise ParameterCollision("need 0 < |u_i| < 1/2")
            for y in u[i + 1:]:
                if (x + y).denominator == 1 or (x - y).denominator == 1:
                    raise ParameterCollision("u_i +- u_j must not be an integer")

    @property
    def n(self) -> int:
        return len(self.u)

    def exponents(self) -> list[Fraction]:
        return [s * x for x in self.u for s in (1, -1)]

    def symbol(self, k: Fraction) -> Fraction:
        """P(k) = prod (k - u_i)(k + u_i) * k^{N-2n}, the action of the operator's D-part on q^k."""
        p = Fraction(k) ** (self.N - 2 * self.n)
        for x in self.u:
            p *= (k - x) * (k + x)
        return p


@dataclass(frozen=True)
class FormalSeries:
    """sum_m coeffs[m] q^{offset + m}."""

    offset: Fraction
    coeffs: tuple


def formal_solution_coeffs(p: DeformParams, a, M: int) -> FormalSeries:
    """Coefficients of R_a, normalized by c_0 = 1, via P(a + m + 1) c_{m+1} = c_m."""
    a = Fraction(a)
    if p.symbol(a) != 0:
        raise ValueError(f"{a} is not an exponent of the operator")
    out = []
    with mpmath.workdps(p.digits + 20):
        c = mpmath.mpf(1)
        out.append(c)
        for m in range(M - 1):
            s = p.symbol(a + m + 1)
            if s == 0:
                raise ParameterCollision(f"denominator vanishes at exponent {a + m + 1}")
            c = c / (mpmath.mpf(s.numerator) / s.denominator)
            out.append(c)
    return FormalSeries(a, tuple(out))


def wronskian(r1: FormalSeries, r2: FormalSeries, digits: int = 50) -> list:
    """Coefficients of D(r1) r2 - D(r2) r1, which has integer exponents when the offsets cancel."""
    if r1.offset + r2.offset != 0:
        raise ValueError("offsets must be opposite")
    a1, a2 = r1.offset, r2.offset
    M = min(len(r1.coeffs), len(r2.coeffs))
    out = []
    with mpmath.workdps(digits + 20):
        for k in range(M):
            s = mpmath.mpf(0)
            for m1 in range(k + 1):
                m2 = k - m1
                w = a1 + m1 - a2 - m2
                s += (mpmath.mpf(w.numerator) / w.denominator) * r1.coeffs[m1] * r2.coeffs[m2]
            out.append(s)
    return out


def cancellation_digits(M: int) -> int:
    """Extra digits lost in the Wronskian convolution up to order M (about 0.45 M observed)."""
    return M // 2 + 10


def gamma_normalization(p: DeformParams, a: Fraction, digits: int):
    """1 / (prod_j Gamma(1 + a - u_j) Gamma(1 + a + u_j) * Gamma(1 + a)^{N-2n}).

    Multiplying R_a (with c_0 = 1) by this constant gives the Gamma-normalized
    solution of the sine formula.  Gamma is evaluated only here, once per exponent.
    """
    with mpmath.workdps(digits + 20):
        x = mpmath.mpf(a.numerator) / a.denominator
        g = mpmath.gamma(1 + x) ** (p.N - 2 * p.n)
        for u in p.u:
            v = mpmath.mpf(u.numerator) / u.denominator
            g *= mpmath.gamma(1 + x - v) * mpmath.gamma(1 + x + v)
        return 1 / g


def wronskians(p: DeformParams, M: int, normalized: bool = True) -> list[list]:
    """S_i for each u_i, Gamma-normalized unless ``normalized`` is false."""
    work = p.digits + cancellation_digits(M)
    q = DeformParams(p.N, p.u, work)
    out = []
    for x in p.u:
        S = wronskian(formal_solution_coeffs(q, x, M), formal_solution_coeffs(q, -x, M), work)
        if normalized:
            with mpmath.workdps(work + 20):
                f = gamma_normalization(p, x, work) * gamma_normalization(p, -x, work)
                S = [f * c for c in S]
        out.append(S)
    return out


def deform_residual(p: DeformParams, series: FormalSeries, a=None):
    """Max relative residual of the operator applied to ``series`` coefficient by coefficient."""
    a = series.offset if a is None else Fraction(a)
    worst = mpmath.mpf(0)
    with mpmath.workdps(p.digits + 20):
        c = series.coeffs
        for m in range(len(c)):
            s = p.symbol(a + m)
            lhs = mpmath.mpf(s.numerator) / s.denominator * c[m]
            rhs = c[m - 1] if m else mpmath.mpf(0)
            scale = max(abs(lhs), abs(rhs), mpmath.mpf(10) ** (-(p.digits + 10)) if m == 0 else abs(rhs))
            r = abs(lhs - rhs)
            if scale:
                worst = max(worst, r / scale)
    return worst


def _sin2pi(x: Fraction):
    return mpmath.sin(2 * mpmath.pi * x.numerator / x.denominator)


@dataclass(frozen=True)
class SineRow:
    i: int
    j: int
    empirical: object
    predicted: object
    deviation: object
    error_estimate: object


def sine_check(p: DeformParams, M: int = 2000) -> list[SineRow]:
    """Compare limits of s_i^(k) / s_j^(k) with sin(2 pi u_i) / sin(2 pi u_j)."""
    if M < 200:
        raise ValueError("need at least 200 terms")
    S = wronskians(p, M)
    rows = []
    with mpmath.workdps(p.digits + cancellation_digits(M)):
        for i in range(p.n):
            for j in range(p.n):
                pred = _sin2pi(p.u[i]) / _sin2pi(p.u[j])
                if i == j:
                    rows.append(SineRow(i, j, mpmath.mpf(1), pred, mpmath.mpf(0), mpmath.mpf(0)))
                    continue
                seq = [a / b for a, b in zip(S[i][1:], S[j][1:])]
                est = extrapolate(seq, precision=p.digits)
                rows.append(SineRow(i, j, est.value, pred, abs(est.value - pred), est.error_estimate))
    return rows
