"""Zeta values, Euler's constant and integer-relation identification.

Constants are represented over the independent generators C, zeta(2) and the
odd zeta values; even zeta values are rational multiples of powers of zeta(2)
and are only used for display.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import mpmath

__all__ = [
    "bernoulli",
    "zeta_value",
    "euler_gamma",
    "ZetaMonomial",
    "ZetaPolynomial",
    "monomial_basis",
    "lll_reduce",
    "identify",
    "Identification",
    "format_paper_style",
    "parse_paper_style",
    "even_zeta_factor",
]

DEFAULT_DIGITS = 40
DEFAULT_MAX_HEIGHT = 10**8
GUARD = 5


_BERNOULLI = [Fraction(1)]


def _bernoulli_table(n: int) -> list:
    # grown in place so repeated calls with increasing n stay linear in total work
    b = _BERNOULLI
    for m in range(len(b), n + 1):
        if m > 1 and m % 2:
            b.append(Fraction(0))
            continue
        s = sum(comb(m + 1, k) * b[k] for k in range(m) if k < 2 or k % 2 == 0)
        b.append(-s / (m + 1))
    return b


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > 1 and n % 2:
        return Fraction(0)
    return _bernoulli_table(n)[n]


def even_zeta_factor(k: int) -> Fraction:
    """Rational f with zeta(2)^k = f * zeta(2k)."""
    # zeta(2k) = (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!),  zeta(2)^k = pi^{2k} / 6^k
    z2k = (-1) ** (k + 1) * bernoulli(2 * k) * 4**k / (2 * factorial(2 * k))
    return Fraction(1, 6**k) / z2k


def _em_zeta(s: int, dps: int) -> tuple:
    """Euler-Maclaurin for zeta(s); returns (value, bound on the first omitted term)."""
    with mpmath.workdps(dps + 15):
        tol = mpmath.mpf(10) ** (-(dps + 5))
        N = max(10, dps)
        total = mpmath.fsum(mpmath.mpf(j) ** (-s) for j in range(1, N))
        Nm = mpmath.mpf(N)
        total += Nm ** (1 - s) / (s - 1) + Nm ** (-s) / 2
        rising = mpmath.mpf(s)  # s (s+1) ... (s+2m-2)
        m = 1
        while True:
            term = mpmath.mpf(bernoulli(2 * m).numerator) / bernoulli(2 * m).denominator
            term = term / mpmath.factorial(2 * m) * rising * Nm ** (-s - 2 * m + 1)
            total += term
            rising *= (s + 2 * m - 1) * (s + 2 * m)
            nxt = mpmath.mpf(bernoulli(2 * m + 2).numerator) / bernoulli(2 * m + 2).denominator
            nxt = abs(nxt / mpmath.factorial(2 * m + 2) * rising * Nm ** (-s - 2 * m - 1))
            m += 1
            if nxt < tol:
                break
            if m > 10 * dps:
                raise ArithmeticError("Euler-Maclaurin did not reach the requested accuracy")
        return total, nxt


@lru_cache(maxsize=None)
def _zeta_cached(k: int, digits: int):
    val, bound = _em_zeta(k, digits)
    if k % 2 == 0:
        with mpmath.workdps(digits + 15):
            b = bernoulli(k)
            closed = abs(mpmath.mpf(b.numerator) / b.denominator) * (2 * mpmath.pi) ** k / (2 * mpmath.factorial(k))
            if abs(closed - val) > mpmath.mpf(10) ** (-(digits + 3)):
                raise ArithmeticError(f"zeta({k}) disagrees with the Bernoulli closed form")
    return val


def zeta_value(k: int, digits: int = DEFAULT_DIGITS):
    """zeta(k) to ``digits`` significant decimals (returned with a few guard digits)."""
    if k < 2:
        raise ValueError("zeta(k) needs k >= 2")
    if digits > 1000:
        raise ValueError("at most 1000 digits supported")
    return _zeta_cached(k, digits)


def _gamma_euler_maclaurin(dps: int):
    # C = H_{N-1} - ln N + 1/(2N) + sum_m B_{2m} / (2m N^{2m})
    with mpmath.workdps(dps + 15):
        tol = mpmath.mpf(10) ** (-(dps + 5))
        N = max(10, dps)
        Nm = mpmath.mpf(N)
        total = mpmath.fsum(mpmath.mpf(1) / j for j in range(1, N)) - mpmath.log(Nm) + 1 / (2 * Nm)
        m = 1
        while True:
            b = bernoulli(2 * m)
            total += mpmath.mpf(b.numerator) / b.denominator / (2 * m * Nm ** (2 * m))
            b2 = bernoulli(2 * m + 2)
            nxt = abs(mpmath.mpf(b2.numerator) / b2.denominator / ((2 * m + 2) * Nm ** (2 * m + 2)))
            m += 1
            if nxt < tol:
                return total
            if m > 10 * dps:
                raise ArithmeticError("Euler-Maclaurin for C did not converge")


def _gamma_brent_mcmillan(dps: int):
    # C = A/B - ln n,  A = sum (n^k/k!)^2 H_k,  B = sum (n^k/k!)^2; error ~ pi exp(-4n)
    with mpmath.workdps(dps + 15):
        n = int(dps * 0.6) + 10  # 4 n log10(e) > dps + 10
        nn = mpmath.mpf(n) ** 2
        term = mpmath.mpf(1)
        A = mpmath.mpf(0)
        B = mpmath.mpf(1)
        H = mpmath.mpf(0)
        tol = mpmath.mpf(10) ** (-(dps + 12))
        k = 0
        while True:
            k += 1
            term = term * nn / (k * k)
            H += mpmath.mpf(1) / k
            A += term * H
            B += term
            if k > n and term * H < tol * B:
                break
        return A / B - mpmath.log(n)


@lru_cache(maxsize=None)
def _gamma_cached(digits: int):
    a = _gamma_euler_maclaurin(digits)
    b = _gamma_brent_mcmillan(digits)
    with mpmath.workdps(digits + 15):
        if abs(a - b) > mpmath.mpf(10) ** (-(digits + 3)):
            raise ArithmeticError("Euler's constant: the two methods disagree")
    return a


def euler_gamma(digits: int = DEFAULT_DIGITS):
    """Euler's constant, cross-checked by Euler-Maclaurin and Brent-McMillan."""
    if digits > 1000:
        raise ValueError("at most 1000 digits supported")
    return _gamma_cached(digits)


@dataclass(frozen=True, order=True)
class ZetaMonomial:
    """Exponents of C, zeta(2) and the odd zeta values, as ((arg, exp), ...) with arg 1 meaning C."""

    factors: tuple = ()

    @classmethod
    def of(cls, **kw) -> "ZetaMonomial":
        return cls(tuple(sorted((int(k[1:]) if k != "C" else 1, v) for k, v in kw.items() if v)))

    @property
    def weight(self) -> int:
        return sum(a * e for a, e in self.factors)

    def value(self, digits: int):
        with mpmath.workdps(digits + 15):
            v = mpmath.mpf(1)
            for a, e in self.factors:
                g = euler_gamma(digits) if a == 1 else zeta_value(a, digits)
                v *= g**e
            return v

    def __str__(self):
        if not self.factors:
            return "1"
        return "".join(("C" if a == 1 else f"ζ({a})") + (f"^{e}" if e > 1 else "") for a, e in self.factors)


@dataclass(frozen=True)
class ZetaPolynomial:
    terms: tuple  # ((ZetaMonomial, Fraction), ...) sorted, zero coefficients dropped
    weight: int

    @classmethod
    def build(cls, terms, weight: int) -> "ZetaPolynomial":
        acc: dict = {}
        for m, c in terms:
            if m.weight != weight:
                raise ValueError(f"monomial {m} has weight {m.weight}, expected {weight}")
            acc[m] = acc.get(m, Fraction(0)) + Fraction(c)
        return cls(tuple(sorted((m, c) for m, c in acc.items() if c)), weight)

    @classmethod
    def zero(cls, weight: int = 0) -> "ZetaPolynomial":
        return cls((), weight)

    def is_zero(self) -> bool:
        return not self.terms

    def value(self, digits: int = DEFAULT_DIGITS):
        with mpmath.workdps(digits + 15):
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * m.value(digits) for m, c in self.terms)

    def scaled(self, t) -> "ZetaPolynomial":
        return ZetaPolynomial.build([(m, c * Fraction(t)) for m, c in self.terms], self.weight)

    def internal(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{m}" for m, c in self.terms)


def _partitions(n: int, parts: list[int], start: int = 0):
    if n == 0:
        yield ()
        return
    for i in range(start, len(parts)):
        p = parts[i]
        if p <= n:
            for rest in _partitions(n - p, parts, i):
                yield (p,) + rest


def monomial_basis(weight: int, include_euler: bool = False) -> list[ZetaMonomial]:
    """All monomials of the given weight in C (optional), zeta(2) and odd zeta values."""
    if weight < 0:
        raise ValueError("weight must be non-negative")
    parts = ([1] if include_euler else []) + [2] + list(range(3, weight + 1, 2))
    out = []
    for p in _partitions(weight, parts):
        counts: dict = {}
        for a in p:
            counts[a] = counts.get(a, 0) + 1
        out.append(ZetaMonomial(tuple(sorted(counts.items()))))
    out.sort(key=lambda m: (len(m.factors), m.factors))
    return out


def _round_div(a: int, b: int) -> int:
    # nearest integer to a/b, b > 0
    return (2 * a + b) // (2 * b)


def lll_reduce(basis, delta: Fraction = Fraction(3, 4), return_transform: bool = False):
    """Integral LLL reduction (Cohen, Algorithm 2.6.7) of the rows of ``basis``.

    All arithmetic is over the integers.  With ``return_transform`` the
    unimodular matrix U with ``reduced = U * basis`` is returned as well.
    """
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    H = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return (b, H) if return_transform else b
    num, den = delta.numerator, delta.denominator

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    d = [0] * (n + 1)  # d[0] = 1, d[i] = Gram determinant of the first i vectors
    lam = [[0] * n for _ in range(n)]
    d[0] = 1
    d[1] = dot(b[0], b[0])
    if d[1] == 0:
        raise ValueError("basis vectors must be linearly independent")

    def redi(k, l):  # 0-based rows
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = _round_div(lam[k][l], d[l + 1])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            H[k] = [x - q * y for x, y in zip(H[k], H[l])]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swapi(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        H[k], H[k - 1] = H[k - 1], H[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = dot(b[k], b[j])
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    d[k + 1] = u
                    if u == 0:
                        raise ValueError("basis vectors must be linearly independent")
        redi(k, k - 1)
        # Lovasz: d_k d_{k-2} >= delta d_{k-1}^2 - lambda^2 (scaled Gram-Schmidt form)
        if den * d[k + 1] * d[k - 1] < num * d[k] * d[k] - den * lam[k][k - 1] ** 2:
            swapi(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                redi(k, l)
            k += 1
    return (b, H) if return_transform else b


@dataclass
class Identification:
    polynomial: ZetaPolynomial | None
    confidence: float
    value: object
    digits: int
    relation: tuple = field(default=())

    @property
    def identified(self) -> bool:
        return self.polynomial is not None


def _find_relation(x, monos, digits: int, max_height: int, include_x: bool = True):
    with mpmath.workdps(digits + 20):
        vals = [x] + [m.value(digits + 10) for m in monos]
        scale = mpmath.mpf(10) ** digits
        n = len(vals)
        rows = []
        for i, v in enumerate(vals):
            rows.append([int(i == j) for j in range(n)] + [int(mpmath.nint(v * scale))])
        red = lll_reduce(rows)
        norms = sorted(sum(c * c for c in r) for r in red)
        conf = float(mpmath.sqrt(mpmath.mpf(norms[1]) / norms[0])) if len(norms) > 1 and norms[0] else 0.0
        tol = mpmath.mpf(10) ** (-(digits - GUARD))
        best = None
        for r in red:
            p = r[:n]
            if p[0] == 0 or max(abs(c) for c in p) > max_height:
                continue
            resid = abs(mpmath.fsum(c * v for c, v in zip(p, vals)))
            if resid < tol * max(1, abs(p[0])):
                if best is None or max(map(abs, p)) < max(map(abs, best)):
                    best = p
        return best, conf


def identify(
    value,
    weight: int,
    digits: int = DEFAULT_DIGITS,
    max_height: int = DEFAULT_MAX_HEIGHT,
    include_euler: bool = False,
) -> Identification:
    """Express ``value`` as a rational polynomial of the given weight in C and zeta values.

    A relation is accepted only if it is found at ``digits`` and again at
    ``digits + 10``; ``value`` must therefore be accurate to about ``digits + 10``.
    """
    with mpmath.workdps(digits + 25):
        if isinstance(value, Fraction):
            x = mpmath.mpf(value.numerator) / value.denominator
        else:
            x = mpmath.mpf(value)
        if abs(x) < mpmath.mpf(10) ** (-(digits + 10)):
            return Identification(ZetaPolynomial.zero(weight), float("inf"), x, digits, (1,))
        monos = monomial_basis(weight, include_euler)
        if not monos:
            return Identification(None, 0.0, x, digits)
        first, conf = _find_relation(x, monos, digits, max_height)
        if first is None:
            return Identification(None, conf, x, digits)
        second, _ = _find_relation(x, monos, digits + 10, max_height)
        if second is None:
            return Identification(None, conf, x, digits)
        norm = lambda p: tuple(Fraction(-c, p[0]) for c in p[1:])  # noqa: E731
        if norm(first) != norm(second):
            return Identification(None, conf, x, digits)
        poly = ZetaPolynomial.build(list(zip(monos, norm(first))), weight)
        return Identification(poly, conf, x, digits, tuple(first))


_SUB = {1: "C"}


def _display_terms(p: ZetaPolynomial) -> list[tuple[Fraction, tuple]]:
    """Convert to (coefficient, sorted display args) with zeta(2)^k folded into zeta(2k)."""
    out = []
    for m, c in p.terms:
        args = []
        coeff = Fraction(c)
        for a, e in m.factors:
            if a == 2:
                coeff *= even_zeta_factor(e)
                args.append(2 * e)
            else:
                args.extend([a] * e)
        out.append((coeff, tuple(sorted(args))))
    out.sort(key=lambda t: (-len(t[1]), t[1]))
    return out


def _render_args(args: tuple) -> str:
    parts = []
    i = 0
    while i < len(args):
        j = i
        while j < len(args) and args[j] == args[i]:
            j += 1
        a = args[i]
        base = "C" if a == 1 else f"ζ({a})"
        parts.append(base + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return "".join(parts)


def format_paper_style(p: ZetaPolynomial) -> str:
    """Render with zeta(2)^k shown as rational * zeta(2k), e.g. ``27/4 ζ(4)``.

    Monomials with more factors come first, ties broken by the sorted argument
    tuple.  :func:`parse_paper_style` inverts this exactly.
    """
    if p.is_zero():
        return "0"
    pieces = []
    for k, (c, args) in enumerate(_display_terms(p)):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = _render_args(args)
        txt = body if mag == 1 else f"{mag} {body}"
        if k == 0:
            pieces.append(("-" if sign == "-" else "") + txt)
        else:
            pieces.append(f" {sign} {txt}")
    return "".join(pieces)


_TERM = re.compile(r"([+-])?\s*(\d+(?:/\d+)?)?\s*((?:(?:C|ζ\(\d+\))(?:\^\d+)?)+)")
_FACTOR = re.compile(r"(C|ζ\((\d+)\))(?:\^(\d+))?")


def parse_paper_style(text: str, weight: int) -> ZetaPolynomial:
    """Inverse of :func:`format_paper_style`."""
    text = text.strip()
    if text == "0":
        return ZetaPolynomial.zero(weight)
    terms = []
    for sign, coeff, body in _TERM.findall(text):
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        counts: dict = {}
        for _, arg, exp in _FACTOR.findall(body):
            a = int(arg) if arg else 1
            e = int(exp) if exp else 1
            if a % 2 == 0:
                # zeta(2k) = zeta(2)^k / f_k
                c /= even_zeta_factor(a // 2) ** e
                counts[2] = counts.get(2, 0) + (a // 2) * e
            else:
                counts[a] = counts.get(a, 0) + e
        terms.append((ZetaMonomial(tuple(sorted(counts.items()))), c))
    return ZetaPolynomial.build(terms, weight)
