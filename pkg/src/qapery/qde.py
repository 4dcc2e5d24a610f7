"""Holomorphic solutions of D phi = H * phi by coefficient recursion.

With phi = sum_n phi_n q^n and H* = sum_d M_d q^d the equation reads

    (n - M_0) phi_n = sum_{d >= 1} M_d phi_{n-d},

and since M_0 is nilpotent, (n - M_0)^{-1} = sum_{k=0}^{dim X} M_0^k / n^{k+1}.
Rational mode keeps every phi_n as an integer vector over a common
denominator; float mode runs the same recursion in mpmath big floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import gmpy2
import mpmath

from .gpqh import QHOperator, SparseMatrix, matvec

RATIONAL = "rational"
FLOAT = "float"


class SeedError(ValueError):
    """The seed vector is not annihilated by cup product with H."""


def _content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        if x:
            g = gcd(g, int(x))
            if g == 1:
                break
    return g


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Right nullspace basis from the reduced row echelon form."""
    m = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def primitive_integral(v: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to an integral one with content 1 and positive leading entry."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    iv = [int(Fraction(x) * den) for x in v]
    g = _content(iv)
    if g == 0:
        return iv
    lead = next(x for x in iv if x)
    s = 1 if lead > 0 else -1
    return [s * x // g for x in iv]


def graded_blocks(op: QHOperator) -> dict[int, list[int]]:
    blocks: dict[int, list[int]] = {}
    for i, g in enumerate(op.grading):
        blocks.setdefault(g, []).append(i)
    return blocks


def kernel_basis(op: QHOperator) -> list[tuple[int, list[int]]]:
    """Graded integral basis of ker M_0, highest codimension first."""
    m0 = op.matrices[0]
    blocks = graded_blocks(op)
    dense_rows: dict[tuple[int, int], Fraction] = {}
    for j, col in enumerate(m0):
        for i, a in col:
            dense_rows[(i, j)] = Fraction(a)
    out = []
    for c in sorted(blocks, reverse=True):
        cols = blocks[c]
        targets = sorted({i for j in cols for i, _ in m0[j]})
        rows = [[dense_rows.get((i, j), Fraction(0)) for j in cols] for i in targets]
        for v in _nullspace(rows, len(cols)):
            full = [0] * op.size
            for j, x in zip(cols, primitive_integral(v)):
                full[j] = x
            out.append((c, full))
    return out


def in_kernel(op: QHOperator, v: Sequence) -> bool:
    return not any(matvec(op.matrices[0], v))


def _vec_pow_sum_int(m0: SparseMatrix, y: list, n: int, depth: int) -> list:
    """sum_{k=0}^{depth} n^{depth-k} M_0^k y over the integers."""
    acc = [0] * len(y)
    pw = y
    npow = [gmpy2.mpz(n) ** (depth - k) for k in range(depth + 1)]
    for k in range(depth + 1):
        if not any(pw):
            break
        f = npow[k]
        acc = [a + f * b for a, b in zip(acc, pw)]
        pw = matvec(m0, pw)
    return acc


@dataclass
class SolutionSeries:
    """Coefficient vectors phi_0 .. phi_N of a holomorphic solution.

    In rational mode ``numerators[n] / denominators[n]`` is phi_n exactly.
    """

    operator: QHOperator = field(repr=False)
    seed: tuple
    mode: str
    precision: int | None = None
    numerators: list = field(default_factory=list, repr=False)
    denominators: list = field(default_factory=list, repr=False)
    floats: list = field(default_factory=list, repr=False)

    @property
    def N(self) -> int:
        return (len(self.numerators) if self.mode == RATIONAL else len(self.floats)) - 1

    def coeff(self, n: int) -> list:
        if self.mode == RATIONAL:
            den = self.denominators[n]
            return [Fraction(int(x), int(den)) for x in self.numerators[n]]
        return list(self.floats[n])

    @property
    def coeffs(self) -> list[list]:
        return [self.coeff(n) for n in range(self.N + 1)]

    def component(self, index: int) -> list:
        """Sequence of one basis coordinate across all n."""
        if self.mode == RATIONAL:
            return [Fraction(int(v[index]), int(d)) for v, d in zip(self.numerators, self.denominators)]
        return [v[index] for v in self.floats]

    def is_zero(self, n: int) -> bool:
        if self.mode == RATIONAL:
            return not any(self.numerators[n])
        return not any(self.floats[n])

    def residual(self, n: int):
        """Max-norm of (n - M_0) phi_n - sum_d M_d phi_{n-d}, relative in float mode."""
        op = self.operator
        if self.mode == RATIONAL:
            phi = self.coeff(n)
            lhs = [n * a - b for a, b in zip(phi, matvec(op.matrices[0], phi))]
            for d in range(1, op.max_degree + 1):
                if n - d >= 0:
                    lhs = [a - b for a, b in zip(lhs, matvec(op.matrices[d], self.coeff(n - d)))]
            return max((abs(x) for x in lhs), default=Fraction(0))
        with mpmath.workdps(self.precision + 10):
            phi = self.floats[n]
            lhs = [n * a - b for a, b in zip(phi, matvec(op.matrices[0], phi))]
            scale = max((abs(n * a) for a in phi), default=mpmath.mpf(0))
            for d in range(1, op.max_degree + 1):
                if n - d >= 0:
                    rhs = matvec(op.matrices[d], self.floats[n - d])
                    scale = max([scale] + [abs(x) for x in rhs])
                    lhs = [a - b for a, b in zip(lhs, rhs)]
            err = max((abs(x) for x in lhs), default=mpmath.mpf(0))
            return err / scale if scale else err


def solve_series(
    op: QHOperator,
    seed: Sequence,
    N: int,
    mode: str = RATIONAL,
    precision: int = 40,
) -> SolutionSeries:
    """Run the recursion from ``phi_0 = seed`` up to ``phi_N``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if len(seed) != op.size:
        raise SeedError("seed has wrong length")
    seed = tuple(Fraction(x) if mode == RATIONAL else x for x in seed)
    if mode == RATIONAL:
        if not in_kernel(op, seed):
            raise SeedError("seed is not in the kernel of M_0")
        return _solve_rational(op, seed, N)
    if mode != FLOAT:
        raise ValueError(f"unknown mode {mode!r}")
    with mpmath.workdps(precision + 10):
        fs = [mpmath.mpf(x) if not isinstance(x, Fraction) else mpmath.mpf(x.numerator) / x.denominator for x in seed]
        tol = max((abs(x) for x in fs), default=0) * op.size * mpmath.mpf(10) ** (-precision)
        if any(abs(x) > tol for x in matvec(op.matrices[0], fs)):
            raise SeedError("seed is not in the kernel of M_0")
    return _solve_float(op, fs, N, precision, seed)


def _solve_rational(op: QHOperator, seed: tuple, N: int) -> SolutionSeries:
    den0 = 1
    for x in seed:
        den0 = den0 * x.denominator // gcd(den0, x.denominator)
    nums = [[gmpy2.mpz(int(x * den0)) for x in seed]]
    dens = [gmpy2.mpz(den0)]
    m0 = op.matrices[0]
    depth = op.dim_X
    D = op.max_degree
    zero = [gmpy2.mpz(0)] * op.size
    for n in range(1, N + 1):
        prev = [(d, n - d) for d in range(1, D + 1) if n - d >= 0 and any(nums[n - d])]
        if not prev:
            nums.append(list(zero))
            dens.append(gmpy2.mpz(1))
            continue
        L = gmpy2.mpz(1)
        for _, m in prev:
            L = gmpy2.lcm(L, dens[m])
        y = list(zero)
        for d, m in prev:
            f = L // dens[m]
            for j, col in enumerate(op.matrices[d]):
                x = nums[m][j]
                if x:
                    fx = f * x
                    for i, a in col:
                        y[i] += a * fx
        acc = _vec_pow_sum_int(m0, y, n, depth)
        den = L * gmpy2.mpz(n) ** (depth + 1)
        g = den
        for x in acc:
            if x:
                g = gmpy2.gcd(g, x)
                if g == 1:
                    break
        if not any(acc):
            nums.append(list(zero))
            dens.append(gmpy2.mpz(1))
            continue
        nums.append([x // g for x in acc])
        dens.append(den // g)
    return SolutionSeries(op, seed, RATIONAL, None, nums, dens)


def _to_mpfr(x):
    if isinstance(x, Fraction):
        return gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator))
    if isinstance(x, mpmath.mpf):
        sign, man, exp, _ = x._mpf_
        if not man:
            return gmpy2.mpfr(0)
        v = gmpy2.mul_2exp(gmpy2.mpfr(int(man)), int(exp))
        return -v if sign else v
    return gmpy2.mpfr(x)


def _from_mpfr(x):
    # mpmath.mpf(mpfr) goes through a double, so rebuild from mantissa and exponent
    if not x:
        return mpmath.mpf(0)
    man, exp = x.as_mantissa_exp()
    return mpmath.mpf((int(man), int(exp)))


def _solve_float(op: QHOperator, seed: list, N: int, precision: int, raw_seed) -> SolutionSeries:
    # MPFR arithmetic in the inner loop, mpmath values in the result
    m0 = op.matrices[0]
    D = op.max_degree
    bits = int((precision + 10) * 3.33) + 8
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        zero = gmpy2.mpfr(0)
        work = [[_to_mpfr(x) for x in raw_seed]]
        for n in range(1, N + 1):
            y = [zero] * op.size
            for d in range(1, D + 1):
                if n - d < 0:
                    continue
                src = work[n - d]
                for j, col in enumerate(op.matrices[d]):
                    x = src[j]
                    if x:
                        for i, a in col:
                            y[i] += a * x
            inv = gmpy2.mpfr(1) / n
            acc = [x * inv for x in y]
            pw = acc
            for _ in range(op.dim_X):
                pw = [x * inv for x in matvec(m0, pw)]
                if not any(pw):
                    break
                acc = [a + b for a, b in zip(acc, pw)]
            work.append(acc)
    with mpmath.workdps(precision + 10):
        out = [[_from_mpfr(x) for x in v] for v in work]
    return SolutionSeries(op, tuple(raw_seed), FLOAT, precision, floats=out)


def fundamental_term(s: SolutionSeries) -> list:
    """Identity-class (codimension 0) coefficient of every phi_n."""
    idx = s.operator.grading.index(0)
    return s.component(idx)


def truncation_detect(s: SolutionSeries, reference: SolutionSeries | None = None) -> tuple[bool, int]:
    """Whether the solution is a polynomial in q of degree < n0 <= N/2.

    Rational mode is exact.  Float mode declares a coefficient zero when it is
    below the working precision relative to the ``reference`` series (the
    principal solution) at the same index.
    """
    N = s.N
    if s.mode == RATIONAL:
        zero = [s.is_zero(n) for n in range(N + 1)]
    else:
        if reference is None:
            zero = [s.is_zero(n) for n in range(N + 1)]
        else:
            tol = mpmath.mpf(10) ** (-(s.precision - 5))
            zero = []
            for n in range(N + 1):
                a = max((abs(x) for x in s.floats[n]), default=0)
                b = max((abs(x) for x in reference.floats[n]), default=0)
                zero.append(a == 0 or (b > 0 and a / b < tol))
    n0 = N + 1
    while n0 > 0 and zero[n0 - 1]:
        n0 -= 1
    # a solution supported on a few terms whose recursion has died out
    if n0 <= N // 2:
        return True, n0
    return False, n0
