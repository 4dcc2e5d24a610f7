from fractions import Fraction
from math import factorial, gcd

import mpmath
import pytest

from conftest import gp, gr
from qapery import qde
from qapery.apery import normalized_seeds, point_seed
from qapery.gpqh import QHOperator


def test_kernel_examples():
    assert qde.kernel_basis(gp("A", 1, 1)) == [(1, [0, 1])]
    assert [c for c, _ in qde.kernel_basis(gr(2, 5))] == [6, 4]


@pytest.mark.parametrize("spec", [("A", 4, 2), ("A", 5, 2), ("B", 4, 4), ("E", 6, 6), ("C", 3, 2)])
def test_kernel_vectors_are_integral_and_normalized(spec):
    op = gp(*spec)
    kb = qde.kernel_basis(op)
    for c, v in kb:
        assert qde.in_kernel(op, v)
        assert all(op.grading[i] == c for i, x in enumerate(v) if x)
        nz = [x for x in v if x]
        assert nz[0] > 0
        assert gcd(*nz) == 1


def test_p1_series_by_hand():
    op = gp("A", 1, 1)
    s = qde.solve_series(op, [0, 1], 3)
    # basis (1, H): phi_1 = 1 + H, phi_2 = 1/2 + H/4, phi_3 = 1/12 + H/36
    assert s.coeff(1) == [1, 1]
    assert s.coeff(2) == [Fraction(1, 2), Fraction(1, 4)]
    assert s.coeff(3) == [Fraction(1, 12), Fraction(1, 36)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projective_space_closed_form(n):
    # fundamental term of the point-seeded solution is k^n / (k!)^(n+1), i.e. D^n of the J-series coefficient 1/(k!)^(n+1)
    op = gp("A", n, 1)
    a = qde.fundamental_term(qde.solve_series(op, point_seed(op), 20))
    assert a[0] == 0
    for k in range(1, 21):
        assert a[k] == Fraction(k**n, factorial(k) ** (n + 1))


def test_linearity_and_zero_seed():
    op = gr(2, 5)
    seed = qde.kernel_basis(op)[1][1]
    s1 = qde.solve_series(op, seed, 30)
    s3 = qde.solve_series(op, [3 * x for x in seed], 30)
    assert all(b == 3 * a for a, b in zip(qde.fundamental_term(s1), qde.fundamental_term(s3)))
    z = qde.solve_series(op, [0] * op.size, 10)
    assert all(not any(v) for v in z.coeffs)
    assert qde.truncation_detect(z) == (True, 0)


def test_seed_outside_kernel():
    op = gr(2, 5)
    with pytest.raises(qde.SeedError):
        qde.solve_series(op, [1] + [0] * (op.size - 1), 5)
    with pytest.raises(qde.SeedError):
        qde.solve_series(op, [1] + [0] * (op.size - 1), 5, mode=qde.FLOAT)


@pytest.mark.parametrize("spec", [("A", 4, 2), ("A", 5, 2), ("B", 4, 4), ("D", 5, 4)])
def test_residuals_vanish(spec):
    op = gp(*spec)
    for _, v in qde.kernel_basis(op):
        s = qde.solve_series(op, v, 40)
        assert all(s.residual(n) == 0 for n in range(1, 41))
        f = qde.solve_series(op, v, 40, mode=qde.FLOAT, precision=50)
        assert all(f.residual(n) < mpmath.mpf(10) ** -45 for n in range(1, 41))


@pytest.mark.parametrize("spec", [("A", 4, 2), ("A", 5, 2), ("A", 5, 3), ("B", 4, 4), ("D", 5, 4), ("C", 3, 2)])
def test_rational_float_agreement(spec):
    op = gp(*spec)
    assert op.size <= 30
    precision = 40
    tol = mpmath.mpf(10) ** -(precision - 5)
    for _, v in qde.kernel_basis(op):
        r = qde.solve_series(op, v, 120)
        f = qde.solve_series(op, v, 120, mode=qde.FLOAT, precision=precision)
        with mpmath.workdps(precision + 20):
            for n in range(121):
                for a, b in zip(r.coeff(n), f.coeff(n)):
                    a = mpmath.mpf(a.numerator) / a.denominator
                    assert abs(a - b) <= tol * abs(a) or a == b == 0


def _reindexed(op: QHOperator) -> QHOperator:
    # the anticanonical-torus convention: multiplication by c_1 = r H with q-degree r d
    r = op.fano_index
    scale = lambda m: tuple(tuple((i, r * a) for i, a in col) for col in m)  # noqa: E731
    empty = tuple(() for _ in range(op.size))
    mats = [scale(op.matrices[0])]
    for d in range(1, op.max_degree + 1):
        mats += [empty] * (r - 1) + [scale(op.matrices[d])]
    return QHOperator(tuple(mats), op.fano_index, op.dim_X, op.grading, op.labels, op.meta, op.basis, graded=False)


@pytest.mark.parametrize("spec", [("A", 1, 1), ("A", 3, 2)])
def test_reindexing_equivalence(spec):
    op = gp(*spec)
    op2 = _reindexed(op)
    r = op.fano_index
    for _, v in qde.kernel_basis(op):
        a = qde.solve_series(op, v, 12).coeffs
        b = qde.solve_series(op2, v, 12 * r).coeffs
        for m in range(12 * r + 1):
            assert b[m] == (a[m // r] if m % r == 0 else [0] * op.size)


def test_truncation_gr24():
    op = gr(2, 4)
    (c, v, _), = normalized_seeds(op)
    trunc, n0 = qde.truncation_detect(qde.solve_series(op, v, 24))
    assert trunc and n0 <= 12
    assert qde.truncation_detect(qde.solve_series(op, point_seed(op), 24)) == (False, 25)


def test_float_truncation_against_reference():
    op = gr(2, 4)
    (c, v, _), = normalized_seeds(op)
    ref = qde.solve_series(op, point_seed(op), 40, mode=qde.FLOAT, precision=30)
    s = qde.solve_series(op, v, 40, mode=qde.FLOAT, precision=30)
    assert qde.truncation_detect(s, ref)[0]
