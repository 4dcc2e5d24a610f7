import pytest

from conftest import prod
from qapery import qde
from qapery.gpqh import to_dense
from qapery.prodspaces import ProductSpec, anticanonical, basis_size, factor_operator, monomial_basis
from qapery.rootsys import ConfigurationError


def test_anticanonical_weights():
    assert anticanonical((2, 3)) == ProductSpec((2, 3), (3, 4))


def test_basis():
    assert monomial_basis((1, 1)) == [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert basis_size(ProductSpec((2, 3), (1, 1))) == 12


def test_grading_and_index():
    op = prod((2, 2), (3, 3))
    assert op.graded and op.fano_index == 1  # H = 3(H1 + H2) = -K
    op = prod((2, 3), (1, 1))
    assert not op.graded and op.fano_index is None
    op = prod((1, 1), (1, 1))
    assert op.graded and op.fano_index == 2


def test_p1xp1_kernel():
    op = prod((1, 1), (2, 2))
    kb = qde.kernel_basis(op)
    # H1 - H2 in codim 1 and the point class in codim 2
    assert sorted((c, v) for c, v in kb) == [(1, [0, 1, -1, 0]), (2, [0, 0, 0, 1])]


def test_factor_operators_sum_to_total():
    spec = ProductSpec((1, 2), (2, 3))
    total = prod(spec.dims, spec.weights)
    parts = [factor_operator(spec, i) for i in range(2)]
    for d in range(total.max_degree + 1):
        acc = [[0] * total.size for _ in range(total.size)]
        for p in parts:
            if d < len(p.matrices):
                for i, row in enumerate(to_dense(p.matrices[d])):
                    for j, x in enumerate(row):
                        acc[i][j] += x
        assert acc == to_dense(total.matrices[d])


@pytest.mark.parametrize("dims,weights", [((), ()), ((1,), (1, 2)), ((0,), (1,)), ((1,), (0,))])
def test_invalid_specs(dims, weights):
    with pytest.raises(ConfigurationError):
        ProductSpec(dims, weights)
