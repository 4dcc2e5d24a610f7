"""Quantum multiplication by a polarization on a product of projective spaces.

On P^{n_1} x ... x P^{n_m} with H_pol = sum w_i H_i, the small quantum ring is
generated by H_i with H_i^{n_i + 1} = q_i.  Restricting to the sub-torus of the
polarization sets q_i = q^{w_i}.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from math import prod

from .gpqh import QHOperator, sparse_from_dict
from .rootsys import ConfigurationError

__all__ = ["ProductSpec", "product_operator", "factor_operator", "anticanonical"]


@dataclass(frozen=True)
class ProductSpec:
    dims: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        object.__setattr__(self, "weights", tuple(int(x) for x in self.weights))
        if not self.dims or len(self.dims) != len(self.weights):
            raise ConfigurationError("dims and weights must be non-empty and of equal length")
        if any(n < 1 for n in self.dims) or any(w < 1 for w in self.weights):
            raise ConfigurationError("factor dimensions and weights must be positive")


def anticanonical(dims) -> ProductSpec:
    return ProductSpec(tuple(dims), tuple(n + 1 for n in dims))


def monomial_basis(dims) -> list[tuple]:
    """Exponent vectors ordered by total degree, then H_1-heavy first."""
    exps = list(cartesian(*(range(n + 1) for n in dims)))
    exps.sort(key=lambda a: (sum(a), tuple(-x for x in a)))
    return exps


def _fano_index(spec: ProductSpec):
    # graded iff c_1 = r * H_pol
    ratios = {(n + 1) / w for n, w in zip(spec.dims, spec.weights)}
    if len(ratios) == 1:
        r = ratios.pop()
        if r == int(r):
            return int(r)
    return None


def _entries(spec: ProductSpec, basis: list[tuple], factors) -> dict:
    index = {a: k for k, a in enumerate(basis)}
    entries: dict[int, dict] = {}
    for col, a in enumerate(basis):
        for i in factors:
            n, w = spec.dims[i], spec.weights[i]
            b = list(a)
            if a[i] < n:
                b[i] += 1
                deg = 0
            else:
                b[i] = 0
                deg = w
            row = index[tuple(b)]
            bucket = entries.setdefault(deg, {})
            bucket[(row, col)] = bucket.get((row, col), 0) + w
    return entries


def _build(spec: ProductSpec, factors, label_weights: bool) -> QHOperator:
    basis = monomial_basis(spec.dims)
    entries = _entries(spec, basis, factors)
    size = len(basis)
    top = max(entries)
    r = _fano_index(spec) if label_weights else None
    labels = tuple(
        "*".join(f"H{i + 1}^{x}" if x > 1 else f"H{i + 1}" for i, x in enumerate(a) if x) or "1" for a in basis
    )
    return QHOperator(
        matrices=tuple(sparse_from_dict(entries.get(d, {}), size) for d in range(top + 1)),
        fano_index=r,
        dim_X=sum(spec.dims),
        grading=tuple(sum(a) for a in basis),
        labels=labels,
        meta={"kind": "product", "dims": list(spec.dims), "weights": list(spec.weights)},
        graded=r is not None,
    )


def product_operator(spec: ProductSpec) -> QHOperator:
    """Operator of quantum multiplication by sum_i w_i H_i with Novikov substitution q_i = q^{w_i}."""
    op = _build(spec, range(len(spec.dims)), True)
    if op.graded:
        from .gpqh import check_grading

        check_grading(op)
    return op


def factor_operator(spec: ProductSpec, i: int) -> QHOperator:
    """Quantum multiplication by w_i H_i alone, on the same basis."""
    return _build(spec, [i], False)


def basis_size(spec: ProductSpec) -> int:
    return prod(n + 1 for n in spec.dims)
