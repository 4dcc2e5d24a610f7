"""Quantum multiplication by the ample generator on H*(G/P), P maximal.

The operator is assembled from Peterson's quantum Chevalley formula in the
form of Fulton and Woodward (Theorem 10.1 of "On the quantum product of
Schubert classes").  Matrices are indexed by Novikov degree measured against
the ample generator H, so a quantum term attached to the curve class
d(alpha) lands in ``matrices[d]``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .rootsys import (
    ConfigurationError,
    CartanType,
    RootDatum,
    WeylElem,
    build_root_datum,
    coset_min_reps,
    in_parabolic_quotient,
)

FORMAT_VERSION = 1


class ConsistencyError(RuntimeError):
    """An internal invariant failed; signals a transcription or programming bug."""


# A sparse matrix is a tuple of columns; column j is a tuple of (row, value).
SparseMatrix = tuple


def sparse_from_dict(entries: dict, size: int) -> SparseMatrix:
    cols: list[list] = [[] for _ in range(size)]
    for (i, j), v in entries.items():
        if v:
            cols[j].append((i, v))
    return tuple(tuple(sorted(c)) for c in cols)


def matvec(m: SparseMatrix, v: Sequence) -> list:
    out = [0] * len(m)
    for j, col in enumerate(m):
        x = v[j]
        if x:
            for i, a in col:
                out[i] += a * x
    return out


def to_dense(m: SparseMatrix) -> list[list]:
    n = len(m)
    rows = [[0] * n for _ in range(n)]
    for j, col in enumerate(m):
        for i, a in col:
            rows[i][j] = a
    return rows


def nnz(m: SparseMatrix) -> int:
    return sum(len(c) for c in m)


@dataclass(frozen=True)
class SchubertBasis:
    datum: RootDatum = field(repr=False)
    node: int
    elements: tuple  # CosetRep, ordered by (length, word)
    codim: tuple
    dim_X: int

    @property
    def size(self) -> int:
        return len(self.elements)

    def index_of_weight(self, labels) -> int:
        return self._weight_index[tuple(labels)]

    @property
    def _weight_index(self) -> dict:
        cache = self.__dict__.get("_wi")
        if cache is None:
            cache = {e.weight: k for k, e in enumerate(self.elements)}
            object.__setattr__(self, "_wi", cache)
        return cache


def schubert_basis(d: RootDatum, node: int) -> SchubertBasis:
    reps = coset_min_reps(d, node)
    return SchubertBasis(
        datum=d,
        node=node,
        elements=tuple(reps),
        codim=tuple(r.length for r in reps),
        dim_X=reps[-1].length,
    )


@dataclass(frozen=True)
class QHOperator:
    """Matrices M_0 .. M_D of quantum multiplication by the chosen divisor class.

    ``matrices[d][j]`` lists the nonzero coefficients of the classes sigma_i in
    H * sigma_j at q-degree d.  ``grading`` gives the codimension of every basis
    element.  ``meta`` records how the operator was built and feeds the text
    serialization header.
    """

    matrices: tuple
    fano_index: int | None
    dim_X: int
    grading: tuple
    labels: tuple
    meta: dict = field(compare=False)
    basis: SchubertBasis | None = field(default=None, repr=False, compare=False)
    graded: bool = True

    @property
    def size(self) -> int:
        return len(self.grading)

    @property
    def max_degree(self) -> int:
        return len(self.matrices) - 1

    @property
    def name(self) -> str:
        m = self.meta
        if m.get("kind") == "product":
            return "x".join(f"P{n}" for n in m["dims"]) + "[" + ",".join(map(str, m["weights"])) + "]"
        return f"{m['family']}{m['rank']}/P{m['node']}"

    def to_text(self) -> str:
        return serialize_operator(self)

    @property
    def op_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def _pieri_labels(basis: SchubertBasis) -> tuple:
    return tuple("s" + "".join(map(str, e.word)) if e.word else "1" for e in basis.elements)


def quantum_condition(length_u: int, length_target: int, c1_on_curve: int) -> bool:
    """Quantum term selector of Peterson's quantum Chevalley formula.

    Fulton-Woodward, Theorem 10.1: for u in W^P,

        sigma_{s_beta} * sigma_u = sum_alpha <omega_beta, alpha^v> sigma_{u s_alpha}
            + sum_alpha <omega_beta, alpha^v> q^{d(alpha)} sigma_{pi_P(u s_alpha)},

    the first sum over alpha in R^+ \\ R_P^+ with l(u s_alpha) = l(u) + 1, the
    second over alpha in R^+ \\ R_P^+ with
    l(pi_P(u s_alpha)) = l(u) + 1 - int_{d(alpha)} c_1(T_X),
    where d(alpha) is the class of alpha^v modulo the coroots of P.
    """
    return length_target == length_u + 1 - c1_on_curve


def quantum_chevalley_operator(d: RootDatum | CartanType, node: int) -> QHOperator:
    if not isinstance(d, RootDatum):
        d = build_root_datum(d)
    if not 1 <= node <= d.rank:
        raise ConfigurationError(f"node {node} out of range for {d.cartan}")
    basis = schubert_basis(d, node)
    k0 = node - 1
    # c_1(T_X) = sum of roots in R^+ \ R_P^+, as Dynkin labels
    c1 = [0] * d.rank
    for k in range(d.npos):
        if d.root_coords[k][k0] > 0:
            c1 = [a + b for a, b in zip(c1, d.root_weights[k])]
    if any(c1[j] for j in range(d.rank) if j != k0):
        raise ConsistencyError("c_1 is not a multiple of the fundamental weight")
    r_formula = c1[k0]
    entries: dict[int, dict] = {}
    inferred_r = set()
    # alpha in R^+ \ R_P^+ with d(alpha) = <omega_node, alpha^v> > 0
    outside = [(k, d.coroot_coords[k][k0], d.reflection_perm(k)) for k in range(d.npos) if d.coroot_coords[k][k0] > 0]
    for col, u in enumerate(basis.elements):
        lam = u.weight
        for k, deg, sa in outside:
            us = WeylElem(d, (), tuple(u.elem.perm[j] for j in sa))
            g = u.elem.perm[k]  # gamma = u(alpha); u s_alpha = s_gamma u
            pg = d.pair_weight(lam, g)
            if pg != deg:
                raise ConsistencyError("pairing <u omega, (u alpha)^v> differs from d(alpha)")
            target = tuple(x - pg * y for x, y in zip(lam, d.root_weights[g]))
            row = basis.index_of_weight(target)
            lt = basis.elements[row].length
            if us.length == u.length + 1:
                if not in_parabolic_quotient(us, node):
                    raise ConsistencyError("classical Chevalley term outside W^P")
                if lt != u.length + 1:
                    raise ConsistencyError("coset length mismatch in classical term")
                bucket = entries.setdefault(0, {})
                bucket[(row, col)] = bucket.get((row, col), 0) + deg
                continue
            c1_curve = sum(a * b for a, b in zip(c1, d.coroot_coords[k]))
            if quantum_condition(u.length, lt, c1_curve):
                drop = u.length + 1 - lt
                if drop % deg:
                    raise ConsistencyError("non-integral Fano index from quantum term")
                inferred_r.add(drop // deg)
                bucket = entries.setdefault(deg, {})
                bucket[(row, col)] = bucket.get((row, col), 0) + deg
    if len(inferred_r) > 1 or (inferred_r and inferred_r != {r_formula}):
        raise ConsistencyError(f"inconsistent grading across quantum terms: {sorted(inferred_r)}")
    top = max(entries) if entries else 0
    n = basis.size
    mats = tuple(sparse_from_dict(entries.get(dd, {}), n) for dd in range(top + 1))
    op = QHOperator(
        matrices=mats,
        fano_index=r_formula,
        dim_X=basis.dim_X,
        grading=basis.codim,
        labels=_pieri_labels(basis),
        meta={"kind": "gp", "family": d.cartan.family, "rank": d.rank, "node": node},
        basis=basis,
    )
    check_grading(op)
    return op


def check_grading(op: QHOperator) -> None:
    """Every nonzero entry of M_d must move codim g to g + 1 - r d."""
    if not op.graded:
        return
    g = op.grading
    for dd, m in enumerate(op.matrices):
        for j, col in enumerate(m):
            for i, _ in col:
                if g[i] != g[j] + 1 - op.fano_index * dd:
                    raise ConsistencyError(f"grading violated in M_{dd} at ({i},{j})")


def classical_operator(op: QHOperator) -> SparseMatrix:
    return op.matrices[0]


def poincare_involution(b: SchubertBasis) -> list[int]:
    """Index permutation u -> w_0 u w_{0,P}; on coset weights this is lambda -> w_0 lambda."""
    d = b.datum
    w0 = d.longest
    out = []
    for e in b.elements:
        lam = list(e.weight)
        for i in reversed(w0.word):
            c = lam[i - 1]
            if c:
                lam = [x - c * y for x, y in zip(lam, d.cartan_matrix[i - 1])]
        try:
            j = b.index_of_weight(lam)
        except KeyError:
            raise ConsistencyError("Poincare dual outside W^P") from None
        if b.codim[j] != b.dim_X - e.length:
            raise ConsistencyError("Poincare dual has wrong codimension")
        out.append(j)
    return out


def pieri_oracle_typeA(k: int, N: int, partition: Sequence[int]) -> list[tuple[tuple, int, int]]:
    """H * sigma_lambda in QH*(Gr(k, N)) by the quantum Pieri rule.

    Classical terms add one box inside the k x (N-k) rectangle; the quantum term
    q sigma_{(lambda_2 - 1, ..., lambda_k - 1)} appears when lambda_1 = N - k and
    lambda_k > 0.  Returns ``(partition, q_degree, coefficient)`` triples.
    """
    lam = list(partition) + [0] * (k - len(partition))
    if len(lam) > k or any(lam[i] < lam[i + 1] for i in range(k - 1)) or (lam and (lam[0] > N - k or lam[-1] < 0)):
        raise ValueError(f"partition {partition} does not fit in a {k}x{N - k} box")
    out = []
    for i in range(k):
        if lam[i] < N - k and (i == 0 or lam[i - 1] > lam[i]):
            mu = lam[:]
            mu[i] += 1
            out.append((_strip(mu), 0, 1))
    if lam[0] == N - k and lam[k - 1] > 0:
        out.append((_strip([x - 1 for x in lam[1:]]), 1, 1))
    return out


def _strip(p) -> tuple:
    return tuple(x for x in p if x)


def grassmannian_partition(b: SchubertBasis, idx: int) -> tuple:
    """Partition in the k x (N-k) box attached to a W^P element of type A."""
    d = b.datum
    k = b.node
    amb = d.weight_to_ambient(b.elements[idx].weight)
    order = sorted(range(len(amb)), key=lambda i: (-amb[i], i))
    pos = sorted(order[:k])  # 0-based positions carrying omega_k's "ones"
    return _strip(sorted((p - i for i, p in enumerate(pos)), reverse=True))


def serialize_operator(op: QHOperator) -> str:
    m = op.meta
    lines = [f"QHOPERATOR v{FORMAT_VERSION}"]
    if m.get("kind") == "product":
        lines.append("kind product")
        lines.append("dims " + " ".join(map(str, m["dims"])))
        lines.append("weights " + " ".join(map(str, m["weights"])))
    else:
        lines.append("kind gp")
        lines += [f"family {m['family']}", f"rank {m['rank']}", f"node {m['node']}"]
    lines.append(f"r {op.fano_index if op.fano_index is not None else 'none'}")
    lines.append(f"graded {int(op.graded)}")
    lines.append(f"dim {op.dim_X}")
    lines.append(f"size {op.size}")
    lines.append("degrees " + str(op.max_degree))
    lines.append("grading " + " ".join(map(str, op.grading)))
    lines.append("labels " + " ".join(op.labels))
    for dd, mat in enumerate(op.matrices):
        for j, col in enumerate(mat):
            for i, v in col:
                lines.append(f"{dd} {i} {j} {v}")
    return "\n".join(lines) + "\n"


def parse_operator(text: str) -> QHOperator:
    lines = text.splitlines()
    if not lines or lines[0] != f"QHOPERATOR v{FORMAT_VERSION}":
        raise ValueError("unsupported operator format version")
    header = {}
    body_start = None
    for idx, line in enumerate(lines[1:], start=1):
        key, _, rest = line.partition(" ")
        if key.isdigit():
            body_start = idx
            break
        header[key] = rest
    if body_start is None:
        body_start = len(lines)
    size = int(header["size"])
    ndeg = int(header["degrees"]) + 1
    entries: list[dict] = [{} for _ in range(ndeg)]
    for line in lines[body_start:]:
        if not line.strip():
            continue
        dd, i, j, v = line.split()
        val = Fraction(v)
        entries[int(dd)][(int(i), int(j))] = int(val) if val.denominator == 1 else val
    if header["kind"] == "product":
        meta = {
            "kind": "product",
            "dims": [int(x) for x in header["dims"].split()],
            "weights": [int(x) for x in header["weights"].split()],
        }
    else:
        meta = {"kind": "gp", "family": header["family"], "rank": int(header["rank"]), "node": int(header["node"])}
    r = header["r"]
    return QHOperator(
        matrices=tuple(sparse_from_dict(e, size) for e in entries),
        fano_index=None if r == "none" else int(r),
        dim_X=int(header["dim"]),
        grading=tuple(int(x) for x in header["grading"].split()),
        labels=tuple(header["labels"].split()),
        meta=meta,
        graded=bool(int(header["graded"])),
    )
