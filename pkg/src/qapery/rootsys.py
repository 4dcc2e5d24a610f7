"""Root systems, Weyl group elements and minimal parabolic coset representatives.

Roots are realized in the standard ambient Euclidean spaces (Bourbaki
conventions) with exact rational coordinates.  All Weyl-group combinatorics is
then carried out on integer data derived from that realization: simple-root
coordinates of roots, simple-coroot coordinates of coroots and Dynkin labels of
weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

__all__ = [
    "ConfigurationError",
    "CartanType",
    "RootDatum",
    "WeylElem",
    "build_root_datum",
    "reflect",
    "weyl_length",
    "coset_min_reps",
    "weight_pairing",
]

_ADMISSIBLE = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}

Vector = tuple  # tuple of Fraction (ambient) or int (lattice coordinates)


class ConfigurationError(ValueError):
    """Raised for inadmissible Cartan types, nodes or variety descriptions."""


@dataclass(frozen=True, order=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self):
        check = _ADMISSIBLE.get(self.family)
        if check is None or not isinstance(self.rank, int) or not check(self.rank):
            raise ConfigurationError(f"inadmissible Cartan type {self.family}{self.rank}")

    def __str__(self):
        return f"{self.family}{self.rank}"


def _vec(*xs) -> Vector:
    return tuple(Fraction(x) for x in xs)


def _unit(n: int, i: int, scale=1) -> Vector:
    return tuple(Fraction(scale) if j == i else Fraction(0) for j in range(n))


def _add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def _scale(c, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def _dot(u: Vector, v: Vector):
    return sum(a * b for a, b in zip(u, v))


def _simple_roots(t: CartanType) -> list[Vector]:
    n = t.rank
    h = Fraction(1, 2)
    if t.family == "A":
        return [_sub(_unit(n + 1, i), _unit(n + 1, i + 1)) for i in range(n)]
    if t.family in "BCD":
        roots = [_sub(_unit(n, i), _unit(n, i + 1)) for i in range(n - 1)]
        if t.family == "B":
            roots.append(_unit(n, n - 1))
        elif t.family == "C":
            roots.append(_unit(n, n - 1, 2))
        else:
            roots.append(_add(_unit(n, n - 2), _unit(n, n - 1)))
        return roots
    if t.family == "E":
        e8 = [
            _vec(h, -h, -h, -h, -h, -h, -h, h),
            _add(_unit(8, 0), _unit(8, 1)),
        ] + [_sub(_unit(8, i), _unit(8, i - 1)) for i in range(1, 7)]
        return e8[:n]
    if t.family == "F":
        return [
            _vec(0, 1, -1, 0),
            _vec(0, 0, 1, -1),
            _vec(0, 0, 0, 1),
            _vec(h, -h, -h, -h),
        ]
    # G2 inside the sum-zero plane of R^3; alpha_1 short.
    return [_vec(1, -1, 0), _vec(-2, 1, 1)]


@dataclass(frozen=True)
class RootDatum:
    """Exact root data of a simple Lie type.

    ``roots`` lists the positive roots first (index ``0 .. npos-1``) followed by
    their negatives in the same order, so that ``roots[k + npos] == -roots[k]``.
    Lattice coordinates are kept alongside the ambient vectors:

    * ``root_coords[k]``: coefficients of the root in the simple roots;
    * ``coroot_coords[k]``: coefficients of its coroot in the simple coroots;
    * ``root_weights[k]``: Dynkin labels of the root, i.e. ``<root, alpha_j^v>``.
    """

    cartan: CartanType
    simple_roots: tuple
    cartan_matrix: tuple
    roots: tuple
    root_coords: tuple
    coroot_coords: tuple
    root_weights: tuple
    fundamental_weights: tuple
    rho: tuple
    _index: dict = field(repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.cartan.rank

    @property
    def npos(self) -> int:
        return len(self.roots) // 2

    @property
    def positive_roots(self) -> list[tuple[Vector, Vector]]:
        """Pairs ``(root, coroot)`` of ambient vectors for the positive roots."""
        return [(self.roots[k], self.coroot(k)) for k in range(self.npos)]

    def coroot(self, k: int) -> Vector:
        a = self.roots[k]
        return _scale(Fraction(2) / _dot(a, a), a)

    def root_index(self, coords: Sequence[int]) -> int:
        return self._index[tuple(coords)]

    def simple_index(self, i: int) -> int:
        """Root-list index of the simple root alpha_i (1-based node)."""
        return self._index[tuple(1 if j == i - 1 else 0 for j in range(self.rank))]

    def negate(self, k: int) -> int:
        n = self.npos
        return k + n if k < n else k - n

    def is_positive(self, k: int) -> bool:
        return k < self.npos

    def pair_weight(self, labels: Sequence[int], k: int) -> int:
        """``<lambda, beta_k^v>`` for a weight given by Dynkin labels."""
        return sum(a * b for a, b in zip(labels, self.coroot_coords[k]))

    def weight_to_ambient(self, labels: Sequence[int]) -> Vector:
        v = tuple(Fraction(0) for _ in self.simple_roots[0])
        for c, w in zip(labels, self.fundamental_weights):
            if c:
                v = _add(v, _scale(c, w))
        return v

    @cached_property
    def simple_reflection_perms(self) -> tuple:
        return tuple(self.reflection_perm(self.simple_index(i)) for i in range(1, self.rank + 1))

    def reflection_perm(self, k: int) -> tuple:
        """Permutation of the root list induced by the reflection s_beta, beta = roots[k]."""
        cc = self.coroot_coords[k]
        a = self.root_coords[k]
        cm = self.cartan_matrix
        # <alpha_i, beta^v> = sum_j cc_j * A[i][j]
        pair_simple = [sum(cc[j] * cm[i][j] for j in range(self.rank)) for i in range(self.rank)]
        perm = []
        for v in self.root_coords:
            p = sum(x * y for x, y in zip(v, pair_simple))
            perm.append(self._index[tuple(x - p * y for x, y in zip(v, a))])
        return tuple(perm)

    @cached_property
    def longest(self) -> "WeylElem":
        labels = [1] * self.rank  # rho in Dynkin labels
        word = []
        while True:
            for i in range(self.rank):
                if labels[i] > 0:
                    word.append(i + 1)
                    labels = [x - labels[i] * c for x, c in zip(labels, self.cartan_matrix[i])]
                    break
            else:
                break
        return WeylElem.from_word(self, tuple(reversed(word)))


def build_root_datum(t: CartanType) -> RootDatum:
    """Construct the root datum of ``t`` by reflection closure of the simple roots."""
    if not isinstance(t, CartanType):
        t = CartanType(*t)
    simple = _simple_roots(t)
    n = t.rank
    norms = [_dot(a, a) for a in simple]
    cm = tuple(
        tuple(int(2 * _dot(simple[i], simple[j]) / norms[j]) for j in range(n)) for i in range(n)
    )
    # closure in simple-root coordinates
    seen = {tuple(1 if j == i else 0 for j in range(n)) for i in range(n)}
    frontier = list(seen)
    while frontier:
        new = []
        for v in frontier:
            for i in range(n):
                p = sum(v[j] * cm[j][i] for j in range(n))
                w = tuple(v[j] - (p if j == i else 0) for j in range(n))
                if w not in seen:
                    seen.add(w)
                    new.append(w)
        frontier = new
    pos = sorted((v for v in seen if all(x >= 0 for x in v)), key=lambda v: (sum(v), tuple(-x for x in v)))
    if len(pos) * 2 != len(seen):
        raise AssertionError("root closure is not symmetric")
    coords = pos + [tuple(-x for x in v) for v in pos]
    index = {v: k for k, v in enumerate(coords)}
    ambient = []
    for v in coords:
        a = tuple(Fraction(0) for _ in simple[0])
        for c, s in zip(v, simple):
            if c:
                a = _add(a, _scale(c, s))
        ambient.append(a)
    coroots = []
    for v, a in zip(coords, ambient):
        na = _dot(a, a)
        coroots.append(tuple(int(v[i] * norms[i] / na) for i in range(n)))
    weights = tuple(tuple(sum(v[i] * cm[i][j] for i in range(n)) for j in range(n)) for v in coords)
    # fundamental weights: omega_i = sum_j (A^{-1})_{ij} alpha_j with A_{ij} = <alpha_i, alpha_j^v>
    inv = _invert([[Fraction(x) for x in row] for row in cm])
    fund = []
    for i in range(n):
        w = tuple(Fraction(0) for _ in simple[0])
        for j in range(n):
            if inv[i][j]:
                w = _add(w, _scale(inv[i][j], simple[j]))
        fund.append(w)
    rho = tuple(Fraction(0) for _ in simple[0])
    for w in fund:
        rho = _add(rho, w)
    return RootDatum(
        cartan=t,
        simple_roots=tuple(simple),
        cartan_matrix=cm,
        roots=tuple(ambient),
        root_coords=tuple(coords),
        coroot_coords=tuple(coroots),
        root_weights=weights,
        fundamental_weights=tuple(fund),
        rho=rho,
        _index=index,
    )


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def reflect(d: RootDatum, alpha_index: int, v: Vector) -> Vector:
    """Reflect an ambient vector in the hyperplane orthogonal to ``roots[alpha_index]``."""
    if not 0 <= alpha_index < len(d.roots):
        raise IndexError(f"root index {alpha_index} out of range")
    a = d.roots[alpha_index]
    c = 2 * _dot(v, a) / _dot(a, a)
    return _sub(tuple(Fraction(x) for x in v), _scale(c, a))


def weight_pairing(d: RootDatum, w: Vector, alpha_index: int) -> int:
    """Integer pairing ``<w, alpha^v>`` of an ambient weight with a coroot."""
    a = d.roots[alpha_index]
    val = 2 * _dot(w, a) / _dot(a, a)
    if val.denominator != 1:
        raise ValueError(f"{w} is not an integral weight")
    return int(val)


@dataclass(frozen=True)
class WeylElem:
    """Weyl group element stored as a reduced word plus its action on the root list.

    ``perm[k]`` is the index of ``w(roots[k])``.
    """

    datum: RootDatum = field(repr=False, compare=False)
    word: tuple
    perm: tuple = field(repr=False)

    @classmethod
    def identity(cls, d: RootDatum) -> "WeylElem":
        return cls(d, (), tuple(range(len(d.roots))))

    @classmethod
    def from_word(cls, d: RootDatum, word: Sequence[int]) -> "WeylElem":
        perm = tuple(range(len(d.roots)))
        for i in reversed(word):
            s = d.simple_reflection_perms[i - 1]
            perm = tuple(s[k] for k in perm)
        return cls(d, tuple(word), perm)

    def __mul__(self, other: "WeylElem") -> "WeylElem":
        p, q = self.perm, other.perm
        return WeylElem(self.datum, self.word + other.word, tuple(p[k] for k in q))

    def apply_root(self, k: int) -> int:
        return self.perm[k]

    @property
    def length(self) -> int:
        n = self.datum.npos
        return sum(1 for k in range(n) if self.perm[k] >= n)

    def inverse(self) -> "WeylElem":
        inv = [0] * len(self.perm)
        for k, j in enumerate(self.perm):
            inv[j] = k
        return WeylElem(self.datum, tuple(reversed(self.word)), tuple(inv))


def weyl_length(e: WeylElem) -> int:
    return e.length


@dataclass(frozen=True)
class CosetRep:
    """Element u of W^P together with the weight u(omega_node) labelling its coset."""

    elem: WeylElem
    weight: tuple  # Dynkin labels of u(omega_node)
    length: int

    @property
    def word(self) -> tuple:
        return self.elem.word


def coset_min_reps(d: RootDatum, node: int) -> list[CosetRep]:
    """Minimal-length representatives of W / W_P, P the maximal parabolic omitting ``node``.

    Breadth-first search on the orbit of the fundamental weight: a simple
    reflection s_i raises the length of u in W^P exactly when
    ``<u(omega), alpha_i^v> > 0``.  Each element carries the lexicographically
    smallest of its reduced words; output is sorted by (length, word).
    """
    if not 1 <= node <= d.rank:
        raise ConfigurationError(f"node {node} out of range for {d.cartan}")
    start = tuple(1 if j == node - 1 else 0 for j in range(d.rank))
    words = {start: ()}
    level = [start]
    out = [start]
    while level:
        nxt: dict[tuple, tuple] = {}
        for lam in level:
            for i in range(d.rank):
                c = lam[i]
                if c > 0:
                    mu = tuple(x - c * y for x, y in zip(lam, d.cartan_matrix[i]))
                    w = (i + 1,) + words[lam]
                    if mu not in nxt or w < nxt[mu]:
                        nxt[mu] = w
        level = sorted(nxt, key=lambda m: nxt[m])
        for mu in level:
            words[mu] = nxt[mu]
        out.extend(level)
    reps = []
    for lam in out:
        e = WeylElem.from_word(d, words[lam])
        reps.append(CosetRep(e, lam, len(words[lam])))
    reps.sort(key=lambda r: (r.length, r.word))
    return reps


def in_parabolic_quotient(e: WeylElem, node: int) -> bool:
    """True iff e(alpha_j) > 0 for every simple root alpha_j with j != node."""
    d = e.datum
    return all(
        d.is_positive(e.perm[d.simple_index(j)]) for j in range(1, d.rank + 1) if j != node
    )
