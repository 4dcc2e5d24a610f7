"""Apéry constants: limits of ratios of fundamental terms.

For a coprimitive seed gamma the solution A_gamma of the quantum differential
equation has a fundamental term whose ratio to that of the principal
solution (seeded by the point class) tends to a constant.  The ratios are
computed exactly or in big floats and the limit is accelerated.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import mpmath

from . import qde
from .gpqh import QHOperator, grassmannian_partition, matvec, poincare_involution, schubert_basis
from .rootsys import CartanType, build_root_datum

LEFSCHETZ_CHERN = "lefschetz-chern"
INTEGRAL_PRIMITIVE = "integral-primitive"
NORMALIZATIONS = (LEFSCHETZ_CHERN, INTEGRAL_PRIMITIVE)

DEFAULT_MAX_PERIOD = 12


class EmptyRatioError(ValueError):
    """Every denominator vanished, so no ratio is defined."""


class ExtrapolationError(ValueError):
    pass


@dataclass(frozen=True)
class RatioSequence:
    indices: tuple
    values: tuple  # Fractions (exact) or mpf
    mask: tuple  # indices skipped because the denominator vanished

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class AperyEstimate:
    value: object
    error_estimate: object
    seed_codim: int = 0
    primitive_codim: int = 0
    weight: int = 0
    terms_used: int = 0
    oscillation_period: int = 1
    class_limits: tuple = ()
    seed: tuple = ()
    truncated: bool = False
    method: str = ""

    @property
    def oscillating(self) -> bool:
        """True when residue classes have distinct limits (the "±" table entries)."""
        return len(set(round(float(x), 12) for x in self.class_limits)) > 1


def ratio_sequence(num: Sequence, den: Sequence, precision: int = 60) -> RatioSequence:
    """r_n = num_n / den_n where den_n != 0; exact for rational input, else at ``precision`` digits."""
    if len(num) != len(den):
        raise ValueError("sequences must have equal length")
    idx, vals, mask = [], [], []
    with mpmath.workdps(precision):
        for n, (a, b) in enumerate(zip(num, den)):
            if b == 0:
                mask.append(n)
                continue
            idx.append(n)
            if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
                vals.append(Fraction(a) / Fraction(b))
            else:
                vals.append(_mpf(a) / _mpf(b))
    if not vals:
        raise EmptyRatioError("empty ratio: every denominator is zero")
    return RatioSequence(tuple(idx), tuple(vals), tuple(mask))


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _richardson(ns, xs, max_order):
    """Polynomial extrapolation in 1/n to 1/n = 0 over the tail; returns (value, error)."""
    best = None
    prev = None
    for k in range(0, min(max_order, len(xs) - 1) + 1):
        pts = list(zip(ns[-(k + 1):], xs[-(k + 1):]))
        # Lagrange interpolation in h = 1/n evaluated at h = 0
        est = mpmath.mpf(0)
        for i, (ni, xi) in enumerate(pts):
            w = mpmath.mpf(1)
            hi = mpmath.mpf(1) / ni
            for j, (nj, _) in enumerate(pts):
                if j != i:
                    hj = mpmath.mpf(1) / nj
                    w *= hj / (hj - hi)
            est += w * xi
        if prev is not None:
            err = abs(est - prev)
            if best is None or err < best[1]:
                best = (est, err)
        prev = est
    return best


def _wynn(xs):
    """Wynn epsilon algorithm over xs; returns (value, error) from the even columns."""
    n = len(xs)
    prev2 = [mpmath.mpf(0)] * (n + 1)
    prev = list(xs)
    evens = [xs[-1]]
    col = 0
    while len(prev) > 1:
        cur = []
        for i in range(len(prev) - 1):
            d = prev[i + 1] - prev[i]
            if d == 0:
                return evens[-1], mpmath.mpf(0)
            cur.append(prev2[i + 1] + 1 / d)
        col += 1
        prev2, prev = prev, cur
        if col % 2 == 0:
            evens.append(cur[-1])
    best = None
    for a, b in zip(evens, evens[1:]):
        err = abs(b - a)
        if best is None or err < best[1]:
            best = (b, err)
    if best is None:
        return xs[-1], abs(xs[-1] - xs[-2]) if n > 1 else mpmath.inf
    return best


def _class_smooth(ys, noise) -> bool:
    diffs = [b - a for a, b in zip(ys, ys[1:])][-8:]
    diffs = [d for d in diffs if abs(d) > noise]
    if len(diffs) < 3:
        return True
    for a, b in zip(diffs, diffs[1:]):
        t = b / a
        if not (0 < t < 1.5):
            return False
    return True


def detect_period(xs, noise, max_period: int = DEFAULT_MAX_PERIOD) -> int:
    """Smallest s whose residue-class tails have same-signed, non-growing differences."""
    for s in range(1, max_period + 1):
        if len(xs) < 6 * s:
            break
        tail = xs[-8 * s:] if len(xs) >= 8 * s else xs
        offset = len(xs) - len(tail)
        if all(_class_smooth(tail[j::s], noise) for j in range((-offset) % s, (-offset) % s + s)):
            return s
    return 1


def _limit(ns, xs, noise, max_order):
    cands = [(xs[-1], abs(xs[-1] - xs[-2]) + noise, "raw")]
    r = _richardson(ns, xs, max_order)
    if r is not None:
        cands.append((r[0], r[1] + noise, "richardson"))
    w = _wynn(xs[-(2 * max_order + 1):])
    cands.append((w[0], w[1] + noise, "wynn"))
    return min(cands, key=lambda c: c[1])


def extrapolate(
    seq,
    max_order: int = 8,
    precision: int = 40,
    max_period: int = DEFAULT_MAX_PERIOD,
) -> AperyEstimate:
    """Accelerated limit of a ratio sequence with an error estimate.

    ``seq`` is a :class:`RatioSequence` or a plain list indexed from 1.
    """
    if isinstance(seq, RatioSequence):
        ns, raw = list(seq.indices), list(seq.values)
    else:
        raw = list(seq)
        ns = list(range(1, len(raw) + 1))
    if len(raw) < 3 * max_order:
        raise ExtrapolationError(f"need at least {3 * max_order} usable terms, got {len(raw)}")
    with mpmath.workdps(precision + 20):
        xs = [_mpf(x) for x in raw]
        scale = max(mpmath.mpf(1), abs(xs[-1]))
        noise = scale * mpmath.mpf(10) ** (-precision)
        s = detect_period(xs, noise, max_period)
        limits = []
        for j in range(s):
            sub = list(range(len(xs) - 1 - j, -1, -s))[::-1]
            sn = [ns[i] for i in sub]
            sx = [xs[i] for i in sub]
            order = min(max_order, len(sx) // 3)
            if len(sx) < 3:
                raise ExtrapolationError("residue class too short")
            limits.append(_limit(sn, sx, noise, max(order, 1)))
        vals = [v for v, _, _ in limits]
        errs = [e for _, e, _ in limits]
        spread = max(vals) - min(vals)
        tol = 10 * max(errs) + noise
        if spread <= tol:
            k = min(range(s), key=lambda i: errs[i])
            value = limits[k][0]
            err = max(errs[k], spread)
            method = limits[k][2]
        else:
            value = xs[-1]
            err = spread
            method = "oscillating"
        return AperyEstimate(
            value=+value,
            error_estimate=+err,
            terms_used=ns[-1],
            oscillation_period=s,
            class_limits=tuple(+v for v in vals),
            method=method,
        )


# -- pairing and normalizations -------------------------------------------


def _cartan(op: QHOperator) -> CartanType:
    m = op.meta
    return CartanType(m["family"], int(m["rank"]))


def poincare_dual_index(op: QHOperator) -> list[int]:
    """Index permutation i -> i* with <e_i, e_j> = [j = i*]."""
    m = op.meta
    if m.get("kind") == "product":
        from .prodspaces import monomial_basis

        dims = tuple(m["dims"])
        basis = monomial_basis(dims)
        index = {a: k for k, a in enumerate(basis)}
        return [index[tuple(n - x for n, x in zip(dims, a))] for a in basis]
    b = op.basis if op.basis is not None else schubert_basis(build_root_datum(_cartan(op)), int(m["node"]))
    return poincare_involution(b)


def pairing(dual: list[int], u: Sequence, v: Sequence):
    return sum(u[i] * v[dual[i]] for i in range(len(u)) if u[i])


def _reduce_mod(vectors: list[list[Fraction]], v: list[Fraction]) -> list[Fraction]:
    """Reduce v against an echelon list of (pivot, vector) pairs."""
    v = list(v)
    for p, w in vectors:
        if v[p]:
            f = v[p] / w[p]
            v = [a - f * b for a, b in zip(v, w)]
    return v


def image_echelon(op: QHOperator) -> list[tuple[int, list[Fraction]]]:
    """Echelon basis of im M_0 in basis order, as (pivot index, vector)."""
    ech: list[tuple[int, list[Fraction]]] = []
    for j in range(op.size):
        e = [0] * op.size
        e[j] = 1
        w = [Fraction(x) for x in matvec(op.matrices[0], e)]
        w = _reduce_mod(ech, w)
        p = next((i for i, x in enumerate(w) if x), None)
        if p is not None:
            ech.append((p, w))
    return ech


def graded_section(op: QHOperator) -> list[int]:
    """Basis indices complementary to the pivots of im M_0."""
    piv = {p for p, _ in image_echelon(op)}
    return [i for i in range(op.size) if i not in piv]


def _horizontal_strips(lam: tuple, i: int, k: int, width: int):
    """Partitions mu containing lam with |mu/lam| = i, no two boxes in a column, inside k x width."""
    lam = list(lam) + [0] * (k - len(lam))
    out = []

    def rec(r, left, mu):
        if r == k:
            if left == 0:
                out.append(tuple(x for x in mu if x))
            return
        hi = width if r == 0 else lam[r - 1]
        for add in range(0, min(left, hi - lam[r]) + 1):
            rec(r + 1, left - add, mu + [lam[r] + add])

    rec(0, i, [])
    return out


def _chern_classes_typeA(op: QHOperator, c: int) -> list[list[Fraction]]:
    """Monomials in c_i(Q) = sigma_(i), 2 <= i <= N - k, of codimension c, as basis vectors.

    Order: c_2^{c/2} in even codimension, else the single class c_c(Q); then
    the rest by smallest factor descending, so c_3^2 precedes c_2 c_4.
    """
    b = op.basis if op.basis is not None else schubert_basis(build_root_datum(_cartan(op)), int(op.meta["node"]))
    k = b.node
    n = b.datum.rank + 1
    parts = {grassmannian_partition(b, i): i for i in range(b.size)}
    monos = [m for m in _partitions_into(c, list(range(n - k, 1, -1)))]
    monos.sort(key=lambda m: (set(m) == {2}, len(m) == 1, min(m), m), reverse=True)
    out = []
    for mono in monos:
        cls = {(): Fraction(1)}
        for g in mono:
            nxt: dict = {}
            for lam, a in cls.items():
                for mu in _horizontal_strips(lam, g, k, n - k):
                    nxt[mu] = nxt.get(mu, 0) + a
            cls = nxt
        v = [Fraction(0)] * op.size
        for lam, a in cls.items():
            v[parts[lam]] += a
        if any(v):
            out.append(v)
    return out


def _partitions_into(n: int, parts: list[int]):
    """Partitions of n into the given parts (descending list), as descending tuples."""
    if n == 0:
        yield ()
        return
    for i, p in enumerate(parts):
        if p <= n:
            for rest in _partitions_into(n - p, parts[i:]):
                yield (p,) + rest


def primitive_candidates(op: QHOperator, c: int) -> list[list[Fraction]]:
    """Ordered candidate classes of codimension c from which primitive classes are picked."""
    m = op.meta
    cols = [i for i, g in enumerate(op.grading) if g == c]
    units = []
    for i in cols:
        v = [Fraction(0)] * op.size
        v[i] = Fraction(1)
        units.append(v)
    if m.get("kind") == "gp" and m["family"] == "A":
        return _chern_classes_typeA(op, c) + units
    if m.get("kind") == "product":
        return units[::-1]
    return units


def _solve(A: list[list[Fraction]], B: list[list[Fraction]]) -> list[list[Fraction]]:
    """Solve A X = B for square invertible A (Fractions)."""
    n = len(A)
    M = [list(A[i]) + list(B[i]) for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def normalized_seeds(op: QHOperator, normalization: str = LEFSCHETZ_CHERN) -> list[tuple[int, list, list | None]]:
    """Coprimitive seeds (codim, vector, dual primitive class or None), denominator excluded.

    ``integral-primitive`` returns the kernel basis as is.  ``lefschetz-chern``
    returns, for each codimension block, the basis of ker M_0 dual under the
    Poincaré pairing to primitive classes picked greedily from
    :func:`primitive_candidates`: Chern monomials of the tautological quotient
    on Grassmannians, monomials on products.  Other types have no pinned
    primitive classes and fall back to the integral kernel basis.
    """
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    kb = [(c, v) for c, v in qde.kernel_basis(op) if c < op.dim_X]
    m = op.meta
    pinned = m.get("kind") == "product" or m.get("family") == "A"
    if normalization == INTEGRAL_PRIMITIVE or not pinned:
        return [(c, v, None) for c, v in kb]
    dual = poincare_dual_index(op)
    out = []
    blocks: dict[int, list] = {}
    for c, v in kb:
        blocks.setdefault(c, []).append(v)
    for s in sorted(blocks, reverse=True):
        K = blocks[s]
        chosen, rows = [], []
        for P in primitive_candidates(op, op.dim_X - s):
            row = [Fraction(pairing(dual, P, kv)) for kv in K]
            trial = rows + [row]
            if _rank(trial) == len(trial):
                rows, chosen = trial, chosen + [P]
            if len(chosen) == len(K):
                break
        if len(chosen) != len(K):
            raise qde.SeedError(f"no primitive basis found in codimension {op.dim_X - s}")
        # seeds gamma_j = sum_l X_{l j} K_l with <P_i, gamma_j> = delta_ij
        X = _solve(rows, [[Fraction(int(i == j)) for j in range(len(K))] for i in range(len(K))])
        for j, P in enumerate(chosen):
            g = [sum(X[l][j] * K[l][t] for l in range(len(K))) for t in range(op.size)]
            out.append((s, g, P))
    return out


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def point_seed(op: QHOperator) -> list[int]:
    top = [i for i, g in enumerate(op.grading) if g == op.dim_X]
    if len(top) != 1:
        raise qde.SeedError("expected a single point class")
    v = [0] * op.size
    v[top[0]] = 1
    return v


def default_mode(op: QHOperator) -> str:
    return qde.RATIONAL if op.size <= 60 else qde.FLOAT


def apery_constants(
    op: QHOperator,
    N: int = 200,
    precision: int = 40,
    normalization: str = LEFSCHETZ_CHERN,
    mode: str | None = None,
    max_order: int = 8,
    seeds=None,
) -> list[AperyEstimate]:
    """Apéry constants for every non-principal coprimitive seed.

    The denominator is the fundamental term of the solution seeded by the
    point class.  ``seeds`` overrides the normalization with explicit
    (codim, vector) pairs.
    """
    if N < 1 or precision < 1:
        raise ValueError("N and precision must be positive")
    mode = mode or default_mode(op)
    work = precision + 30
    den_series = qde.solve_series(op, point_seed(op), N, mode, work)
    den = qde.fundamental_term(den_series)
    if seeds is None:
        seeds = [(c, v) for c, v, _ in normalized_seeds(op, normalization)]
    out = []
    for c, v in seeds:
        weight = op.dim_X - c
        s = qde.solve_series(op, v, N, mode, work)
        trunc, _ = qde.truncation_detect(s, den_series)
        base = dict(seed_codim=c, primitive_codim=weight, weight=weight, seed=tuple(v))
        if trunc:
            out.append(AperyEstimate(Fraction(0), Fraction(0), terms_used=N, truncated=True, method="exact", **base))
            continue
        rs = ratio_sequence(qde.fundamental_term(s), den, work)
        est = extrapolate(rs, max_order=max_order, precision=precision + 15)
        out.append(replace(est, **base))
    return out


def ratio_for_seed(op: QHOperator, seed: Sequence, N: int, mode: str = qde.RATIONAL, precision: int = 40) -> RatioSequence:
    den = qde.fundamental_term(qde.solve_series(op, point_seed(op), N, mode, precision))
    num = qde.fundamental_term(qde.solve_series(op, seed, N, mode, precision))
    return ratio_sequence(num, den, precision + 20)


# -- Apéry class ----------------------------------------------------------


@dataclass
class AperyClassReport:
    functional: list  # (seed vector, constant)
    representative: list  # coordinate -> {seed position: rational coefficient}, plus evaluated values
    section: list[int]
    values: list = field(default_factory=list)

    def coordinate(self, i: int, constants: Sequence):
        return sum(c * constants[j] for j, c in self.representative[i].items())


def apery_class(op: QHOperator, constants: Sequence, seeds: Sequence | None = None) -> AperyClassReport:
    """Class a on the graded section with <a, gamma_j> = Apery(gamma_j).

    ``constants`` lists values for the given seeds (default: the lefschetz-chern
    seeds); the point class with value 1 is prepended automatically.  The
    representative is stored as rational combinations of the constants, so
    identified constants give exact coordinates.
    """
    if seeds is None:
        seeds = [v for _, v, _ in normalized_seeds(op, LEFSCHETZ_CHERN)]
    seeds = [point_seed(op)] + [list(s) for s in seeds]
    vals = [1] + list(constants)
    if len(vals) != len(seeds):
        raise ValueError("one constant per seed required")
    section = graded_section(op)
    if len(section) != len(seeds):
        raise qde.SeedError("section size differs from the number of seeds")
    dual = poincare_dual_index(op)
    # <a, gamma_j> = sum_i a_i gamma_j[dual[i]] for a supported on the section
    A = [[Fraction(seeds[j][dual[i]]) for i in section] for j in range(len(seeds))]
    if _rank(A) != len(seeds):
        raise RuntimeError("pairing restricted to the section is singular")
    X = _solve(A, [[Fraction(int(r == j)) for j in range(len(seeds))] for r in range(len(seeds))])
    rep = [dict() for _ in range(op.size)]
    for a, i in enumerate(section):
        rep[i] = {j: X[a][j] for j in range(len(seeds)) if X[a][j]}
    report = AperyClassReport(list(zip(seeds, vals)), rep, section)
    # keep the working precision of the supplied constants
    bits = max([mpmath.mp.prec] + [int(v.man).bit_length() + 10 for v in vals if isinstance(v, mpmath.mpf)])
    with mpmath.workprec(bits):
        report.values = [report.coordinate(i, vals) for i in range(op.size)]
    return report


# -- cross-checks ----------------------------------------------------------


def componentwise_check(op: QHOperator, seeds: Sequence, N: int, constants: Sequence, precision: int = 40) -> dict:
    """Deviation of coordinate ratios A_gamma^(k)_i / A_0^(k)_i from Apery(gamma) over the last N/4 indices."""
    report = {"coordinates": [], "block_residuals": []}
    if not seeds:
        return report
    mode = qde.RATIONAL
    den = qde.solve_series(op, point_seed(op), N, mode)
    start = N - N // 4
    blocks = qde.graded_blocks(op)
    with mpmath.workdps(precision + 20):
        for seed, const in zip(seeds, constants):
            if not any(seed):
                continue
            s = qde.solve_series(op, seed, N, mode)
            A = _mpf(const) if not isinstance(const, mpmath.mpf) else const
            for i in range(op.size):
                devs = []
                for k in range(start, N + 1):
                    b = den.coeff(k)[i]
                    if b:
                        devs.append((k, abs(_mpf(s.coeff(k)[i] / b) - A)))
                if devs:
                    report["coordinates"].append({"index": i, "codim": op.grading[i], "deviations": devs})
            for g, idxs in sorted(blocks.items()):
                worst = mpmath.mpf(0)
                for k in range(start, N + 1):
                    a, b = s.coeff(k), den.coeff(k)
                    nb = max((abs(_mpf(b[i])) for i in idxs), default=0)
                    if nb:
                        r = max(abs(_mpf(a[i]) - A * _mpf(b[i])) for i in idxs) / nb
                        worst = max(worst, r)
                report["block_residuals"].append({"codim": g, "residual": worst})
    return report


def convergence_diagnostic(seq: RatioSequence, alpha, n_min: int = 20, precision: int = 60) -> dict:
    """delta_n = log log q_n - log log(1/|alpha - p_n/q_n|) for the reduced ratios p_n/q_n.

    Negative values mean the approximations beat q_n^{-1-eps}, the regime
    useful for irrationality proofs. ``alpha`` may be a callable taking a
    digit count; a plain number must already carry more than 2 log10 q_n
    correct digits or the tail is meaningless.
    """
    pts = [(n, Fraction(r)) for n, r in zip(seq.indices, seq.values) if n >= n_min]
    pts = [(n, r) for n, r in pts if r.denominator >= 3]
    digits = max([precision] + [2 * len(str(r.denominator)) + 20 for _, r in pts])
    out = []
    with mpmath.workdps(digits + 20):
        a = alpha(digits) if callable(alpha) else mpmath.mpf(alpha)
        for n, r in pts:
            err = abs(a - _mpf(r))
            if err == 0 or err >= 1:
                continue
            d = mpmath.log(mpmath.log(r.denominator)) - mpmath.log(mpmath.log(1 / err))
            out.append((n, d))
        tail = [d for _, d in out[-max(1, len(out) // 4):]]
        mean = mpmath.fsum(tail) / len(tail) if tail else mpmath.mpf(0)
    sign = 0 if not tail else (-1 if mean < 0 else 1)
    return {"values": out, "tail_mean": mean, "tail_sign": sign, "digits": digits}


def strain_compare(constX: Sequence[AperyEstimate], constY: Sequence[AperyEstimate], tol=None) -> dict:
    """Match constants of X and Y by primitive codimension and value."""
    used = set()
    matched, unmatched = [], []
    for ex in constX:
        hit = None
        for j, ey in enumerate(constY):
            if j in used or ey.primitive_codim != ex.primitive_codim:
                continue
            t = tol if tol is not None else 10 * (_mpf(ex.error_estimate) + _mpf(ey.error_estimate)) + mpmath.mpf(10) ** -30
            if abs(_mpf(ex.value) - _mpf(ey.value)) <= t:
                hit = j
                break
        if hit is None:
            unmatched.append(ex)
        else:
            used.add(hit)
            matched.append((ex, constY[hit]))
    y_only = [ey for j, ey in enumerate(constY) if j not in used]
    return {"matched": matched, "x_only": unmatched, "y_only": y_only}
