"""Command-line driver: compute, reproduce, sine and cache subcommands."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import __version__, qde
from .apery import LEFSCHETZ_CHERN, NORMALIZATIONS, apery_constants, default_mode
from .gpqh import QHOperator, quantum_chevalley_operator
from .opcache import CacheError, OperatorCache
from .prodspaces import ProductSpec, anticanonical, product_operator
from .rootsys import CartanType, ConfigurationError
from .zetaid import ZetaPolynomial, format_paper_style, identify

MIN_ID_DIGITS = 10


@dataclass(frozen=True)
class VarietySpec:
    kind: str  # "gp" or "product"
    family: str = ""
    rank: int = 0
    node: int = 0
    dims: tuple = ()
    weights: tuple = ()

    def __post_init__(self):
        if self.kind == "gp":
            CartanType(self.family, self.rank)
            if not 1 <= self.node <= self.rank:
                raise ConfigurationError(f"node {self.node} out of range for {self.family}{self.rank}")

    @property
    def key(self) -> str:
        if self.kind == "gp":
            return f"gp-{self.family}{self.rank}-{self.node}"
        return "prod-" + "_".join(map(str, self.dims)) + "-w" + "_".join(map(str, self.weights))

    def build(self) -> QHOperator:
        if self.kind == "gp":
            return quantum_chevalley_operator(CartanType(self.family, self.rank), self.node)
        return product_operator(ProductSpec(self.dims, self.weights))


_GP = re.compile(r"^([A-G])\((\d+),(\d+)\)$")
_GR = re.compile(r"^(Gr|OGr|SGr)\((\d+),(\d+)\)$")
_PROD = re.compile(r"^P\d+(?:xP\d+)+$")
_LINE = re.compile(r"^O\((\d+(?:,\d+)*)\)$")


def parse_spec(text: str, weights: str | None = None) -> VarietySpec:
    """Resolve a variety name such as ``Gr(2,5)``, ``OGr(5,10)``, ``E(7,7)``, ``P2xP3:O(1,1)`` or ``product 2,3``."""
    t = text.replace(" ", "") if not text.startswith("product") else text.strip()
    if t.startswith("product"):
        dims = tuple(int(x) for x in t[len("product"):].strip().split(","))
        w = tuple(int(x) for x in weights.split(",")) if weights else anticanonical(dims).weights
        return VarietySpec("product", dims=dims, weights=w)
    base, _, line = t.partition(":")
    if _PROD.match(base):
        dims = tuple(int(x) for x in base[1:].split("xP"))
        if line:
            m = _LINE.match(line)
            if not m:
                raise ConfigurationError(f"cannot read line bundle {line!r}")
            w = tuple(int(x) for x in m.group(1).split(","))
        elif weights:
            w = tuple(int(x) for x in weights.split(","))
        else:
            w = anticanonical(dims).weights
        if len(w) != len(dims):
            raise ConfigurationError("one weight per factor required")
        return VarietySpec("product", dims=dims, weights=w)
    m = _GP.match(t)
    if m:
        fam, n, k = m.group(1), int(m.group(2)), int(m.group(3))
        return VarietySpec("gp", fam, n, k)
    m = _GR.match(t)
    if m:
        kind, k, N = m.group(1), int(m.group(2)), int(m.group(3))
        if kind == "Gr":
            return VarietySpec("gp", "A", N - 1, k)
        if kind == "SGr":
            if N % 2:
                raise ConfigurationError("SGr(k,N) needs N even")
            return VarietySpec("gp", "C", N // 2, k)
        if N % 2:
            return VarietySpec("gp", "B", (N - 1) // 2, k)
        n = N // 2
        if k == n - 1:
            raise ConfigurationError(f"OGr({k},{N}) is not a quotient by a maximal parabolic")
        return VarietySpec("gp", "D", n, k)
    raise ConfigurationError(f"cannot parse variety {text!r}")


def load_operator(spec: VarietySpec, cache_dir=None, use_cache: bool = True) -> QHOperator:
    if not use_cache:
        return spec.build()
    cache = OperatorCache(cache_dir)
    try:
        return cache.get(spec.key, spec.build)
    except CacheError as e:
        print(f"warning: {e}; continuing without cache", file=sys.stderr)
        return spec.build()


# -- result records --------------------------------------------------------


def _frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _dec(x, digits: int) -> str:
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(mpmath.mpf(x) if not isinstance(x, Fraction) else mpmath.mpf(x.numerator) / x.denominator, digits)


def _usable_digits(value, err, precision: int) -> int:
    with mpmath.workdps(precision + 20):
        v = abs(mpmath.mpf(value) if not isinstance(value, Fraction) else mpmath.mpf(value.numerator) / value.denominator)
        e = err if not isinstance(err, Fraction) else mpmath.mpf(err.numerator) / err.denominator
        e = abs(mpmath.mpf(e))
        if e == 0:
            return precision
        return int(mpmath.floor(-mpmath.log10(e / max(v, 1)))) - 12


def _entry(est, precision: int, include_euler: bool) -> dict:
    if est.truncated or (isinstance(est.value, Fraction) and est.value == 0 and est.error_estimate == 0):
        poly, conf, digits = ZetaPolynomial.zero(est.weight), "exact", precision
    else:
        digits = min(precision, _usable_digits(est.value, est.error_estimate, precision))
        poly, conf = None, None
        if digits >= MIN_ID_DIGITS:
            idf = identify(est.value, est.weight, digits=digits, include_euler=include_euler)
            poly = idf.polynomial
            conf = "inf" if math.isinf(idf.confidence) else f"{idf.confidence:.3g}"
    ident = None if poly is None else {"internal": poly.internal(), "paper": format_paper_style(poly)}
    return {
        "kind": "constant",
        "primitive_codim": est.primitive_codim,
        "seed_codim": est.seed_codim,
        "seed": [_frac(x) for x in est.seed],
        "estimate": _dec(est.value, precision),
        "error": _dec(est.error_estimate, 3),
        "precision": precision,
        "identified": ident,
        "confidence": conf,
        "identification_digits": digits,
        "flags": {"truncated": est.truncated, "oscillating": est.oscillating, "unidentified": poly is None},
        "period": est.oscillation_period,
        "class_limits": [_dec(x, 20) for x in est.class_limits] if est.oscillation_period > 1 else [],
    }


def run_compute(
    spec: VarietySpec,
    terms: int = 200,
    precision: int = 40,
    mode: str | None = None,
    normalization: str = LEFSCHETZ_CHERN,
    cache_dir=None,
    use_cache: bool = True,
    label: str | None = None,
) -> dict:
    """Full pipeline for one variety, returned as a JSON-ready record."""
    op = load_operator(spec, cache_dir, use_cache)
    mode = mode or default_mode(op)
    ests = apery_constants(op, terms, precision, normalization, mode)
    kb = qde.kernel_basis(op)
    top = next(v for c, v in kb if c == op.dim_X)
    entries = [{"kind": "fundamental", "primitive_codim": 0, "seed_codim": op.dim_X, "seed": [_frac(x) for x in top]}]
    entries += [_entry(e, precision, include_euler=not op.graded) for e in ests]
    return {
        "spec": label or spec.key,
        "name": op.name,
        "dim": op.dim_X,
        "fano_index": op.fano_index,
        "mu": len(kb),
        "terms": terms,
        "precision": precision,
        "mode": mode,
        "normalization": normalization,
        "version": __version__,
        "operator_hash": op.op_hash,
        "entries": entries,
    }


def render(records: list[dict], out: str) -> str:
    if out == "json":
        return json.dumps(records if len(records) != 1 else records[0], indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    rows = []
    for r in records:
        for e in r["entries"]:
            if e["kind"] != "constant":
                continue
            rows.append([
                r["spec"], r["mu"], e["primitive_codim"], e["estimate"], e["error"],
                e["identified"]["paper"] if e["identified"] else "",
                ",".join(k for k, v in sorted(e["flags"].items()) if v),
            ])
    head = ["variety", "mu", "codim", "estimate", "error", "identified", "flags"]
    if out == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(head)
        w.writerows(rows)
        return buf.getvalue()
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    lines += ["| " + " | ".join(str(x) for x in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


# -- reproduction harness ----------------------------------------------------


EXACT, SCALE, NUMERIC, MISMATCH = "exact", "scale", "numeric-only", "mismatch"


def _coeffs(p: ZetaPolynomial) -> dict:
    return dict(p.terms)


def _is_multiple(a: ZetaPolynomial, b: ZetaPolynomial) -> bool:
    ca, cb = _coeffs(a), _coeffs(b)
    if not ca or set(ca) != set(cb):
        return False
    return len({ca[m] / cb[m] for m in ca}) == 1


def _in_span(target: ZetaPolynomial, polys: list[ZetaPolynomial]) -> bool:
    from .apery import _rank

    monos = sorted({m for p in polys + [target] for m, _ in p.terms})
    rows = [[_coeffs(p).get(m, Fraction(0)) for m in monos] for p in polys]
    if not rows:
        return False
    r = _rank(rows)
    return _rank(rows + [[_coeffs(target).get(m, Fraction(0)) for m in monos]]) == r


def _rational_ratio(v, target, max_den: int = 1000, rel: float = 1e-12) -> Fraction | None:
    if target == 0:
        return None
    r = v / target
    f = Fraction(str(mpmath.nstr(r, 30))).limit_denominator(max_den)
    if f == 0 or abs(r - mpmath.mpf(f.numerator) / f.denominator) > rel * abs(r):
        return None
    return f


def compare_row(row, record: dict) -> list[dict]:
    """Match expected table entries against computed ones; returns one status per expected entry.

    Passes, strongest first: identical polynomial (sign ignored for "±"
    entries); polynomial equal up to a rational factor; value equal up to a
    small rational factor at 1e-12 relative precision; expected polynomial
    in the Q-span of the computed same-weight polynomials.  An expected zero
    of weight k also matches "up to scale" when the computed weight-k
    polynomials are linearly dependent, since then some rational
    combination of the corresponding classes has constant 0.
    """
    from .apery import _rank
    from .tables import parse_entry
    from .zetaid import parse_paper_style

    got = [e for e in record["entries"] if e["kind"] == "constant"]
    polys = [
        parse_paper_style(e["identified"]["paper"], e["primitive_codim"]) if e["identified"] else None for e in got
    ]
    used: set[int] = set()
    expected = [parse_entry(t) for t in row.entries]
    status: list[dict | None] = [None] * len(expected)

    def same_weight(x, j):
        return x.weight is None or got[j]["primitive_codim"] == x.weight

    def candidates(x):
        return [j for j in range(len(got)) if j not in used and same_weight(x, j)]

    def hit(i, j, kind, shown=None):
        used.add(j)
        status[i] = {"expected": expected[i].text, "status": kind, "got": shown or got[j]["identified"]["paper"]}

    for i, x in enumerate(expected):
        for j in candidates(x):
            p = polys[j]
            if p is None:
                continue
            if x.zero:
                ok = p.is_zero()
            else:
                ok = p == x.polynomial or (x.sign_free and p == x.polynomial.scaled(-1))
            if ok:
                hit(i, j, EXACT)
                break
    for i, x in enumerate(expected):
        if status[i] is None and not x.zero:
            for j in candidates(x):
                if polys[j] is not None and _is_multiple(polys[j], x.polynomial):
                    hit(i, j, SCALE)
                    break
    for i, x in enumerate(expected):
        if status[i] is None and not x.zero:
            target = x.polynomial.value(30)
            for j in candidates(x):
                with mpmath.workdps(40):
                    f = _rational_ratio(mpmath.mpf(got[j]["estimate"]), target)
                if f is not None:
                    hit(i, j, NUMERIC, f"{got[j]['estimate']} = {f} x expected")
                    break
    kernel_left: dict = {}
    for i, x in enumerate(expected):
        if status[i] is not None:
            continue
        same = [polys[j] for j in range(len(got)) if same_weight(x, j) and polys[j] is not None]
        if x.zero and x.weight is not None:
            if x.weight not in kernel_left:
                monos = sorted({m for p in same for m, _ in p.terms})
                rows = [[_coeffs(p).get(m, Fraction(0)) for m in monos] for p in same]
                kernel_left[x.weight] = len(same) - (_rank(rows) if monos else 0)
            if kernel_left[x.weight] > 0:
                kernel_left[x.weight] -= 1
                status[i] = {"expected": x.text, "status": SCALE, "got": f"dependent weight-{x.weight} entries"}
        elif not x.zero and _in_span(x.polynomial, same):
            status[i] = {"expected": x.text, "status": SCALE, "got": f"span of weight-{x.weight} entries"}
        if status[i] is None:
            status[i] = {"expected": x.text, "status": MISMATCH, "got": None}
    return status


def _reproduce_one(args):
    row, terms, precision, normalization, cache_dir = args
    spec = parse_spec(row.spec)
    try:
        rec = run_compute(spec, row.terms if row.terms != 200 else terms, precision, None, normalization, cache_dir, label=row.spec)
    except Exception as e:  # reported per row, never fatal for the whole table
        return row.spec, {"error": f"{type(e).__name__}: {e}"}, []
    statuses = compare_row(row, rec)
    if rec["mu"] != row.mu:
        statuses.append({"expected": f"mu={row.mu}", "status": MISMATCH, "got": f"mu={rec['mu']}"})
    return row.spec, rec, statuses


def run_reproduce(
    table_id: str,
    terms: int = 200,
    precision: int = 40,
    normalization: str = LEFSCHETZ_CHERN,
    jobs: int | None = None,
    include_slow: bool = False,
    cache_dir=None,
    only: list[str] | None = None,
) -> dict:
    """Pass/fail matrix for one embedded table; rows marked slow are excluded for runtime unless requested."""
    from .tables import TABLES

    if table_id not in TABLES:
        raise KeyError(f"unknown table {table_id!r}; choose from {', '.join(TABLES)}")
    rows = [r for r in TABLES[table_id] if (include_slow or not r.slow) and (not only or r.spec in only)]
    skipped = [r.spec for r in TABLES[table_id] if r not in rows]
    work = [(r, terms, precision, normalization, cache_dir) for r in rows]
    jobs = max(1, min(jobs or os.cpu_count() or 1, len(work) or 1, 8))
    if jobs == 1:
        results = [_reproduce_one(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_reproduce_one, work))
    matrix = {}
    failed = False
    for spec, rec, statuses in results:
        if "error" in rec:
            failed = True
            matrix[spec] = {"error": rec["error"], "entries": []}
            continue
        failed |= any(s["status"] == MISMATCH for s in statuses)
        matrix[spec] = {"mu": rec["mu"], "entries": statuses}
    return {"table": table_id, "normalization": normalization, "rows": matrix, "excluded": skipped, "passed": not failed}


def _render_matrix(res: dict) -> str:
    lines = [f"table {res['table']} ({res['normalization']})"]
    for spec, r in res["rows"].items():
        if "error" in r:
            lines.append(f"  {spec}: ERROR {r['error']}")
            continue
        lines.append(f"  {spec} (mu={r['mu']})")
        for s in r["entries"]:
            lines.append(f"    {s['status']:<13} expected {s['expected']:<40} got {s['got']}")
    if res["excluded"]:
        lines.append("  excluded for runtime: " + ", ".join(res["excluded"]))
    lines.append("  PASS" if res["passed"] else "  FAIL")
    return "\n".join(lines) + "\n"


# -- argument handling -------------------------------------------------------


def _common(p):
    p.add_argument("--terms", type=int, default=200)
    p.add_argument("--precision", type=int, default=40)
    p.add_argument("--normalization", choices=NORMALIZATIONS, default=LEFSCHETZ_CHERN)
    p.add_argument("--cache-dir", default=None, help="operator cache (default $APERY_CACHE_DIR or ~/.cache/qapery)")
    p.add_argument("--out", choices=("json", "csv", "md"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qapery", description="Apéry constants of Fano varieties from quantum cohomology.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute the Apéry constants of one or more varieties")
    c.add_argument("spec", nargs="+", help="e.g. 'Gr(2,5)', 'B(4,4)', 'OGr(5,10)', 'P2xP3', 'P2xP3:O(1,1)', 'product 2,3'")
    c.add_argument("--mode", choices=(qde.RATIONAL, qde.FLOAT), default=None)
    c.add_argument("--weights", default=None, help="line bundle weights for products, e.g. 1,1")
    c.add_argument("--no-cache", action="store_true")
    _common(c)

    r = sub.add_parser("reproduce", help="compare against the embedded published tables")
    r.add_argument("table", nargs="+", help="gr2 gr3 gr4plus B C D EFG products, or 'all'")
    r.add_argument("--jobs", type=int, default=None)
    r.add_argument("--include-slow", action="store_true")
    r.add_argument("--only", nargs="*", default=None, help="restrict to these rows")
    _common(r)

    s = sub.add_parser("sine", help="check the sine formula for the deformed hypergeometric equation")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--u", required=True, help="comma separated rationals, e.g. 1/7,1/5")
    s.add_argument("--terms", type=int, default=500)
    s.add_argument("--digits", type=int, default=50)
    s.add_argument("--out", choices=("json", "csv", "md"), default="json")

    k = sub.add_parser("cache", help="manage the operator cache")
    k.add_argument("action", choices=("list", "clear", "build", "verify"))
    k.add_argument("spec", nargs="*")
    k.add_argument("--cache-dir", default=None)
    k.add_argument("--weights", default=None)
    return ap


def _cmd_compute(a) -> int:
    records = []
    for text in a.spec:
        spec = parse_spec(text, a.weights)
        records.append(
            run_compute(spec, a.terms, a.precision, a.mode, a.normalization, a.cache_dir, not a.no_cache, label=text)
        )
    sys.stdout.write(render(records, a.out))
    return 0


def _cmd_reproduce(a) -> int:
    from .tables import TABLES

    ids = list(TABLES) if a.table == ["all"] else a.table
    ok = True
    results = []
    for t in ids:
        res = run_reproduce(t, a.terms, a.precision, a.normalization, a.jobs, a.include_slow, a.cache_dir, a.only)
        ok &= res["passed"]
        results.append(res)
    if a.out == "json":
        sys.stdout.write(json.dumps(results, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write("".join(_render_matrix(r) for r in results))
    return 0 if ok else 1


def _cmd_sine(a) -> int:
    from .hgdeform import DeformParams, sine_check

    p = DeformParams(a.N, tuple(Fraction(x) for x in a.u.split(",")), a.digits)
    rows = sine_check(p, a.terms)
    out = [
        {
            "i": r.i, "j": r.j,
            "empirical": _dec(r.empirical, 20), "predicted": _dec(r.predicted, 20),
            "deviation": _dec(r.deviation, 3), "error_estimate": _dec(r.error_estimate, 3),
        }
        for r in rows
    ]
    rec = {"N": a.N, "u": [_frac(x) for x in p.u], "terms": a.terms, "digits": a.digits, "rows": out}
    if a.out == "json":
        sys.stdout.write(json.dumps(rec, indent=2, sort_keys=True) + "\n")
    else:
        sep = "," if a.out == "csv" else " | "
        sys.stdout.write(sep.join(["i", "j", "empirical", "predicted", "deviation"]) + "\n")
        for r in out:
            sys.stdout.write(sep.join(str(r[k]) for k in ("i", "j", "empirical", "predicted", "deviation")) + "\n")
    return 0


def _cmd_cache(a) -> int:
    cache = OperatorCache(a.cache_dir)
    if a.action == "list":
        for p in cache.entries():
            print(p.name)
    elif a.action == "clear":
        print(f"removed {cache.clear()} entries")
    elif a.action == "verify":
        bad = [n for n, ok in cache.verify().items() if not ok]
        for n in bad:
            print(f"corrupt: {n}")
        return 1 if bad else 0
    else:
        for text in a.spec:
            spec = parse_spec(text, a.weights)
            op = spec.build()
            print(cache.store(spec.key, op))
    return 0


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    handlers = {"compute": _cmd_compute, "reproduce": _cmd_reproduce, "sine": _cmd_sine, "cache": _cmd_cache}
    try:
        return handlers[a.command](a)
    except (ConfigurationError, ValueError, KeyError, OSError, qde.SeedError) as e:
        sys.stdout.write(json.dumps({"error": type(e).__name__, "message": str(e)}, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
