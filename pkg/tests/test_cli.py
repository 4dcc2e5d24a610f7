import json

import pytest

from conftest import gp, gr
from qapery.apery import INTEGRAL_PRIMITIVE, apery_constants, strain_compare
from qapery.cli import main, parse_spec, run_reproduce


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize(
    "text,triple",
    [
        ("Gr(2,5)", ("A", 4, 2)),
        ("Gr(3,8)", ("A", 7, 3)),
        ("B(4,4)", ("B", 4, 4)),
        ("OGr(4,9)", ("B", 4, 4)),
        ("OGr(5,10)", ("D", 5, 5)),
        ("SGr(2,6)", ("C", 3, 2)),
        ("D(5,4)", ("D", 5, 4)),
        ("E(7,7)", ("E", 7, 7)),
    ],
)
def test_alias_resolution(text, triple):
    s = parse_spec(text)
    assert (s.kind, s.family, s.rank, s.node) == ("gp",) + triple


def test_product_specs():
    assert parse_spec("P2xP3").weights == (3, 4)
    assert parse_spec("P2xP3:O(1,1)").weights == (1, 1)
    s = parse_spec("product 2,3", "1,1")
    assert (s.kind, s.dims, s.weights) == ("product", (2, 3), (1, 1))


@pytest.mark.parametrize("text", ["Gr(5,5)", "X(2,3)", "OGr(4,10)", "B(1,1)"])
def test_bad_specs(text):
    with pytest.raises(ValueError):
        parse_spec(text)


def test_compute_gr25(capsys, cache_dir):
    code, out = _run(capsys, "compute", "Gr(2,5)", "--cache-dir", str(cache_dir))
    assert code == 0
    rec = json.loads(out)
    assert rec["mu"] == 2 and rec["dim"] == 6 and rec["fano_index"] == 5
    fund, const = rec["entries"]
    assert fund["kind"] == "fundamental"
    assert const["primitive_codim"] == 2
    assert const["identified"]["paper"] == "ζ(2)"
    assert len(rec["entries"]) == rec["mu"]


def test_compute_is_deterministic(capsys, cache_dir):
    args = ("compute", "Gr(2,6)", "B(4,4)", "--cache-dir", str(cache_dir))
    _, a = _run(capsys, *args)
    _, b = _run(capsys, *args)
    _, c = _run(capsys, *args, "--no-cache")
    assert a == b == c
    assert isinstance(json.loads(a), list)


def test_compute_b44(capsys, cache_dir):
    code, out = _run(capsys, "compute", "B(4,4)", "--normalization", INTEGRAL_PRIMITIVE, "--cache-dir", str(cache_dir))
    assert code == 0
    rec = json.loads(out)
    (const,) = rec["entries"][1:]
    assert const["primitive_codim"] == 3
    assert const["identified"]["paper"].lstrip("-") == "2 ζ(3)"


def test_compute_product_o11(capsys, cache_dir):
    code, out = _run(capsys, "compute", "product 2,3", "--weights", "1,1", "--cache-dir", str(cache_dir))
    assert code == 0
    rec = json.loads(out)
    got = sorted(e["identified"]["paper"] for e in rec["entries"][1:])
    assert got == sorted(["-C", "1/2 C^2 + 7/2 ζ(2)"])


@pytest.mark.parametrize("fmt,marker", [("csv", ","), ("md", "|")])
def test_other_formats(capsys, cache_dir, fmt, marker):
    code, out = _run(capsys, "compute", "Gr(2,5)", "--out", fmt, "--cache-dir", str(cache_dir))
    assert code == 0 and marker in out.splitlines()[0]


def test_error_json(capsys):
    code, out = _run(capsys, "compute", "Gr(7,5)")
    assert code == 2
    err = json.loads(out)
    assert set(err) == {"error", "message"}


def test_reproduce_efg_restricted():
    res = run_reproduce("EFG", 200, 40, "lefschetz-chern", 4, False, None, ["E(6,6)", "F(4,1)", "F(4,4)", "E(7,7)"])
    assert sorted(res["rows"]) == ["E(6,6)", "E(7,7)", "F(4,1)", "F(4,4)"]
    assert res["passed"]


def test_reproduce_gr2():
    res = run_reproduce("gr2", 200, 40, "lefschetz-chern", 4, False, None, None)
    assert res["passed"]
    p2 = [e for r in res["rows"].values() for e in r["entries"] if "ζ(2)" in e["expected"]]
    assert len(p2) >= 6
    assert all(e["status"] == "exact" for e in p2)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_symplectic_strain(n):
    # SGr(2,2n) repeats the Gr(2,2n) constants except the last zero
    X = apery_constants(gr(2, 2 * n))
    Y = apery_constants(gp("C", n, 2))
    r = strain_compare(X, Y)
    assert len(r["matched"]) == len(X) - 1
    assert [e.truncated for e in r["x_only"]] == [True]
    assert r["x_only"][0].primitive_codim == max(e.primitive_codim for e in X)
    assert not r["y_only"]


@pytest.mark.parametrize("N", [5, 6])
def test_orthogonal_coincidence(N):
    X = apery_constants(gp("D", N, N - 1), normalization=INTEGRAL_PRIMITIVE)
    Y = apery_constants(gp("B", N - 1, N - 1), normalization=INTEGRAL_PRIMITIVE)
    r = strain_compare(X, Y)
    assert len(r["matched"]) == len(X) == len(Y)


def test_cache_subcommands(capsys, cache_dir):
    d = str(cache_dir)
    code, out = _run(capsys, "cache", "build", "Gr(2,5)", "P2xP3", "--cache-dir", d)
    assert code == 0 and len(out.splitlines()) == 2
    code, out = _run(capsys, "cache", "list", "--cache-dir", d)
    assert sorted(out.split()) == sorted(p.name for p in cache_dir.iterdir())
    assert _run(capsys, "cache", "verify", "--cache-dir", d)[0] == 0
    victim = next(cache_dir.iterdir())
    victim.write_text(victim.read_text()[:50])
    code, out = _run(capsys, "cache", "verify", "--cache-dir", d)
    assert code == 1 and victim.name in out
    code, out = _run(capsys, "cache", "clear", "--cache-dir", d)
    assert code == 0 and not list(cache_dir.iterdir())


def test_sine_command(capsys):
    code, out = _run(capsys, "sine", "--N", "5", "--u", "1/7,2/7", "--terms", "200")
    assert code == 0
    rec = json.loads(out)
    assert len(rec["rows"]) == 4
    assert all(float(r["deviation"]) < 1e-8 for r in rec["rows"])
