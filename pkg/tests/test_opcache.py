import hashlib

import pytest

from conftest import gr
from qapery.gpqh import FORMAT_VERSION
from qapery.opcache import CacheError, OperatorCache, cache_roundtrip, decode, encode


def test_roundtrip(cache_dir):
    op = gr(2, 5)
    cache = OperatorCache(cache_dir)
    assert cache.get("gr25", lambda: op).op_hash == op.op_hash
    assert cache.path("gr25").exists()
    again = cache.get("gr25", lambda: pytest.fail("should be served from disk"))
    assert again.matrices == op.matrices
    assert cache.rebuilt == []
    assert cache_roundtrip(op)


def test_truncated_file_is_rebuilt(cache_dir):
    op = gr(2, 5)
    cache = OperatorCache(cache_dir)
    p = cache.store("gr25", op)
    text = p.read_text()
    p.write_text(text[: len(text) // 2])
    with pytest.raises(ValueError):
        decode(p.read_text())
    assert cache.verify() == {p.name: False}
    calls = []
    got = cache.get("gr25", lambda: calls.append(1) or op)
    assert calls == [1]
    assert cache.rebuilt == ["gr25"]
    assert got.op_hash == op.op_hash
    assert cache.verify() == {p.name: True}


def test_flipped_byte_fails_checksum():
    text = encode(gr(2, 4))
    i = text.index("\n") + 3
    bad = text[:i] + ("1" if text[i] != "1" else "2") + text[i + 1:]
    with pytest.raises(ValueError, match="checksum"):
        decode(bad)


def test_other_version_is_rebuilt(cache_dir):
    op = gr(2, 4)
    cache = OperatorCache(cache_dir)
    p = cache.store("gr24", op)
    body = p.read_text().rpartition("checksum")[0]
    lines = body.splitlines(keepends=True)
    lines[0] = lines[0].replace(str(FORMAT_VERSION), str(FORMAT_VERSION + 1))
    body = "".join(lines)
    p.write_text(body + f"checksum {hashlib.sha256(body.encode()).hexdigest()}\n")
    assert cache.load("gr24") is None
    cache.get("gr24", lambda: op)
    assert cache.rebuilt == ["gr24"]


def test_unwritable_directory(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cache = OperatorCache(blocker / "cache")
    with pytest.raises(CacheError):
        cache.store("gr24", gr(2, 4))


def test_clear(cache_dir):
    cache = OperatorCache(cache_dir)
    cache.store("a", gr(2, 4))
    cache.store("b", gr(2, 5))
    assert len(cache.entries()) == 2
    assert cache.clear() == 2
    assert cache.entries() == []
