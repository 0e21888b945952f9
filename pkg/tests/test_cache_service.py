import orjson
import pytest

from plurilag.core.exceptions import CacheFormatError
from plurilag.services.cache_service import (
    CACHE_FORMAT_VERSION,
    CacheService,
    context_to_document,
    document_to_context,
)
from plurilag.services.kdv_hierarchy import HierarchyContext


@pytest.fixture(scope="module")
def small_ctx():
    return HierarchyContext.build(2, 2)


def same_context(a, b):
    return (a.n, a.k_max, a.r, a.g, a.h, a.a, a.b) == (b.n, b.k_max, b.r, b.g, b.h, b.a, b.b)


def test_document_round_trip(small_ctx):
    doc = context_to_document(small_ctx)
    assert doc["format_version"] == CACHE_FORMAT_VERSION
    assert doc["r"][2] == "3*u^2 + u_xx"
    assert doc["g"]["1"] == "v_x"
    assert sorted(doc["b"]) == ["1,1", "1,2", "2,1", "2,2"]
    assert same_context(document_to_context(doc), small_ctx)


@pytest.mark.parametrize(
    "section, key, value, message",
    [
        ("r", 2, "u_xx + 3*u^2", "canonical"),
        ("g", "1", "v_xx", "weight"),
        ("h", "1", "not a polynomial ^", "h_1"),
        ("a", "1,1", 7, "string"),
    ],
)
def test_tampered_documents_are_rejected(small_ctx, section, key, value, message):
    doc = context_to_document(small_ctx)
    doc[section][key] = value
    with pytest.raises(CacheFormatError, match=message):
        document_to_context(doc)


@pytest.mark.parametrize(
    "field, value",
    [("format_version", 99), ("kind", "something-else"), ("n", 0), ("k_max", "2")],
)
def test_bad_headers_are_rejected(small_ctx, field, value):
    doc = context_to_document(small_ctx)
    doc[field] = value
    with pytest.raises(CacheFormatError):
        document_to_context(doc)


def test_missing_tables_are_rejected(small_ctx):
    doc = context_to_document(small_ctx)
    del doc["h"]
    with pytest.raises(CacheFormatError):
        document_to_context(doc)
    doc = context_to_document(small_ctx)
    del doc["b"]["2,2"]
    with pytest.raises(CacheFormatError):
        document_to_context(doc)
    with pytest.raises(CacheFormatError):
        document_to_context([])


def test_save_and_load(tmp_path, small_ctx):
    cache = CacheService(str(tmp_path))
    path = cache.save(small_ctx)
    assert path == tmp_path / "kdv-n2-k2.json"
    assert not list(tmp_path.glob("*.tmp"))
    assert same_context(cache.load(2, 2), small_ctx)
    assert cache.load(2, 3) is None


def test_load_or_build_writes_then_reads(tmp_path):
    cache = CacheService(str(tmp_path / "nested"))
    cold = cache.load_or_build(2, 2)
    assert cache.path_for(2, 2).exists()
    warm = cache.load_or_build(2, 2)
    assert same_context(cold, warm)


def test_corrupt_file_is_a_miss(tmp_path, small_ctx):
    cache = CacheService(str(tmp_path))
    cache.path_for(2, 2).write_bytes(b"{not json")
    assert cache.load(2, 2) is None
    rebuilt = cache.load_or_build(2, 2)
    assert same_context(rebuilt, small_ctx)
    assert cache.load(2, 2) is not None


def test_mislabelled_file_is_a_miss(tmp_path, small_ctx):
    cache = CacheService(str(tmp_path))
    doc = orjson.dumps(context_to_document(small_ctx))
    cache.path_for(2, 3).write_bytes(doc)
    assert cache.load(2, 3) is None


def test_disabled_cache(small_ctx):
    cache = CacheService(None)
    assert cache.path_for(2, 2) is None
    assert cache.save(small_ctx) is None
    assert cache.load(2, 2) is None
    assert CacheService("").cache_dir is None


def test_zero_denominator_is_rejected(small_ctx):
    doc = context_to_document(small_ctx)
    doc["r"][0] = "1/0"
    with pytest.raises(CacheFormatError, match="r_0"):
        document_to_context(doc)


def test_zero_denominator_in_a_cache_file_is_a_miss(tmp_path, small_ctx):
    cache = CacheService(str(tmp_path))
    doc = context_to_document(small_ctx)
    doc["r"][0] = "1/0"
    cache.path_for(2, 2).write_bytes(orjson.dumps(doc))
    assert cache.load(2, 2) is None
    assert same_context(cache.load_or_build(2, 2), small_ctx)
