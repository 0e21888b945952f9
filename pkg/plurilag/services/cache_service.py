"""Disk cache of hierarchy contexts."""

import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import orjson

from plurilag.algebra.diffpoly import DiffPoly
from plurilag.algebra.render import parse, render
from plurilag.core.exceptions import CacheFormatError
from plurilag.core.logging import get_logger
from plurilag.services.kdv_hierarchy import HierarchyContext

logger = get_logger(__name__)

CACHE_FORMAT_VERSION = 1
CACHE_KIND = "kdv-hierarchy"


def _pair_key(i: int, j: int) -> str:
    return f"{i},{j}"


def context_to_document(ctx: HierarchyContext) -> Dict[str, Any]:
    u_space, v_space = ctx.field_space, ctx.space
    return {
        "format_version": CACHE_FORMAT_VERSION,
        "kind": CACHE_KIND,
        "n": ctx.n,
        "k_max": ctx.k_max,
        "r": [render(p, u_space) for p in ctx.r],
        "g": {str(k): render(p, v_space) for k, p in sorted(ctx.g.items())},
        "h": {str(k): render(p, v_space) for k, p in sorted(ctx.h.items())},
        "a": {_pair_key(i, j): render(p, v_space) for (i, j), p in sorted(ctx.a.items())},
        "b": {_pair_key(i, j): render(p, v_space) for (i, j), p in sorted(ctx.b.items())},
    }


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise CacheFormatError(message)


def _read(text: Any, space, name: str) -> DiffPoly:
    _expect(isinstance(text, str), f"{name}: expected a string")
    try:
        poly = parse(text, space)
    except ValueError as e:
        raise CacheFormatError(f"{name}: {e}") from e
    _expect(render(poly, space) == text, f"{name}: not in canonical form")
    return poly


def _check_shape(poly: DiffPoly, name: str, base: int, weight: int, order: Optional[int] = None) -> None:
    _expect(poly.is_pure_x(), f"{name}: not pure-x")
    _expect(poly.weight(base) == weight, f"{name}: weight {poly.weight(base)} != {weight}")
    if order is not None:
        _expect(poly.max_order() == order, f"{name}: order {poly.max_order()} != {order}")


def _check_table(poly: DiffPoly, name: str, weight: int) -> None:
    _expect(poly.weight(1) == weight, f"{name}: weight {poly.weight(1)} != {weight}")


def document_to_context(doc: Any) -> HierarchyContext:
    """Rebuild a context, re-canonicalising and re-checking every polynomial."""
    _expect(isinstance(doc, dict), "document is not an object")
    _expect(doc.get("format_version") == CACHE_FORMAT_VERSION, f"unsupported format version {doc.get('format_version')!r}")
    _expect(doc.get("kind") == CACHE_KIND, f"unexpected document kind {doc.get('kind')!r}")
    n, k_max = doc.get("n"), doc.get("k_max")
    _expect(isinstance(n, int) and n >= 1, "invalid dimension")
    _expect(isinstance(k_max, int) and k_max >= 0, "invalid k_max")

    probe = HierarchyContext(n, k_max, [], {}, {})
    u_space, v_space = probe.field_space, probe.space

    raw_r = doc.get("r")
    _expect(isinstance(raw_r, list) and len(raw_r) == k_max + 2, "r table has the wrong length")
    r = []
    for k, text in enumerate(raw_r):
        poly = _read(text, u_space, f"r_{k}")
        _check_shape(poly, f"r_{k}", 2, 2 * k, max(2 * k - 2, 0))
        r.append(poly)

    def table(section: str, keys, reader):
        raw = doc.get(section)
        _expect(isinstance(raw, dict), f"missing {section} table")
        _expect(set(raw) == set(keys), f"{section} table has the wrong keys")
        return {key: reader(key, raw[key]) for key in keys}

    def read_g(key, text):
        k = int(key)
        poly = _read(text, v_space, f"g_{k}")
        _check_shape(poly, f"g_{k}", 1, 2 * k, 2 * k - 1)
        return poly

    def read_h(key, text):
        k = int(key)
        poly = _read(text, v_space, f"h_{k}")
        _check_shape(poly, f"h_{k}", 1, 2 * k + 2, 2 * k + 1)
        return poly

    def read_pair(section):
        def reader(key, text):
            i, j = (int(part) for part in key.split(","))
            poly = _read(text, v_space, f"{section}_{i}{j}")
            _check_table(poly, f"{section}_{i}{j}", 2 * i + 2 * j)
            return poly
        return reader

    g = table("g", [str(k) for k in range(1, k_max + 2)], read_g)
    h = table("h", [str(k) for k in range(1, k_max + 1)], read_h)
    a = table("a", [_pair_key(i, j) for i in range(1, k_max + 1) for j in range(1, n + 1)], read_pair("a"))
    b = table("b", [_pair_key(i, j) for i in range(1, k_max + 1) for j in range(1, k_max + 1)], read_pair("b"))

    def pairs(t: Dict[str, DiffPoly]) -> Dict[Tuple[int, int], DiffPoly]:
        return {tuple(int(part) for part in key.split(",")): p for key, p in t.items()}

    return HierarchyContext(
        n,
        k_max,
        r,
        {int(k): p for k, p in g.items()},
        {int(k): p for k, p in h.items()},
        pairs(a),
        pairs(b),
    )


class CacheService:
    """Service for persisting hierarchy contexts on disk."""

    def __init__(self, cache_dir: Optional[str] = None):
        """Initialize the cache; None disables it."""
        self.cache_dir = Path(cache_dir) if cache_dir else None

    def path_for(self, n: int, k_max: int) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        return self.cache_dir / f"kdv-n{n}-k{k_max}.json"

    def load(self, n: int, k_max: int) -> Optional[HierarchyContext]:
        """Cached context, or None on a miss or an unusable document."""
        path = self.path_for(n, k_max)
        if path is None or not path.exists():
            return None
        try:
            doc = orjson.loads(path.read_bytes())
            ctx = document_to_context(doc)
        except (orjson.JSONDecodeError, CacheFormatError) as e:
            logger.warning(f"Ignoring unusable cache file {path}: {e}")
            return None
        if (ctx.n, ctx.k_max) != (n, k_max):
            logger.warning(f"Cache file {path} describes N={ctx.n}, k_max={ctx.k_max}; ignoring it")
            return None
        logger.info(f"Loaded hierarchy context from {path}")
        return ctx

    def save(self, ctx: HierarchyContext) -> Optional[Path]:
        """Write atomically (temporary file, then rename)."""
        path = self.path_for(ctx.n, ctx.k_max)
        if path is None:
            return None
        path.parent.mkdir(parents=True, exist_ok=True)
        data = orjson.dumps(context_to_document(ctx), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except OSError:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        logger.info(f"Saved hierarchy context to {path}")
        return path

    def load_or_build(self, n: int, k_max: Optional[int] = None) -> HierarchyContext:
        k_max = n if k_max is None else k_max
        ctx = self.load(n, k_max)
        if ctx is not None:
            return ctx
        logger.info(f"Cache miss for N={n}, k_max={k_max}")
        ctx = HierarchyContext.build(n, k_max)
        try:
            self.save(ctx)
        except OSError as e:
            logger.warning(f"Could not write cache: {e}")
        return ctx

