"""On-disk cache for zeta(2m) tables.

Format (ASCII, LF line ends)::

    # rhlab-cache v1
    # kind zeta_even
    # precision 40
    # count 100
    1<TAB>1.6449340668...
    ...

Only zeta(2m) is stored; inverses are recomputed on load at the same
working precision, which reproduces them bit for bit.  Every entry carries
exactly the number of significant digits implied by the header precision,
so a truncated line or file is detected rather than read as a short table.
"""
from __future__ import annotations

import math
import os
from pathlib import Path

import mpmath
from mpmath import mp, mpf
from mpmath.libmp import to_str

from .errors import CacheError, DomainError
from .mp_kernel import ZetaEvenTable, check_precision, guard_digits, zeta_even_table

__all__ = [
    "CACHE_ENV",
    "cache_roundtrip",
    "default_cache_dir",
    "entry_digits",
    "load_or_build",
    "load_table",
    "save_table",
]

CACHE_ENV = "RHLAB_CACHE_DIR"
MAGIC = "# rhlab-cache v1"
KIND = "zeta_even"
FILENAME = "zeta_even.rhc"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "rhlab"


def _working_digits(precision: int) -> int:
    return precision + guard_digits(precision)


def entry_digits(precision: int) -> int:
    """Significant digits written per entry: enough to round-trip the binary value."""
    with mp.workdps(_working_digits(precision)):
        bits = mp.prec
    return math.ceil(bits * math.log10(2)) + 2


def _format(value, digits: int) -> str:
    return to_str(value._mpf_, digits, strip_zeros=False, min_fixed=-1, max_fixed=2)


def _render(table: ZetaEvenTable) -> bytes:
    digits = entry_digits(table.precision)
    lines = [MAGIC, f"# kind {KIND}", f"# precision {table.precision}", f"# count {table.count}"]
    for m, z in enumerate(table.zeta_values, start=1):
        lines.append(f"{m}\t{_format(z, digits)}")
    return ("\n".join(lines) + "\n").encode("ascii")


def save_table(table: ZetaEvenTable, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(_render(table))
    os.replace(tmp, path)
    return path


def _significant(text: str) -> int:
    mant = text.split("e", 1)[0].replace("-", "").replace(".", "")
    return len(mant.lstrip("0"))


def load_table(path) -> ZetaEvenTable:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CacheError(f"cannot read cache {path}: {exc}") from exc
    offset = 0
    lines = []
    for raw in data.split(b"\n"):
        lines.append((offset, raw))
        offset += len(raw) + 1
    if not data.endswith(b"\n"):
        raise CacheError("file does not end with a newline (truncated?)", offset=len(data))
    lines.pop()  # empty remainder after the final newline

    def header(i, key):
        if i >= len(lines):
            raise CacheError(f"missing header line '{key}'", offset=len(data))
        off, raw = lines[i]
        text = raw.decode("ascii", "replace")
        prefix = f"# {key} "
        if not text.startswith(prefix):
            raise CacheError(f"expected header '{prefix.strip()}', found {text[:40]!r}", offset=off)
        return off, text[len(prefix):]

    if not lines or lines[0][1].decode("ascii", "replace") != MAGIC:
        raise CacheError(f"bad magic, expected {MAGIC!r}", offset=0)
    off, kind = header(1, "kind")
    if kind != KIND:
        raise CacheError(f"unsupported table kind {kind!r}", offset=off)
    off, text = header(2, "precision")
    try:
        precision = check_precision(int(text))
    except (ValueError, DomainError) as exc:
        raise CacheError(f"bad precision {text!r}", offset=off) from exc
    off, text = header(3, "count")
    try:
        count = int(text)
    except ValueError as exc:
        raise CacheError(f"bad count {text!r}", offset=off) from exc
    if count < 1:
        raise CacheError(f"bad count {count}", offset=off)
    body = lines[4:]
    if len(body) != count:
        raise CacheError(f"header promises {count} entries, file holds {len(body)}", offset=len(data))
    digits = entry_digits(precision)
    values = []
    with mp.workdps(_working_digits(precision)):
        for m, (off, raw) in enumerate(body, start=1):
            parts = raw.decode("ascii", "replace").split("\t")
            if len(parts) != 2 or parts[0] != str(m):
                raise CacheError(f"expected entry {m}<TAB>value", offset=off)
            if _significant(parts[1]) != digits:
                raise CacheError(f"entry {m} has {_significant(parts[1])} digits, expected {digits}",
                                 offset=off)
            try:
                values.append(mpf(parts[1]))
            except ValueError as exc:
                raise CacheError(f"entry {m} is not a decimal", offset=off) from exc
    return ZetaEvenTable.from_zeta_values(precision, values)


def cache_roundtrip(table: ZetaEvenTable, path) -> ZetaEvenTable:
    save_table(table, path)
    return load_table(path)


def load_or_build(count: int, precision: int, cache_dir=None) -> ZetaEvenTable:
    """Table covering ``count`` entries at ``precision``, reusing the cache when it is
    large and precise enough and rewriting it otherwise."""
    path = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = path / FILENAME
    if path.exists():
        try:
            table = load_table(path)
        except CacheError:
            table = None
        if table is not None and table.covers(count, precision):
            return table
        if table is not None:
            count = max(count, table.count)
    table = zeta_even_table(count, precision)
    save_table(table, path)
    return table
