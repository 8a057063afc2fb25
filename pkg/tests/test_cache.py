import pytest

from rhlab.cache import (CACHE_ENV, FILENAME, cache_roundtrip, default_cache_dir, load_or_build,
                         load_table, save_table)
from rhlab.errors import CacheError
from rhlab.mp_kernel import zeta_even_table


@pytest.fixture(scope="module")
def table():
    return zeta_even_table(100, 40)


def test_roundtrip_bit_exact(table, tmp_path):
    back = cache_roundtrip(table, tmp_path / "t.rhc")
    assert back.precision == 40
    assert back.zeta_values == table.zeta_values
    assert back.inverse_values == table.inverse_values


def test_reload_then_save_is_byte_identical(table, tmp_path):
    a, b = tmp_path / "a.rhc", tmp_path / "b.rhc"
    save_table(table, a)
    save_table(load_table(a), b)
    assert a.read_bytes() == b.read_bytes()


def test_header(table, tmp_path):
    p = save_table(table, tmp_path / "t.rhc")
    lines = p.read_text().splitlines()
    assert lines[:4] == ["# rhlab-cache v1", "# kind zeta_even", "# precision 40", "# count 100"]
    assert lines[4].startswith("1\t1.6449340668482264364724151666460251892")


def test_truncated_file_rejected(table, tmp_path):
    p = save_table(table, tmp_path / "t.rhc")
    data = p.read_bytes()
    for cut in (len(data) - 1, len(data) - 40, len(data) // 2):
        p.write_bytes(data[:cut])
        with pytest.raises(CacheError, match="byte"):
            load_table(p)
    # whole lines missing
    p.write_bytes(b"".join(data.splitlines(keepends=True)[:-3]))
    with pytest.raises(CacheError, match="promises 100"):
        load_table(p)


@pytest.mark.parametrize("bad,offset", [
    (b"# rhlab-cache v2\n", 0),
    (b"# rhlab-cache v1\n# kind other\n", 17),
    (b"# rhlab-cache v1\n# kind zeta_even\n# precision x\n", 34),
])
def test_corrupt_header_names_offset(tmp_path, bad, offset):
    p = tmp_path / "bad.rhc"
    p.write_bytes(bad)
    with pytest.raises(CacheError) as info:
        load_table(p)
    assert info.value.offset == offset
    assert str(info.value).startswith(f"byte {offset}:")


def test_corrupt_entry(table, tmp_path):
    p = save_table(table, tmp_path / "t.rhc")
    text = p.read_text().replace("\n2\t1.08", "\n2\t1.09", 1)
    p.write_text(text)
    load_table(p)  # digit change keeps the format valid
    p.write_text(text.replace("\n3\t", "\n4\t", 1))
    with pytest.raises(CacheError, match="entry 3"):
        load_table(p)


def test_stale_precision_rebuilds(tmp_path):
    t40 = load_or_build(30, 40, tmp_path)
    assert t40.precision == 40
    again = load_or_build(20, 35, tmp_path)
    assert again.precision == 40 and again.count == 30
    t60 = load_or_build(30, 60, tmp_path)
    assert t60.precision == 60
    assert (tmp_path / FILENAME).read_text().splitlines()[2] == "# precision 60"


def test_env_var(monkeypatch, tmp_path):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    assert default_cache_dir() == tmp_path
    load_or_build(5, 20)
    assert (tmp_path / FILENAME).exists()
