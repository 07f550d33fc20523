import csv
import io
import json
import math

import pytest

from overmex import cli, commands, store
from overmex.oracle import CapExceeded
from overmex.store import (
    CacheKey,
    CorruptCache,
    TableCache,
    UnsupportedFormat,
    VersionMismatch,
    cache_load,
    cache_store,
    decode_entry,
    encode_entry,
    write_rows,
)


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv(store.CACHE_ENV, str(d))
    return d


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- cache ------------------------------------------------------------------

def test_cache_roundtrip(tmp_path):
    key = CacheKey(1, 100, None)
    payload = commands.cmd_table(1, 100)
    values = tuple(v for _, v in payload)
    path = cache_store(tmp_path, key, values)
    entry = cache_load(tmp_path, key)
    assert entry.payload == values and entry.key == key
    assert encode_entry(key, entry.payload) == path.read_bytes()


def test_cache_miss(tmp_path):
    assert cache_load(tmp_path, CacheKey(1, 5)) is None


def test_cache_truncated_file(tmp_path):
    key = CacheKey(2, 50, 8)
    path = cache_store(tmp_path, key, range(51))
    blob = path.read_bytes()
    path.write_bytes(blob[: len(blob) // 2])
    with pytest.raises(CorruptCache):
        cache_load(tmp_path, key)
    path.write_bytes(blob[:5])
    with pytest.raises(CorruptCache):
        cache_load(tmp_path, key)


def test_cache_flipped_byte(tmp_path):
    key = CacheKey(1, 20)
    path = cache_store(tmp_path, key, range(21))
    blob = bytearray(path.read_bytes())
    blob[40] ^= 1
    path.write_bytes(bytes(blob))
    with pytest.raises(CorruptCache):
        cache_load(tmp_path, key)


def test_cache_version_bump_recomputes(tmp_path, monkeypatch):
    key = CacheKey(1, 10)
    path = cache_store(tmp_path, key, [7] * 11)
    monkeypatch.setattr(store, "FORMAT_VERSION", store.FORMAT_VERSION + 1)
    with pytest.raises(VersionMismatch):
        cache_load(tmp_path, key)
    calls = []
    got = TableCache(tmp_path).get(key, lambda: calls.append(1) or list(range(11)))
    assert got == tuple(range(11)) and calls == [1]
    # old file replaced by one in the new format
    assert decode_entry(path.read_bytes()).format_version == store.FORMAT_VERSION


def test_corrupt_cache_is_recomputed(tmp_path):
    key = CacheKey(3, 10)
    path = cache_store(tmp_path, key, range(11))
    path.write_bytes(b"junk")
    got = TableCache(tmp_path).get(key, lambda: [0] * 11)
    assert got == (0,) * 11
    assert cache_load(tmp_path, key).payload == (0,) * 11


def test_cache_hit_skips_compute(tmp_path):
    cache = TableCache(tmp_path)
    key = CacheKey(1, 3)
    cache.get(key, lambda: [1, 3, 6, 13])
    assert cache.get(key, lambda: pytest.fail("recomputed")) == (1, 3, 6, 13)


def test_no_tempfiles_left(tmp_path):
    cache_store(tmp_path, CacheKey(1, 3), [1, 3, 6, 13])
    assert [p.name for p in tmp_path.iterdir()] == ["srmex_r1_T3_exact.bin"]


# --- serialization ----------------------------------------------------------

def test_write_rows_formats():
    rows = [(0, 1), (1, 10 ** 40)]
    buf = io.StringIO()
    write_rows(buf, ("n", "value"), rows, "csv")
    assert buf.getvalue() == "n,value\n0,1\n1," + "1" + "0" * 40 + "\n"
    buf = io.StringIO()
    write_rows(buf, ("n", "value"), rows, "jsonl")
    lines = [json.loads(x) for x in buf.getvalue().splitlines()]
    assert lines[1] == {"n": "1", "value": str(10 ** 40)}
    with pytest.raises(UnsupportedFormat):
        write_rows(io.StringIO(), ("n",), rows, "xml")


# --- commands ---------------------------------------------------------------

def test_cmd_table_examples(oracle_totals):
    assert commands.cmd_table(1, 3)[-1] == (3, 13)
    assert commands.cmd_table(1, 0) == [(0, 1)]
    assert [v for _, v in commands.cmd_table(2, 30)] == [oracle_totals[n, 2] for n in range(31)]


def test_cmd_density_small():
    rep = commands.cmd_density(1, 1, 0)
    assert rep.nonzero_count == 1 and rep.density == 0


@pytest.mark.parametrize("X", [100, 1000, 5000])
def test_density_matches_triangular_closed_form(X):
    rep = commands.cmd_density(1, 1, X)
    assert rep.nonzero_count == math.floor((math.sqrt(8 * X + 1) - 1) / 2) + 1
    assert rep.triangular_count == rep.nonzero_count - 1


def test_density_warns_for_unsupported_r():
    rep = commands.cmd_density(5, 1, 50)
    assert rep.warning and "UnsupportedR" in rep.warning
    assert 0 <= rep.density <= 1


def test_cmd_verify_suites():
    assert commands.cmd_verify("d3", 200, oracle_max=12).passed
    assert commands.cmd_verify("tk", 300, r=3).passed
    assert commands.cmd_verify("parity", 2000).passed
    assert commands.cmd_verify("oracle", 12, r=2).passed
    assert commands.cmd_verify("eta-congruence", 20, r=3, k=2).passed
    with pytest.raises(CapExceeded):
        commands.cmd_verify("oracle", 60)


def test_cmd_verify_reports_failing_n(monkeypatch):
    from overmex import analytics

    real = analytics.srmex_via_convolution

    def off_by_one(r, T, modulus=None):
        t = real(r, T, modulus)
        vals = list(t.values)
        vals[17] += 1
        return analytics.SmexTable(r, tuple(vals), t.route, modulus)

    monkeypatch.setattr(analytics, "srmex_via_convolution", off_by_one)
    rep = commands.cmd_verify("tk", 40, r=2)
    assert not rep.passed and "n=17" in rep.failure


def test_cmd_eta_examples():
    rep = commands.cmd_eta(1, 4)
    assert (rep.form.level, rep.form.weight, rep.cusps.holomorphic) == (384, 4, True)
    assert commands.cmd_eta(8, 4).form.level == 2 ** 7 * 3


def test_cmd_asym_examples():
    rows = commands.cmd_asym(1, [1000, 4000])
    assert abs(float(rows[1][3]) - 1) < abs(float(rows[0][3]) - 1)
    r1 = commands.cmd_asym(1, [500])[0]
    r2 = commands.cmd_asym(2, [500])[0]
    assert float(r1[2]) / float(r2[2]) == pytest.approx(2, rel=1e-13)
    assert commands.cmd_asym(1, []) == []
    with pytest.raises(CapExceeded):
        commands.cmd_asym(1, [50], max_n=10)


# --- CLI surface ------------------------------------------------------------

def test_cli_table_csv(capsys, cache_dir):
    code, out, _ = run(capsys, "table", "--r", "1", "--max-n", "3")
    assert code == 0
    assert out == "n,value\n0,1\n1,3\n2,6\n3,13\n"


def test_cli_table_jsonl_file(capsys, tmp_path, cache_dir):
    out = tmp_path / "t.jsonl"
    code, _, _ = run(capsys, "table", "--max-n", "0", "--format", "jsonl", "--out", str(out))
    assert code == 0
    assert out.read_text() == '{"n": "0", "value": "1"}\n'


def test_cli_output_deterministic_and_cache_neutral(capsys, tmp_path):
    outs = []
    for extra in (["--no-cache"], ["--cache-dir", str(tmp_path)], ["--cache-dir", str(tmp_path)]):
        code, out, _ = run(capsys, "table", "--r", "2", "--max-n", "300", *extra)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] == outs[2]
    dens = [run(capsys, "density", "--r", "2", "--k", "2", "--x", "500", *extra)[1]
            for extra in (["--no-cache"], ["--cache-dir", str(tmp_path)], ["--cache-dir", str(tmp_path)])]
    assert dens[0] == dens[1] == dens[2]


def test_cli_density(capsys, cache_dir):
    code, out, _ = run(capsys, "density", "--r", "1", "--k", "1", "--x", "5000")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["nonzero_count"] == "100" and row["triangular_count"] == "99"
    assert row["range"] == "0..5000"


def test_cli_verify_pass_and_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "tk", "--r", "3", "--max-n", "500")
    assert code == 0 and out.startswith("PASS tk")
    code, out, _ = run(capsys, "verify", "--suite", "parity", "--max-n", "10000")
    assert code == 0
    code, _, err = run(capsys, "verify", "--suite", "oracle", "--max-n", "80")
    assert code == 2 and "CapExceeded" in err


def test_cli_verify_mismatch_exit(capsys, monkeypatch):
    monkeypatch.setattr(commands, "_verify_tk", lambda **kw: (5, "n=4: product 1, convolution 2"))
    monkeypatch.setitem(commands._SUITE_FUNCS, "tk", commands._verify_tk)
    code, out, _ = run(capsys, "verify", "--suite", "tk", "--max-n", "10")
    assert code == 1 and "n=4" in out


def test_cli_eta(capsys):
    code, out, _ = run(capsys, "eta", "--r", "1", "--k", "4")
    assert code == 0
    assert "level N = 384" in out and "weight = 4" in out and "holomorphic: True" in out
    code, _, err = run(capsys, "eta", "--r", "5", "--k", "4")
    assert code == 2 and "UnsupportedR" in err
    code, _, err = run(capsys, "eta", "--r", "3", "--k", "3")
    assert code == 2 and "k >= 4" in err


def test_cli_asym(capsys, cache_dir):
    code, out, _ = run(capsys, "asym", "--r", "1", "--points", "1000", "4000")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["n"] for r in rows] == ["1000", "4000"]
    code, out, _ = run(capsys, "asym", "--r", "1")
    assert code == 0 and out == "n,exact,estimate,ratio\n"


def test_cli_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["table"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["table", "--max-n", "3", "--format", "xml"])
    assert exc.value.code == 2


def test_cli_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "table", "--max-n", "3", "--no-cache",
                       "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 3 and "I/O error" in err
