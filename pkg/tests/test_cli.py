"""
Test the command-line workbench and its configuration.
"""

import os
from io import StringIO
from pathlib import Path
from contextlib import redirect_stderr, redirect_stdout

from collatzlab import Config, OutputFormat, read_checkpoint, run_search, write_checkpoint
from collatzlab.cli import main, parse_int
from testutils import run_tests
import pytest


def run_cli(*argv):
    out, err = StringIO(), StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main([str(arg) for arg in argv])
    return code, out.getvalue(), err.getvalue()


def test_parse_int():
    assert parse_int("27") == 27
    assert parse_int("0x1b") == 27
    assert parse_int("2^57") == 2**57
    assert parse_int("27+2^57") == 27 + 2**57
    assert parse_int("27 + 3*2^75") == 27 + 3 * 2**75


def test_sigma():
    assert run_cli("sigma", "27") == (0, "37\n", "")
    assert run_cli("sigma", "27", "--total")[1] == "41\n"
    assert run_cli("sigma", "27", "--coefficient")[1] == "37\n"
    assert run_cli("sigma", "27+2^57")[1] == "48\n"
    assert run_cli("sigma", "1")[1] == "trivial-cycle\n"

    # Global flags go before or after the command
    assert run_cli("sigma", "27", "--cap", "10") == (2, ">10\n", "")
    assert run_cli("--cap", "10", "sigma", "27")[0] == 2


def test_usage_errors():
    code, out, err = run_cli("sigma", "4")
    assert code == 1
    assert out == ""
    assert "odd" in err

    code, out, err = run_cli("sigma", "27", "--bogus")
    assert code == 1
    assert "usage:" in err

    assert run_cli("nonsense")[0] == 1
    assert run_cli("sigma", "abc")[0] == 1
    assert run_cli("sigma", "27", "--total", "--coefficient")[0] == 1
    assert run_cli("sigma", "27", "--cap", "0")[0] == 1
    assert run_cli("pow2")[0] == 1


def test_trace():
    code, out, _ = run_cli("trace", "191", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "step,value,m,twos_accum,twos_required,deficit"
    assert lines[1] == "1,287,1,1,2,1"
    assert lines[8] == "8,77,3,14,13,-1"
    assert len(lines) == 9

    assert run_cli("trace", "27", "--cap", "5")[0] == 2


def test_rates(tmp_path):
    code, out, _ = run_cli(
        "rates", "--max-step", "10", "--format", "csv", "--cache-dir", tmp_path
    )
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 11
    assert lines[10].split(",")[:3] == ["10", "2114", "32768"]
    assert lines[10].split(",")[3] == "6.5"

    # Over the enumeration budget
    assert run_cli("rates", "--max-step", "5", "--budget", "64", "--cache-dir", tmp_path)[0] == 1


def test_template(tmp_path):
    out_file = tmp_path / "t2.bin"
    code, out, _ = run_cli(
        "template", "--step", "2", "--out", out_file, "--cache-dir", tmp_path / "c", "--format", "csv"
    )
    assert code == 0
    assert out == "step,exponent,unreached,total_odd\n2,4,3,8\n"
    assert out_file.stat().st_size == 24

    # The output file is reused as a cache
    assert run_cli("template", "--step", "2", "--out", out_file, "--cache-dir", tmp_path / "c")[0] == 0

    out_file.write_bytes(b"garbage")
    assert run_cli("template", "--step", "2", "--out", out_file, "--cache-dir", tmp_path / "c")[0] == 3


def test_pow2():
    code, out, _ = run_cli("pow2", "27", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "m,count,observed_pct,theoretical_pct"
    assert lines[1] == "1,22,59.5,50.0"

    code, out, _ = run_cli("pow2", "27+2^51", "--total", "--format", "csv")
    assert code == 0
    assert out.splitlines()[7].startswith("7,1,0.5,")

    assert run_cli("pow2", "27", "--cap", "10")[0] == 2
    assert run_cli("pow2", "--pooled", "1000", "--format", "json")[0] == 0


def test_search_and_resume(tmp_path):
    path = tmp_path / "search.jsonl"
    code, out, _ = run_cli("search", "--start", "27", "--iters", "3", "--checkpoint", path)
    assert code == 0
    assert len(path.read_text().splitlines()) == 4
    assert "3·2^75" in out

    code, _, _ = run_cli(
        "search", "--start", "27", "--iters", "5", "--checkpoint", path, "--resume"
    )
    assert code == 0
    assert read_checkpoint(path) == run_search(27, 5)

    # Resuming with another start is refused
    code, _, err = run_cli(
        "search", "--start", "31", "--iters", "6", "--checkpoint", path, "--resume"
    )
    assert code == 3
    assert read_checkpoint(path) == run_search(27, 5)


def test_slope_series_diff(tmp_path):
    path = tmp_path / "search.jsonl"
    write_checkpoint(path, run_search(27, 5))

    code, out, _ = run_cli("slope", "--checkpoint", path, "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "slope,intercept,max_abs_residual,predicted_bits"
    assert out.splitlines()[1].endswith(",146")

    code, out, _ = run_cli("series", "sigma-by-iteration", "--checkpoint", path, "--format", "csv")
    assert out == "iteration,sigma\n1,48\n2,51\n3,52\n4,59\n5,92\n"

    code, out, _ = run_cli("series", "density", "--max-step", "3", "--format", "csv")
    assert out == "step,density_pct\n1,50.0\n2,37.5\n3,25.0\n"
    assert run_cli("series", "density")[0] == 1

    code, out, _ = run_cli("diff", "--checkpoint", path, "--format", "csv")
    assert code == 0
    assert out.splitlines()[1] == "1,48,48,1,1"


def test_corrupt_and_missing_files(tmp_path):
    path = tmp_path / "search.jsonl"
    path.write_text('{"format":"something-else"}\n')
    assert run_cli("slope", "--checkpoint", path)[0] == 3
    assert run_cli("slope", "--checkpoint", tmp_path / "missing.jsonl")[0] == 3

    # A cap too small for the start is a cap error, not a corrupt file
    write_checkpoint(path, run_search(27, 2))
    assert run_cli("slope", "--checkpoint", path, "--cap", "10")[0] == 2


def test_lengths_patterns_theorems():
    code, out, _ = run_cli("lengths", "--max-step", "13", "--format", "csv")
    assert out.splitlines()[-1] == "13,21,2097152"

    code, out, _ = run_cli("patterns", "--max-step", "3", "--span", "8", "--format", "csv")
    assert out.splitlines()[3] == "3,+ − + − + + − −"

    code, out, _ = run_cli("theorems", "--kind", "equal", "--samples", "20", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1] == "equal,20,20,100.000000"


def test_config():
    config = Config()
    assert config.cap == 10**6
    assert config.enumeration_budget == 2**21
    assert config.output_format == OutputFormat.pretty
    assert config.cache_dir == Path(".collatz-cache")
    assert config.with_overrides(cap=5, workers=None).cap == 5

    with pytest.raises(ValueError):
        Config(cap=0)
    with pytest.raises(ValueError):
        Config(enumeration_budget=1)
    with pytest.raises(ValueError):
        Config(output_format="xml")


def test_config_from_env(caplog):
    saved = {k: os.environ.pop(k, None) for k in ("COLLATZ_LAB_CACHE", "COLLATZ_LAB_WORKERS")}
    try:
        os.environ["COLLATZ_LAB_CACHE"] = "/tmp/somewhere"
        os.environ["COLLATZ_LAB_WORKERS"] = "3"
        config = Config.from_env()
        assert config.cache_dir == Path("/tmp/somewhere")
        assert config.workers == 3
        assert Config.from_env(workers=2).workers == 2

        os.environ["COLLATZ_LAB_WORKERS"] = "many"
        assert Config.from_env().workers == 1
        assert "Ignoring invalid COLLATZ_LAB_WORKERS" in caplog.text
    finally:
        for key, value in saved.items():
            os.environ.pop(key, None)
            if value is not None:
                os.environ[key] = value


if __name__ == "__main__":
    run_tests(globals())
