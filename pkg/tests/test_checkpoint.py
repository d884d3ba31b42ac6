"""
Test the JSONL search checkpoints, including recovery from a partial write.
"""

from collatzlab import (
    CapExceededError,
    CheckpointWriter,
    FormatError,
    RecordSearch,
    read_checkpoint,
    run_search,
    write_checkpoint,
)
from testutils import run_tests
import pytest


HEADER = '{"format":"collatz-search/1","start":"27","rule":"largest-factor4/1"}'
FIRST_ROW = '{"iter":1,"k":2,"exp":56,"sigma":48,"n_hex":"20000000000001b"}'


def test_write_checkpoint(tmp_path):
    path = tmp_path / "search.jsonl"
    report = run_search(27, 5)
    write_checkpoint(path, report)

    data = path.read_bytes()
    assert b"\r" not in data
    lines = data.decode().split("\n")
    assert lines[-1] == ""
    assert len(lines[:-1]) == 6
    assert lines[0] == HEADER
    assert lines[1] == FIRST_ROW
    assert not (tmp_path / "search.jsonl.tmp").exists()


def test_checkpoint_roundtrip(tmp_path):
    path = tmp_path / "search.jsonl"
    report = run_search(27, 5)
    write_checkpoint(path, report)
    assert read_checkpoint(path) == report

    # Rewriting what was read gives the same bytes
    data = path.read_bytes()
    write_checkpoint(path, read_checkpoint(path))
    assert path.read_bytes() == data


def test_checkpoint_partial_line(tmp_path, caplog):
    path = tmp_path / "search.jsonl"
    report = run_search(27, 5)
    write_checkpoint(path, report)
    data = path.read_bytes()
    path.write_bytes(data[:-10])

    recovered = read_checkpoint(path)
    assert len(recovered.rows) == 4
    assert recovered.rows == report.rows[:4]
    assert "partial last line" in caplog.text


def test_checkpoint_corrupt_header(tmp_path):
    path = tmp_path / "search.jsonl"
    write_checkpoint(path, run_search(27, 2))
    lines = path.read_text().split("\n")

    for header in [
        '{"format":"collatz-search/2","start":"27","rule":"largest-factor4/1"}',
        '{"format":"collatz-search/1","start":"27","rule":"other/1"}',
        '{"format":"collatz-search/1","start":27,"rule":"largest-factor4/1"}',
        "not json at all",
    ]:
        path.write_text("\n".join([header, *lines[1:]]))
        with pytest.raises(FormatError):
            read_checkpoint(path)

    path.write_bytes(b"")
    with pytest.raises(FormatError):
        read_checkpoint(path)


def test_checkpoint_start_over_cap(tmp_path):
    path = tmp_path / "search.jsonl"
    write_checkpoint(path, run_search(27, 2))
    with pytest.raises(CapExceededError):
        read_checkpoint(path, cap=10)
    assert len(read_checkpoint(path, cap=37).rows) == 2


def test_checkpoint_corrupt_row(tmp_path):
    path = tmp_path / "search.jsonl"
    write_checkpoint(path, run_search(27, 3))
    lines = path.read_text().split("\n")

    damaged = [*lines]
    damaged[1] = damaged[1][:-5]
    path.write_text("\n".join(damaged))
    with pytest.raises(FormatError):
        read_checkpoint(path)

    # Rows out of order
    path.write_text("\n".join([lines[0], lines[2], lines[1], lines[3], ""]))
    with pytest.raises(FormatError):
        read_checkpoint(path)

    # Missing field
    path.write_text("\n".join([lines[0], '{"iter":1,"k":2,"exp":56}', ""]))
    with pytest.raises(FormatError):
        read_checkpoint(path)


def test_checkpoint_writer_as_sink(tmp_path):
    path = tmp_path / "search.jsonl"
    with CheckpointWriter(path, 27) as writer:
        search = RecordSearch(27, sink=writer)
        report = search.run(4)
        # Rows are flushed as they are accepted
        assert len(path.read_text().splitlines()) == 5
    assert read_checkpoint(path) == report


def test_checkpoint_crash_recovery(tmp_path):
    path = tmp_path / "search.jsonl"
    uninterrupted = run_search(27, 6)

    with CheckpointWriter(path, 27) as writer:
        RecordSearch(27, sink=writer).run(3)
    # Simulate a crash in the middle of writing the fourth row
    with open(path, "ab") as f:
        f.write(b'{"iter":4,"k":3,"ex')

    previous = read_checkpoint(path)
    assert len(previous.rows) == 3
    with CheckpointWriter(path, 27, previous.rows) as writer:
        search = RecordSearch.resume(27, previous.rows, sink=writer)
        resumed = search.run(3)

    assert resumed == uninterrupted
    assert read_checkpoint(path) == uninterrupted

    other = tmp_path / "other.jsonl"
    write_checkpoint(other, uninterrupted)
    assert path.read_bytes() == other.read_bytes()


if __name__ == "__main__":
    run_tests(globals())
