"""The ten reproduction criteria, one test each, with a pass/fail line per criterion.

Run directly (``python3 tests/test_acceptance.py``) for just the summary lines.
"""

import json
import subprocess
import sys
import time

import pytest

from dualconn.embedding import serialize
from dualconn.search import find_witness
from dualconn.verify import CHECKS, figure4_spec, run_check

LINES: list[str] = []


def _line(n, check, result):
    return f"criterion {n:2d} {result.status.upper():4s} {check.id} ({result.runtime_ms} ms)"


@pytest.mark.parametrize("n, check", list(enumerate(CHECKS, start=1)), ids=[c.id for c in CHECKS])
def test_criterion(n, check):
    result = run_check(check)
    line = _line(n, check, result)
    LINES.append(line)
    print(line)
    assert result.status == "pass", "\n".join(result.failures)


def test_witness_revalidates_in_fresh_process(tmp_path):
    w = find_witness(figure4_spec()).witness
    path = tmp_path / "witness.rot"
    path.write_text(serialize(w.graph))
    proc = subprocess.run(
        [sys.executable, "-m", "dualconn", "--format", "json", "analyze", str(path)],
        capture_output=True, text=True, check=True,
    )
    rep = json.loads(proc.stdout)
    assert rep["genus"] == "1"
    assert rep["simple"] is True
    assert int(rep["kappa"]) >= 3
    assert rep["dual_simple"] is True
    assert rep["dual_kappa"] == "1"


def test_full_harness_exit_code_and_runtime():
    t0 = time.monotonic()
    proc = subprocess.run(
        [sys.executable, "-m", "dualconn", "--format", "json", "verify-paper", "--jobs", "4"],
        capture_output=True, text=True, check=False,
    )
    elapsed = time.monotonic() - t0
    rows = json.loads(proc.stdout)
    assert [r["id"] for r in rows] == [c.id for c in CHECKS]
    assert proc.returncode == 0, [r for r in rows if r["status"] != "pass"]
    assert elapsed < 120


if __name__ == "__main__":
    failed = 0
    for n, check in enumerate(CHECKS, start=1):
        res = run_check(check)
        print(_line(n, check, res))
        failed += res.status != "pass"
    sys.exit(1 if failed else 0)
