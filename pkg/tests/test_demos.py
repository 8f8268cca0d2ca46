import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parent.parent / "demos"


@pytest.mark.parametrize(
    "script,extra",
    [
        ("markov_tree.py", []),
        ("mutation_walk.py", ["--target", "1,5,13"]),
        ("capacity_certificates.py", ["1,1,2"]),
        ("moment_map_check.py", ["--max-c", "2", "--samples", "100"]),
    ],
)
def test_demo_runs(script, extra, tmp_path):
    args = [sys.executable, str(DEMOS / script), *extra]
    if script != "markov_tree.py" and script != "moment_map_check.py":
        args += ["--out", str(tmp_path)]
    done = subprocess.run(args, capture_output=True, text=True, timeout=300)
    assert done.returncode == 0, done.stderr
    assert "FAILED" not in done.stdout and "BAD" not in done.stdout
