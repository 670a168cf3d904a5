"""Golden-file regression: a short two-bump run must reproduce its snapshot
byte for byte. Catches accidental numerical drift anywhere in the Eulerian
pipeline (assembly, solver, inner loop, diagnostics, serialization)."""
from dataclasses import replace
from pathlib import Path

import pytest

from crossdiff1d import exp1, run_config, write_snapshot_csv

DATA = Path(__file__).parent / "data"


def test_exp1_short_run_matches_golden_snapshot(tmp_path):
    cfg = replace(exp1(), t_final=1e-3, snapshot_times=(1e-3,))
    result = run_config(cfg)
    assert result.max_inner_iterations == 3
    fresh = tmp_path / "snap.csv"
    write_snapshot_csv(result.snapshots[-1], fresh)
    assert fresh.read_text() == (DATA / "exp1_t0.001.csv").read_text()
    assert (
        fresh.with_suffix(".meta").read_text()
        == (DATA / "exp1_t0.001.meta").read_text()
    )
