"""Benchmark harness: record schema, stability, fits, CSV round-trips."""

import math

import numpy as np
import pytest

import polysample as ps
from polysample import bench as pb
from polysample import io as pio
from polysample.errors import TooLargeError


@pytest.fixture(scope="module")
def simplex_run():
    return pb.run_bench("simplex", 2, 4, n_samples=500, seed=0)


def test_record_fields(simplex_run):
    records, phases = simplex_run
    assert [r.n for r in records] == [2, 3, 4]
    for r in records:
        assert r.v == r.n + 1
        assert r.K == 1
        assert r.t_seconds > 0
        assert r.n_samples == 500
        assert r.sampler_id == "dbsop"
        assert r.seed == 0


def test_phase_rows(simplex_run):
    _, phases = simplex_run
    assert len(phases) == 3
    for row in phases:
        assert row["family"] == "simplex"
        total = row["enum_s"] + row["triangulate_s"] + row["sample_s"]
        assert row["total_s"] == pytest.approx(total, rel=1e-9)
        assert 0.0 <= row["triangulate_share"] <= 1.0


def test_seed_never_changes_structure():
    a, _ = pb.run_bench("crosspolytope", 2, 3, n_samples=200, seed=1)
    b, _ = pb.run_bench("crosspolytope", 2, 3, n_samples=200, seed=99)
    assert [(r.v, r.K) for r in a] == [(r.v, r.K) for r in b]


def test_dimension_guard():
    with pytest.raises(TooLargeError):
        pb.run_bench("hypercube", 2, 9, n_samples=10, seed=0)
    with pytest.raises(TooLargeError):
        pb.run_bench("hypercube", 2, 12, n_samples=10, seed=0, dimension_guard=9)


def test_bad_range():
    with pytest.raises(ValueError):
        pb.run_bench("simplex", 4, 2, n_samples=10, seed=0)
    with pytest.raises(ValueError):
        pb.run_bench("nonagon", 2, 3, n_samples=10, seed=0)


def test_records_csv_roundtrip(simplex_run, tmp_path):
    records, _ = simplex_run
    path = tmp_path / "r.csv"
    pb.save_bench_records(records, path)
    back = pb.load_bench_records(path)
    assert [(r.n, r.v, r.K) for r in back] == [(r.n, r.v, r.K) for r in records]
    assert back[0].t_seconds == records[0].t_seconds


def test_compare_rows_csv_roundtrip(tmp_path):
    P = ps.standard_simplex(2)
    rows = pb.compare_samplers(P, 300, seed=2)
    path = tmp_path / "c.csv"
    pb.save_compare_rows(rows, path)
    back = pb.load_compare_rows(path)
    assert [r["sampler"] for r in back] == ["dbsop", "hitandrun", "rejection"]
    assert back[0]["acceptance"] is None
    assert back[2]["acceptance"] == pytest.approx(rows[2]["acceptance"])


def test_fit_log_linear_recovers_growth():
    # synthetic records with t = 2 * 3^n have log10 slope log10(3)
    records = [
        pb.BenchRecord(n=n, t_seconds=2.0 * 3.0**n, v=0, K=0,
                       n_samples=1, sampler_id="dbsop", seed=0)
        for n in range(2, 7)
    ]
    slope, intercept = pb.fit_log_linear(records)
    assert slope == pytest.approx(math.log10(3.0), rel=1e-9)
    assert intercept == pytest.approx(math.log10(2.0), rel=1e-6)


def test_extrapolate_records(tmp_path):
    records = [
        pb.BenchRecord(n=n, t_seconds=1.0 * 2.0**n, v=0, K=0,
                       n_samples=1, sampler_id="dbsop", seed=0)
        for n in range(2, 6)
    ]
    path = tmp_path / "x.csv"
    rows = pb.extrapolate_records(records, [8, 10], out=path)
    assert [r["n"] for r in rows] == [8, 10]
    assert rows[0]["t_seconds_predicted"] == pytest.approx(2.0**8, rel=1e-6)
    assert rows[0]["basis"] == "log-linear-extrapolation"
    header, _ = pio.load_csv(path)
    assert header == pb.EXTRAPOLATION_HEADER


def test_phases_csv_roundtrip(simplex_run, tmp_path):
    _, phases = simplex_run
    path = tmp_path / "p.csv"
    pb.save_phase_rows(phases, path)
    header, rows = pio.load_csv(path)
    assert header == pb.PHASE_HEADER
    assert len(rows) == 3
