import math
import time

import numpy as np
import pytest

from kerrparity.errors import DomainError
from kerrparity.gate import Detection
from kerrparity.scenarios import (
    AlphaSweep,
    FiberSpec,
    GammaSweep,
    GeometricGrid,
    amplitude_over_length,
    chi_over_gamma_for_db,
    db_per_km,
    fig3_sweep,
    fig4_sweep,
    length_for_theta,
    table1,
)


@pytest.fixture(scope="module")
def rows():
    return table1()


def test_db_per_km():
    assert db_per_km(FiberSpec(0.0125)) == pytest.approx(0.3638, abs=1e-4)
    assert db_per_km(FiberSpec(0.0303)) == pytest.approx(0.1501, abs=1e-4)
    assert chi_over_gamma_for_db(db_per_km(FiberSpec(0.02, 1500)), 1500) == pytest.approx(0.02, rel=1e-14)


def test_fiber_validation():
    with pytest.raises(DomainError):
        FiberSpec(0.01, 0)
    with pytest.raises(DomainError):
        FiberSpec(-1)
    with pytest.raises(DomainError):
        length_for_theta(-0.1, FiberSpec(0.01))


def test_lengths():
    spec = FiberSpec(0.0125)
    assert length_for_theta(0.284, spec) == pytest.approx(271, abs=0.5)
    assert length_for_theta(math.pi, spec) == pytest.approx(3000)
    assert length_for_theta(0.0105, spec) == pytest.approx(10, abs=0.1)


def test_amplitude_over_length():
    assert amplitude_over_length(15, FiberSpec(0.0125)) == pytest.approx(0.533, abs=1e-3)
    # dB loss over L km is twice the amplitude attenuation in dB
    spec = FiberSpec(0.0303)
    assert -20 * math.log10(amplitude_over_length(50, spec)) == pytest.approx(50 * db_per_km(spec), rel=1e-12)


def test_grid_validation():
    with pytest.raises(DomainError):
        GeometricGrid(10, 1, 5)
    with pytest.raises(DomainError):
        GeometricGrid(1, 10, 1)
    assert np.all(np.diff(GeometricGrid(1, 10, 5).values()) > 0)


def test_table1_shape(rows):
    assert len(rows) == 12
    assert {r["detection"] for r in rows} == {"homodyne", "pnr"}
    assert all(r["below_1e-3"] == (r["absC"] < 1e-3) for r in rows)


def _row(rows, det, ratio, alpha):
    (r,) = [r for r in rows if r["detection"] == det and r["chi_over_gamma"] == ratio and r["alpha"] == alpha]
    return r


def test_table1_spot_values(rows):
    r = _row(rows, "pnr", 0.0125, 300.0)
    assert r["theta"] == pytest.approx(0.0105, abs=1e-4)
    assert r["length_km"] == pytest.approx(10, abs=0.01)
    assert r["A"] == pytest.approx(0.658, abs=1e-3)
    assert r["absC"] == pytest.approx(0.474, abs=1e-3)
    r = _row(rows, "pnr", 0.0303, 3000.0)
    assert (r["A"], r["absC"]) == (pytest.approx(0.983, abs=1e-3), pytest.approx(0.946, abs=1e-3))
    r = _row(rows, "homodyne", 0.0125, 300.0)
    assert r["A"] == pytest.approx(0.0014, abs=1e-4)
    assert r["absC"] < 1e-3


def test_homodyne_alpha300_length(rows):
    # scaling from the 271 km and 50 km rows gives ~156 km at theta = 0.163
    r = _row(rows, "homodyne", 0.0125, 300.0)
    assert r["length_km"] == pytest.approx(3000 * 0.163 / math.pi, abs=1)


def test_table1_parallel_matches_serial(rows):
    assert table1(workers=2) == rows


def test_table1_runtime():
    start = time.perf_counter()
    table1()
    assert time.perf_counter() - start < 60


def test_fig3_skips_unreachable():
    spec = AlphaSweep(Detection.PNR, 0.0125, GeometricGrid(0.5, 10, 6))
    out, skipped = fig3_sweep(spec)
    assert len(out) + len(skipped) == 6
    assert all(s["alpha"] < math.pi / 2 for s in skipped)
    assert all(r["alpha"] >= math.pi / 2 for r in out)


def test_fig3_endpoint():
    spec = AlphaSweep(Detection.PNR, 0.0125, GeometricGrid(300, 3e4, 5))
    out, _ = fig3_sweep(spec)
    assert out[-1]["A"] == pytest.approx(0.996, abs=1e-3)
    assert out[-1]["absC"] == pytest.approx(0.985, abs=1e-3)


def test_fig4_defaults_and_limits():
    spec = GammaSweep(1e3, GeometricGrid(1e-12, 1e-2, 8))
    out = fig4_sweep(spec)
    assert out[0]["theta"] == 0.13
    assert out[0]["absC"] == pytest.approx(1, abs=1e-6)
    assert all(r["A"] > 0.5 for r in out)
    assert GammaSweep(1e4, spec.grid).angle == 0.04
    with pytest.raises(DomainError):
        GammaSweep(500.0, spec.grid).angle


def test_eit_point():
    spec = GammaSweep(300.0, GeometricGrid(0.01, 0.011, 2), theta=0.0105)
    r = fig4_sweep(spec)[0]
    assert r["absC"] == pytest.approx(0.983, abs=1e-3)
    assert r["A"] == pytest.approx(math.exp(-0.0105 / 2), rel=1e-12)
