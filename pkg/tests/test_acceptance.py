"""Acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (echoed in the terminal summary) before
asserting, so a failing criterion still reports what it measured.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from kerrparity.channel import (
    ChannelParams,
    coherence_closed_form,
    coherence_exponent,
    continuum_exponent,
    pure_loss_dyad,
    stepper_coherence,
)
from kerrparity.coherent import CoherentDyad
from kerrparity.gate import (
    Detection,
    GateConfig,
    concurrence,
    dephased_state,
    error_probability,
    fidelity_to_bell,
    gate_report,
    product_state,
    run_readout,
    trace_distance,
)
from kerrparity.oracle import oracle_coherence, oracle_pure_loss
from kerrparity.scenarios import (
    AlphaSweep,
    FiberSpec,
    GammaSweep,
    GeometricGrid,
    amplitude_over_length,
    db_per_km,
    fig3_sweep,
    fig4_sweep,
    table1,
)

HD, PNR = Detection.HOMODYNE, Detection.PNR
NEAR_ZERO = None  # printed as "~ 0"

# (chi/gamma, alpha) -> (A, |C|) as printed; "> 0.99" is kept as a lower bound
PRINTED_HD = {
    (0.0125, 100.0): (1e-5, 0.210),
    (0.0125, 300.0): (0.0014, NEAR_ZERO),
    (0.0125, 3000.0): (0.127, NEAR_ZERO),
    (0.0303, 100.0): (0.009, 1e-4),
    (0.0303, 300.0): (0.067, NEAR_ZERO),
    (0.0303, 3000.0): (0.427, NEAR_ZERO),
}
PRINTED_PNR = {
    (0.0125, 300.0): (0.658, 0.474),
    (0.0125, 3000.0): (0.959, 0.878),
    (0.0125, 3e4): (0.996, 0.985),
    (0.0303, 300.0): (0.841, 0.644),
    (0.0303, 3000.0): (0.983, 0.946),
    (0.0303, 3e4): (0.998, "> 0.99"),
}


def record(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def timed_table():
    start = time.perf_counter()
    rows = table1()
    return rows, time.perf_counter() - start


def _compare_rows(rows, detection, printed):
    bad = []
    for r in rows:
        if r["detection"] != detection.value:
            continue
        a_ref, c_ref = printed[(r["chi_over_gamma"], r["alpha"])]
        a_ok = abs(r["A"] - a_ref) <= 0.005 or abs(r["A"] - a_ref) <= 0.05 * a_ref
        if c_ref is NEAR_ZERO:
            c_ok = r["absC"] < 1e-3
        elif c_ref == "> 0.99":
            c_ok = 0.99 < r["absC"] <= 1.0
        else:
            c_ok = abs(r["absC"] - c_ref) <= 0.01
        if not (a_ok and c_ok):
            bad.append(f"(r={r['chi_over_gamma']}, alpha={r['alpha']:g}: A={r['A']:.4g}, |C|={r['absC']:.4g})")
    return bad


def test_criterion_01_table_homodyne(timed_table):
    rows, elapsed = timed_table
    bad = _compare_rows(rows, HD, PRINTED_HD)
    ok = not bad and elapsed < 60
    record("1 table, homodyne rows", ok, f"6 rows, mismatches {bad or 'none'}, runtime {elapsed:.2f}s")


def test_criterion_02_table_pnr(timed_table):
    rows, _ = timed_table
    bad = _compare_rows(rows, PNR, PRINTED_PNR)
    r = next(r for r in rows if r["detection"] == "pnr" and r["chi_over_gamma"] == 0.0125 and r["alpha"] == 300)
    record("2 table, photon-counting rows", not bad, f"6 rows, mismatches {bad or 'none'}, (0.0125, 300) -> A={r['A']:.4f}, |C|={r['absC']:.4f}")


def test_criterion_03_oracle_triangle():
    # the interleaved model carries a first-order step error ~ alpha^2 dtheta / 2,
    # so the triangle is run at a step fine enough to sit below 1e-6
    delta = 1e-7
    worst, worst_res, where = 0.0, 0.0, None
    for alpha in (0.5, 1.0, 2.0, 3.0):
        for theta in (0.1, 0.5, 1.0):
            for ratio in (0.1, 1.0, 10.0):
                p = ChannelParams(alpha, theta, ratio, delta)
                step = stepper_coherence(p)
                closed = coherence_closed_form(p)
                fock = oracle_coherence(alpha, theta, ratio)
                gap = max(abs(step - closed), abs(step - fock.coherence), abs(closed - fock.coherence))
                if gap > worst:
                    worst, where = gap, (alpha, theta, ratio)
                worst_res = max(worst_res, fock.residual)
    ok = worst < 1e-6 and worst_res < 1e-6
    record("3 oracle triangle", ok, f"36 points at dtheta={delta:g}, worst gap {worst:.2e} at {where}, worst residual {worst_res:.2e}")


def test_criterion_04_loss_only_oracle():
    worst = 0.0
    for a, b in ((2.0, -2.0), (1.0, np.exp(1j * math.pi / 3)), (3.0, 0.0)):
        for gt in (0.1, 1.0):
            d = CoherentDyad(1 + 0j, complex(a), complex(b))
            worst = max(worst, abs(pure_loss_dyad(d, gt).coeff - oracle_pure_loss(d, gt).coherence))
    record("4 loss-only closed form vs Fock", worst < 1e-6, f"6 cases, worst gap {worst:.2e}")


def test_criterion_05_continuum_consistency(timed_table):
    # relative error of |C| taken in log space so rows that underflow still compare
    rows, _ = timed_table
    fails, worst = [], 0.0
    for r in rows:
        p = ChannelParams(r["alpha"], r["theta"], r["chi_over_gamma"])
        ln_closed = coherence_exponent(p).real
        ln_cont = continuum_exponent(r["alpha"], r["theta"], r["chi_over_gamma"]).real
        rel = abs(math.expm1(ln_closed - ln_cont))
        worst = max(worst, rel)
        if not rel < 1e-3:
            fails.append(f"({r['detection']}, r={r['chi_over_gamma']}, alpha={r['alpha']:g}: {rel:.2e})")
    detail = f"12 rows at dtheta=pi/1e6, worst relative gap {worst:.2e}, over 1e-3: {fails or 'none'}"
    record("5 closed form vs continuum", not fails, detail)


def test_criterion_06_monotonicity():
    hd, _ = fig3_sweep(AlphaSweep(HD, 0.0125, GeometricGrid(100, 3000, 40)))
    pnr, _ = fig3_sweep(AlphaSweep(PNR, 0.0125, GeometricGrid(300, 3e4, 40)))
    # |C| underflows to 0 for most homodyne points, so compare log|C|
    hd_ok = all(np.diff([r["log_absC"] for r in hd]) <= 0)
    pnr_a = all(np.diff([r["A"] for r in pnr]) >= 0)
    pnr_c = all(np.diff([r["log_absC"] for r in pnr]) >= 0)
    ok = len(hd) == 40 and len(pnr) == 40 and hd_ok and pnr_a and pnr_c
    record("6 scaling with alpha", ok, f"homodyne |C| non-increasing {hd_ok}; photon-counting A {pnr_a}, |C| {pnr_c}")


def test_criterion_07_error_probabilities():
    p_pnr = error_probability(PNR, math.pi)
    p_hd = error_probability(HD, 4.0)
    ok = abs(p_pnr - math.exp(-math.pi**2)) <= 1e-7 and abs(p_pnr - 5.17e-5) <= 1e-7 and 1e-5 <= p_hd <= 3e-4
    record("7 error probabilities", ok, f"photon counting {p_pnr:.4e}, homodyne {p_hd:.4e}")


def test_criterion_08_lossless_gate():
    details, ok = [], True
    for det, alpha, d in ((HD, 100.0, 4.0), (HD, 3000.0, 4.0), (PNR, 300.0, math.pi)):
        cfg = GateConfig(alpha, det, target_distance=d)
        r = run_readout(cfg)
        floor = 1 - 2 * error_probability(det, d)
        f_s, f_f = fidelity_to_bell(r.success.rho), fidelity_to_bell(r.failure.rho)
        total = r.success.probability + r.failure.probability
        case_ok = f_s >= floor and f_f >= floor and abs(total - 1) <= 1e-6
        ok &= case_ok
        details.append(f"{det.value} alpha={alpha:g}: F={f_s:.6f}/{f_f:.6f} (floor {floor:.6f}), sum={total:.9f}")
    record("8 lossless gate", ok, "; ".join(details))


def test_criterion_09_failure_limits():
    # long lossy path with the branches still well separated
    cfg = GateConfig(3000.0, HD, theta=0.1, chi_over_gamma=1.0)
    rep = gate_report(cfg)
    rho = run_readout(cfg).success.rho
    conc, dist = concurrence(rho), trace_distance(rho, dephased_state())
    dephased_ok = rep.abs_coherence < 1e-3 and conc < 1e-2 and dist < 1e-2

    # vanishing angle at fixed loss (gamma t = 20): the probe decays to vacuum
    # and the qubits come out as they went in
    theta = 1e-6
    worst = 0.0
    for det in (HD, PNR):
        cfg0 = GateConfig(100.0, det, theta=theta, chi_over_gamma=theta / 20, delta_theta=theta / 100)
        r = run_readout(cfg0)
        out = r.success.probability * r.success.rho + r.failure.probability * r.failure.rho
        worst = max(worst, trace_distance(out, product_state()))
    ok = dephased_ok and worst < 1e-3
    record(
        "9 failure-mode limits",
        ok,
        f"|C|={rep.abs_coherence:.1e}: concurrence {conc:.1e}, distance to dephased {dist:.1e}; "
        f"theta->0 distance to product {worst:.1e}",
    )


def test_criterion_10_fiber_conversions():
    db1, db2 = db_per_km(FiberSpec(0.0125)), db_per_km(FiberSpec(0.0303))
    a15 = amplitude_over_length(15.0, FiberSpec(0.0125))
    ok = abs(db1 - 0.364) <= 1e-3 and abs(db2 - 0.150) <= 1e-3 and abs(a15 - 0.533) <= 2e-3
    record("10 fiber conversions", ok, f"{db1:.4f} dB/km, {db2:.4f} dB/km, A(15 km)={a15:.4f}")


def test_criterion_11_eit_regime():
    point = fig4_sweep(GammaSweep(300.0, GeometricGrid(0.01, 0.02, 2), chi=0.01, theta=0.0105))[0]
    point_ok = 0.97 <= point["absC"] <= 0.99 and 0.99 <= point["A"] <= 1.0
    grid = GeometricGrid(1e-6, 1e-2, 50)
    mono = {a: all(np.diff([r["log_absC"] for r in fig4_sweep(GammaSweep(a, grid))]) < 0) for a in (1e3, 1e4)}
    ok = point_ok and all(mono.values())
    record("11 EIT point and gamma scans", ok, f"|C|={point['absC']:.4f}, A={point['A']:.5f}; strictly decreasing {mono}")
