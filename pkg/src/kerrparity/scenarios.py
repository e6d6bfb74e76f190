"""Fiber conversions and the parameter scans behind the result tables and plots.

All scans go through the closed-form step sum at the default resolution
``delta_theta = pi / 1e6``. Rows are plain dicts with the keys the CLI emits.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import DELTA_THETA_DEFAULT, ChannelParams, amplitude_param, channel_result
from .errors import DomainError
from .gate import Detection, theta_for_distance

log = logging.getLogger(__name__)

#: 10 log10(e): dB per neper of power
DB_PER_NEPER = 10.0 / math.log(10.0)

TABLE1_RATIOS = (0.0125, 0.0303)
TABLE1_ALPHAS = {
    Detection.HOMODYNE: (100.0, 300.0, 3000.0),
    Detection.PNR: (300.0, 3000.0, 3e4),
}
DEFAULT_DISTANCE = {Detection.HOMODYNE: 4.0, Detection.PNR: math.pi}
# Kerr angles quoted for the gamma scan, keyed by probe amplitude
FIG4_THETA = {1e3: 0.13, 1e4: 0.04}


@dataclass(frozen=True)
class FiberSpec:
    """A fiber described by the length giving a Kerr angle of pi and by chi/gamma."""

    chi_over_gamma: float
    l_pi: float = 3000.0

    def __post_init__(self):
        if not self.l_pi > 0:
            raise DomainError("l_pi must be positive")
        if not self.chi_over_gamma > 0:
            raise DomainError("chi_over_gamma must be positive")


@dataclass(frozen=True)
class GeometricGrid:
    start: float
    stop: float
    num: int

    def __post_init__(self):
        if self.num < 2 or not 0 < self.start < self.stop:
            raise DomainError("grid needs 0 < start < stop and at least 2 points")

    def values(self) -> np.ndarray:
        return np.geomspace(self.start, self.stop, self.num)


@dataclass(frozen=True)
class AlphaSweep:
    """Scan of the probe amplitude at fixed branch separation."""

    detection: Detection
    chi_over_gamma: float
    grid: GeometricGrid
    fixed_distance: float | None = None
    l_pi: float = 3000.0
    delta_theta: float = DELTA_THETA_DEFAULT

    @property
    def distance(self) -> float:
        if self.fixed_distance is not None:
            return self.fixed_distance
        return DEFAULT_DISTANCE[Detection(self.detection)]


@dataclass(frozen=True)
class GammaSweep:
    """Scan of the loss rate at fixed Kerr strength, amplitude and angle."""

    alpha: float
    grid: GeometricGrid
    chi: float = 0.01
    theta: float | None = None
    delta_theta: float = DELTA_THETA_DEFAULT

    @property
    def angle(self) -> float:
        if self.theta is not None:
            return self.theta
        if self.alpha not in FIG4_THETA:
            raise DomainError(f"no default angle for alpha={self.alpha}; pass theta")
        return FIG4_THETA[self.alpha]


# -- fiber conversions ------------------------------------------------------


def db_per_km(spec: FiberSpec) -> float:
    """Power loss per km implied by ``chi/gamma`` and ``l_pi``."""
    return DB_PER_NEPER * (math.pi / spec.l_pi) / spec.chi_over_gamma


def chi_over_gamma_for_db(db_km: float, l_pi: float = 3000.0) -> float:
    if not db_km > 0:
        raise DomainError("loss must be positive")
    return DB_PER_NEPER * (math.pi / l_pi) / db_km


def length_for_theta(theta: float, spec: FiberSpec) -> float:
    if theta < 0:
        raise DomainError("theta must be non-negative")
    return spec.l_pi * theta / math.pi


def amplitude_over_length(length_km: float, spec: FiberSpec) -> float:
    """Amplitude parameter after ``length_km`` of fiber."""
    theta = math.pi * length_km / spec.l_pi
    return amplitude_param(theta / spec.chi_over_gamma)


# -- scans ------------------------------------------------------------------


def _pmap(fn, items, workers):
    if workers is None or workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _channel_row(args):
    alpha, theta, ratio, delta_theta = args
    res = channel_result(ChannelParams(alpha, theta, ratio, min(delta_theta, theta)))
    return res.amp_param, res.abs_coherence, res.log_abs_coherence


def table1(delta_theta: float = DELTA_THETA_DEFAULT, l_pi: float = 3000.0, workers: int | None = None) -> list[dict]:
    """Twelve rows: both detectors x both fibers x three amplitudes."""
    jobs, meta = [], []
    for detection in (Detection.HOMODYNE, Detection.PNR):
        d = DEFAULT_DISTANCE[detection]
        for ratio in TABLE1_RATIOS:
            for alpha in TABLE1_ALPHAS[detection]:
                theta = theta_for_distance(alpha, d, detection)
                jobs.append((alpha, theta, ratio, delta_theta))
                meta.append((detection, ratio, theta, alpha))
    rows = []
    for (detection, ratio, theta, alpha), (a, c, log_c) in zip(meta, _pmap(_channel_row, jobs, workers)):
        rows.append(
            {
                "detection": detection.value,
                "chi_over_gamma": ratio,
                "theta": theta,
                "alpha": alpha,
                "length_km": length_for_theta(theta, FiberSpec(ratio, l_pi)),
                "A": a,
                "absC": c,
                "log_absC": log_c,
                "below_1e-3": c < 1e-3,
            }
        )
    return rows


def fig3_sweep(spec: AlphaSweep, workers: int | None = None) -> tuple[list[dict], list[dict]]:
    """``(A, |C|)`` against ``alpha`` at fixed separation.

    Returns ``(rows, skipped)``; amplitudes too small to reach the separation
    are skipped and listed with the reason.
    """
    detection = Detection(spec.detection)
    fiber = FiberSpec(spec.chi_over_gamma, spec.l_pi)
    jobs, alphas, skipped = [], [], []
    for alpha in spec.grid.values():
        alpha = float(alpha)
        try:
            theta = theta_for_distance(alpha, spec.distance, detection)
        except DomainError as exc:
            log.warning("skipping alpha=%g: %s", alpha, exc)
            skipped.append({"alpha": alpha, "reason": str(exc)})
            continue
        jobs.append((alpha, theta, spec.chi_over_gamma, spec.delta_theta))
        alphas.append((alpha, theta))
    rows = [
        {
            "alpha": alpha,
            "theta": theta,
            "length_km": length_for_theta(theta, fiber),
            "A": a,
            "absC": c,
            "log_absC": log_c,
        }
        for (alpha, theta), (a, c, log_c) in zip(alphas, _pmap(_channel_row, jobs, workers))
    ]
    return rows, skipped


def fig4_sweep(spec: GammaSweep, workers: int | None = None) -> list[dict]:
    """``|C|`` against the loss rate ``gamma`` at fixed ``chi``."""
    theta = spec.angle
    gammas = [float(g) for g in spec.grid.values()]
    ratios = [math.inf if g == 0 else spec.chi / g for g in gammas]
    jobs = [(spec.alpha, theta, r, spec.delta_theta) for r in ratios]
    return [
        {"gamma": g, "alpha": spec.alpha, "theta": theta, "A": a, "absC": c, "log_absC": log_c}
        for g, (a, c, log_c) in zip(gammas, _pmap(_channel_row, jobs, workers))
    ]
