"""Brute-force check of the dyad algebra in a truncated Fock space.

The probe operator is stored as a dense ``(n_max+1) x (n_max+1)`` matrix and
integrated under

    dO/ds = i th_k n O - i th_b O n + gt (a O a^dag - n O / 2 - O n / 2)

over normalized transit time ``s in [0, 1]`` with classic RK4, doubling the
step count until the result stops moving. Nothing here reuses the closed-form
channel code, so agreement between the two is a genuine check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .coherent import CoherentDyad, fock_amplitudes
from .errors import NumericalError, StructureError, TruncationError

LEAK_TOLERANCE = 1e-8
STRUCTURE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class FockOperator:
    matrix: np.ndarray

    @property
    def n_max(self) -> int:
        return self.matrix.shape[0] - 1

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


class Extraction(NamedTuple):
    coherence: complex
    residual: float


def required_cutoff(amplitude: complex) -> int:
    r = abs(complex(amplitude))
    return math.ceil(r * r + 8 * r + 20)


def dyad_to_fock(d: CoherentDyad, n_max: int | None = None) -> FockOperator:
    need = max(required_cutoff(d.ket), required_cutoff(d.bra))
    if n_max is None:
        n_max = need
    elif n_max < need:
        raise TruncationError(f"n_max={n_max} too small for this dyad (need {need})")
    ket = fock_amplitudes(d.ket, n_max)
    bra = fock_amplitudes(d.bra, n_max)
    return FockOperator(d.coeff * np.outer(ket, bra.conj()))


def _generator(theta_ket, theta_bra, gamma_t, n_max):
    n = np.arange(n_max + 1, dtype=float)
    sq = np.sqrt(np.outer(n[1:], n[1:]))
    left = 1j * theta_ket * n - 0.5 * gamma_t * n
    right = -1j * theta_bra * n - 0.5 * gamma_t * n

    def rhs(o):
        out = left[:, None] * o + o * right[None, :]
        # (a O a^dag)[m, k] = sqrt((m+1)(k+1)) O[m+1, k+1]
        out[:-1, :-1] += gamma_t * sq * o[1:, 1:]
        return out

    return rhs


def _rk4(o, rhs, steps):
    h = 1.0 / steps
    for _ in range(steps):
        k1 = rhs(o)
        k2 = rhs(o + 0.5 * h * k1)
        k3 = rhs(o + 0.5 * h * k2)
        k4 = rhs(o + h * k3)
        o = o + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return o


def evolve_dyad_oracle(
    op: FockOperator,
    theta_ket: float,
    theta_bra: float,
    chi_over_gamma: float,
    steps: int | None = None,
    *,
    gamma_t: float | None = None,
    tol: float = 1e-10,
    max_doublings: int = 14,
) -> FockOperator:
    """Integrate simultaneous conditional rotation and loss over one transit.

    ``gamma_t`` overrides the loss exponent, which otherwise follows from the
    larger rotation angle and ``chi_over_gamma``; it is the only way to ask for
    pure loss with both angles zero.
    """
    if gamma_t is None:
        angle = max(abs(theta_ket), abs(theta_bra))
        gamma_t = 0.0 if math.isinf(chi_over_gamma) else angle / chi_over_gamma
    n_max = op.n_max
    rhs = _generator(theta_ket, theta_bra, gamma_t, n_max)
    if steps is None:
        # keep h * (largest rate) around 0.5 to start with
        rate = (abs(theta_ket) + abs(theta_bra) + gamma_t) * max(n_max, 1)
        steps = max(8, math.ceil(2 * rate))
    prev = _rk4(op.matrix, rhs, steps)
    for _ in range(max_doublings):
        steps *= 2
        cur = _rk4(op.matrix, rhs, steps)
        change = np.max(np.abs(cur - prev))
        prev = cur
        if change < tol:
            break
    else:
        raise NumericalError(f"RK4 did not converge (last change {change:.3g})")
    leak = max(np.max(np.abs(prev[n_max, :])), np.max(np.abs(prev[:, n_max])))
    if leak > LEAK_TOLERANCE:
        raise TruncationError(f"population {leak:.3g} reached the cutoff n_max={n_max}", leak)
    return FockOperator(prev)


def extract_coherence(op: FockOperator, u: complex, v: complex, tol: float = STRUCTURE_TOLERANCE) -> Extraction:
    """Fit ``op ~ C |u><v|`` and return ``C = <u|op|v>`` with the fit residual."""
    fu = fock_amplitudes(u, op.n_max)
    fv = fock_amplitudes(v, op.n_max)
    c = complex(fu.conj() @ op.matrix @ fv)
    residual = float(np.linalg.norm(op.matrix - c * np.outer(fu, fv.conj())))
    if residual > tol:
        raise StructureError(f"operator is not a coherent dyad (residual {residual:.3g})")
    return Extraction(c, residual)


def oracle_coherence(alpha0: float, theta: float, chi_over_gamma: float) -> Extraction:
    """Coherence parameter of a transit where only the ket rotates, by brute force."""
    op = evolve_dyad_oracle(dyad_to_fock(CoherentDyad.pure(alpha0)), theta, 0.0, chi_over_gamma)
    shrink = 1.0 if math.isinf(chi_over_gamma) else math.exp(-0.5 * theta / chi_over_gamma)
    return extract_coherence(op, alpha0 * shrink * np.exp(1j * theta), alpha0 * shrink)


def oracle_pure_loss(d: CoherentDyad, gamma_t: float) -> Extraction:
    """Coefficient picked up by a dyad under loss alone, by brute force."""
    op = evolve_dyad_oracle(dyad_to_fock(d), 0.0, 0.0, math.inf, gamma_t=gamma_t)
    shrink = math.exp(-0.5 * gamma_t)
    return extract_coherence(op, d.ket * shrink, d.bra * shrink)
