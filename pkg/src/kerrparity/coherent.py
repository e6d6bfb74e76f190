"""Closed-form algebra on coherent-state dyads.

A dyad ``coeff * |ket><bra|`` is the unit every probe-field operation acts on.
Kerr rotations, displacements and pure loss all map a coherent dyad to another
coherent dyad times a scalar, so the probe never has to be expanded in a Fock
basis except at readout.

The quadrature convention is ``X = (a + a^dagger) / 2``, which gives coherent
states a Gaussian ``X`` distribution of variance 1/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import TruncationError

#: default cap on photon number for Fock amplitudes
N_MAX_DEFAULT = 1024

#: standard deviation of a coherent state's X quadrature
QUADRATURE_SIGMA = 0.5


@dataclass(frozen=True)
class CoherentDyad:
    """``coeff * |ket><bra|`` with both coherent states unit-normalized."""

    coeff: complex
    ket: complex
    bra: complex

    @classmethod
    def pure(cls, amplitude: complex) -> CoherentDyad:
        """The projector ``|amplitude><amplitude|``."""
        return cls(1.0 + 0j, complex(amplitude), complex(amplitude))

    def trace(self) -> complex:
        return self.coeff * overlap(self.ket, self.bra)

    def scaled(self, factor: complex) -> CoherentDyad:
        return CoherentDyad(self.coeff * factor, self.ket, self.bra)


def overlap(a: complex, b: complex) -> complex:
    """Return ``<b|a>`` for coherent states ``|a>`` and ``|b>``.

    Evaluated as ``exp(-|a-b|^2/2 + i Im(conj(b) a))``, which is the same
    number as ``exp(-|a|^2/2 - |b|^2/2 + conj(b) a)`` without the cancellation
    between large terms.
    """
    a = complex(a)
    b = complex(b)
    diff = a - b
    return complex(np.exp(-0.5 * (diff.real**2 + diff.imag**2) + 1j * (b.conjugate() * a).imag))


def rotate_dyad(d: CoherentDyad, theta_ket: float, theta_bra: float) -> CoherentDyad:
    """Phase-rotate the ket and bra amplitudes; the coefficient is untouched."""
    return CoherentDyad(
        d.coeff,
        d.ket * complex(np.exp(1j * theta_ket)),
        d.bra * complex(np.exp(1j * theta_bra)),
    )


def displacement_phase(delta: complex, amplitude: complex) -> float:
    """Phase picked up in ``D(delta)|a> = exp(i*phase) |a + delta>``."""
    return (complex(delta) * complex(amplitude).conjugate()).imag


def displace_dyad(d: CoherentDyad, delta: complex) -> CoherentDyad:
    """Apply ``D(delta) . D(delta)^dagger`` to the dyad."""
    delta = complex(delta)
    phase = displacement_phase(delta, d.ket) - displacement_phase(delta, d.bra)
    return CoherentDyad(d.coeff * complex(np.exp(1j * phase)), d.ket + delta, d.bra + delta)


def _check_cutoff(n, n_max):
    if n > n_max:
        raise TruncationError(f"photon number {n} exceeds cutoff n_max={n_max}")


def fock_amplitude(a: complex, n: int, n_max: int = N_MAX_DEFAULT) -> complex:
    """Return ``<n|a>`` via log-Gamma so large ``n`` does not overflow."""
    if n < 0:
        raise ValueError("photon number must be non-negative")
    _check_cutoff(n, n_max)
    a = complex(a)
    if a == 0:
        return 1.0 + 0j if n == 0 else 0j
    r = abs(a)
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * math.lgamma(n + 1)
    return complex(np.exp(log_mag + 1j * n * np.angle(a)))


def fock_amplitudes(a: complex, n_max: int) -> np.ndarray:
    """Vector of ``<n|a>`` for ``n = 0 .. n_max``."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    n = np.arange(n_max + 1)
    a = complex(a)
    out = np.zeros(n_max + 1, dtype=complex)
    if a == 0:
        out[0] = 1.0
        return out
    r = abs(a)
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    return np.exp(log_mag + 1j * n * np.angle(a))


def poisson_tail(a: complex, n_max: int) -> float:
    """Probability mass of ``|a>`` above photon number ``n_max``."""
    from scipy.stats import poisson

    return float(poisson.sf(n_max, abs(complex(a)) ** 2))


def homodyne_wavefunction(x, a: complex):
    """``<X|a>`` in the ``X = (a + a^dagger)/2`` convention."""
    a = complex(a)
    x = np.asarray(x, dtype=float)
    return (2.0 / np.pi) ** 0.25 * np.exp(
        -((x - a.real) ** 2) + 1j * (2.0 * a.imag * x - a.real * a.imag)
    )


def homodyne_kernel(x, a: complex, b: complex):
    """Return ``<X|a><b|X>``; integrates over ``X`` to :func:`overlap` ``(a, b)``.

    The two Gaussian envelopes are combined in one exponent so that kernels
    between well-separated states underflow to zero cleanly.
    """
    a = complex(a)
    b = complex(b)
    x = np.asarray(x, dtype=float)
    envelope = -((x - a.real) ** 2) - (x - b.real) ** 2
    phase = 2.0 * (a.imag - b.imag) * x - a.real * a.imag + b.real * b.imag
    return np.sqrt(2.0 / np.pi) * np.exp(envelope + 1j * phase)
