"""End-to-end two-qubit parity gate with a lossy probe.

Two qubits in ``(|H>+|V>)/sqrt2`` each steer a probe coherent state through a
cross-Kerr medium (``+theta`` for qubit a, ``-theta`` for qubit b, only on the
``H`` component). Measuring the probe either by homodyne detection or by
displacement plus photon counting projects the qubits onto the even
(``HH, VV``) or odd (``HV, VH``) parity subspace; the odd outcome is mapped
back to ``(|HH>+|VV>)/sqrt2`` by a bit flip and an outcome-dependent phase on
qubit b.

The joint state is kept as 16 terms ``|k><l| (x) coeff |u><v|`` in the qubit
basis ``(HH, HV, VH, VV)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import simpson
from scipy.special import erfc

from .channel import DELTA_THETA_DEFAULT, ChannelParams, amplitude_param, traverse_medium
from .coherent import QUADRATURE_SIGMA, CoherentDyad, displace_dyad, fock_amplitudes, homodyne_kernel
from .errors import DomainError, GridError, TruncationError

LABELS = ("HH", "HV", "VH", "VV")
INDEX = {label: i for i, label in enumerate(LABELS)}
BELL = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)

# flips qubit b: HH<->HV, VH<->VV
_FLIP_B = np.array([1, 0, 3, 2])


class Detection(str, Enum):
    HOMODYNE = "homodyne"
    PNR = "pnr"


class LossMode(str, Enum):
    BOTH = "both"
    FIRST = "first"


@dataclass(frozen=True)
class HybridTerm:
    ket: str
    bra: str
    probe: CoherentDyad


@dataclass(frozen=True)
class HybridState:
    terms: tuple[HybridTerm, ...]

    @property
    def trace(self) -> complex:
        return sum((t.probe.trace() for t in self.terms if t.ket == t.bra), 0j)

    def term(self, ket: str, bra: str) -> CoherentDyad:
        for t in self.terms:
            if t.ket == ket and t.bra == bra:
                return t.probe
        raise KeyError((ket, bra))


@dataclass(frozen=True)
class GateConfig:
    """One gate run. Give either ``target_distance`` or ``theta``, not both."""

    alpha0: float
    detection: Detection = Detection.PNR
    target_distance: float | None = None
    theta: float | None = None
    chi_over_gamma: float = math.inf
    loss_mode: LossMode = LossMode.BOTH
    delta_theta: float = DELTA_THETA_DEFAULT
    n_grid: int = 4001
    n_max: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "detection", Detection(self.detection))
        object.__setattr__(self, "loss_mode", LossMode(self.loss_mode))
        if self.alpha0 < 0:
            raise DomainError("alpha0 must be non-negative")
        if (self.target_distance is None) == (self.theta is None):
            raise DomainError("give exactly one of target_distance and theta")
        if self.target_distance is not None:
            theta_for_distance(self.alpha0, self.target_distance, self.detection)

    @property
    def angle(self) -> float:
        if self.theta is not None:
            return self.theta
        return theta_for_distance(self.alpha0, self.target_distance, self.detection)

    @property
    def distance(self) -> float:
        if self.target_distance is not None:
            return self.target_distance
        return distance_for_theta(self.alpha0, self.theta, self.detection)

    def channel(self) -> ChannelParams:
        return ChannelParams(self.alpha0, self.angle, self.chi_over_gamma, self.delta_theta)


@dataclass
class Branch:
    probability: float
    rho: np.ndarray


@dataclass
class Readout:
    success: Branch
    failure: Branch
    # PNR: probability above the photon-number cutoff; homodyne: quadrature error estimate
    discarded: float = 0.0


@dataclass
class GateReport:
    theta: float
    amp_param: float
    abs_coherence: float
    p_success_branch: float
    fidelity: float
    concurrence: float
    failure_fidelity: float
    failure_concurrence: float
    p_err: float
    p_err_effective: float
    probe_mean_photons: float
    required_photon_resolution: float | None = None
    extras: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = asdict(self)
        out.update(out.pop("extras"))
        return out


# -- geometry ---------------------------------------------------------------


def theta_for_distance(alpha0: float, d: float, detection: Detection) -> float:
    """Kerr angle that separates the probe branches by ``d`` in phase space."""
    detection = Detection(detection)
    if d <= 0:
        raise DomainError("distance must be positive")
    if alpha0 <= 0 or d > 2 * alpha0:
        raise DomainError(f"distance {d} not reachable with alpha={alpha0} (need d <= 2 alpha)")
    if detection is Detection.HOMODYNE:
        return math.acos(1.0 - d / alpha0)
    return 2.0 * math.asin(d / (2.0 * alpha0))


def distance_for_theta(alpha0: float, theta: float, detection: Detection) -> float:
    if Detection(detection) is Detection.HOMODYNE:
        return alpha0 * (1.0 - math.cos(theta))
    return 2.0 * alpha0 * math.sin(0.5 * theta)


def error_probability(detection: Detection, d: float) -> float:
    """Probability of misreading the parity for branch separation ``d``.

    Homodyne: two Gaussians of standard deviation 1/2, ``d`` apart, split at
    the midpoint. Photon counting: a displaced coherent state of size ``d``
    yields no click.
    """
    if d <= 0:
        raise DomainError("distance must be positive")
    if Detection(detection) is Detection.HOMODYNE:
        return 0.5 * float(erfc(d / (2.0 * QUADRATURE_SIGMA * math.sqrt(2.0))))
    return math.exp(-d * d)


# -- state evolution --------------------------------------------------------


def build_initial(alpha0: float) -> HybridState:
    if alpha0 < 0:
        raise DomainError("alpha0 must be non-negative")
    probe = CoherentDyad(0.25 + 0j, complex(alpha0), complex(alpha0))
    return HybridState(tuple(HybridTerm(k, l, probe) for k in LABELS for l in LABELS))


def _medium(state, slot, angle, params):
    cache = {}
    out = []
    for t in state.terms:
        th_k = angle if t.ket[slot] == "H" else 0.0
        th_b = angle if t.bra[slot] == "H" else 0.0
        key = (t.probe.ket, t.probe.bra, th_k, th_b)
        if key not in cache:
            cache[key] = traverse_medium(CoherentDyad(1.0 + 0j, t.probe.ket, t.probe.bra), th_k, th_b, params)
        moved = cache[key]
        out.append(HybridTerm(t.ket, t.bra, moved.scaled(t.probe.coeff)))
    return HybridState(tuple(out))


def evolve_gate(cfg: GateConfig) -> HybridState:
    """Send the probe through both media and return the 16-term joint state."""
    p = cfg.channel()
    state = _medium(build_initial(cfg.alpha0), 0, p.theta, p)
    if cfg.loss_mode is LossMode.FIRST:
        p = ChannelParams(p.alpha0, p.theta, math.inf, p.delta_theta)
    return _medium(state, 1, -p.theta, p)


def reference_amplitude(state: HybridState) -> complex:
    """Where the even-parity probe ends up; sets the threshold and displacement."""
    return state.term("HH", "HH").ket


# -- density-matrix helpers -------------------------------------------------


def check_density(rho, atol=1e-9) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError("expected a 4x4 density matrix")
    if not np.all(np.isfinite(rho)):
        raise DomainError("density matrix has non-finite entries")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise DomainError("density matrix trace is not 1")
    if np.min(np.linalg.eigvalsh(rho)) < -atol:
        raise DomainError("density matrix is not positive semidefinite")
    return rho


def fidelity_to_bell(rho) -> float:
    """Overlap with ``(|HH> + |VV>)/sqrt2``."""
    rho = check_density(rho)
    return float(0.5 * (rho[0, 0].real + rho[3, 3].real) + rho[0, 3].real)


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state."""
    rho = check_density(rho)
    yy = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0]))
    flipped = yy @ rho.conj() @ yy
    lam = np.sqrt(np.abs(np.linalg.eigvals(rho @ flipped).real))
    lam = np.sort(lam)[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def trace_distance(rho, sigma) -> float:
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(np.asarray(rho) - np.asarray(sigma)))))


def dephased_state() -> np.ndarray:
    """``(|HH><HH| + |VV><VV|)/2``: the parity is right but the entanglement is gone."""
    return np.diag([0.5, 0, 0, 0.5]).astype(complex)


def product_state() -> np.ndarray:
    """Both qubits still in ``(|H>+|V>)/sqrt2``."""
    psi = np.full(4, 0.5, dtype=complex)
    return np.outer(psi, psi.conj())


def _phase_b(psi):
    """Diagonal of the qubit-b phase gate ``|H> -> e^{-i psi}, |V> -> e^{i psi}``."""
    return np.stack([np.exp(-1j * psi), np.exp(1j * psi)] * 2, axis=-1)


def _correct(rho_stack, phi):
    """Apply ``R_b(phi) X_b`` outcome by outcome to a stack of 4x4 blocks."""
    flipped = rho_stack[:, _FLIP_B][:, :, _FLIP_B]
    diag = _phase_b(np.asarray(phi))
    return diag[:, :, None] * flipped * diag.conj()[:, None, :]


def _calibrate_success(rho, phase):
    """Remove a known static phase between HH and VV with a phase gate on qubit b."""
    diag = np.array([1, np.exp(1j * phase), 1, np.exp(1j * phase)])
    return diag[:, None] * rho * diag.conj()[None, :]


def _normalize(rho):
    p = float(np.trace(rho).real)
    if p <= 0:
        return Branch(0.0, np.full((4, 4), np.nan, dtype=complex))
    rho = rho / p
    return Branch(p, 0.5 * (rho + rho.conj().T))


def _coefficients(state):
    out = np.zeros((4, 4), dtype=complex)
    ket = np.zeros((4, 4), dtype=complex)
    bra = np.zeros((4, 4), dtype=complex)
    for t in state.terms:
        i, j = INDEX[t.ket], INDEX[t.bra]
        out[i, j], ket[i, j], bra[i, j] = t.probe.coeff, t.probe.ket, t.probe.bra
    return out, ket, bra


# -- readout ----------------------------------------------------------------


def _quadrature_phase(x, amplitude):
    """Phase of ``<X|a>`` as a function of ``X``."""
    return 2.0 * amplitude.imag * x - amplitude.real * amplitude.imag


def homodyne_feedforward_phase(x, u: complex, v: complex, coeff: complex = 1.0):
    """Phase for the odd-parity correction after quadrature outcome ``x``.

    ``u``/``v`` are the probe amplitudes of the ``|HV><VH|`` term and ``coeff``
    its coefficient. For a lossless probe (``u = alpha e^{i theta}``,
    ``v = conj(u)``) this is ``2 alpha sin(theta) (x - alpha cos(theta) / 2)``.
    """
    return 0.5 * (np.angle(coeff) + _quadrature_phase(x, u) - _quadrature_phase(x, v))


def pnr_feedforward_phase(n, u: complex, v: complex, beta: complex, coeff: complex = 1.0):
    """Phase for the odd-parity correction after ``n`` clicks.

    Each photon adds ``arg(u - beta)``; the displacement and the term's own
    coefficient contribute a fixed offset. For a lossless probe the per-photon
    part is ``pi/2 + theta/2``, which is ``-arctan(cot(theta/2))`` modulo ``pi``
    (the correction only matters modulo ``pi``).
    """
    d_u = CoherentDyad(coeff, u, v)
    shifted = displace_dyad(d_u, -beta)
    per_photon = np.angle(shifted.ket) - np.angle(shifted.bra)
    return 0.5 * (np.angle(shifted.coeff) + np.asarray(n) * per_photon)


def homodyne_readout(state: HybridState, n_grid: int = 4001, tol: float = 1e-7) -> Readout:
    """Threshold homodyne readout with feedforward on the odd-parity side.

    ``X > X_mid`` (the midpoint between the even and odd branch means, from the
    attenuated amplitudes) is the success branch. Both half-lines are sampled
    on uniform grids with Simpson's rule; the grid is refined automatically so
    the fastest phase winding is resolved, and a half-resolution comparison
    bounds the quadrature error.
    """
    coeff, ket, bra = _coefficients(state)
    beta = reference_amplitude(state)
    odd = state.term("HV", "HV").ket
    x_mid = 0.5 * (beta.real + odd.real)
    means = np.concatenate([ket.real.ravel(), bra.real.ravel()])
    lo = min(means.min(), x_mid) - 8 * QUADRATURE_SIGMA
    hi = max(means.max(), x_mid) + 8 * QUADRATURE_SIGMA

    u_odd, v_odd, c_odd = ket[1, 2], bra[1, 2], coeff[1, 2]
    # winding rate of the fastest term after feedforward, in rad per unit X
    winding = 2.0 * np.max(np.abs(ket.imag - bra.imag)) + 4.0 * max(abs(u_odd.imag), abs(v_odd.imag))

    def grid(a, b):
        n = max(n_grid, math.ceil((b - a) * winding / 0.25) + 1)
        n += (n + 1) % 2
        return np.linspace(a, b, n)

    def stack(x):
        out = np.empty((x.size, 4, 4), dtype=complex)
        for i in range(4):
            for j in range(4):
                out[:, i, j] = coeff[i, j] * homodyne_kernel(x, ket[i, j], bra[i, j])
        return out

    def integrate(x, values):
        full = simpson(values, x=x, axis=0)
        half = simpson(values[::2], x=x[::2], axis=0)
        return full, float(np.max(np.abs(full - half)))

    xs = grid(x_mid, hi)
    rho_s, err_s = integrate(xs, stack(xs))
    calib = np.angle(coeff[0, 3]) + _quadrature_phase(beta.real, ket[0, 3]) - _quadrature_phase(beta.real, bra[0, 3])
    rho_s = _calibrate_success(rho_s, calib)

    xf = grid(lo, x_mid)
    phi = homodyne_feedforward_phase(xf, u_odd, v_odd, c_odd)
    rho_f, err_f = integrate(xf, _correct(stack(xf), phi))

    err = max(err_s, err_f)
    if err > tol:
        raise GridError(f"quadrature error estimate {err:.3g} exceeds {tol:.3g}; raise n_grid")
    return Readout(_normalize(rho_s), _normalize(rho_f), err)


def default_cutoff(state: HybridState) -> int:
    beta = reference_amplitude(state)
    d = max(max(abs(t.probe.ket - beta), abs(t.probe.bra - beta)) for t in state.terms)
    return math.ceil(d * d + 10 * d + 30)


def pnr_readout(state: HybridState, n_max: int | None = None) -> Readout:
    """Displace by the even-branch amplitude, count photons, feed forward.

    ``n = 0`` is the success branch; every ``n >= 1`` is corrected with its own
    phase and accumulated into the failure branch.
    """
    beta = reference_amplitude(state)
    displaced = [displace_dyad(t.probe, -beta) for t in state.terms]
    d = max(max(abs(p.ket), abs(p.bra)) for p in displaced)
    need = math.ceil(d * d + 6 * d)
    if n_max is None:
        n_max = default_cutoff(state)
    if n_max < need:
        raise TruncationError(f"n_max={n_max} below required {need}")

    blocks = np.zeros((n_max + 1, 4, 4), dtype=complex)
    amps = {}
    for t, p in zip(state.terms, displaced):
        for a in (p.ket, p.bra):
            if a not in amps:
                amps[a] = fock_amplitudes(a, n_max)
        blocks[:, INDEX[t.ket], INDEX[t.bra]] = p.coeff * amps[p.ket] * amps[p.bra].conj()

    diag_mass = sum(blocks[:, i, i].sum().real for i in range(4))
    total = sum(t.probe.trace().real for t in state.terms if t.ket == t.bra)
    tail = max(0.0, total - diag_mass)

    coeff, ket, bra = _coefficients(state)
    static = np.angle(displaced[INDEX["HH"] * 4 + INDEX["VV"]].coeff)
    rho_s = _calibrate_success(blocks[0], static)

    n = np.arange(1, n_max + 1)
    phi = pnr_feedforward_phase(n, ket[1, 2], bra[1, 2], beta, coeff[1, 2])
    rho_f = _correct(blocks[1:], phi).sum(axis=0)
    return Readout(_normalize(rho_s), _normalize(rho_f), float(tail))


# -- report -----------------------------------------------------------------


def run_readout(cfg: GateConfig, state: HybridState | None = None) -> Readout:
    if state is None:
        state = evolve_gate(cfg)
    if cfg.detection is Detection.HOMODYNE:
        return homodyne_readout(state, cfg.n_grid)
    return pnr_readout(state, cfg.n_max)


def _safe(metric, rho):
    return float("nan") if np.isnan(rho).any() else metric(rho)


def gate_report(cfg: GateConfig) -> GateReport:
    state = evolve_gate(cfg)
    readout = run_readout(cfg, state)
    p = cfg.channel()
    beta = reference_amplitude(state)
    odd = state.term("HV", "HV").ket
    d_nominal = cfg.distance
    if cfg.detection is Detection.HOMODYNE:
        d_eff = abs(beta.real - odd.real)
    else:
        d_eff = abs(odd - beta)
    return GateReport(
        theta=p.theta,
        amp_param=amplitude_param(p.gamma_t),
        abs_coherence=abs(state.term("HH", "VV").coeff) / 0.25,
        p_success_branch=readout.success.probability,
        fidelity=_safe(fidelity_to_bell, readout.success.rho),
        concurrence=_safe(concurrence, readout.success.rho),
        failure_fidelity=_safe(fidelity_to_bell, readout.failure.rho),
        failure_concurrence=_safe(concurrence, readout.failure.rho),
        p_err=error_probability(cfg.detection, d_nominal),
        p_err_effective=error_probability(cfg.detection, d_eff) if d_eff > 0 else 0.5,
        probe_mean_photons=abs(beta) ** 2,
        required_photon_resolution=d_nominal**2 if cfg.detection is Detection.PNR else None,
        extras={"p_failure_branch": readout.failure.probability, "discarded": readout.discarded},
    )
