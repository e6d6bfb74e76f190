"""Decoherence of the weak cross-Kerr parity gate under probe photon loss."""

from .channel import (
    ChannelParams,
    ChannelResult,
    amplitude_param,
    channel_result,
    coherence_closed_form,
    coherence_continuum,
    pure_loss_dyad,
    traverse_medium,
)
from .coherent import CoherentDyad, overlap
from .gate import Detection, GateConfig, GateReport, LossMode, gate_report

__all__ = [
    "ChannelParams",
    "ChannelResult",
    "CoherentDyad",
    "Detection",
    "GateConfig",
    "GateReport",
    "LossMode",
    "amplitude_param",
    "channel_result",
    "coherence_closed_form",
    "coherence_continuum",
    "gate_report",
    "overlap",
    "pure_loss_dyad",
    "traverse_medium",
]
