"""RIS phase configurations, the aligned-configuration law and signal synthesis.

Every configuration used by the simulator stores N element phases wrapped to
[0, 2*pi). The received downlink sample reduces, under the fixed AP
beamformer, to c*alpha*beta * sum_k exp(j*(phi_k - kd*k*(sin(theta1) -
sin(theta2)))) with c = sqrt(SNR*n_tx); the explicit matrix pipeline
h^H Theta G f gives the same value and is kept as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mobility import ChannelState
from .wavefield import LinkGeometry, wrap_two_pi


@dataclass(frozen=True)
class RisConfiguration:
    """Immutable vector of element phase shifts plus a bookkeeping id."""

    phases: np.ndarray
    config_id: int = 0

    def __post_init__(self):
        phases = wrap_two_pi(np.asarray(self.phases, dtype=float))
        phases.setflags(write=False)
        object.__setattr__(self, "phases", phases)

    def __len__(self) -> int:
        return self.phases.shape[0]


@dataclass(frozen=True)
class CoherentGain:
    """Complex sum of per-element phase residuals under steering mismatch w."""

    value: complex
    w: float

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    @property
    def angle(self) -> float:
        return float(np.angle(self.value))


def optimal_config(
    theta1: float, theta2: float, geom: LinkGeometry, config_id: int = 0
) -> RisConfiguration:
    """Phase-aligned configuration phi_k = kd * k * (sin(theta1) - sin(theta2)).

    Applying it to a channel at exactly `theta2` makes all N element
    contributions add in phase, so the noiseless received magnitude is
    |c*alpha*beta|*N.
    """
    k = np.arange(geom.n_ris)
    phases = geom.kd * k * (np.sin(theta1) - np.sin(theta2))
    return RisConfiguration(phases=phases, config_id=config_id)


def update_config(
    current: RisConfiguration, w: float, geom: LinkGeometry, config_id: int | None = None
) -> RisConfiguration:
    """Differential update phi_k <- phi_k - kd * k * w for mismatch w.

    Starting from the aligned configuration for some reference angle and
    applying w = sin(theta_new) - sin(theta_ref) lands exactly on the aligned
    configuration for theta_new; successive updates add.
    """
    if abs(w) > 2.0:
        raise ValueError(f"|w| must be <= 2, got {w}")
    if config_id is None:
        config_id = current.config_id + 1
    k = np.arange(len(current))
    return RisConfiguration(phases=current.phases - geom.kd * k * w, config_id=config_id)


def quantize_config(
    config: RisConfiguration, bits: int, config_id: int | None = None
) -> RisConfiguration:
    """Snap phases to a uniform b-bit grid on [0, 2*pi).

    Models discrete phase shifters. Nothing in the simulator applies this by
    default (the reference setup assumes continuous shifting); callers opt in
    per configuration.
    """
    if bits < 1:
        raise ValueError(f"bits must be >= 1, got {bits}")
    if config_id is None:
        config_id = config.config_id
    step = 2.0 * np.pi / (2**bits)
    return RisConfiguration(phases=np.round(config.phases / step) * step,
                            config_id=config_id)


def coherent_gain_values(w, n_ris: int, spacing_d: float, wavelength: float) -> np.ndarray:
    """Vectorised closed form of sum_{k=0}^{N-1} exp(j*kd*k*w).

    The geometric-series ratio degenerates when the per-element step is a
    multiple of 2*pi; that branch returns N exactly and is taken whenever
    |exp(j*kd*w) - 1| < 1e-12.
    """
    mu = (2.0 * np.pi * spacing_d / wavelength) * np.asarray(w, dtype=float)
    den = np.exp(1j * mu) - 1.0
    degenerate = np.abs(den) < 1e-12
    safe = np.where(degenerate, 1.0, den)
    return np.where(degenerate, n_ris + 0.0j, (np.exp(1j * mu * n_ris) - 1.0) / safe)


def coherent_gain(w: float, n_ris: int, spacing_d: float, wavelength: float) -> CoherentGain:
    """Coherent gain at a single steering mismatch w (see coherent_gain_values)."""
    value = coherent_gain_values(w, n_ris, spacing_d, wavelength)
    return CoherentGain(value=complex(value), w=float(w))


def aggregate_gains(
    u: np.ndarray, config: RisConfiguration, geom: LinkGeometry
) -> np.ndarray:
    """Per-slot sums sum_k exp(j*(phi_k - kd*k*u)) for mismatch arguments u.

    Evaluated as a polynomial in z = exp(-j*kd*u) with coefficients
    exp(j*phi_k) (Horner), which avoids materialising a (slots, N) matrix.
    """
    if len(config) != geom.n_ris:
        raise ValueError(
            f"configuration has {len(config)} phases, geometry expects {geom.n_ris}"
        )
    z = np.exp(-1j * geom.kd * np.asarray(u, dtype=float))
    coeff = np.exp(1j * config.phases)
    acc = np.full_like(z, coeff[-1])
    for k in range(geom.n_ris - 2, -1, -1):
        acc *= z
        acc += coeff[k]
    return acc


def received_samples(
    beta: np.ndarray,
    theta2: np.ndarray,
    config: RisConfiguration,
    geom: LinkGeometry,
    noise: np.ndarray | complex = 0.0j,
) -> np.ndarray:
    """Noiseless-plus-noise downlink samples for per-slot (beta, theta2) arrays.

    Shared by the single-sample API and the timeline engine so both paths are
    numerically identical.
    """
    beta = np.atleast_1d(np.asarray(beta, dtype=complex))
    theta2 = np.atleast_1d(np.asarray(theta2, dtype=float))
    u = np.sin(geom.theta1) - np.sin(theta2)
    gains = aggregate_gains(u, config, geom)
    return geom.beamformer_gain * geom.alpha * beta * gains + noise


def received_sample(
    channel: ChannelState,
    config: RisConfiguration,
    geom: LinkGeometry,
    noise: complex = 0.0j,
) -> complex:
    """One downlink baseband sample for a unit-power symbol."""
    y = received_samples(channel.beta, channel.theta2, config, geom)
    return complex(y[0]) + complex(noise)
