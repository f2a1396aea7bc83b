"""Array-response, path-loss and phase-wrapping primitives shared by every module.

Angles are radians everywhere inside the library; degree conversion happens
only at the configuration/CLI boundary. Element indexing is zero-based, so a
steering phase written with an (n-1) exponent elsewhere becomes index k here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

# Phases closer to 0 (mod 2*pi) than this snap to exactly 0 so that equality
# tests across different update paths are deterministic.
PHASE_SNAP = 1e-12


@dataclass(frozen=True)
class LinkGeometry:
    """Static scene: arrays, carrier and the fixed AP-RIS hop.

    Defaults follow the reference evaluation setup: a 16-antenna AP, a
    64-element RIS at half-wavelength spacing, 45 deg arrival angle on the
    AP-RIS path, 10 dB transmit SNR and unit noise variance. The carrier
    wavelength defaults to 5 mm (60 GHz); ``spacing_d=None`` means half a
    wavelength.
    """

    n_tx: int = 16
    n_ris: int = 64
    wavelength: float = 0.005
    spacing_d: float | None = None
    theta1: float = np.deg2rad(45.0)
    phi_ap: float = 0.0
    r1: float = 4.0
    alpha: complex = 1.0 + 0.0j
    snr_linear: float = 10.0
    noise_var: float = 1.0

    def __post_init__(self):
        if self.spacing_d is None:
            object.__setattr__(self, "spacing_d", self.wavelength / 2.0)
        if self.n_tx < 1:
            raise ValueError(f"n_tx must be >= 1, got {self.n_tx}")
        if self.n_ris < 1:
            raise ValueError(f"n_ris must be >= 1, got {self.n_ris}")
        if self.wavelength <= 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if self.spacing_d <= 0:
            raise ValueError(f"spacing_d must be > 0, got {self.spacing_d}")
        if self.r1 <= 0:
            raise ValueError(f"r1 must be > 0, got {self.r1}")
        half_pi = np.pi / 2
        if not -half_pi < self.theta1 < half_pi:
            raise ValueError("theta1 must lie in (-pi/2, pi/2)")
        if not -half_pi < self.phi_ap < half_pi:
            raise ValueError("phi_ap must lie in (-pi/2, pi/2)")
        if self.snr_linear <= 0:
            raise ValueError("snr_linear must be > 0")
        if self.noise_var <= 0:
            raise ValueError("noise_var must be > 0")

    @property
    def kd(self) -> float:
        """Per-element phase slope 2*pi*d/lambda (radians per unit sin-angle)."""
        return TWO_PI * self.spacing_d / self.wavelength

    @property
    def beamformer_gain(self) -> float:
        """Scalar c = sqrt(SNR)*|a_AP| = sqrt(SNR * n_tx) of the fixed AP beamformer."""
        return float(np.sqrt(self.snr_linear * self.n_tx))


def steering_vector(angle: float, count: int, spacing_d: float, wavelength: float) -> np.ndarray:
    """Uniform-linear-array response at `angle` (radians from broadside).

    Entry k equals exp(-1j * (2*pi*spacing_d/wavelength) * k * sin(angle));
    the first entry is exactly 1.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if spacing_d <= 0 or wavelength <= 0:
        raise ValueError("spacing_d and wavelength must be > 0")
    k = np.arange(count)
    return np.exp(-1j * (TWO_PI * spacing_d / wavelength) * k * np.sin(angle))


def path_loss_linear(distance, wavelength: float):
    """Free-space path loss (4*pi*distance/wavelength)**2 in linear scale."""
    distance = np.asarray(distance, dtype=float)
    if np.any(distance <= 0):
        raise ValueError("distance must be > 0")
    if wavelength <= 0:
        raise ValueError("wavelength must be > 0")
    out = (4.0 * np.pi * distance / wavelength) ** 2
    return float(out) if out.ndim == 0 else out


def ap_ris_channel(geom: LinkGeometry) -> np.ndarray:
    """Rank-one AP-to-RIS channel alpha * a_RIS(theta1) a_AP(phi_ap)^H, shape (n_ris, n_tx)."""
    a_ris = steering_vector(geom.theta1, geom.n_ris, geom.spacing_d, geom.wavelength)
    a_ap = steering_vector(geom.phi_ap, geom.n_tx, geom.spacing_d, geom.wavelength)
    return geom.alpha * np.outer(a_ris, a_ap.conj())


def wrap_two_pi(phases):
    """Wrap phases to [0, 2*pi), snapping values within 1e-12 of the seam to 0."""
    out = np.mod(np.asarray(phases, dtype=float), TWO_PI)
    out = np.where((out < PHASE_SNAP) | (out > TWO_PI - PHASE_SNAP), 0.0, out)
    return float(out) if out.ndim == 0 else out


def wrap_principal(x):
    """Wrap angles to the principal interval (-pi, pi]."""
    out = -(np.mod(-np.asarray(x, dtype=float) + np.pi, TWO_PI) - np.pi)
    return float(out) if out.ndim == 0 else out
