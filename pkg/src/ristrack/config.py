"""Scenario configuration: INI-style files with evaluation-setup defaults.

An empty file is a valid scenario; every key then takes the reference
evaluation default (16 AP antennas, 64 RIS elements, 45 deg arrival angle,
10 dB SNR, unit noise variance, thresholds 0.9/0.5, 7 training frames,
0.6 m/s walk, 15.6 us slots). Angles appear in degrees in files and are
converted to radians at this boundary.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, replace

import numpy as np

from .baselines import SweepSpec
from .mobility import TrajectorySpec
from .simengine import ExhaustivePolicy, OraclePolicy, ProposedPolicy
from .tracking import SearchGrid
from .wavefield import LinkGeometry


class ConfigError(ValueError):
    """Configuration file problem; message names the offending key."""


_GEOMETRY_KEYS = {
    "n_tx", "n_ris", "wavelength_m", "spacing_m", "theta1_deg", "phi_ap_deg",
    "r1_m", "alpha", "snr_db", "noise_var",
}
_TRAJECTORY_KEYS = {
    "theta2_init_deg", "r2_init_m", "psi_a_deg", "speed_mps", "slot_duration_s",
    "path_length_m", "rayleigh_scale", "segments",
}
_TRACKER_KEYS = {
    "algorithms", "gamma", "gamma_exh", "n_sol", "theta2_halfwidth_deg",
    "theta2_step_deg", "r_halfwidth_m", "r_step_m", "gain_error_squared",
    "threshold_mode", "obs_avg_slots",
}
_RUN_KEYS = {"seeds", "output_dir"}
_SECTIONS = {
    "geometry": _GEOMETRY_KEYS,
    "trajectory": _TRAJECTORY_KEYS,
    "tracker": _TRACKER_KEYS,
    "run": _RUN_KEYS,
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully validated scenario: geometry, walk, tracker knobs and run plan."""

    geometry: LinkGeometry
    trajectory: TrajectorySpec
    continuations: tuple[tuple[float, float], ...]
    algorithms: tuple[str, ...]
    gamma: float
    gamma_exh: float
    grid: SearchGrid
    threshold_mode: str
    obs_avg_slots: int
    seeds: tuple[int, ...]
    output_dir: str

    def policies(self):
        """Policy objects in configured order."""
        out = []
        for name in self.algorithms:
            if name == "oracle":
                out.append(OraclePolicy(gamma=self.gamma))
            elif name == "proposed":
                out.append(ProposedPolicy(gamma=self.gamma, grid=self.grid,
                                          obs_avg_slots=self.obs_avg_slots))
            elif name.startswith("exhaustive:"):
                res = float(name.split(":", 1)[1])
                out.append(ExhaustivePolicy(gamma=self.gamma_exh, sweep=SweepSpec(res)))
            else:
                raise ConfigError(f"[tracker] algorithms: unknown algorithm {name!r}")
        return out


def _get(parser, section, key, conv, default, errors=()):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key).strip()
    if raw == "":
        return default
    try:
        return conv(raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r} ({exc})") from None


def _parse_bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_segments(raw: str) -> tuple[tuple[float, float], ...]:
    out = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        psi, _, length = part.partition(":")
        out.append((np.deg2rad(float(psi)), float(length)))
    return tuple(out)


def _parse_algorithms(raw: str) -> tuple[str, ...]:
    names = []
    for part in raw.split(","):
        part = part.strip().lower()
        if not part:
            continue
        names.append(part)
    if not names:
        raise ValueError("empty algorithm list")
    return tuple(names)


def _parse_seeds(raw: str) -> tuple[int, ...]:
    seeds = tuple(int(p.strip()) for p in raw.split(",") if p.strip())
    if not seeds:
        raise ValueError("empty seed list")
    return seeds


def load_config(path: str) -> ScenarioConfig:
    """Read, validate and default-fill a scenario file.

    Raises :class:`ConfigError` with the section, key and violated rule for
    semantic problems; syntax errors keep configparser's line numbers.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"parse error: {exc}") from None

    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser.options(section):
            if key not in _SECTIONS[section]:
                raise ConfigError(f"[{section}] unknown key {key!r}")

    wavelength = _get(parser, "geometry", "wavelength_m", float, 0.005)
    spacing = _get(parser, "geometry", "spacing_m", float, None)
    snr_db = _get(parser, "geometry", "snr_db", float, 10.0)
    try:
        geometry = LinkGeometry(
            n_tx=_get(parser, "geometry", "n_tx", int, 16),
            n_ris=_get(parser, "geometry", "n_ris", int, 64),
            wavelength=wavelength,
            spacing_d=spacing,
            theta1=np.deg2rad(_get(parser, "geometry", "theta1_deg", float, 45.0)),
            phi_ap=np.deg2rad(_get(parser, "geometry", "phi_ap_deg", float, 0.0)),
            r1=_get(parser, "geometry", "r1_m", float, 4.0),
            alpha=_get(parser, "geometry", "alpha", complex, 1.0 + 0.0j),
            snr_linear=10.0 ** (snr_db / 10.0),
            noise_var=_get(parser, "geometry", "noise_var", float, 1.0),
        )
    except ValueError as exc:
        raise ConfigError(f"[geometry] invalid: {exc}") from None

    try:
        trajectory = TrajectorySpec(
            theta2_init=np.deg2rad(_get(parser, "trajectory", "theta2_init_deg", float, 20.0)),
            r2_init=_get(parser, "trajectory", "r2_init_m", float, 4.0),
            psi_a=np.deg2rad(_get(parser, "trajectory", "psi_a_deg", float, 110.0)),
            speed_v=_get(parser, "trajectory", "speed_mps", float, 0.6),
            slot_duration_t0=_get(parser, "trajectory", "slot_duration_s", float, 15.6e-6),
            path_length=_get(parser, "trajectory", "path_length_m", float, 3.0),
            rayleigh_scale=_get(parser, "trajectory", "rayleigh_scale", float,
                                1.0 / math.sqrt(2.0)),
        )
    except ValueError as exc:
        raise ConfigError(f"[trajectory] invalid: {exc}") from None
    continuations = _get(parser, "trajectory", "segments", _parse_segments, ())

    threshold_mode = _get(parser, "tracker", "threshold_mode", str, "normalized").lower()
    if threshold_mode not in ("normalized", "absolute"):
        raise ConfigError(
            f"[tracker] threshold_mode: must be 'normalized' or 'absolute', got {threshold_mode!r}"
        )
    gamma = _get(parser, "tracker", "gamma", float, 0.9)
    gamma_exh = _get(parser, "tracker", "gamma_exh", float, 0.5)
    for key, value in (("gamma", gamma), ("gamma_exh", gamma_exh)):
        if value <= 0:
            raise ConfigError(f"[tracker] {key}: threshold must be > 0, got {value}")
        if threshold_mode == "normalized" and value > 1.0:
            raise ConfigError(
                f"[tracker] {key}: normalized threshold is a fraction <= 1, got {value}"
            )

    try:
        grid = SearchGrid(
            theta2_halfwidth=np.deg2rad(
                _get(parser, "tracker", "theta2_halfwidth_deg", float, 2.5)),
            theta2_step=np.deg2rad(_get(parser, "tracker", "theta2_step_deg", float, 0.05)),
            r_halfwidth=_get(parser, "tracker", "r_halfwidth_m", float, 0.005),
            r_step=_get(parser, "tracker", "r_step_m", float, None),
            n_sol=_get(parser, "tracker", "n_sol", int, 7),
            gain_error_squared=_get(parser, "tracker", "gain_error_squared",
                                    _parse_bool, True),
        )
    except ValueError as exc:
        raise ConfigError(f"[tracker] invalid search grid: {exc}") from None

    obs_avg_slots = _get(parser, "tracker", "obs_avg_slots", int, 1)
    if obs_avg_slots < 1:
        raise ConfigError("[tracker] obs_avg_slots: must be >= 1")

    algorithms = _get(
        parser, "tracker", "algorithms", _parse_algorithms,
        ("proposed", "exhaustive:1", "exhaustive:5", "exhaustive:10", "oracle"),
    )
    for name in algorithms:
        if name in ("oracle", "proposed"):
            continue
        if name.startswith("exhaustive:"):
            try:
                SweepSpec(float(name.split(":", 1)[1]))
            except ValueError as exc:
                raise ConfigError(f"[tracker] algorithms: {exc}") from None
            continue
        raise ConfigError(
            f"[tracker] algorithms: unknown algorithm {name!r} "
            "(use proposed, oracle or exhaustive:<resolution_deg>)"
        )

    seeds = _get(parser, "run", "seeds", _parse_seeds, (1,))
    output_dir = _get(parser, "run", "output_dir", str, "runs")

    return ScenarioConfig(
        geometry=geometry,
        trajectory=trajectory,
        continuations=continuations,
        algorithms=algorithms,
        gamma=gamma,
        gamma_exh=gamma_exh,
        grid=grid,
        threshold_mode=threshold_mode,
        obs_avg_slots=obs_avg_slots,
        seeds=seeds,
        output_dir=output_dir,
    )


def override_config(cfg: ScenarioConfig, key: str, raw_value: str) -> ScenarioConfig:
    """Return a copy of `cfg` with one sweepable parameter replaced.

    Accepts the same key names as the scenario file (optionally prefixed with
    the section, e.g. ``tracker.gamma``).
    """
    name = key.split(".")[-1].lower()
    try:
        if name == "gamma":
            value = float(raw_value)
            if value <= 0 or (cfg.threshold_mode == "normalized" and value > 1):
                raise ConfigError(f"gamma: invalid threshold {value}")
            return replace(cfg, gamma=value)
        if name == "gamma_exh":
            return replace(cfg, gamma_exh=float(raw_value))
        if name == "n_sol":
            return replace(cfg, grid=replace(cfg.grid, n_sol=int(raw_value)))
        if name == "speed_mps":
            return replace(cfg, trajectory=replace(cfg.trajectory, speed_v=float(raw_value)))
        if name == "path_length_m":
            return replace(cfg, trajectory=replace(cfg.trajectory,
                                                   path_length=float(raw_value)))
        if name == "obs_avg_slots":
            return replace(cfg, obs_avg_slots=int(raw_value))
        if name == "algorithms":
            return replace(cfg, algorithms=_parse_algorithms(raw_value))
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{key}: cannot parse {raw_value!r} ({exc})") from None
    raise ConfigError(
        f"{key}: not sweepable (use gamma, gamma_exh, n_sol, speed_mps, "
        "path_length_m, obs_avg_slots or algorithms)"
    )
