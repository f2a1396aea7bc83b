"""Slot-accurate timeline: status state machine, signaling accounting, metrics.

The timeline walks the trajectory slot by slot. Within a status the RIS
configuration is fixed and slots carry downlink data; the received strength is
normalised to a reference captured at the first data slot after each
(re)configuration. When the normalised strength first drops below the policy
threshold the slot is accounted as a below-threshold data slot and a tracking
event runs: one uplink feedback slot, the policy's downlink training slots
(none for the genie), one closing feedback slot, then data resumes with the
new configuration. The user keeps moving during signaling, and the
instantaneous rate of every non-data slot is zero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .baselines import SweepSpec, exhaustive_sweep
from .mobility import Trajectory
from .ris import RisConfiguration, aggregate_gains, optimal_config
from .tracking import SearchGrid, measure_observables, select_by_training, two_dim_search
from .wavefield import LinkGeometry

_CHUNK_START = 512
_CHUNK_MAX = 65536


class SlotKind(enum.IntEnum):
    DATA = 0
    DATA_BELOW_THRESHOLD = 1
    DL_TRAINING = 2
    UL_FEEDBACK = 3


@dataclass(frozen=True)
class SlotRecord:
    """Ledger entry for one time slot (slot_index is 1-based)."""

    slot_index: int
    kind: SlotKind
    rss: float
    rss_normalized: float
    inst_rate: float
    config_id: int
    status_id: int
    theta2_true: float


@dataclass(frozen=True)
class OraclePolicy:
    """Genie reconfiguration at zero signaling cost."""

    gamma: float = 0.9

    @property
    def name(self) -> str:
        return "oracle"


@dataclass(frozen=True)
class ProposedPolicy:
    """Differential-update tracker driven by the two-dimensional search."""

    gamma: float = 0.9
    grid: SearchGrid = field(default_factory=SearchGrid)
    obs_avg_slots: int = 1

    def __post_init__(self):
        if self.obs_avg_slots < 1:
            raise ValueError("obs_avg_slots must be >= 1")

    @property
    def name(self) -> str:
        return "proposed"


@dataclass(frozen=True)
class ExhaustivePolicy:
    """Sweep-everything baseline; gamma here is the sweep trigger threshold."""

    gamma: float = 0.5
    sweep: SweepSpec = field(default_factory=SweepSpec)

    @property
    def name(self) -> str:
        return f"exhaustive_{self.sweep.resolution_deg:g}deg"


class Timeline:
    """Column-oriented slot ledger; indexing materialises SlotRecord values."""

    def __init__(self, kind, rss, rss_normalized, inst_rate, cum_rate, config_id,
                 status_id, theta2_true, policy_name: str, gamma: float,
                 tracking_calls: int):
        self.kind = kind
        self.rss = rss
        self.rss_normalized = rss_normalized
        self.inst_rate = inst_rate
        self.cum_rate = cum_rate
        self.config_id = config_id
        self.status_id = status_id
        self.theta2_true = theta2_true
        self.policy_name = policy_name
        self.gamma = gamma
        self.tracking_calls = tracking_calls

    def __len__(self) -> int:
        return self.kind.shape[0]

    def __getitem__(self, i: int) -> SlotRecord:
        n = len(self)
        if i < 0:
            i += n
        if not 0 <= i < n:
            raise IndexError(i)
        return SlotRecord(
            slot_index=i + 1,
            kind=SlotKind(int(self.kind[i])),
            rss=float(self.rss[i]),
            rss_normalized=float(self.rss_normalized[i]),
            inst_rate=float(self.inst_rate[i]),
            config_id=int(self.config_id[i]),
            status_id=int(self.status_id[i]),
            theta2_true=float(self.theta2_true[i]),
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))


@dataclass(frozen=True)
class RunMetrics:
    """Headline numbers of one timeline run."""

    cumulative_rate_series: np.ndarray
    pct_below_threshold: float
    tracking_calls: int
    avg_error_vs_oracle: float = math.nan


class _TimelineEnd(Exception):
    """Raised by the probe when the trajectory runs out mid-event."""


def instantaneous_rate(rss, noise_var: float):
    """Spectral efficiency log2(1 + rss/noise_var) of one data slot."""
    rss = np.asarray(rss, dtype=float)
    if np.any(rss < 0):
        raise ValueError("rss must be >= 0")
    if noise_var <= 0:
        raise ValueError("noise_var must be > 0")
    out = np.log2(1.0 + rss / noise_var)
    return float(out) if out.ndim == 0 else out


def _inst_rate_column(records) -> np.ndarray:
    if isinstance(records, Timeline):
        return records.inst_rate
    rates = np.array([r.inst_rate for r in records], dtype=float)
    if rates.size == 0:
        raise ValueError("empty record list")
    return rates


def cumulative_rate(records) -> np.ndarray:
    """Running mean of the instantaneous rate over all elapsed slots."""
    rates = _inst_rate_column(records)
    if rates.size == 0:
        raise ValueError("empty record list")
    return np.cumsum(rates) / np.arange(1, rates.size + 1)


def overhead_report(records, gamma: float, oracle_records=None) -> RunMetrics:
    """Signaling accounting: share of non-data slots and tracking-call count.

    Below-threshold, training and feedback slots all count against the
    threshold `gamma` the run was driven with. When an oracle run over the
    same trajectory is supplied, the mean absolute instantaneous-rate gap is
    included.
    """
    if isinstance(records, Timeline):
        kinds = records.kind
        status = records.status_id
        calls = records.tracking_calls
    else:
        recs = list(records)
        if not recs:
            raise ValueError("empty record list")
        kinds = np.array([r.kind for r in recs], dtype=int)
        status = np.array([r.status_id for r in recs], dtype=int)
        calls = int(status[-1] - status[0])
    pct = 100.0 * float(np.mean(kinds != int(SlotKind.DATA)))
    cum = cumulative_rate(records)
    err = math.nan
    if oracle_records is not None:
        mine = _inst_rate_column(records)
        orc = _inst_rate_column(oracle_records)
        if orc.shape != mine.shape:
            raise ValueError("oracle run must cover the same slots")
        err = float(np.mean(np.abs(mine - orc)))
    return RunMetrics(
        cumulative_rate_series=cum,
        pct_below_threshold=pct,
        tracking_calls=int(calls),
        avg_error_vs_oracle=err,
    )


def run_timeline(
    trajectory: Trajectory,
    policy,
    geom: LinkGeometry,
    noise_seed: int | None = None,
    noise_enabled: bool = True,
    threshold_mode: str = "normalized",
) -> Timeline:
    """Drive one policy over a trajectory and return the slot ledger.

    `threshold_mode="normalized"` compares strength against the status
    reference (portable thresholds in (0, 1]); `"absolute"` compares raw
    strength. Either way a fresh status re-evaluates from the slot after its
    reference slot, so at most one event fires per trigger. Identical inputs
    and seeds give bit-identical ledgers.
    """
    n = len(trajectory)
    if n == 0:
        raise ValueError("empty trajectory")
    if threshold_mode not in ("normalized", "absolute"):
        raise ValueError(f"unknown threshold mode {threshold_mode!r}")
    normalized = threshold_mode == "normalized"
    if normalized and not 0.0 < policy.gamma <= 1.0:
        raise ValueError("normalized mode needs gamma in (0, 1]")
    if not normalized and policy.gamma <= 0:
        raise ValueError("absolute mode needs gamma > 0")

    theta2 = trajectory.theta2
    beta = trajectory.beta
    amp = geom.beamformer_gain * geom.alpha * beta
    u_all = np.sin(geom.theta1) - np.sin(theta2)
    if noise_enabled:
        rng = np.random.default_rng(noise_seed)
        scale = math.sqrt(geom.noise_var / 2.0)
        noise = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    else:
        noise = np.zeros(n, dtype=complex)

    kind = np.zeros(n, dtype=np.int8)
    rss = np.zeros(n, dtype=float)
    rss_norm = np.zeros(n, dtype=float)
    config_col = np.zeros(n, dtype=np.int32)
    status_col = np.zeros(n, dtype=np.int32)

    is_oracle = isinstance(policy, OraclePolicy)
    is_proposed = isinstance(policy, ProposedPolicy)
    obs_avg = policy.obs_avg_slots if is_proposed else 1

    # initial access leaves the surface aligned to the first slot's channel
    config = optimal_config(geom.theta1, float(theta2[0]), geom, config_id=0)
    next_config_id = 1
    status = 1
    events = 0
    believed_sin = math.sin(float(theta2[0]))
    believed_r = geom.r1 + float(trajectory.r2[0])

    def span_samples(lo: int, hi: int, cfg: RisConfiguration) -> np.ndarray:
        return amp[lo:hi] * aggregate_gains(u_all[lo:hi], cfg, geom) + noise[lo:hi]

    def mark_signaling(idx: int, k: SlotKind, cfg_id: int, rss_val: float, ref: float) -> None:
        kind[idx] = int(k)
        rss[idx] = rss_val
        rss_norm[idx] = rss_val / ref if ref > 0 else 0.0
        config_col[idx] = cfg_id
        status_col[idx] = status

    cursor = 0
    while cursor < n:
        ref_idx = cursor
        rss_ref = -1.0
        ref_samples: list[complex] = []
        t2 = -1
        y_t2 = 0j
        scan = cursor
        chunk = _CHUNK_START
        while scan < n:
            hi = min(n, scan + chunk)
            y = span_samples(scan, hi, config)
            power = np.abs(y) ** 2
            if rss_ref < 0:
                rss_ref = max(float(power[0]), 1e-300)
            while len(ref_samples) < obs_avg and scan <= ref_idx + len(ref_samples) < hi:
                ref_samples.append(complex(y[ref_idx + len(ref_samples) - scan]))
            norm = power / rss_ref
            rss[scan:hi] = power
            rss_norm[scan:hi] = norm
            config_col[scan:hi] = config.config_id
            status_col[scan:hi] = status
            kind[scan:hi] = int(SlotKind.DATA)
            start = max(scan, ref_idx + 1)
            if start < hi:
                level = norm if normalized else power
                below = np.nonzero(level[start - scan :] < policy.gamma)[0]
                if below.size:
                    t2 = start + int(below[0])
                    y_t2 = complex(y[t2 - scan])
                    break
            scan = hi
            chunk = min(chunk * 4, _CHUNK_MAX)

        if t2 < 0:
            break

        events += 1
        status += 1
        kind[t2] = int(SlotKind.DATA_BELOW_THRESHOLD)
        status_col[t2] = status
        cursor = t2 + 1

        if is_oracle:
            if cursor < n:
                config = optimal_config(geom.theta1, float(theta2[cursor]), geom,
                                        config_id=next_config_id)
                next_config_id += 1
            continue

        if cursor >= n:
            break
        mark_signaling(cursor, SlotKind.UL_FEEDBACK, config.config_id, 0.0, rss_ref)
        cursor += 1

        def probe(cfg: RisConfiguration) -> float:
            nonlocal cursor
            if cursor >= n:
                raise _TimelineEnd
            p = abs(span_samples(cursor, cursor + 1, cfg)[0]) ** 2
            mark_signaling(cursor, SlotKind.DL_TRAINING, cfg.config_id, p, rss_ref)
            cursor += 1
            return p

        try:
            if is_proposed:
                usable = min(len(ref_samples), max(1, t2 - ref_idx))
                y_ref = complex(np.mean(ref_samples[:usable]))
                theta_ref = math.asin(max(-1.0, min(1.0, believed_sin)))
                obs = measure_observables(y_ref, y_t2, believed_r, theta_ref)
                candidates = two_dim_search(obs, policy.grid, geom)
                # rebase so candidate ids never collide with earlier events'
                rebased = replace(config, config_id=next_config_id - 1)
                config, chosen = select_by_training(candidates, probe, rebased, geom)
                next_config_id += len(candidates)
                believed_sin += chosen.w_cand
                believed_r = chosen.r_cand
            else:
                config, _ = exhaustive_sweep(probe, policy.sweep, geom,
                                             config_id_base=next_config_id)
                next_config_id += policy.sweep.slots_per_sweep
        except _TimelineEnd:
            break

        if cursor < n:
            mark_signaling(cursor, SlotKind.UL_FEEDBACK, config.config_id, 0.0, rss_ref)
            cursor += 1

    inst = np.where(kind == int(SlotKind.DATA),
                    np.log2(1.0 + rss / geom.noise_var), 0.0)
    cum = np.cumsum(inst) / np.arange(1, n + 1)
    for arr in (kind, rss, rss_norm, inst, cum, config_col, status_col):
        arr.setflags(write=False)
    return Timeline(kind, rss, rss_norm, inst, cum, config_col, status_col,
                    trajectory.theta2, policy.name, policy.gamma, events)
