"""Fast built-in consistency checks runnable without a test harness.

Each check re-derives an expected value through an independent route (direct
summation, coordinate geometry, explicit matrix products) and compares.
Intended for `ristrack selftest`; the pytest suite covers the same ground in
much more depth.
"""

from __future__ import annotations

import math

import numpy as np

from .mobility import TrajectorySpec, generate_trajectory, slot_count
from .ris import coherent_gain, optimal_config, received_sample
from .simengine import OraclePolicy, ProposedPolicy, run_timeline
from .tracking import SearchGrid, measure_observables, two_dim_search
from .wavefield import LinkGeometry, wrap_principal


def _check_coherent_gain(rng) -> str | None:
    geom = LinkGeometry()
    k = np.arange(geom.n_ris)
    for w in rng.uniform(-2, 2, size=500):
        direct = np.exp(1j * geom.kd * k * w).sum()
        closed = coherent_gain(w, geom.n_ris, geom.spacing_d, geom.wavelength).value
        if abs(closed - direct) > 1e-10 * max(1.0, abs(direct)):
            return f"w={w}: closed form {closed} vs direct {direct}"
    return None


def _check_aligned_magnitude(rng) -> str | None:
    geom = LinkGeometry()
    from .mobility import ChannelState

    for _ in range(50):
        th1, th2 = rng.uniform(-1.2, 1.2, size=2)
        beta = complex(*rng.normal(size=2))
        state = ChannelState(beta=beta, theta2=th2, r2=4.0, slot_index=1)
        cfg = optimal_config(th1, th2, LinkGeometry(theta1=th1), config_id=0)
        y = received_sample(state, cfg, LinkGeometry(theta1=th1))
        want = geom.beamformer_gain * abs(beta) * geom.n_ris
        if abs(abs(y) - want) > 1e-9 * want:
            return f"aligned magnitude {abs(y)} != {want}"
    return None


def _check_trajectory_oracle(rng) -> str | None:
    geom = LinkGeometry(r1=4.0)
    spec = TrajectorySpec(path_length=0.2, rng_seed=7)
    traj = generate_trajectory(spec, geom)
    n = len(traj)
    a = np.array([spec.r2_init * math.sin(spec.theta2_init),
                  spec.r2_init * math.cos(spec.theta2_init)])
    to_ris = -a / np.linalg.norm(a)
    c, s = math.cos(spec.psi_a), math.sin(spec.psi_a)
    walk = np.array([c * to_ris[0] - s * to_ris[1], s * to_ris[0] + c * to_ris[1]])
    disp = spec.speed_v * spec.slot_duration_t0 * np.arange(1, n + 1)
    pos = a[None, :] + disp[:, None] * walk[None, :]
    r2 = np.hypot(pos[:, 0], pos[:, 1])
    th2 = np.arctan2(pos[:, 0], pos[:, 1])
    if np.max(np.abs(r2 - traj.r2)) > 1e-9 or np.max(np.abs(th2 - traj.theta2)) > 1e-9:
        return "trajectory disagrees with planar-coordinates oracle"
    invariant = np.abs(traj.beta) * (geom.r1 + traj.r2)
    if np.max(np.abs(invariant / invariant[0] - 1.0)) > 1e-9:
        return "|beta|*(r1+r2) not invariant"
    return None


def _check_search_recovery(rng) -> str | None:
    geom = LinkGeometry()
    grid = SearchGrid()
    for _ in range(10):
        th_ref = np.deg2rad(rng.uniform(20, 45))
        dth = np.deg2rad(rng.uniform(-1.5, 1.5))
        dr = rng.uniform(-0.004, 0.004)
        r_ref = geom.r1 + 4.0
        w_true = math.sin(th_ref + dth) - math.sin(th_ref)
        gain = coherent_gain(w_true, geom.n_ris, geom.spacing_d, geom.wavelength)
        rho = r_ref / (r_ref + dr)
        eta = rho**2 * gain.magnitude**2 / geom.n_ris**2
        xi = wrap_principal(2 * np.pi * dr / geom.wavelength + gain.angle)
        y_ref = 1.0 + 0.0j
        y_now = math.sqrt(eta) * np.exp(1j * xi)
        obs = measure_observables(y_ref, y_now, r_ref, th_ref)
        cands = two_dim_search(obs, grid, geom)
        if not any(abs(c.theta2_cand - (th_ref + dth)) <= grid.theta2_step * 1.0001
                   for c in cands):
            return f"true angle not recovered at dth={np.rad2deg(dth):.2f} deg"
    return None


def _check_timeline_determinism(rng) -> str | None:
    geom = LinkGeometry(r1=2.0)
    spec = TrajectorySpec(r2_init=2.0, path_length=0.02, rng_seed=3)
    traj = generate_trajectory(spec, geom)
    a = run_timeline(traj, ProposedPolicy(), geom, noise_seed=5)
    b = run_timeline(traj, ProposedPolicy(), geom, noise_seed=5)
    if not (np.array_equal(a.rss, b.rss) and np.array_equal(a.kind, b.kind)):
        return "identical seeds gave different timelines"
    orc = run_timeline(traj, OraclePolicy(), geom, noise_seed=5)
    if int(np.sum(orc.kind == 2)) != 0:
        return "oracle run consumed training slots"
    return None


def _check_running_mean(rng) -> str | None:
    x = rng.uniform(0, 20, size=10_000)
    cum = np.cumsum(x) / np.arange(1, x.size + 1)
    r = x[0]
    for t in range(1, x.size):
        r = (t * r + x[t]) / (t + 1)
    if abs(r - cum[-1]) > 1e-12:
        return "running-mean recurrence mismatch"
    return None


CHECKS = [
    ("coherent gain closed form vs direct summation", _check_coherent_gain),
    ("aligned configuration magnitude", _check_aligned_magnitude),
    ("trajectory vs Cartesian oracle", _check_trajectory_oracle),
    ("candidate search recovery", _check_search_recovery),
    ("timeline determinism and genie accounting", _check_timeline_determinism),
    ("cumulative-rate recurrence", _check_running_mean),
]


def run_selftest() -> int:
    """Run all built-in checks; returns 0 when everything passes."""
    rng = np.random.default_rng(20240901)
    failures = 0
    for label, fn in CHECKS:
        problem = fn(rng)
        if problem is None:
            print(f"PASS {label}")
        else:
            failures += 1
            print(f"FAIL {label}: {problem}")
    if failures:
        print(f"{failures} of {len(CHECKS)} checks failed")
    else:
        print(f"all {len(CHECKS)} checks passed")
    return 0 if failures == 0 else 2
