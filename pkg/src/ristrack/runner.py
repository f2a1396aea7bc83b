"""Run orchestration and deterministic CSV/summary emission.

Each (tracker, seed) run writes a slot ledger CSV, a cumulative-rate CSV and a
plain-text summary; a scenario-level summary aggregates the signaling share
and tracking-call tables across runs. Floats are serialised with 12
significant digits so identical configurations and seeds produce byte-equal
files. The trajectory noise stream is derived from the run seed (seed for the
walk, seed+1 for receiver noise).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .config import ScenarioConfig
from .mobility import generate_path
from .simengine import RunMetrics, SlotKind, Timeline, overhead_report, run_timeline

OUTPUT_DIR_ENV = "RISTRACK_OUTDIR"

LEDGER_HEADER = ("slot_index,kind,rss,rss_normalized,inst_rate,cum_rate,"
                 "status_id,config_id,theta2_true_deg")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


@dataclass(frozen=True)
class RunResult:
    """One (tracker, seed) run: metrics plus where its files went."""

    policy_name: str
    seed: int
    n_slots: int
    metrics: RunMetrics
    ledger_path: str
    cumrate_path: str
    summary_path: str


def write_ledger_csv(path: str, tl: Timeline) -> None:
    kinds = [SlotKind(int(k)).name for k in tl.kind]
    theta_deg = np.rad2deg(tl.theta2_true)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(LEDGER_HEADER + "\n")
        for i in range(len(tl)):
            fh.write(
                f"{i + 1},{kinds[i]},{_fmt(tl.rss[i])},{_fmt(tl.rss_normalized[i])},"
                f"{_fmt(tl.inst_rate[i])},{_fmt(tl.cum_rate[i])},"
                f"{int(tl.status_id[i])},{int(tl.config_id[i])},{_fmt(theta_deg[i])}\n"
            )


def write_cumrate_csv(path: str, tl: Timeline) -> None:
    theta_deg = np.rad2deg(tl.theta2_true)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("slot_index,theta2_true_deg,inst_rate,cum_rate\n")
        for i in range(len(tl)):
            fh.write(
                f"{i + 1},{_fmt(theta_deg[i])},{_fmt(tl.inst_rate[i])},"
                f"{_fmt(tl.cum_rate[i])}\n"
            )


def write_run_summary(path: str, tl: Timeline, seed: int, metrics: RunMetrics) -> None:
    lines = [
        f"tracker: {tl.policy_name}",
        f"seed: {seed}",
        f"slots: {len(tl)}",
        f"gamma: {_fmt(tl.gamma)}",
        f"tracking_calls: {metrics.tracking_calls}",
        f"pct_below_threshold: {_fmt(metrics.pct_below_threshold)}",
        f"final_cum_rate: {_fmt(tl.cum_rate[-1])}",
    ]
    if not math.isnan(metrics.avg_error_vs_oracle):
        lines.append(f"avg_error_vs_oracle: {_fmt(metrics.avg_error_vs_oracle)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _aggregate_summary(path: str, results: list[RunResult]) -> None:
    names = []
    for r in results:
        if r.policy_name not in names:
            names.append(r.policy_name)
    seeds = sorted({r.seed for r in results})
    by = {(r.policy_name, r.seed): r for r in results}
    width = max(16, *(len(n) + 2 for n in names))

    def table(title, getter):
        rows = [title, "seed".ljust(8) + "".join(n.ljust(width) for n in names)]
        for seed in seeds:
            cells = []
            for n in names:
                r = by.get((n, seed))
                cells.append(("-" if r is None else getter(r)).ljust(width))
            rows.append(str(seed).ljust(8) + "".join(cells))
        return rows

    lines = []
    lines += table("Percentage of time-slots below threshold (signaling + degraded data)",
                   lambda r: f"{r.metrics.pct_below_threshold:.4g}%")
    lines.append("")
    lines += table("Number of tracking procedures called",
                   lambda r: str(r.metrics.tracking_calls))
    lines.append("")
    lines += table("Final cumulative average rate (bit/s/Hz)",
                   lambda r: f"{r.metrics.cumulative_rate_series[-1]:.6g}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def resolve_output_dir(cfg: ScenarioConfig, out_dir: str | None = None) -> str:
    if out_dir is not None:
        return out_dir
    return os.environ.get(OUTPUT_DIR_ENV, cfg.output_dir)


def run_scenario(cfg: ScenarioConfig, out_dir: str | None = None) -> list[RunResult]:
    """Run every configured (tracker, seed) pair and write all artifacts.

    When an oracle run is configured it is also used as the reference for the
    per-run rate-gap metric of the other trackers on the same seed.
    """
    out = resolve_output_dir(cfg, out_dir)
    os.makedirs(out, exist_ok=True)
    policies = cfg.policies()
    results: list[RunResult] = []
    for seed in cfg.seeds:
        spec = replace(cfg.trajectory, rng_seed=seed)
        traj = generate_path(spec, cfg.continuations, cfg.geometry)
        timelines: list[Timeline] = []
        oracle_tl: Timeline | None = None
        for policy in policies:
            tl = run_timeline(traj, policy, cfg.geometry, noise_seed=seed + 1,
                              threshold_mode=cfg.threshold_mode)
            timelines.append(tl)
            if oracle_tl is None and tl.policy_name == "oracle":
                oracle_tl = tl
        for tl in timelines:
            reference = oracle_tl if (oracle_tl is not None and tl is not oracle_tl) else None
            metrics = overhead_report(tl, tl.gamma, oracle_records=reference)
            stem = f"{tl.policy_name}_seed{seed}"
            ledger = os.path.join(out, f"{stem}_slots.csv")
            cumrate = os.path.join(out, f"{stem}_cumrate.csv")
            summary = os.path.join(out, f"{stem}_summary.txt")
            write_ledger_csv(ledger, tl)
            write_cumrate_csv(cumrate, tl)
            write_run_summary(summary, tl, seed, metrics)
            results.append(RunResult(tl.policy_name, seed, len(tl), metrics,
                                     ledger, cumrate, summary))
    _aggregate_summary(os.path.join(out, "summary.txt"), results)
    return results


def run_sweep(cfg: ScenarioConfig, param: str, raw_values: list[str],
              out_dir: str | None = None) -> str:
    """Re-run the scenario for each value of one parameter.

    Writes each value's artifacts into its own subdirectory plus a combined
    ``sweep_<param>.csv`` holding one row per (value, tracker, seed).
    """
    from .config import override_config

    out = resolve_output_dir(cfg, out_dir)
    os.makedirs(out, exist_ok=True)
    name = param.split(".")[-1].lower()
    rows = []
    for raw in raw_values:
        sub_cfg = override_config(cfg, param, raw)
        sub_dir = os.path.join(out, f"{name}={raw}")
        for result in run_scenario(sub_cfg, out_dir=sub_dir):
            rows.append((raw, result))
    sweep_path = os.path.join(out, f"sweep_{name}.csv")
    with open(sweep_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("param,value,tracker,seed,slots,tracking_calls,"
                 "pct_below_threshold,final_cum_rate,avg_error_vs_oracle\n")
        for raw, r in rows:
            err = r.metrics.avg_error_vs_oracle
            fh.write(
                f"{name},{raw},{r.policy_name},{r.seed},{r.n_slots},"
                f"{r.metrics.tracking_calls},{_fmt(r.metrics.pct_below_threshold)},"
                f"{_fmt(r.metrics.cumulative_rate_series[-1])},"
                f"{'' if math.isnan(err) else _fmt(err)}\n"
            )
    return sweep_path
