"""Link-level simulator of RIS-assisted mmWave downlink beam tracking.

A deterministic slot-level simulator of a blocked-LOS downlink where an
access point reaches a walking single-antenna user through a passive
reconfigurable surface. It implements a fast tracker that updates the
surface phases from two feedback observables (strength ratio and received
phase difference), alongside an exhaustive-sweep configurator and a
zero-cost genie used as baselines.
"""

from .baselines import SweepSpec, exhaustive_sweep, oracle_config
from .config import ConfigError, ScenarioConfig, load_config
from .mobility import (
    ChannelState,
    Trajectory,
    TrajectorySpec,
    evolve_channel,
    follow_on_spec,
    generate_path,
    generate_trajectory,
    r2_at,
    slot_count,
    theta2_at,
)
from .ris import (
    CoherentGain,
    RisConfiguration,
    coherent_gain,
    coherent_gain_values,
    optimal_config,
    quantize_config,
    received_sample,
    received_samples,
    update_config,
)
from .runner import RunResult, run_scenario, run_sweep
from .simengine import (
    ExhaustivePolicy,
    OraclePolicy,
    ProposedPolicy,
    RunMetrics,
    SlotKind,
    SlotRecord,
    Timeline,
    cumulative_rate,
    instantaneous_rate,
    overhead_report,
    run_timeline,
)
from .tracking import (
    CandidatePair,
    SearchGrid,
    TrackingObservables,
    measure_observables,
    r_from_eta,
    select_by_training,
    two_dim_search,
)
from .wavefield import (
    LinkGeometry,
    ap_ris_channel,
    path_loss_linear,
    steering_vector,
    wrap_principal,
    wrap_two_pi,
)

__version__ = "0.1.0"

__all__ = [
    "CandidatePair",
    "ChannelState",
    "CoherentGain",
    "ConfigError",
    "ExhaustivePolicy",
    "LinkGeometry",
    "OraclePolicy",
    "ProposedPolicy",
    "RisConfiguration",
    "RunMetrics",
    "RunResult",
    "ScenarioConfig",
    "SearchGrid",
    "SlotKind",
    "SlotRecord",
    "SweepSpec",
    "Timeline",
    "TrackingObservables",
    "Trajectory",
    "TrajectorySpec",
    "ap_ris_channel",
    "coherent_gain",
    "coherent_gain_values",
    "cumulative_rate",
    "evolve_channel",
    "exhaustive_sweep",
    "follow_on_spec",
    "generate_path",
    "generate_trajectory",
    "instantaneous_rate",
    "load_config",
    "measure_observables",
    "optimal_config",
    "oracle_config",
    "overhead_report",
    "path_loss_linear",
    "quantize_config",
    "r2_at",
    "r_from_eta",
    "received_sample",
    "received_samples",
    "run_scenario",
    "run_sweep",
    "run_timeline",
    "select_by_training",
    "slot_count",
    "steering_vector",
    "theta2_at",
    "two_dim_search",
    "update_config",
    "wrap_principal",
    "wrap_two_pi",
]
