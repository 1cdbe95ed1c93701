"""Dynamic communicators: simulation, metrics and event-log I/O.

Node labels are 1-based throughout; array index i holds label i + 1.
"""

from ._core import (
    ConfigError,
    EventLog,
    ExperimentSpec,
    ImportanceScheme,
    IncrementScope,
    IoError,
    SimulationConfig,
    __version__,
    cli,
    cross_group_fraction,
    group_ratio_series,
    node_scores,
    parse_config,
    parse_config_text,
    parse_event_log,
    read_event_log,
    response_probability,
    run,
    run_sweep,
    serialize_event_log,
    trigger_matrix,
)

__all__ = [
    "ConfigError",
    "EventLog",
    "ExperimentSpec",
    "ImportanceScheme",
    "IncrementScope",
    "IoError",
    "SimulationConfig",
    "__version__",
    "cli",
    "cross_group_fraction",
    "group_ratio_series",
    "node_scores",
    "parse_config",
    "parse_config_text",
    "parse_event_log",
    "read_event_log",
    "response_probability",
    "run",
    "run_sweep",
    "serialize_event_log",
    "trigger_matrix",
]
