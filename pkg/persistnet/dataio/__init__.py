from .pings import (
    COPENHAGEN_CITATION,
    DEFAULT_RSSI_THRESHOLD,
    PING_COLUMNS,
    PingRecord,
    filter_pings,
    load_pings,
    pings_frame,
    read_pings,
    save_pings,
    synthesize_pings,
)
from .sequences import (
    DAY,
    WEEK,
    NetworkSequence,
    build_period_networks,
    fit_from_sequence,
    load_sequence,
    save_sequence,
    union_networks,
)

__all__ = [
    "COPENHAGEN_CITATION",
    "DEFAULT_RSSI_THRESHOLD",
    "PING_COLUMNS",
    "PingRecord",
    "filter_pings",
    "load_pings",
    "pings_frame",
    "read_pings",
    "save_pings",
    "synthesize_pings",
    "DAY",
    "WEEK",
    "NetworkSequence",
    "build_period_networks",
    "fit_from_sequence",
    "load_sequence",
    "save_sequence",
    "union_networks",
]
