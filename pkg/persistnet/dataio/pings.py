"""
Bluetooth proximity pings: reading, filtering and synthesis.

The ping CSV has the header ``timestamp,user_a,user_b,rssi`` (the public Copenhagen
``bt_symmetric.csv`` writes it as ``# timestamp, user_a, user_b, rssi``). Negative ``user_b``
values mark empty scans or devices outside the study.
"""

from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..config.logging_config import get_logger
from ..errors import DataError, ParameterError
from ..network.graph import Graph

logger = get_logger("dataio.pings")

PING_COLUMNS = ["timestamp", "user_a", "user_b", "rssi"]
DEFAULT_RSSI_THRESHOLD = -75

COPENHAGEN_CITATION = (
    "Sapiezynski, P., Stopczynski, A., Lassen, D.D. and Lehmann, S. Interaction data from the "
    "Copenhagen Networks Study. Scientific Data 6, 315 (2019). The Bluetooth file "
    "bt_symmetric.csv is distributed through figshare; download it and pass its local path."
)


class PingRecord(NamedTuple):
    timestamp: int
    user_a: int
    user_b: int
    rssi: int


def _normalise_header(name: str) -> str:
    return name.strip().lstrip("#").strip().lower()


def read_pings(
    path: Union[str, Path], rssi_threshold: Optional[float] = DEFAULT_RSSI_THRESHOLD
) -> pd.DataFrame:
    """Read a ping CSV into a frame of contact pings with ``rssi >= rssi_threshold``.

    Malformed lines are counted and logged; sentinel and self pings are dropped. A threshold of
    ``None`` keeps every contact ping.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"Ping file not found: {path}")

    bad_lines: List[List[str]] = []

    def _skip(line: List[str]) -> None:
        bad_lines.append(line)
        return None

    try:
        frame = pd.read_csv(
            path, dtype=str, engine="python", skipinitialspace=True, on_bad_lines=_skip
        )
    except pd.errors.EmptyDataError as e:
        raise DataError(f"{path}: missing header {','.join(PING_COLUMNS)}") from e

    frame = frame.rename(columns=_normalise_header)
    missing = [column for column in PING_COLUMNS if column not in frame.columns]
    if missing:
        raise DataError(f"{path}: missing header columns {missing}")
    if frame.empty and not bad_lines:
        return filter_pings(pings_frame([]), rssi_threshold, str(path))

    numeric = frame[PING_COLUMNS].apply(pd.to_numeric, errors="coerce")
    malformed = numeric.isna().any(axis=1) | (numeric.round() != numeric).any(axis=1)
    malformed_count = int(malformed.sum()) + len(bad_lines)
    if malformed_count:
        logger.warning(f"{path}: skipped {malformed_count} malformed lines")
    return filter_pings(numeric[~malformed].astype(np.int64), rssi_threshold, str(path))


def filter_pings(
    pings: pd.DataFrame,
    rssi_threshold: Optional[float] = DEFAULT_RSSI_THRESHOLD,
    source: str = "<pings>",
) -> pd.DataFrame:
    """Drop sentinel and self pings, then keep ``rssi >= rssi_threshold``."""
    a, b = pings["user_a"], pings["user_b"]
    contacts = pings[(a >= 0) & (b >= 0) & (a != b)]
    sentinels = len(pings) - len(contacts)
    if rssi_threshold is not None:
        contacts = contacts[contacts["rssi"] >= rssi_threshold]
    logger.info(
        f"{source}: {len(pings)} pings, {sentinels} sentinel/self rows dropped, "
        f"{len(contacts)} contacts kept"
    )
    return contacts[PING_COLUMNS].reset_index(drop=True)


def load_pings(
    path: Union[str, Path], rssi_threshold: Optional[float] = DEFAULT_RSSI_THRESHOLD
) -> List[PingRecord]:
    """Retained contact pings as records."""
    frame = read_pings(path, rssi_threshold)
    return [PingRecord(*map(int, row)) for row in frame[PING_COLUMNS].itertuples(index=False)]


def pings_frame(pings: Union[pd.DataFrame, Sequence[PingRecord]]) -> pd.DataFrame:
    if isinstance(pings, pd.DataFrame):
        return pings[PING_COLUMNS]
    return pd.DataFrame(list(pings), columns=PING_COLUMNS, dtype=np.int64)


def save_pings(pings: Union[pd.DataFrame, Sequence[PingRecord]], path: Union[str, Path]) -> None:
    pings_frame(pings).to_csv(path, index=False, lineterminator="\n")


def synthesize_pings(
    snapshots: Sequence[Graph],
    period_length: int,
    rng: np.random.Generator,
    node_ids: Optional[Sequence[int]] = None,
    pings_per_edge: int = 1,
    strong_rssi: Sequence[int] = (-75, -40),
    weak_pings: int = 0,
    empty_scans: int = 0,
    rssi_threshold: int = DEFAULT_RSSI_THRESHOLD,
) -> pd.DataFrame:
    """Render each snapshot as one period of pings.

    Every edge of snapshot t gets ``pings_per_edge`` strong pings inside [tL, (t+1)L). Weak
    pings below ``rssi_threshold`` and empty-scan sentinel rows are sprinkled in as noise. The
    first strong ping of the first non-empty snapshot is pinned to the start of its period so
    that period boundaries survive the round trip.
    """
    if period_length < 1:
        raise ParameterError(f"period_length must be positive, got {period_length}")
    if pings_per_edge < 1:
        raise ParameterError(f"pings_per_edge must be positive, got {pings_per_edge}")
    if not snapshots:
        raise ParameterError("No snapshots to render")
    n = snapshots[0].node_count
    ids = np.arange(n) if node_ids is None else np.asarray(node_ids, dtype=np.int64)
    low, high = strong_rssi

    chunks = []
    pinned = False
    for t, graph in enumerate(snapshots):
        if graph.edge_count == 0:
            continue
        pairs = np.repeat(np.asarray(graph.sorted_edges(), dtype=np.int64), pings_per_edge, axis=0)
        times = t * period_length + rng.integers(0, period_length, size=len(pairs))
        if not pinned:
            times[0] = t * period_length
            pinned = True
        flip = rng.random(len(pairs)) < 0.5
        a = np.where(flip, pairs[:, 1], pairs[:, 0])
        b = np.where(flip, pairs[:, 0], pairs[:, 1])
        rssi = rng.integers(low, high + 1, size=len(pairs))
        chunks.append(
            pd.DataFrame({"timestamp": times, "user_a": ids[a], "user_b": ids[b], "rssi": rssi})
        )

    span = len(snapshots) * period_length
    if weak_pings:
        a = rng.integers(0, n, size=weak_pings)
        b = (a + rng.integers(1, max(n, 2), size=weak_pings)) % n
        chunks.append(
            pd.DataFrame(
                {
                    "timestamp": rng.integers(0, span, size=weak_pings),
                    "user_a": ids[a],
                    "user_b": ids[b],
                    "rssi": rng.integers(-100, rssi_threshold, size=weak_pings),
                }
            )
        )
    if empty_scans:
        chunks.append(
            pd.DataFrame(
                {
                    "timestamp": rng.integers(0, span, size=empty_scans),
                    "user_a": ids[rng.integers(0, n, size=empty_scans)],
                    "user_b": -1,
                    "rssi": 0,
                }
            )
        )
    if not chunks:
        return pd.DataFrame({column: pd.Series(dtype=np.int64) for column in PING_COLUMNS})
    frame = pd.concat(chunks, ignore_index=True)
    return frame.sort_values(PING_COLUMNS, kind="mergesort").reset_index(drop=True)[PING_COLUMNS]
