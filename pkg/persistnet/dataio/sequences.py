"""
Period contact networks built from pings, and their persistence fits.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Hashable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..config.logging_config import get_logger
from ..errors import DataError, EstimationError, ParameterError
from ..estimate.estimators import fit_beta, v1, z1
from ..network.formats import load_temporal_edge_list, save_temporal_edge_list
from ..network.graph import Graph
from ..network.persistence import ModelKind, PersistenceModel
from .pings import PING_COLUMNS, PingRecord, pings_frame

logger = get_logger("dataio.sequences")

DAY = 86400
WEEK = 7


@dataclass
class NetworkSequence:
    """Graphs over one shared node map, each labelled with its period index."""
    node_map: Dict[Hashable, int]
    graphs: List[Graph]
    labels: List[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = list(range(len(self.graphs)))
        if len(self.labels) != len(self.graphs):
            raise DataError("Every graph needs exactly one period label")
        if sorted(self.node_map.values()) != list(range(len(self.node_map))):
            raise DataError("Node map must be a bijection onto 0..N-1")
        for graph in self.graphs:
            if graph.node_count != len(self.node_map):
                raise DataError("Every graph must span the whole node map")

    @property
    def node_count(self) -> int:
        return len(self.node_map)

    @property
    def node_ids(self) -> List[Hashable]:
        ids: List[Hashable] = [None] * len(self.node_map)
        for external, index in self.node_map.items():
            ids[index] = external
        return ids

    def __len__(self) -> int:
        return len(self.graphs)

    def __getitem__(self, index: int) -> Graph:
        return self.graphs[index]


def build_period_networks(
    pings: Union[pd.DataFrame, Sequence[PingRecord]],
    period_length: int = DAY,
    n_periods: Optional[int] = None,
    roster: Optional[Sequence[Hashable]] = None,
    origin: Optional[int] = None,
) -> NetworkSequence:
    """One graph per period: (i, j) is an edge of period p iff i and j pinged in [pL, (p+1)L).

    Period 0 starts at ``origin`` (default: the earliest ping). Nodes are every user seen in
    ``pings``, indexed by first appearance in (timestamp, user_a, user_b) order, unless a
    ``roster`` pins the node set and order.
    """
    if period_length < 1:
        raise ParameterError(f"period_length must be positive, got {period_length}")
    frame = pings_frame(pings).sort_values(PING_COLUMNS, kind="mergesort")

    if roster is not None:
        ids = pd.Index(list(roster))
        if not ids.is_unique:
            raise DataError("Roster contains duplicate ids")
        inside = frame["user_a"].isin(ids) & frame["user_b"].isin(ids)
        if not inside.all():
            outside = int((~inside).sum())
            logger.warning(f"Dropped {outside} pings involving users outside the roster")
        frame = frame[inside]
    else:
        ids = pd.Index(pd.unique(frame[["user_a", "user_b"]].to_numpy().ravel()))
    if len(ids) == 0:
        raise DataError("No users in the retained pings")

    start = int(frame["timestamp"].min()) if origin is None and len(frame) else int(origin or 0)
    period = ((frame["timestamp"].to_numpy() - start) // period_length).astype(np.int64)
    if n_periods is None:
        n_periods = int(period.max()) + 1 if period.size else 1
    if n_periods < 1:
        raise ParameterError(f"n_periods must be positive, got {n_periods}")
    in_range = (period >= 0) & (period < n_periods)
    if not in_range.all():
        logger.warning(f"Dropped {int((~in_range).sum())} pings outside the {n_periods} periods")

    a = ids.get_indexer(frame["user_a"])[in_range]
    b = ids.get_indexer(frame["user_b"])[in_range]
    period = period[in_range]
    edges = pd.DataFrame({"p": period, "u": np.minimum(a, b), "v": np.maximum(a, b)})
    edges = edges.drop_duplicates()

    graphs = [Graph.empty(len(ids)) for _ in range(n_periods)]
    for p, group in edges.groupby("p"):
        graphs[int(p)] = Graph(len(ids), frozenset(zip(group["u"].tolist(), group["v"].tolist())))

    node_map = {_plain(external): index for index, external in enumerate(ids)}
    logger.info(
        f"Built {n_periods} period networks on {len(ids)} nodes; "
        f"edges per period: {[g.edge_count for g in graphs]}"
    )
    return NetworkSequence(node_map, graphs, list(range(n_periods)))


def _plain(value: Hashable) -> Hashable:
    return value.item() if isinstance(value, np.generic) else value


def union_networks(seq: NetworkSequence, group_size: int) -> NetworkSequence:
    """Merge consecutive groups of ``group_size`` graphs by edge union."""
    if group_size < 1:
        raise ParameterError(f"group_size must be positive, got {group_size}")
    if len(seq) % group_size:
        raise ParameterError(
            f"{len(seq)} periods do not split into groups of {group_size}; trailing partial group"
        )
    graphs = []
    for start in range(0, len(seq), group_size):
        edges = frozenset().union(*(g.edges for g in seq.graphs[start : start + group_size]))
        graphs.append(Graph(seq.node_count, edges))
    return NetworkSequence(dict(seq.node_map), graphs, list(range(len(graphs))))


def fit_from_sequence(
    seq: Union[NetworkSequence, Sequence[Graph]],
    model_kind: Union[ModelKind, str],
    window: Optional[int] = None,
) -> PersistenceModel:
    """Fit a persistence model from the survival of the first graph's edges.

    Model 1 takes p = |E1 n E2| / |E1|; Models 2 and 3 match the Beta moments to that ratio and
    |E1 n E2 n E3| / |E1|. ``window`` is carried into the fitted Model 2/3 (None keeps the draws
    for the whole run).
    """
    kind = ModelKind(model_kind)
    graphs = seq.graphs if isinstance(seq, NetworkSequence) else list(seq)
    if kind is ModelKind.MODEL0:
        return PersistenceModel.model0()
    if kind is ModelKind.MODEL1:
        if len(graphs) < 2:
            raise EstimationError("Fitting m1 needs at least 2 graphs")
        model = PersistenceModel.model1(z1(graphs))
    else:
        if len(graphs) < 3:
            raise EstimationError(f"Fitting {kind.value} needs at least 3 graphs")
        w = fit_beta(kind, z1(graphs), v1(graphs))
        model = PersistenceModel(kind, w=w, window=window)
    logger.info(f"Fitted {model.label}")
    return model


def _parse_id(value: str) -> Hashable:
    try:
        return int(value)
    except ValueError:
        return value


def save_sequence(seq: NetworkSequence, path: Union[str, Path]) -> None:
    save_temporal_edge_list(seq.graphs, path, node_ids=seq.node_ids, labels=seq.labels)


def load_sequence(path: Union[str, Path]) -> NetworkSequence:
    """Read a temporal edge list; ids default to 0..N-1 when the file carries none."""
    snapshots, node_ids, labels = load_temporal_edge_list(path)
    n = snapshots[0].node_count
    if node_ids is None:
        node_map: Dict[Hashable, int] = {i: i for i in range(n)}
    else:
        if len(node_ids) != n:
            raise DataError(f"{path}: {len(node_ids)} node ids for {n} nodes")
        node_map = {_parse_id(external): index for index, external in enumerate(node_ids)}
    return NetworkSequence(node_map, snapshots, labels or [])
