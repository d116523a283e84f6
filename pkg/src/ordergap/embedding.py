"""Fixed-dimension Euclidean embedding of epistemic state graphs.

The vector layout is a node block of ``(k+1) * n_max`` coordinates (per slot:
attribute vector then confidence, empty slots zero) followed by a flattened
adjacency tensor of ``n_max**2 * 3`` edge weights. Slot assignment follows the
canonical node order (kind rank, then ascending id) at embed time and is then
frozen: operators update coordinates in place and never reshuffle slots, so
trajectories stay continuous.

Node kind and provenance are discrete and cannot be recovered from the real
vector, so :class:`EmbeddedState` carries a per-slot metadata table next to
the coordinates. Distances, operators' numerics, and all linear-algebra
analysis use the coordinate vector only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CapacityExceeded, ConfigMismatch, DimensionMismatch, DuplicateEdge
from .graph import EdgeType, EpistemicStateGraph, NodeKind

EDGE_TYPE_ORDER = (EdgeType.SUPPORTS, EdgeType.REQUIRES, EdgeType.CONTRADICTS)
EDGE_TYPE_INDEX = {kind: i for i, kind in enumerate(EDGE_TYPE_ORDER)}

DEFAULT_PRESENCE_EPS = 1e-9


@dataclass(frozen=True)
class EmbeddingConfig:
    """Shape of the embedded space for a given capacity and attribute size."""

    n_max: int
    k: int
    edge_type_count: int = 3

    def __post_init__(self):
        if self.n_max < 1 or self.k < 1:
            raise ValueError("n_max and k must be >= 1")
        if self.edge_type_count != len(EDGE_TYPE_ORDER):
            raise ValueError("edge_type_count is fixed by the edge type set")

    @property
    def node_block(self) -> int:
        return (self.k + 1) * self.n_max

    @property
    def dim(self) -> int:
        return self.node_block + self.n_max * self.n_max * self.edge_type_count

    def slot_start(self, slot: int) -> int:
        return slot * (self.k + 1)

    def conf_index(self, slot: int) -> int:
        return slot * (self.k + 1) + self.k

    def attr_slice(self, slot: int) -> slice:
        start = self.slot_start(slot)
        return slice(start, start + self.k)

    def adj_index(self, src_slot: int, dst_slot: int, kind: EdgeType) -> int:
        return (
            self.node_block
            + src_slot * self.n_max * self.edge_type_count
            + dst_slot * self.edge_type_count
            + EDGE_TYPE_INDEX[kind]
        )


@dataclass(frozen=True)
class SlotInfo:
    """Discrete identity of the node occupying a slot."""

    node_id: int
    kind: NodeKind
    provenance: str = ""


@dataclass(frozen=True, eq=False)
class EmbeddedState:
    """Coordinate vector plus the slot metadata needed to decode it."""

    theta: np.ndarray
    config: EmbeddingConfig
    slots: tuple[Optional[SlotInfo], ...] = field(default=())
    next_id: int = 0

    def __post_init__(self):
        vec = np.array(self.theta, dtype=float)
        if vec.shape != (self.config.dim,):
            raise DimensionMismatch(
                f"state vector has shape {vec.shape}, expected ({self.config.dim},)"
            )
        object.__setattr__(self, "theta", vec)
        slots = self.slots if self.slots else (None,) * self.config.n_max
        if len(slots) != self.config.n_max:
            raise DimensionMismatch(
                f"slot table has {len(slots)} entries, expected {self.config.n_max}"
            )
        object.__setattr__(self, "slots", tuple(slots))

    @property
    def dim(self) -> int:
        return self.config.dim

    def as_vector(self) -> np.ndarray:
        return self.theta

    def with_theta(self, theta) -> "EmbeddedState":
        return EmbeddedState(theta, self.config, self.slots, self.next_id)

    # Generic state protocol used by the loop and spectral machinery.
    with_vector = with_theta

    def slot_of(self, node_id: int) -> Optional[int]:
        for i, info in enumerate(self.slots):
            if info is not None and info.node_id == node_id:
                return i
        return None

    def to_json_dict(self) -> dict:
        return {
            "config": {
                "n_max": self.config.n_max,
                "k": self.config.k,
                "edge_type_count": self.config.edge_type_count,
            },
            "theta": [float(x) for x in self.theta],
            "slots": [
                None
                if info is None
                else {
                    "id": info.node_id,
                    "kind": info.kind.value,
                    "provenance": info.provenance,
                }
                for info in self.slots
            ],
            "next_id": self.next_id,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "EmbeddedState":
        cfg = EmbeddingConfig(
            n_max=int(doc["config"]["n_max"]),
            k=int(doc["config"]["k"]),
            edge_type_count=int(doc["config"].get("edge_type_count", 3)),
        )
        slots = tuple(
            None
            if entry is None
            else SlotInfo(int(entry["id"]), NodeKind(entry["kind"]), entry.get("provenance", ""))
            for entry in doc["slots"]
        )
        return cls(np.asarray(doc["theta"], dtype=float), cfg, slots, int(doc["next_id"]))


def embed(graph: EpistemicStateGraph, config: Optional[EmbeddingConfig] = None) -> EmbeddedState:
    """Embed a graph, assigning slots in canonical order.

    Claims come first by ascending id, then partial answers, then open
    questions; remaining slots are zero (confidence 0 marks absence, which
    lies outside the valid (0, 1] range of real nodes).
    """
    if config is None:
        config = EmbeddingConfig(n_max=graph.n_max, k=graph.k)
    if graph.k != config.k:
        raise DimensionMismatch(
            f"graph attribute dimension {graph.k} != configured k {config.k}"
        )
    if graph.node_count > config.n_max:
        raise CapacityExceeded(
            f"graph holds {graph.node_count} nodes, capacity is {config.n_max}"
        )

    theta = np.zeros(config.dim)
    slots: list[Optional[SlotInfo]] = [None] * config.n_max
    slot_of: dict[int, int] = {}
    for slot, node in enumerate(graph.nodes_canonical()):
        theta[config.attr_slice(slot)] = node.attr
        theta[config.conf_index(slot)] = node.confidence
        slots[slot] = SlotInfo(node.id, node.kind, node.provenance)
        slot_of[node.id] = slot
    for edge in graph.edges():
        idx = config.adj_index(slot_of[edge.src], slot_of[edge.dst], edge.kind)
        theta[idx] = edge.weight
    return EmbeddedState(theta, config, tuple(slots), graph.next_id)


def decode(
    state: EmbeddedState, presence_eps: float = DEFAULT_PRESENCE_EPS
) -> EpistemicStateGraph:
    """Reconstruct a graph from an embedded state.

    A slot contributes a node iff its confidence coordinate exceeds
    ``presence_eps``; adjacency entries above the threshold become edges.
    Confidences and weights are clipped to 1 so that slightly-out-of-range
    coordinates (e.g. finite-difference probes) still decode. Entries that
    would produce a mistyped or duplicate edge are skipped: decode is an
    inspection tool and never fabricates an invalid graph.
    """
    cfg = state.config
    graph = EpistemicStateGraph(cfg.k, cfg.n_max)
    node_of_slot: dict[int, int] = {}
    fresh = max(
        (info.node_id for info in state.slots if info is not None),
        default=-1,
    ) + 1
    for slot in range(cfg.n_max):
        conf = float(state.theta[cfg.conf_index(slot)])
        if conf <= presence_eps:
            continue
        info = state.slots[slot]
        if info is None:
            info = SlotInfo(fresh, NodeKind.CLAIM, "")
            fresh += 1
        graph._insert_node(
            info.node_id,
            info.kind,
            state.theta[cfg.attr_slice(slot)],
            min(conf, 1.0),
            info.provenance,
        )
        node_of_slot[slot] = info.node_id
    graph._next_id = max(max(node_of_slot.values(), default=-1) + 1, state.next_id)

    for src_slot in sorted(node_of_slot):
        for dst_slot in sorted(node_of_slot):
            if src_slot == dst_slot:
                continue
            for kind in EDGE_TYPE_ORDER:
                w = float(state.theta[cfg.adj_index(src_slot, dst_slot, kind)])
                if w <= presence_eps:
                    continue
                try:
                    graph.add_edge(
                        node_of_slot[src_slot],
                        node_of_slot[dst_slot],
                        kind,
                        min(w, 1.0),
                    )
                except (DuplicateEdge, EdgeTypeViolation):
                    pass
    return graph


def state_distance(a: EmbeddedState, b: EmbeddedState) -> float:
    """Euclidean distance between two states sharing a configuration."""
    if a.config != b.config:
        raise ConfigMismatch(f"configs differ: {a.config} vs {b.config}")
    return float(np.linalg.norm(a.theta - b.theta))
