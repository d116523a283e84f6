"""Typed epistemic state graph: claims, partial answers, and open questions.

Nodes carry an attribute vector and a confidence weight in (0, 1]; edges are
typed (Supports / Requires / Contradicts) and weighted. The graph enforces
endpoint typing on insertion and exposes the consistency predicate used by
consolidation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from .errors import (
    CapacityExceeded,
    DuplicateEdge,
    DimensionMismatch,
    EdgeTypeViolation,
    InvalidConfidence,
    InvalidWeight,
    UnknownNode,
    WrongNodeKind,
)


class NodeKind(Enum):
    CLAIM = "claim"
    PARTIAL_ANSWER = "partial_answer"
    OPEN_QUESTION = "open_question"


class EdgeType(Enum):
    SUPPORTS = "supports"
    REQUIRES = "requires"
    CONTRADICTS = "contradicts"


# Canonical ordering of node kinds used for embedding slot assignment.
KIND_RANK = {
    NodeKind.CLAIM: 0,
    NodeKind.PARTIAL_ANSWER: 1,
    NodeKind.OPEN_QUESTION: 2,
}


@dataclass(frozen=True, eq=False)
class Node:
    id: int
    kind: NodeKind
    attr: np.ndarray
    confidence: float
    provenance: str = ""


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    kind: EdgeType
    weight: float


def edge_typing_ok(
    kind: EdgeType,
    src_kind: NodeKind,
    dst_kind: NodeKind,
    allow_resolved_requires: bool = False,
) -> bool:
    """Endpoint typing rules.

    Supports runs Claim -> {Claim, PartialAnswer}; Requires runs
    {Claim, PartialAnswer} -> OpenQuestion; Contradicts joins Claims only.
    With ``allow_resolved_requires`` a Requires edge may point at a
    PartialAnswer: promotion retains incoming Requires edges, so a
    previously valid edge can end at a resolved target.
    """
    if kind is EdgeType.SUPPORTS:
        return src_kind is NodeKind.CLAIM and dst_kind in (
            NodeKind.CLAIM,
            NodeKind.PARTIAL_ANSWER,
        )
    if kind is EdgeType.REQUIRES:
        dst_ok = dst_kind is NodeKind.OPEN_QUESTION or (
            allow_resolved_requires and dst_kind is NodeKind.PARTIAL_ANSWER
        )
        return src_kind in (NodeKind.CLAIM, NodeKind.PARTIAL_ANSWER) and dst_ok
    return src_kind is NodeKind.CLAIM and dst_kind is NodeKind.CLAIM


def _check_confidence(confidence: float) -> float:
    c = float(confidence)
    if not (0.0 < c <= 1.0) or not np.isfinite(c):
        raise InvalidConfidence(f"confidence {confidence!r} not in (0, 1]")
    return c


def _check_weight(weight: float) -> float:
    w = float(weight)
    if not (0.0 < w <= 1.0) or not np.isfinite(w):
        raise InvalidWeight(f"weight {weight!r} not in (0, 1]")
    return w


class EpistemicStateGraph:
    """Bounded-capacity graph over typed, confidence-weighted nodes.

    Node ids come from a per-graph monotone counter and are never reused,
    which gives embedding slot assignment a stable tiebreak. Contradicts
    edges are symmetric and stored once with ``src < dst``.
    """

    def __init__(self, k: int, n_max: int):
        if k < 1:
            raise ValueError("attribute dimension k must be >= 1")
        if n_max < 1:
            raise ValueError("capacity n_max must be >= 1")
        self._k = int(k)
        self._n_max = int(n_max)
        self._nodes: dict[int, Node] = {}
        self._edges: dict[tuple[int, int, EdgeType], float] = {}
        self._next_id = 0

    # -- introspection ----------------------------------------------------

    @property
    def k(self) -> int:
        return self._k

    @property
    def n_max(self) -> int:
        return self._n_max

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def next_id(self) -> int:
        """Next id the counter would assign (ids below it are spent)."""
        return self._next_id

    def has_node(self, node_id: int) -> bool:
        return node_id in self._nodes

    def node(self, node_id: int) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNode(f"no node with id {node_id}") from None

    def nodes(self) -> list[Node]:
        """All nodes in ascending id order."""
        return [self._nodes[i] for i in sorted(self._nodes)]

    def nodes_canonical(self) -> list[Node]:
        """Nodes in canonical order: kind rank, then ascending id."""
        return sorted(self._nodes.values(), key=lambda n: (KIND_RANK[n.kind], n.id))

    def nodes_of_kind(self, kind: NodeKind) -> list[Node]:
        return [n for n in self.nodes() if n.kind is kind]

    def edges(self) -> list[Edge]:
        """All edges sorted by (src, dst, kind)."""
        keys = sorted(self._edges, key=lambda key: (key[0], key[1], key[2].value))
        return [Edge(s, d, t, self._edges[(s, d, t)]) for s, d, t in keys]

    def has_edge(self, src: int, dst: int, kind: EdgeType) -> bool:
        return self._edge_key(src, dst, kind) in self._edges

    def edge_weight(self, src: int, dst: int, kind: EdgeType) -> float:
        key = self._edge_key(src, dst, kind)
        try:
            return self._edges[key]
        except KeyError:
            raise UnknownNode(f"no {kind.value} edge {src}->{dst}") from None

    # -- mutation ---------------------------------------------------------

    def add_node(
        self,
        kind: NodeKind,
        attr,
        confidence: float,
        provenance: str = "",
    ) -> int:
        """Insert a node and return its id."""
        if len(self._nodes) >= self._n_max:
            raise CapacityExceeded(f"graph already holds n_max={self._n_max} nodes")
        node_id = self._next_id
        self._insert_node(node_id, kind, attr, confidence, provenance)
        self._next_id = node_id + 1
        return node_id

    def add_claim(self, attr, confidence: float, provenance: str = "") -> int:
        return self.add_node(NodeKind.CLAIM, attr, confidence, provenance)

    def add_partial_answer(self, attr, confidence: float, provenance: str = "") -> int:
        return self.add_node(NodeKind.PARTIAL_ANSWER, attr, confidence, provenance)

    def add_open_question(self, attr, confidence: float, provenance: str = "") -> int:
        return self.add_node(NodeKind.OPEN_QUESTION, attr, confidence, provenance)

    def add_edge(self, src: int, dst: int, kind: EdgeType, weight: float) -> None:
        """Insert a typed edge; Contradicts edges are canonicalised src < dst."""
        w = _check_weight(weight)
        if src == dst:
            raise EdgeTypeViolation(f"self edge on node {src}")
        src_node = self.node(src)
        dst_node = self.node(dst)
        if not edge_typing_ok(kind, src_node.kind, dst_node.kind):
            raise EdgeTypeViolation(
                f"{kind.value} edge {src_node.kind.value}->{dst_node.kind.value} "
                "is not allowed"
            )
        key = self._edge_key(src, dst, kind)
        if key in self._edges:
            raise DuplicateEdge(f"edge {key[0]}->{key[1]} ({kind.value}) already present")
        self._edges[key] = w

    def promote_open_question(self, q: int, attr, confidence: float) -> None:
        """Resolve an open question in place, turning it into a partial answer.

        Incoming Requires edges are retained: the dependency's provenance is
        part of the audit trail, and typing treats a Requires edge into a
        resolved target as satisfied.
        """
        node = self.node(q)
        if node.kind is not NodeKind.OPEN_QUESTION:
            raise WrongNodeKind(f"node {q} is {node.kind.value}, not open_question")
        self._insert_node(q, NodeKind.PARTIAL_ANSWER, attr, confidence, node.provenance)

    # -- queries ----------------------------------------------------------

    def is_consistent(self, delta: float = 0.5) -> bool:
        """True iff no Contradicts edge joins two nodes both above ``delta``."""
        if not (0.0 < delta < 1.0):
            raise ValueError("delta must lie in (0, 1)")
        for (src, dst, kind) in self._edges:
            if kind is not EdgeType.CONTRADICTS:
                continue
            if self._nodes[src].confidence > delta and self._nodes[dst].confidence > delta:
                return False
        return True

    def contradiction_pairs(self) -> list[tuple[int, int, float]]:
        """All Contradicts edges as (src, dst, weight), sorted by (src, dst)."""
        pairs = [
            (src, dst, w)
            for (src, dst, kind), w in self._edges.items()
            if kind is EdgeType.CONTRADICTS
        ]
        pairs.sort(key=lambda item: (item[0], item[1]))
        return pairs

    def copy(self) -> "EpistemicStateGraph":
        dup = EpistemicStateGraph(self._k, self._n_max)
        dup._nodes = {
            i: Node(n.id, n.kind, n.attr.copy(), n.confidence, n.provenance)
            for i, n in self._nodes.items()
        }
        dup._edges = dict(self._edges)
        dup._next_id = self._next_id
        return dup

    def validate(self) -> None:
        """Raise if any structural invariant is violated."""
        if len(self._nodes) > self._n_max:
            raise CapacityExceeded("node count exceeds n_max")
        for node in self._nodes.values():
            _check_confidence(node.confidence)
            if node.attr.shape != (self._k,):
                raise DimensionMismatch(
                    f"node {node.id} attr has shape {node.attr.shape}, expected ({self._k},)"
                )
        for (src, dst, kind), w in self._edges.items():
            _check_weight(w)
            if src not in self._nodes or dst not in self._nodes:
                raise UnknownNode(f"edge {src}->{dst} references a missing node")
            if not edge_typing_ok(
                kind,
                self._nodes[src].kind,
                self._nodes[dst].kind,
                allow_resolved_requires=True,
            ):
                raise EdgeTypeViolation(f"edge {src}->{dst} ({kind.value}) is mistyped")
            if kind is EdgeType.CONTRADICTS and src >= dst:
                raise EdgeTypeViolation("contradicts edge stored out of canonical order")

    # -- serialisation ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "k": self._k,
            "n_max": self._n_max,
            "nodes": [
                {
                    "id": n.id,
                    "kind": n.kind.value,
                    "attr": [float(x) for x in n.attr],
                    "confidence": n.confidence,
                    "provenance": n.provenance,
                }
                for n in self.nodes()
            ],
            "edges": [
                {"src": e.src, "dst": e.dst, "kind": e.kind.value, "weight": e.weight}
                for e in self.edges()
            ],
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "EpistemicStateGraph":
        graph = cls(int(doc["k"]), int(doc["n_max"]))
        for entry in doc["nodes"]:
            if len(graph._nodes) >= graph._n_max:
                raise CapacityExceeded("more nodes than n_max in document")
            graph._insert_node(
                int(entry["id"]),
                NodeKind(entry["kind"]),
                entry["attr"],
                entry["confidence"],
                str(entry.get("provenance", "")),
            )
        graph._next_id = max(graph._nodes, default=-1) + 1
        for entry in doc["edges"]:
            graph.add_edge(
                int(entry["src"]),
                int(entry["dst"]),
                EdgeType(entry["kind"]),
                entry["weight"],
            )
        return graph

    @classmethod
    def from_json(cls, text: str) -> "EpistemicStateGraph":
        return cls.from_json_dict(json.loads(text))

    # -- internals --------------------------------------------------------

    @staticmethod
    def _edge_key(src: int, dst: int, kind: EdgeType) -> tuple[int, int, EdgeType]:
        if kind is EdgeType.CONTRADICTS and src > dst:
            src, dst = dst, src
        return (src, dst, kind)

    def _insert_node(
        self, node_id: int, kind: NodeKind, attr, confidence: float, provenance: str
    ) -> None:
        c = _check_confidence(confidence)
        vec = np.asarray(attr, dtype=float)
        if vec.shape != (self._k,):
            raise DimensionMismatch(
                f"attr has shape {vec.shape}, expected ({self._k},)"
            )
        self._nodes[node_id] = Node(node_id, kind, vec.copy(), c, provenance)
