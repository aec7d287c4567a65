from __future__ import annotations

import logging
from collections.abc import Iterable
from typing import Any, NamedTuple

import networkx as nx

from .atoms import AtomRegistry, builtin_registry
from .cuts import CutBindings, bind_cuts
from .exceptions import NextInterfaceMismatch, UnknownAtom
from .sorts import SortEngine, format_interface
from .terms import Atom, Next, Path, Term, Tilt

logger = logging.getLogger(__name__)

NORMAL = "normal"
CUT_SPATIAL = "cut-spatial"
CUT_PLANAR = "cut-planar"
EDGE_KINDS = (NORMAL, CUT_SPATIAL, CUT_PLANAR)
CUT_KINDS = (CUT_SPATIAL, CUT_PLANAR)

HEAL = "heal"
KEEP_CUTS = "keep-cuts"

# Atoms that exist only to mark a cut; healing removes them.
CUT_MARKERS = frozenset({"Up", "Down", "Set", "Off"})

Port = tuple[int, int]


class Edge(NamedTuple):
    source: int
    source_pin: int
    target: int
    target_pin: int
    kind: str = NORMAL

    def __str__(self) -> str:
        return f"{self.source}:{self.source_pin}->{self.target}:{self.target_pin}"


class Network:
    """Immutable nodal network over an ``nx.MultiDiGraph``.

    Nodes carry ``atom``, ``sort`` and an optional ``label``; edges carry the
    pins they connect and their ``kind``.
    """

    def __init__(self, graph: nx.MultiDiGraph, bindings: CutBindings | None = None) -> None:
        self._graph = nx.freeze(graph)
        self.bindings = bindings

    @property
    def graph(self) -> nx.MultiDiGraph:
        return self._graph

    def __len__(self) -> int:
        return self._graph.number_of_nodes()

    def nodes(self) -> list[int]:
        return sorted(self._graph.nodes)

    def atom(self, node: int) -> str:
        return self._graph.nodes[node]["atom"]

    def sort(self, node: int) -> str:
        return self._graph.nodes[node]["sort"]

    def label(self, node: int) -> str | None:
        return self._graph.nodes[node].get("label")

    def edges(self, kinds: Iterable[str] = EDGE_KINDS) -> list[Edge]:
        wanted = set(kinds)
        return sorted(
            Edge(u, data["src_pin"], v, data["dst_pin"], data["kind"])
            for u, v, data in self._graph.edges(data=True)
            if data["kind"] in wanted
        )

    def in_edges(self, node: int) -> list[Edge]:
        return sorted(
            (
                Edge(u, data["src_pin"], v, data["dst_pin"], data["kind"])
                for u, v, data in self._graph.in_edges(node, data=True)
            ),
            key=lambda edge: (edge.target_pin, edge),
        )

    def out_edges(self, node: int) -> list[Edge]:
        return sorted(
            (
                Edge(u, data["src_pin"], v, data["dst_pin"], data["kind"])
                for u, v, data in self._graph.out_edges(node, data=True)
            ),
            key=lambda edge: (edge.source_pin, edge),
        )

    def entries(self) -> list[int]:
        return [node for node in self.nodes() if self.atom(node) == "Entry"]

    def exits(self) -> list[int]:
        return [node for node in self.nodes() if self.atom(node) == "Exit"]

    def port_name(self, node: int, position: int) -> str:
        """``Entry.A`` style name, or ``Entry1`` / ``Exit2`` numbered top to bottom."""
        return self.label(node) or f"{self.atom(node)}{position + 1}"

    def counts(self) -> dict[str, int]:
        totals = dict.fromkeys(EDGE_KINDS, 0)
        for edge in self.edges():
            totals[edge.kind] += 1
        return totals

    def healed(self, kinds: Iterable[str] = CUT_KINDS) -> Network:
        """Replace every cut of the given kinds by a direct connection."""
        graph = nx.MultiDiGraph(self._graph)
        for edge in self.edges(kinds):
            _splice(graph, edge)
        return Network(graph, self.bindings)

    def contract_links(self) -> Network:
        """Drop Link nodes, joining their single predecessor to their single successor."""
        graph = nx.MultiDiGraph(self._graph)
        for node in self.nodes():
            if graph.nodes[node]["atom"] != "Link":
                continue
            incoming = list(graph.in_edges(node, keys=True, data=True))
            outgoing = list(graph.out_edges(node, keys=True, data=True))
            graph.remove_node(node)
            if len(incoming) != 1 or len(outgoing) != 1 or incoming[0][0] == node:
                continue
            u, _, _, into = incoming[0]
            _, v, _, out = outgoing[0]
            graph.add_edge(u, v, src_pin=into["src_pin"], dst_pin=out["dst_pin"], kind=NORMAL)
        return Network(graph, self.bindings)

    def is_isomorphic(self, other: Network, *, ignore_links: bool = False) -> bool:
        """Isomorphism preserving atoms, pin indices and edge kinds."""
        first, second = (self, other)
        if ignore_links:
            first, second = self.contract_links(), other.contract_links()
        return nx.is_isomorphic(
            first.graph,
            second.graph,
            node_match=lambda a, b: a["atom"] == b["atom"],
            edge_match=lambda a, b: _pin_multiset(a) == _pin_multiset(b),
        )

    def to_json(self) -> dict[str, Any]:
        nodes = []
        for node in self.nodes():
            payload: dict[str, Any] = {"id": node, "atom": self.atom(node), "sort": self.sort(node)}
            if self.label(node):
                payload["label"] = self.label(node)
            nodes.append(payload)
        edges = [
            {"from": [e.source, e.source_pin], "to": [e.target, e.target_pin], "kind": e.kind}
            for e in self.edges()
        ]
        return {"nodes": nodes, "edges": edges}

    @classmethod
    def from_json(cls, payload: dict[str, Any], registry: AtomRegistry | None = None) -> Network:
        registry = registry if registry is not None else builtin_registry()
        graph = nx.MultiDiGraph()
        for node in payload.get("nodes", []):
            name = node["atom"]
            if name not in registry:
                raise UnknownAtom(name)
            attrs = {"atom": name, "sort": node.get("sort") or registry[name].sort}
            if node.get("label"):
                attrs["label"] = node["label"]
            graph.add_node(int(node["id"]), **attrs)
        for edge in payload.get("edges", []):
            (u, p), (v, q) = edge["from"], edge["to"]
            kind = edge.get("kind", NORMAL)
            if kind not in EDGE_KINDS:
                raise ValueError(f"unknown edge kind {kind!r}")
            graph.add_edge(int(u), int(v), src_pin=int(p), dst_pin=int(q), kind=kind)
        return cls(graph)

    def to_dot(self) -> str:
        lines = ["digraph network {", "  rankdir=LR;", "  node [shape=box];"]
        for node in self.nodes():
            text = self.label(node)
            caption = f"{self.atom(node)}.{text}" if text else self.atom(node)
            lines.append(f'  n{node} [label="{caption}"];')
        for edge in self.edges():
            style = "" if edge.kind == NORMAL else f', style=dashed, label="{edge.kind}"'
            lines.append(
                f'  n{edge.source} -> n{edge.target} '
                f'[taillabel="{edge.source_pin}", headlabel="{edge.target_pin}"{style}];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def _pin_multiset(edges: dict[Any, dict[str, Any]]) -> list[tuple[int, int, str]]:
    return sorted((data["src_pin"], data["dst_pin"], data["kind"]) for data in edges.values())


def _only_edge(graph: nx.MultiDiGraph, edges: list) -> tuple | None:
    normal = [edge for edge in edges if edge[3]["kind"] == NORMAL]
    return normal[0] if normal else None


def _splice(graph: nx.MultiDiGraph, cut: Edge) -> None:
    tail, head = cut.source, cut.target
    for u, v, key, data in list(graph.edges(tail, keys=True, data=True)):
        if v == head and data["kind"] == cut.kind and data["src_pin"] == cut.source_pin:
            graph.remove_edge(u, v, key)
            break
    source: Port
    target: Port
    feeding = None
    leaving = None
    if graph.nodes[tail]["atom"] in CUT_MARKERS:
        feeding = _only_edge(graph, list(graph.in_edges(tail, keys=True, data=True)))
        if feeding is None:
            graph.remove_node(tail)
            return
        source = (feeding[0], feeding[3]["src_pin"])
    else:
        source = (tail, cut.source_pin)
    if graph.nodes[head]["atom"] in CUT_MARKERS:
        leaving = _only_edge(graph, list(graph.out_edges(head, keys=True, data=True)))
        if leaving is None:
            graph.remove_node(head)
            return
        target = (leaving[1], leaving[3]["dst_pin"])
    else:
        target = (head, cut.target_pin)
    if feeding is not None and leaving is not None and feeding[:3] == leaving[:3]:
        logger.debug("dropping cut-only loop %s", cut)
        graph.remove_nodes_from({tail, head})
        return
    for node in (tail, head):
        if graph.nodes[node]["atom"] in CUT_MARKERS:
            graph.remove_node(node)
    graph.add_edge(source[0], target[0], src_pin=source[1], dst_pin=target[1], kind=NORMAL)


class _Wiring:
    def __init__(self, engine: SortEngine) -> None:
        self.engine = engine
        self.graph = nx.MultiDiGraph()
        self.ids: dict[Path, int] = {}

    def visit(self, term: Term, path: Path) -> tuple[list[Port], list[Port]]:
        if isinstance(term, Atom):
            return self._atom(term, path)
        if isinstance(term, Tilt):
            return self.visit(term.body, (*path, 0))
        if isinstance(term, Next):
            inputs, middle_out = self.visit(term.left, (*path, 0))
            middle_in, outputs = self.visit(term.right, (*path, 1))
            if len(middle_out) != len(middle_in):
                raise NextInterfaceMismatch(
                    format_interface(self.engine.out_of(term.left)),
                    format_interface(self.engine.in_of(term.right)),
                )
            for (u, p), (v, q) in zip(middle_out, middle_in, strict=True):
                self.graph.add_edge(u, v, src_pin=p, dst_pin=q, kind=NORMAL)
            return inputs, outputs
        upper_in, upper_out = self.visit(term.upper, (*path, 0))
        lower_in, lower_out = self.visit(term.lower, (*path, 1))
        return upper_in + lower_in, upper_out + lower_out

    def _atom(self, atom: Atom, path: Path) -> tuple[list[Port], list[Port]]:
        spec = self.engine.registry[atom.name]
        if atom.name == "CS":
            return [], []
        node = len(self.ids)
        self.ids[path] = node
        attrs = {"atom": atom.name, "sort": spec.sort}
        if atom.label:
            attrs["label"] = atom.label
        self.graph.add_node(node, **attrs)
        inputs = [(node, pin) for pin in range(len(spec.inputs))]
        outputs = [(node, pin) for pin in range(len(spec.outputs))]
        return inputs, outputs

    def add_cuts(self, bindings: CutBindings) -> None:
        registry = self.engine.registry
        for pair in bindings:
            tail, head = self.ids[pair.tail.path], self.ids[pair.head.path]
            source_pin = 0
            if pair.tail.atom not in CUT_MARKERS:
                source_pin = len(registry[pair.tail.atom].outputs)
            target_pin = 0
            if pair.head.atom not in CUT_MARKERS:
                target_pin = len(registry[pair.head.atom].inputs)
            self.graph.add_edge(tail, head, src_pin=source_pin, dst_pin=target_pin, kind=pair.kind)


def reconstruct(term: Term, mode: str = HEAL, engine: SortEngine | None = None) -> Network:
    """Build the nodal network of ``term``; ``keep-cuts`` leaves cut edges in place."""
    engine = engine if engine is not None else SortEngine()
    expanded = engine.registry.expand(term)
    bindings = bind_cuts(expanded, engine)
    wiring = _Wiring(engine)
    wiring.visit(expanded, ())
    wiring.add_cuts(bindings)
    network = Network(wiring.graph, bindings)
    if mode == HEAL:
        return network.healed()
    return network
