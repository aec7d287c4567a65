"""Turn a nodal network back into a program term.

The network is oriented from its entries, feedback edges are opened into
Set/Off pairs, the remaining core is layered by longest path and every
layer becomes one Juxta column. Lanes that have to change places between
columns are swapped pairwise with Down/Up crossing blocks.
"""

from __future__ import annotations

import logging
from collections.abc import Hashable

import networkx as nx

from .atoms import AtomRegistry, builtin_registry
from .exceptions import NotOrientable
from .network import CUT_MARKERS, Edge, Network
from .terms import Atom, Juxta, Next, Term, juxta_column, next_chain

logger = logging.getLogger(__name__)

LINK = Atom("Link")
# Two adjacent lanes trade places: the upper one is cut and re-emitted below.
SWAP = Next(Juxta(Atom("Down"), LINK), Juxta(LINK, Atom("Up")))

Lane = tuple[Hashable, int, Hashable, int]


def _lane(edge: Edge) -> Lane:
    return (edge.source, edge.source_pin, edge.target, edge.target_pin)


def _validate(network: Network, registry: AtomRegistry) -> None:
    if not len(network):
        raise NotOrientable("the network is empty")
    for node in network.nodes():
        atom = network.atom(node)
        if atom in CUT_MARKERS:
            raise NotOrientable(f"node {node} is an unpaired {atom}")
        if atom not in registry:
            raise NotOrientable(f"node {node} has unknown atom {atom}")
        spec = registry[atom]
        inputs = sorted(edge.target_pin for edge in network.in_edges(node))
        outputs = sorted(edge.source_pin for edge in network.out_edges(node))
        if inputs != list(range(len(spec.inputs))) or outputs != list(range(len(spec.outputs))):
            raise NotOrientable(f"node {node} ({atom}) does not use exactly its interface pins")
    entries, exits = network.entries(), network.exits()
    if bool(entries) != bool(exits):
        raise NotOrientable("a network with entries needs exits and the other way round")


def feedback_edges(network: Network) -> list[Edge]:
    """Back edges of a depth-first walk from the entries, then from the remaining nodes."""
    roots = network.entries() + [n for n in network.nodes() if network.atom(n) != "Entry"]
    state: dict[int, str] = {}
    feedback: list[Edge] = []
    for root in roots:
        if root in state:
            continue
        state[root] = "open"
        stack = [(root, iter(network.out_edges(root)))]
        while stack:
            node, pending = stack[-1]
            edge = next(pending, None)
            if edge is None:
                state[node] = "done"
                stack.pop()
                continue
            seen = state.get(edge.target)
            if seen == "open":
                feedback.append(edge)
            elif seen is None:
                state[edge.target] = "open"
                stack.append((edge.target, iter(network.out_edges(edge.target))))
    return feedback


def _layers(network: Network, core: list[int], feedback: set[Edge]) -> list[list[int]]:
    graph = nx.DiGraph()
    graph.add_nodes_from(core)
    members = set(core)
    for edge in network.edges():
        if edge not in feedback and edge.source in members and edge.target in members:
            graph.add_edge(edge.source, edge.target)
    depth: dict[int, int] = {}
    for node in nx.lexicographical_topological_sort(graph):
        depth[node] = max((depth[u] + 1 for u in graph.predecessors(node)), default=0)
    layers: list[list[int]] = [[] for _ in range(max(depth.values(), default=-1) + 1)]
    for node in sorted(depth):
        layers[depth[node]].append(node)
    return layers


def _permute(lanes: list[Lane], order: list[Lane]) -> tuple[list[Term], list[Lane]]:
    """Odd-even transposition columns taking ``lanes`` to ``order``."""
    rank = {lane: index for index, lane in enumerate(order)}
    current = list(lanes)
    columns: list[Term] = []
    parity, idle = 0, 0
    while idle < 2:
        swaps = [
            k for k in range(parity, len(current) - 1, 2) if rank[current[k]] > rank[current[k + 1]]
        ]
        parity ^= 1
        if not swaps:
            idle += 1
            continue
        idle = 0
        items: list[Term] = []
        k = 0
        while k < len(current):
            if k in swaps:
                items.append(SWAP)
                current[k], current[k + 1] = current[k + 1], current[k]
                k += 2
            else:
                items.append(LINK)
                k += 1
        columns.append(juxta_column(*items))
    return columns, current


class Linearizer:
    def __init__(self, network: Network, registry: AtomRegistry | None = None) -> None:
        self.registry = registry if registry is not None else builtin_registry()
        self.network = network.healed()

    def _node_atom(self, node: int) -> Atom:
        return Atom(self.network.atom(node), self.network.label(node))

    def run(self) -> Term:
        network = self.network
        _validate(network, self.registry)
        feedback = feedback_edges(network)
        rewired: dict[Edge, tuple[Lane, Lane]] = {}
        for index, edge in enumerate(feedback):
            rewired[edge] = (
                (edge.source, edge.source_pin, ("off", index), 0),
                (("set", index), 0, edge.target, edge.target_pin),
            )
        logger.debug("linearize: %d feedback edge(s)", len(feedback))

        def incoming(node: int) -> list[Lane]:
            return [
                rewired[edge][1] if edge in rewired else _lane(edge)
                for edge in network.in_edges(node)
            ]

        def outgoing(node: int) -> list[Lane]:
            return [
                rewired[edge][0] if edge in rewired else _lane(edge)
                for edge in network.out_edges(node)
            ]

        entries, exits = network.entries(), network.exits()
        core = [n for n in network.nodes() if network.atom(n) not in ("Entry", "Exit")]
        layers = _layers(network, core, set(feedback))
        lanes: list[Lane] = [rewired[edge][1] for edge in feedback]
        for entry in entries:
            lanes.extend(outgoing(entry))

        columns: list[Term] = []
        for layer in layers:
            position = {lane: index for index, lane in enumerate(lanes)}
            members = set(layer)
            keyed: list[tuple[tuple[float, int, int], list[Lane], Term, list[Lane]]] = []
            for node in layer:
                ins = incoming(node)
                centre = sum(position[lane] for lane in ins) / len(ins) if ins else 0.0
                keyed.append(((centre, 1, node), ins, self._node_atom(node), outgoing(node)))
            for lane in lanes:
                if lane[2] not in members:
                    index = position[lane]
                    keyed.append(((float(index), 0, index), [lane], LINK, [lane]))
            keyed.sort(key=lambda item: item[0])
            order = [lane for _, ins, _, _ in keyed for lane in ins]
            swaps, lanes = _permute(lanes, order)
            columns.extend(swaps)
            columns.append(juxta_column(*(atom for _, _, atom, _ in keyed)))
            lanes = [lane for _, _, _, outs in keyed for lane in outs]

        final = [rewired[edge][0] for edge in feedback]
        for node in exits:
            final.extend(incoming(node))
        swaps, lanes = _permute(lanes, final)
        columns.extend(swaps)
        logger.debug("linearize: %d layer(s), %d column(s)", len(layers), len(columns))
        return self._assemble(columns, len(feedback), entries, exits)

    def _assemble(self, columns: list[Term], cuts: int, entries: list[int],
                  exits: list[int]) -> Term:
        if not entries and not cuts:
            raise NotOrientable("a closed network needs at least one cycle to cut")
        sets = [Atom("Set")] * cuts
        offs = [Atom("Off")] * cuts
        if not entries:
            return next_chain(juxta_column(*sets), *columns, juxta_column(*offs))
        head = juxta_column(*(self._node_atom(node) for node in entries))
        tail = juxta_column(*(self._node_atom(node) for node in exits))
        if not cuts:
            return next_chain(head, *columns, tail)
        opened = juxta_column(*sets, *[LINK] * len(entries))
        closed = juxta_column(*offs, *[LINK] * len(exits))
        return next_chain(head, next_chain(opened, *columns, closed), tail)


def linearize(network: Network, registry: AtomRegistry | None = None) -> Term:
    """A well-formed term whose healed reconstruction is isomorphic to ``network``."""
    return Linearizer(network, registry).run()
