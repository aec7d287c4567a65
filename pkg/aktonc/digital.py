"""Digital concretization: values 0, 1 and # (undefined) flowing through gates.

Two timing models are offered. ``unit`` delays every atom by one step, so a
feedback ring of n atoms inverting once oscillates with period 2n.
``settle``, the default, lets the combinational part reach its fixpoint within
a step and only delays the Off to Set transfer, so the same ring oscillates
with period 2 and a latch holds after a one-step pulse.
"""

from __future__ import annotations

import csv
import io
import itertools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import networkx as nx

from .atoms import AtomRegistry
from .conf import get_setting
from .exceptions import ArityMismatch, NonDigitalAtom
from .network import CUT_PLANAR, CUT_SPATIAL, KEEP_CUTS, NORMAL, Edge, reconstruct
from .sorts import SortEngine
from .terms import Term, leaves

logger = logging.getLogger(__name__)

ZERO = "0"
ONE = "1"
UNDEFINED = "#"
VALUES = (ZERO, ONE, UNDEFINED)

UNIT = "unit"
SETTLE = "settle"
TIMINGS = (UNIT, SETTLE)

STEADY = "steady"
OSCILLATING = "oscillating"
TRUNCATED = "truncated"

DIGITAL_ATOMS = frozenset(
    {"Entry", "Exit", "Up", "Down", "Set", "Off", "CS", "Fork", "And", "Or", "Not", "Wire"}
)
_HEADS = frozenset({"Entry", "Up", "Set"})
_ARITY = {
    "And": 2, "Or": 2, "Not": 1, "Wire": 1, "Fork": 1,
    "Exit": 1, "Down": 1, "Off": 1, "Entry": 0, "Up": 0, "Set": 0, "CS": 0,
}

State = tuple[str, ...]


def _and(a: str, b: str) -> str:
    if ZERO in (a, b):
        return ZERO
    if a == b == ONE:
        return ONE
    return UNDEFINED


def _or(a: str, b: str) -> str:
    if ONE in (a, b):
        return ONE
    if a == b == ZERO:
        return ZERO
    return UNDEFINED


_NOT = {ZERO: ONE, ONE: ZERO, UNDEFINED: UNDEFINED}


def eval_atom(name: str, inputs: Sequence[str], external: str = UNDEFINED) -> tuple[str, ...]:
    """Outputs of one digital atom; heads emit ``external``."""
    if name not in DIGITAL_ATOMS:
        raise NonDigitalAtom(name)
    if len(inputs) != _ARITY[name]:
        raise ArityMismatch(name, _ARITY[name], len(inputs))
    if name == "And":
        return (_and(*inputs),)
    if name == "Or":
        return (_or(*inputs),)
    if name == "Not":
        return (_NOT[inputs[0]],)
    if name == "Wire":
        return (inputs[0],)
    if name == "Fork":
        return (inputs[0], inputs[0])
    if name in _HEADS:
        return (external,)
    return ()


def parse_waveforms(text: str) -> dict[str, str]:
    """``"A=011,B=1"`` to ``{"A": "011", "B": "1"}``."""
    waveforms: dict[str, str] = {}
    for chunk in filter(None, (part.strip() for part in text.split(","))):
        name, separator, values = chunk.partition("=")
        if not separator or not values:
            raise ValueError(f"expected name=values, got {chunk!r}")
        waveforms[name.strip()] = values.strip()
    return waveforms


@dataclass
class Trace:
    edges: list[Edge]
    entries: list[str]
    exits: dict[str, int]
    states: list[State] = field(default_factory=list)
    period: int | None = None
    timing: str = SETTLE

    @property
    def classification(self) -> str:
        if self.period is None:
            return TRUNCATED
        return STEADY if self.period == 1 else OSCILLATING

    @property
    def steps(self) -> int:
        return len(self.states) - 1

    def outputs_at(self, step: int) -> dict[str, str]:
        state = self.states[step]
        return {name: state[index] for name, index in self.exits.items()}

    def final_outputs(self) -> dict[str, str]:
        return self.outputs_at(len(self.states) - 1)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["step", "edge", "value"])
        for step, state in enumerate(self.states):
            for edge, value in zip(self.edges, state, strict=True):
                writer.writerow([step, str(edge), value])
        return buffer.getvalue()

    def as_dict(self) -> dict[str, Any]:
        return {
            "timing": self.timing,
            "classification": self.classification,
            "period": self.period,
            "steps": self.steps,
            "outputs": self.final_outputs(),
            "edges": [str(edge) for edge in self.edges],
            "states": ["".join(state) for state in self.states],
        }


class Simulator:
    """Synchronous simulation of a digital term over its planar network."""

    def __init__(
        self,
        term: Term,
        *,
        registry: AtomRegistry | None = None,
        timing: str | None = None,
        engine: SortEngine | None = None,
    ) -> None:
        self.engine = engine if engine is not None else SortEngine(registry)
        self.timing = timing or get_setting("AKTONC_SIM_TIMING")
        if self.timing not in TIMINGS:
            raise ValueError(f"unknown timing model {self.timing!r}")
        expanded = self.engine.registry.expand(term)
        for _path, atom in leaves(expanded):
            if atom.name not in DIGITAL_ATOMS:
                raise NonDigitalAtom(atom.name)
        network = reconstruct(expanded, KEEP_CUTS, self.engine).healed((CUT_SPATIAL,))
        self.network = network
        self.edges = network.edges((NORMAL,))
        index = {edge: position for position, edge in enumerate(self.edges)}
        self.inputs = {
            node: [index[e] for e in network.in_edges(node) if e.kind == NORMAL]
            for node in network.nodes()
        }
        self.outputs = {
            node: [index[e] for e in network.out_edges(node) if e.kind == NORMAL]
            for node in network.nodes()
        }
        self.feedback: dict[int, int] = {}
        for cut in network.edges((CUT_PLANAR,)):
            self.feedback[cut.target] = self.inputs[cut.source][0]
        graph = nx.DiGraph()
        graph.add_nodes_from(network.nodes())
        graph.add_edges_from((edge.source, edge.target) for edge in self.edges)
        self.order = list(nx.lexicographical_topological_sort(graph))
        self.entries = {
            node: network.port_name(node, position)
            for position, node in enumerate(network.entries())
        }
        self.exits = {
            network.port_name(node, position): self.inputs[node][0]
            for position, node in enumerate(network.exits())
        }

    def initial_state(self) -> State:
        return (UNDEFINED,) * len(self.edges)

    def _external(self, node: int, step: int, waveforms: Mapping[str, str], state: State) -> str:
        if node in self.entries:
            values = waveforms[self.entries[node]]
            return values[min(step, len(values) - 1)]
        if node in self.feedback:
            return state[self.feedback[node]]
        return UNDEFINED

    def step(self, state: State, step: int, waveforms: Mapping[str, str]) -> State:
        following = list(state) if self.timing == UNIT else [UNDEFINED] * len(state)
        source = state if self.timing == UNIT else following
        for node in self.order:
            values = tuple(source[i] for i in self.inputs[node])
            external = self._external(node, step, waveforms, state)
            for position, value in zip(
                self.outputs[node], eval_atom(self.network.atom(node), values, external),
                strict=True,
            ):
                following[position] = value
        return tuple(following)

    def _check_waveforms(self, waveforms: Mapping[str, str]) -> None:
        names = set(self.entries.values())
        unknown = set(waveforms) - names
        if unknown:
            raise ValueError(f"no entry named {sorted(unknown)[0]!r}")
        for name in sorted(names):
            values = waveforms.get(name, "")
            if not values:
                raise ValueError(f"missing waveform for entry {name!r}")
            if any(value not in VALUES for value in values):
                raise ValueError(f"waveform for {name!r} may only contain 0, 1 and #")

    def run(self, waveforms: Mapping[str, str], max_steps: int | None = None) -> Trace:
        self._check_waveforms(waveforms)
        if max_steps is None:
            max_steps = int(get_setting("AKTONC_SIM_MAX_STEPS"))
        horizon = max((len(values) for values in waveforms.values()), default=1)
        trace = Trace(self.edges, list(self.entries.values()), self.exits, timing=self.timing)
        state = self.initial_state()
        trace.states.append(state)
        seen: dict[State, int] = {}
        for step in range(max_steps):
            state = self.step(state, step, waveforms)
            trace.states.append(state)
            now = step + 1
            if now < horizon:
                continue
            if state in seen:
                trace.period = now - seen[state]
                break
            seen[state] = now
        logger.debug(
            "simulation finished after %d step(s): %s", trace.steps, trace.classification
        )
        return trace

    def truth_table(self, max_steps: int | None = None) -> list[tuple[dict[str, str], dict[str, str]]]:
        names = list(self.entries.values())
        rows = []
        for bits in itertools.product((ZERO, ONE), repeat=len(names)):
            assignment = dict(zip(names, bits, strict=True))
            rows.append((assignment, self.run(assignment, max_steps).final_outputs()))
        return rows


def simulate(term: Term, waveforms: Mapping[str, str], max_steps: int | None = None, *,
             registry: AtomRegistry | None = None, timing: str | None = None) -> Trace:
    return Simulator(term, registry=registry, timing=timing).run(waveforms, max_steps)


def truth_table(term: Term, *, registry: AtomRegistry | None = None,
                timing: str | None = None,
                max_steps: int | None = None) -> list[tuple[dict[str, str], dict[str, str]]]:
    """Final outputs for every 0/1 assignment of the entries, in binary counting order."""
    return Simulator(term, registry=registry, timing=timing).truth_table(max_steps)
