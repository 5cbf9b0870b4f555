"""The asynchronous transition graph: orbits, reachability, transitivity, DOT.

Every mask produces an edge mu -> masked-update(mu), so each state carries the
self-edge under the zero mask.  Plain reachability decides the there-exists
flavour of transitivity: a finite witness path extends to a progressive
schedule by appending a full-mask cycle (the appended firings come after the
witness instant), and conversely every run value is a path node.

The for-all flavour is decided by fair-component analysis on the avoidance
graph (the transition graph with the target state deleted).  A component is
fair when the union of the masks on its internal edges covers every
coordinate.  Any schedule-respecting infinite run eventually stays inside one
strongly connected component and the masks it keeps firing lie on internal
edges, so a progressive run avoiding the target forever exists exactly when a
fair component is reachable; unrolling a closed walk through the fair
component's edges back into a lasso schedule realises the witness.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Bits,
    CapabilityError,
    State,
    TruthTable,
    all_masks,
    all_states,
    apply_masked,
    is_fixed_point,
    unstable_coordinates,
)
from .runs import ProgressiveFunction, continuous_run, signal_values

GRAPH_MAX_WIDTH = 12  # 4^n mask-edges; beyond this the dense sweep is unreasonable


class TransitionGraph:
    """All masked one-step transitions of a generator function.

    For each state the successors are stored as {successor: frozenset of
    masks realising it}; treat instances as immutable.
    """

    def __init__(self, width: int, successors: list[dict[State, frozenset[Bits]]]):
        self.width = width
        self.successors = successors

    def successors_of(self, mu: State) -> dict[State, frozenset[Bits]]:
        return self.successors[mu.value]

    def successor_states(self, mu: State) -> frozenset[State]:
        return frozenset(self.successors[mu.value])

    def edge_masks(self, mu: State, mu2: State) -> frozenset[Bits]:
        return self.successors[mu.value].get(mu2, frozenset())


def build_graph(phi: TruthTable) -> TransitionGraph:
    """Materialise every (state, mask) transition of phi."""
    if phi.width > GRAPH_MAX_WIDTH:
        raise CapabilityError(
            f"transition graph supports width <= {GRAPH_MAX_WIDTH}, got {phi.width}")
    successors: list[dict[State, frozenset[Bits]]] = []
    masks = list(all_masks(phi.width))
    for mu in all_states(phi.width):
        grouped: dict[State, set[Bits]] = {}
        for nu in masks:
            grouped.setdefault(apply_masked(phi, nu, mu), set()).add(nu)
        successors.append({s: frozenset(ms) for s, ms in grouped.items()})
    return TransitionGraph(phi.width, successors)


@dataclass(frozen=True)
class OrbitSet:
    """The set of values of one run, together with its starting state."""

    source: State
    reachable: frozenset[State]

    def __post_init__(self):
        if self.source not in self.reachable:
            raise ValueError("orbit must contain its source (the pre-start value)")


def orbit(phi: TruthTable, rho: ProgressiveFunction, mu: State) -> OrbitSet:
    """All values the run of phi from mu under rho ever takes."""
    return OrbitSet(mu, signal_values(continuous_run(phi, rho, mu)))


def _reachable_from(graph: TransitionGraph, start: State) -> set[State]:
    seen = {start}
    stack = [start]
    while stack:
        here = stack.pop()
        for nxt in graph.successors[here.value]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def accessible(phi: TruthTable, mu: State, mu_prime: State) -> bool:
    """Whether some run from mu passes through mu_prime at some instant."""
    return mu_prime in _reachable_from(build_graph(phi), mu)


def is_transitive_exists(phi: TruthTable) -> bool:
    """Every ordered state pair connected by some run (witness flavour)."""
    graph = build_graph(phi)
    count = 1 << phi.width
    return all(len(_reachable_from(graph, mu)) == count for mu in all_states(phi.width))


def _strongly_connected_components(nodes: list[int], adj: dict[int, list[int]]) -> list[list[int]]:
    """Iterative Tarjan; components in reverse topological order."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(component)
    return components


def _avoidance_fair_failure(graph: TransitionGraph, target: State) -> bool:
    """True when some state of the avoidance graph (target removed) can reach
    a fair component, i.e. a progressive run avoiding the target exists."""
    width = graph.width
    full = (1 << width) - 1
    nodes = [v for v in range(1 << width) if v != target.value]
    adj: dict[int, list[int]] = {}
    mask_union_between: dict[int, dict[int, int]] = {}
    for v in nodes:
        outs: dict[int, int] = {}
        for succ, masks in graph.successors[v].items():
            if succ.value == target.value:
                continue
            acc = 0
            for nu in masks:
                acc |= nu.value
            outs[succ.value] = acc
        adj[v] = list(outs)
        mask_union_between[v] = outs
    components = _strongly_connected_components(nodes, adj)
    component_of = {}
    for idx, comp in enumerate(components):
        for v in comp:
            component_of[v] = idx
    fair = set()
    for idx, comp in enumerate(components):
        members = set(comp)
        acc = 0
        for v in comp:
            for succ, union in mask_union_between[v].items():
                if succ in members:
                    acc |= union
        if acc == full:
            fair.add(idx)
    if not fair:
        return False
    # Tarjan emits components in reverse topological order: successors of a
    # component appear before it, so one pass propagates reachability.
    reaches_fair = [idx in fair for idx in range(len(components))]
    for idx, comp in enumerate(components):
        if reaches_fair[idx]:
            continue
        for v in comp:
            for succ in adj[v]:
                if reaches_fair[component_of[succ]]:
                    reaches_fair[idx] = True
                    break
            if reaches_fair[idx]:
                break
    return any(reaches_fair)


def is_transitive_forall(phi: TruthTable) -> bool:
    """Every ordered state pair connected under every schedule.

    Fails exactly when, for some target, a fair component of the avoidance
    graph is reachable (see the module docstring for the argument).
    """
    graph = build_graph(phi)
    return not any(
        _avoidance_fair_failure(graph, target) for target in all_states(phi.width)
    )


def _portrait_label(phi: TruthTable, mu: State) -> str:
    """State bits with the excited coordinates bracketed, e.g. '1[0]'."""
    excited = set(unstable_coordinates(phi, mu))
    return "".join(
        f"[{mu.bit(i)}]" if i in excited else str(mu.bit(i))
        for i in range(1, phi.width + 1)
    )


def export_portrait(phi: TruthTable, include_self_loops: bool = False) -> str:
    """The state portrait as a Graphviz digraph.

    One node per state, labelled with its bits, excited coordinates in
    brackets.  Edges: one per single-coordinate update that changes the
    state, plus the full update when its result differs from every
    single-coordinate successor.  Fixed points get self-arrows only when
    include_self_loops is set.  Node and edge order follow the integer
    encoding, so the output is byte-deterministic.
    """
    lines = ["digraph portrait {", "  node [shape=box];"]
    for mu in all_states(phi.width):
        lines.append(f'  "{mu.to01()}" [label="{_portrait_label(phi, mu)}"];')
    for mu in all_states(phi.width):
        targets = set()
        for i in unstable_coordinates(phi, mu):
            targets.add(apply_masked(phi, Bits(phi.width, 1 << (i - 1)), mu))
        full = phi.apply(mu)
        if full != mu and full not in targets:
            targets.add(full)
        if include_self_loops and is_fixed_point(phi, mu):
            targets.add(mu)
        for target in sorted(targets):
            lines.append(f'  "{mu.to01()}" -> "{target.to01()}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "GRAPH_MAX_WIDTH",
    "OrbitSet",
    "TransitionGraph",
    "accessible",
    "build_graph",
    "export_portrait",
    "is_transitive_exists",
    "is_transitive_forall",
    "orbit",
]
