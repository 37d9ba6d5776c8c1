"""Domain types for bi-objective minimum-cost integer flow instances."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

Flow = tuple[int, ...]


class InfeasibleError(ValueError):
    """No flow satisfies the balances and capacity bounds."""


class ArityError(ValueError):
    """A flow vector does not have one entry per arc."""


@dataclass(frozen=True)
class Arc:
    """Directed arc between 1-based node indices with two integer unit costs."""

    src: int
    dst: int
    lower: int
    upper: int
    cost1: int
    cost2: int


class BiCost(NamedTuple):
    c1: int
    c2: int


@dataclass(frozen=True)
class Instance:
    """A directed network with capacities, balances and two cost rows.

    Nodes are numbered ``1..node_count`` and ``balances[i - 1]`` is the balance
    of node ``i`` (positive = supply). Arcs are identified by list position, so
    parallel arcs are allowed.
    """

    node_count: int
    arcs: tuple[Arc, ...]
    balances: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple(self.arcs))
        object.__setattr__(self, "balances", tuple(int(b) for b in self.balances))

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    # 0-based column views used by the algorithms
    @cached_property
    def tails(self) -> tuple[int, ...]:
        return tuple(a.src - 1 for a in self.arcs)

    @cached_property
    def heads(self) -> tuple[int, ...]:
        return tuple(a.dst - 1 for a in self.arcs)

    @cached_property
    def lowers(self) -> tuple[int, ...]:
        return tuple(a.lower for a in self.arcs)

    @cached_property
    def uppers(self) -> tuple[int, ...]:
        return tuple(a.upper for a in self.arcs)

    @cached_property
    def cost1(self) -> tuple[int, ...]:
        return tuple(a.cost1 for a in self.arcs)

    @cached_property
    def cost2(self) -> tuple[int, ...]:
        return tuple(a.cost2 for a in self.arcs)

    def weighted_cost(self, w1: int, w2: int) -> tuple[int, ...]:
        return tuple(w1 * a.cost1 + w2 * a.cost2 for a in self.arcs)

    def with_balances(self, balances: Sequence[int]) -> Instance:
        return Instance(self.node_count, self.arcs, tuple(balances), self.name)


@dataclass
class ValidationReport:
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return not self.problems

    def __contains__(self, text: str) -> bool:
        return any(text in p for p in self.problems)

    def __iter__(self):
        return iter(self.problems)


def validate_instance(inst: Instance) -> ValidationReport:
    """Collect every violated instance invariant; an empty report means valid."""
    report = ValidationReport()
    n = inst.node_count
    if n < 1:
        report.problems.append("node count must be positive")
    if len(inst.balances) != n:
        report.problems.append(
            f"balance vector has {len(inst.balances)} entries for {n} nodes"
        )
    if sum(inst.balances) != 0:
        report.problems.append(f"balance sum ≠ 0 (sum is {sum(inst.balances)})")
    in_range = True
    for k, a in enumerate(inst.arcs):
        for end in (a.src, a.dst):
            if not 1 <= end <= n:
                report.problems.append(
                    f"arc {k}: node index out of range ({end} not in 1..{n})"
                )
                in_range = False
        if a.lower < 0:
            report.problems.append(f"arc {k}: negative lower bound {a.lower}")
        if a.lower > a.upper:
            report.problems.append(
                f"arc {k}: capacity order violated (lower {a.lower} > upper {a.upper})"
            )
        for c in (a.lower, a.upper, a.cost1, a.cost2):
            if not isinstance(c, int) or isinstance(c, bool):
                report.problems.append(f"arc {k}: non-integer data {c!r}")
                break
    if in_range and n >= 1 and not _is_connected(inst):
        report.problems.append("underlying undirected graph is not connected")
    return report


def _is_connected(inst: Instance) -> bool:
    n = inst.node_count
    adj: list[list[int]] = [[] for _ in range(n)]
    for t, h in zip(inst.tails, inst.heads):
        adj[t].append(h)
        adj[h].append(t)
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    return all(seen)


def _check_arity(inst: Instance, flow: Sequence[int]) -> None:
    if len(flow) != inst.arc_count:
        raise ArityError(
            f"flow has {len(flow)} entries but the instance has {inst.arc_count} arcs"
        )


def evaluate_cost(inst: Instance, flow: Sequence[int]) -> BiCost:
    _check_arity(inst, flow)
    c1 = sum(c * f for c, f in zip(inst.cost1, flow))
    c2 = sum(c * f for c, f in zip(inst.cost2, flow))
    return BiCost(c1, c2)


def node_excess(inst: Instance, flow: Sequence[int]) -> list[int]:
    """Outflow minus inflow per node (0-based)."""
    net = [0] * inst.node_count
    for t, h, f in zip(inst.tails, inst.heads, flow):
        net[t] += f
        net[h] -= f
    return net


def check_flow_feasible(inst: Instance, flow: Sequence[int]) -> bool:
    _check_arity(inst, flow)
    for f, lo, up in zip(flow, inst.lowers, inst.uppers):
        if not lo <= f <= up:
            return False
    return node_excess(inst, flow) == list(inst.balances)
