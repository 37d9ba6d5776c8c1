"""Instance families: subset-sum chains, the two branching examples, random networks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import Arc, InfeasibleError, Instance


def gen_subset_sum(weights, target: int | None = None, bracket: bool = False) -> Instance:
    """Chain ``1 -> 2 -> ... -> n+1`` with a free and a weighted arc per item.

    The weighted arc of item ``i`` costs ``(w_i, -w_i)``, so every distinct
    subset sum is a supported nondominated vector on a single face. One unit of
    flow leaves node 1 and enters node ``n+1``. With ``bracket=True`` two
    direct arcs of cost ``±(target - 1)`` and ``±(target + 1)`` are added.
    """
    weights = [int(w) for w in weights]
    if not weights:
        raise ValueError("weights must be non-empty")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    arcs = []
    for i, w in enumerate(weights, start=1):
        arcs.append(Arc(i, i + 1, 0, 1, 0, 0))
        arcs.append(Arc(i, i + 1, 0, 1, w, -w))
    n = len(weights) + 1
    if bracket:
        if target is None:
            raise ValueError("bracket arcs need a target")
        arcs.append(Arc(1, n, 0, 1, target - 1, -(target - 1)))
        arcs.append(Arc(1, n, 0, 1, target + 1, -(target + 1)))
    bal = [0] * n
    bal[0], bal[-1] = 1, -1
    return Instance(n, tuple(arcs), tuple(bal), name=f"subset-sum-{len(weights)}")


def gen_example_path_cycles(k: int, M: int, L: int) -> Instance:
    """Chain with zero-cost skip-back arcs and one ``(1, -1)`` arc ``(k, k-2)``.

    Has ``L + 1`` supported nondominated vectors and ``(M+1)**(k-3) * (L+1)``
    supported efficient flows.
    """
    if k < 5:
        raise ValueError("k must be at least 5")
    if M <= L:
        raise ValueError("the family requires M > L")
    cap = (k - 3) * M + L + 2
    arcs = [Arc(i, i + 1, 0, cap, 0, 0) for i in range(1, k)]
    arcs += [Arc(k - i, k - i - 2, 0, M, 0, 0) for i in range(1, k - 2)]
    arcs.append(Arc(k, k - 2, 0, L, 1, -1))
    bal = [0] * k
    bal[0], bal[-1] = 2, -2
    return Instance(k, tuple(arcs), tuple(bal), name=f"path-cycles-k{k}-M{M}-L{L}")


def gen_example_backarcs(k: int, L: int) -> Instance:
    """Chain with ``(1, -1)`` arcs from the last node back to nodes ``1..k-2``."""
    if k < 5:
        raise ValueError("k must be at least 5")
    arcs = [Arc(i, i + 1, 0, L + 2, 0, 0) for i in range(1, k)]
    arcs += [Arc(k, k - i, 0, L, 1, -1) for i in range(2, k)]
    bal = [0] * k
    bal[0], bal[-1] = 2, -2
    return Instance(k, tuple(arcs), tuple(bal), name=f"backarcs-k{k}-L{L}")


@dataclass(frozen=True)
class RandomConfig:
    node_count: int
    arc_count: int
    supply_nodes: int = 2
    sink_nodes: int = 2
    max_cost: int = 10
    max_capacity: int = 50
    total_supply: int = 50
    seed: int = 0

    def problems(self) -> list[str]:
        out = []
        if self.node_count < 1 or self.arc_count < 1:
            out.append("node and arc counts must be positive")
        if self.arc_count < self.node_count - 1:
            out.append(f"cannot connect {self.node_count} nodes with {self.arc_count} arcs")
        if self.supply_nodes < 1 or self.sink_nodes < 1:
            out.append("need at least one supply and one sink node")
        if self.supply_nodes + self.sink_nodes > self.node_count:
            out.append("supply_nodes + sink_nodes exceeds node_count")
        if self.total_supply < self.supply_nodes:
            out.append("total_supply must give every supply node at least one unit")
        if self.max_cost < 1 or self.max_capacity < 1:
            out.append("max_cost and max_capacity must be positive")
        return out


def _split(total: int, parts: int, rng: random.Random) -> list[int]:
    cuts = sorted(rng.sample(range(1, total), parts - 1)) if parts > 1 else []
    bounds = [0, *cuts, total]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def _draw(cfg: RandomConfig, rng: random.Random) -> Instance:
    n, m = cfg.node_count, cfg.arc_count
    order = list(range(1, n + 1))
    rng.shuffle(order)
    sources = order[: cfg.supply_nodes]
    sinks = order[cfg.supply_nodes : cfg.supply_nodes + cfg.sink_nodes]
    endpoints: list[tuple[int, int]] = []
    # random spanning tree oriented away from the first source
    for idx in range(1, n):
        v, u = order[idx], order[rng.randrange(idx)]
        endpoints.append((u, v) if rng.random() < 0.75 else (v, u))
    seen = set(endpoints)
    while len(endpoints) < m:
        u, v = rng.sample(range(1, n + 1), 2) if n > 1 else (1, 1)
        if (u, v) in seen and rng.random() < 0.9:
            continue
        seen.add((u, v))
        endpoints.append((u, v))
    rng.shuffle(endpoints)
    arcs = tuple(
        Arc(u, v, 0, rng.randint(1, cfg.max_capacity),
            rng.randint(1, cfg.max_cost), rng.randint(1, cfg.max_cost))
        for u, v in endpoints
    )
    bal = [0] * n
    for node, s in zip(sources, _split(cfg.total_supply, len(sources), rng)):
        bal[node - 1] += s
    for node, s in zip(sinks, _split(cfg.total_supply, len(sinks), rng)):
        bal[node - 1] -= s
    return Instance(n, arcs, tuple(bal), name=f"random-n{n}-m{m}-s{cfg.seed}")


def gen_random(cfg: RandomConfig, attempts: int = 200) -> Instance:
    """Connected random network with a feasible flow, deterministic per seed.

    Draws are repeated from the same seeded stream until the supplies can be
    routed.
    """
    from .mcf import min_cost_flow

    problems = cfg.problems()
    if problems:
        raise ValueError("; ".join(problems))
    if cfg.total_supply < cfg.sink_nodes:
        raise ValueError("total_supply must give every sink node at least one unit")
    rng = random.Random(cfg.seed)
    for _ in range(attempts):
        inst = _draw(cfg, rng)
        try:
            min_cost_flow(inst, inst.cost1)
        except InfeasibleError:
            continue
        return inst
    raise InfeasibleError(f"no feasible instance found in {attempts} draws for {cfg}")
