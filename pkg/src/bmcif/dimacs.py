"""Reader and writer for the bi-cost DIMACS-style text format.

Layout::

    c free-form comment
    p bmcf <nodes> <arcs>
    n <id> <balance>
    a <src> <dst> <lower> <upper> <cost1> <cost2>

Nodes without an ``n`` line have balance 0. Arc lines appear in arc-index
order.
"""

from __future__ import annotations

from pathlib import Path

from .model import Arc, Instance


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


def _ints(tokens: list[str], count: int, lineno: int, kind: str) -> list[int]:
    if len(tokens) != count:
        raise ParseError(lineno, f"{kind} line needs {count} fields, got {len(tokens)}")
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, f"non-integer field in {kind} line") from None


def read_instance(text: str, name: str = "") -> Instance:
    n = m = None
    balances: dict[int, int] = {}
    arcs: list[Arc] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tag, *rest = line.split()
        if tag == "p":
            if n is not None:
                raise ParseError(lineno, "duplicate problem line")
            if len(rest) != 3 or rest[0] != "bmcf":
                raise ParseError(lineno, "problem line must read 'p bmcf <n> <m>'")
            n, m = _ints(rest[1:], 2, lineno, "problem")
            if n < 1 or m < 0:
                raise ParseError(lineno, "node count must be positive and arc count non-negative")
            continue
        if n is None:
            raise ParseError(lineno, "expected problem line 'p bmcf <n> <m>' before data")
        if tag == "n":
            node, bal = _ints(rest, 2, lineno, "node")
            if not 1 <= node <= n:
                raise ParseError(lineno, f"node id {node} out of range 1..{n}")
            if node in balances:
                raise ParseError(lineno, f"duplicate node line for node {node}")
            balances[node] = bal
        elif tag == "a":
            src, dst, lo, up, c1, c2 = _ints(rest, 6, lineno, "arc")
            if len(arcs) == m:
                raise ParseError(lineno, f"more arc lines than the declared {m}")
            arcs.append(Arc(src, dst, lo, up, c1, c2))
        else:
            raise ParseError(lineno, f"unknown line type {tag!r}")
    if n is None:
        raise ParseError(max(lineno, 1), "missing problem line")
    if len(arcs) != m:
        raise ParseError(lineno, f"declared {m} arcs but found {len(arcs)}")
    return Instance(n, tuple(arcs), tuple(balances.get(i, 0) for i in range(1, n + 1)), name)


def write_instance(inst: Instance) -> str:
    lines = [f"p bmcf {inst.node_count} {inst.arc_count}"]
    for i, b in enumerate(inst.balances, start=1):
        if b:
            lines.append(f"n {i} {b}")
    for a in inst.arcs:
        lines.append(f"a {a.src} {a.dst} {a.lower} {a.upper} {a.cost1} {a.cost2}")
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> Instance:
    path = Path(path)
    return read_instance(path.read_text(encoding="ascii"), name=path.stem)


def save(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(write_instance(inst), encoding="ascii")
