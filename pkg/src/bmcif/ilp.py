"""Exact bounded-variable integer programming.

A rational simplex (bounds handled implicitly, Bland's rule) solves the
relaxations; depth-first branch-and-bound closes the integrality gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

SENSES = ("<=", "=", ">=")


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[int, ...]
    sense: str
    rhs: int

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ValueError(f"unknown relation {self.sense!r}")

    def holds(self, x: Sequence) -> bool:
        lhs = sum(a * v for a, v in zip(self.coeffs, x))
        if self.sense == "<=":
            return lhs <= self.rhs
        if self.sense == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class LinearModel:
    """``min objective·x`` subject to rows and integer boxes ``lower <= x <= upper``."""

    lower: list[int]
    upper: list[int]
    objective: list[int]
    rows: list[Constraint] = field(default_factory=list)
    names: list[str] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.lower)
        if len(self.upper) != n or len(self.objective) != n:
            raise ValueError("bounds and objective must have one entry per variable")
        for r in self.rows:
            if len(r.coeffs) != n:
                raise ValueError("constraint row length does not match the variable count")

    @property
    def variable_count(self) -> int:
        return len(self.lower)

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def add_row(self, coeffs: Sequence[int], sense: str, rhs: int) -> None:
        if len(coeffs) != self.variable_count:
            raise ValueError("constraint row length does not match the variable count")
        self.rows.append(Constraint(tuple(int(c) for c in coeffs), sense, int(rhs)))

    def value(self, x: Sequence) -> Fraction | int:
        return sum(c * v for c, v in zip(self.objective, x))

    def is_feasible(self, x: Sequence) -> bool:
        if any(not lo <= v <= hi for lo, v, hi in zip(self.lower, x, self.upper)):
            return False
        return all(r.holds(x) for r in self.rows)


@dataclass(frozen=True)
class LPResult:
    status: str  # optimal | infeasible | unbounded
    assignment: tuple[Fraction, ...] = ()
    objective: Fraction | None = None


@dataclass(frozen=True)
class SolveResult:
    status: str  # optimal | infeasible
    assignment: tuple[int, ...] = ()
    objective: int | None = None
    nodes: int = 0


def _simplex(tab, basis, x, lo, hi, cost, barred=frozenset()):
    """Minimize ``cost`` over the current tableau in place.

    ``tab[i]`` is row ``i`` of ``B^-1 A``; ``x`` holds every variable's value.
    Nonbasic variables sit at a bound. Returns ``False`` if unbounded.
    """
    rows = len(tab)
    ncol = len(x)
    while True:
        # reduced costs d_j = c_j - c_B . column j
        cb = [cost[b] for b in basis]
        is_basic = [False] * ncol
        for b in basis:
            is_basic[b] = True
        enter = -1
        direction = 0
        for j in range(ncol):
            if is_basic[j] or j in barred or lo[j] == hi[j]:
                continue
            d = cost[j]
            for i in range(rows):
                a = tab[i][j]
                if a and cb[i]:
                    d -= cb[i] * a
            if d < 0 and (hi[j] is None or x[j] < hi[j]):
                enter, direction = j, 1
                break
            if d > 0 and x[j] > lo[j]:
                enter, direction = j, -1
                break
        if enter < 0:
            return True
        j = enter
        # ratio test; entering moves by t*direction, basic i moves by -t*direction*tab[i][j]
        best_t = None if hi[j] is None else hi[j] - lo[j]
        leave_row = -1
        leave_to = None
        for i in range(rows):
            a = tab[i][j]
            if not a:
                continue
            rate = -direction * a
            b = basis[i]
            if rate < 0:
                t = (x[b] - lo[b]) / -rate
                bound = lo[b]
            elif hi[b] is not None:
                t = (hi[b] - x[b]) / rate
                bound = hi[b]
            else:
                continue
            if best_t is None or t < best_t or (t == best_t and leave_row >= 0 and b < basis[leave_row]):
                best_t, leave_row, leave_to = t, i, bound
        if best_t is None:
            return False
        t = best_t
        if t:
            x[j] += direction * t
            for i in range(rows):
                a = tab[i][j]
                if a:
                    x[basis[i]] -= direction * t * a
        if leave_row < 0:
            continue  # bound flip
        r = leave_row
        x[basis[r]] = leave_to
        prow = tab[r]
        piv = prow[j]
        if piv != 1:
            prow = [v / piv for v in prow]
            tab[r] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for i in range(rows):
            if i == r:
                continue
            row = tab[i]
            f = row[j]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
        basis[r] = j


def solve_lp(model: LinearModel) -> LPResult:
    """Exact optimum of the continuous relaxation."""
    n = model.variable_count
    lo: list = [Fraction(v) for v in model.lower]
    hi: list = [Fraction(v) for v in model.upper]
    if any(l > h for l, h in zip(lo, hi)):
        return LPResult("infeasible")
    cost: list = [Fraction(c) for c in model.objective]
    rows = model.rows
    # columns: originals, one slack per inequality, one artificial per row
    slack_of: dict[int, int] = {}
    for i, r in enumerate(rows):
        if r.sense != "=":
            slack_of[i] = n + len(slack_of)
            lo.append(Fraction(0))
            hi.append(None)
            cost.append(Fraction(0))
    art0 = len(lo)
    ncol = art0 + len(rows)
    x = list(lo[:art0]) + [Fraction(0)] * len(rows)
    tab = []
    basis = []
    for i, r in enumerate(rows):
        row = [Fraction(0)] * ncol
        for k, c in enumerate(r.coeffs):
            if c:
                row[k] = Fraction(c)
        if i in slack_of:
            row[slack_of[i]] = Fraction(1 if r.sense == "<=" else -1)
        resid = r.rhs - sum(row[k] * x[k] for k in range(art0) if row[k])
        sign = -1 if resid < 0 else 1
        if sign < 0:
            row = [-v for v in row]
        row[art0 + i] = Fraction(1)
        x[art0 + i] = abs(resid)
        tab.append(row)
        basis.append(art0 + i)
    lo += [Fraction(0)] * len(rows)
    hi += [None] * len(rows)
    phase1 = [Fraction(0)] * art0 + [Fraction(1)] * len(rows)
    _simplex(tab, basis, x, lo, hi, phase1)
    if any(x[art0 + i] for i in range(len(rows))):
        return LPResult("infeasible")
    for i in range(len(rows)):
        hi[art0 + i] = Fraction(0)
    full_cost = cost + [Fraction(0)] * len(rows)
    if not _simplex(tab, basis, x, lo, hi, full_cost):
        return LPResult("unbounded")
    sol = tuple(x[:n])
    return LPResult("optimal", sol, sum(c * v for c, v in zip(model.objective, sol)))


def _pick_branch(x: Sequence[Fraction]) -> int:
    # largest fractional part, lowest index on ties; -1 when integral
    best, best_frac = -1, Fraction(0)
    for k, v in enumerate(x):
        frac = v - math.floor(v)
        if frac > best_frac:
            best, best_frac = k, frac
    return best


def solve_ilp(model: LinearModel) -> SolveResult:
    """Exact integer optimum by depth-first branch-and-bound."""
    integral_obj = all(float(c).is_integer() for c in model.objective)
    best_x: tuple[int, ...] | None = None
    best_val = None
    stack = [(list(model.lower), list(model.upper))]
    nodes = 0
    while stack:
        lower, upper = stack.pop()
        nodes += 1
        sub = LinearModel(lower, upper, model.objective, model.rows)
        lp = solve_lp(sub)
        if lp.status == "infeasible":
            continue
        if lp.status == "unbounded":
            raise ValueError("relaxation is unbounded; every variable must be boxed")
        bound = math.ceil(lp.objective) if integral_obj else lp.objective
        if best_val is not None and bound >= best_val:
            continue
        k = _pick_branch(lp.assignment)
        if k < 0:
            best_x = tuple(int(v) for v in lp.assignment)
            best_val = int(lp.objective) if integral_obj else lp.objective
            continue
        v = lp.assignment[k]
        down_hi = list(upper)
        down_hi[k] = math.floor(v)
        up_lo = list(lower)
        up_lo[k] = math.floor(v) + 1
        down, up = (lower, down_hi), (up_lo, upper)
        # explore the nearer side first
        if v - math.floor(v) > Fraction(1, 2):
            stack += [down, up]
        else:
            stack += [up, down]
    if best_x is None:
        return SolveResult("infeasible", nodes=nodes)
    return SolveResult("optimal", best_x, best_val, nodes)
