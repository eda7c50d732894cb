"""Exact linear and integer programming over rationals.

A bounded-variable primal simplex on fractions.Fraction, plus a small
branch-and-bound layer for integer programs.  No floating point anywhere:
optima, reduced costs, and branching bounds are exact, so callers can take
ceilings of LP values without tolerance guards.

The implementation is the textbook two-phase full-tableau method with
variable bounds handled implicitly (nonbasic variables rest at either bound
and may flip without a basis change).  Dantzig pricing is used until a long
degenerate streak, then Bland's rule, which guarantees termination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
CUTOFF = "cutoff"

_BASIC, _LOWER, _UPPER = 0, 1, 2
_BLAND_AFTER = 40


class SolverError(RuntimeError):
    """The solver could not complete; callers must treat this as fatal."""


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    x: list[Fraction] | None = None


Bound = tuple[Fraction | int, "Fraction | int | None"]


def solve_lp(
    objective: Sequence[Fraction | int],
    rows: Sequence[Sequence[Fraction | int]],
    senses: Sequence[str],
    rhs: Sequence[Fraction | int],
    bounds: Sequence[Bound],
) -> LPResult:
    """Minimize objective . x subject to rows x (senses) rhs and lo <= x <= hi.

    senses entries are "<=", ">=" or "=".  Upper bounds of None mean
    unbounded above; lower bounds must be finite.
    """
    n = len(objective)
    m = len(rows)
    c = [Fraction(v) for v in objective]
    lo = [Fraction(b[0]) for b in bounds]
    hi: list[Fraction | None] = [None if b[1] is None else Fraction(b[1]) for b in bounds]
    for l, u in zip(lo, hi):
        if u is not None and u < l:
            return LPResult(INFEASIBLE)

    if m == 0:
        x = []
        for j in range(n):
            if c[j] < 0:
                if hi[j] is None:
                    return LPResult(UNBOUNDED)
                x.append(hi[j])
            else:
                x.append(lo[j])
        return LPResult(OPTIMAL, sum(cj * xj for cj, xj in zip(c, x)), x)

    tab = [[Fraction(v) for v in row] for row in rows]
    for row in tab:
        if len(row) != n:
            raise ValueError("row length does not match objective")
    b = [Fraction(v) for v in rhs]

    # One slack per inequality row.
    slack_of: dict[int, int] = {}
    for i, sense in enumerate(senses):
        if sense == "=":
            continue
        if sense not in ("<=", ">="):
            raise ValueError(f"unknown sense {sense!r}")
        col = n + len(slack_of)
        slack_of[i] = col
    ncols = n + len(slack_of)
    for i, row in enumerate(tab):
        row.extend([Fraction(0)] * len(slack_of))
        if i in slack_of:
            row[slack_of[i]] = Fraction(1) if senses[i] == "<=" else Fraction(-1)
    lo += [Fraction(0)] * len(slack_of)
    hi += [None] * len(slack_of)
    c_full = c + [Fraction(0)] * len(slack_of)

    # Start every variable at its lower bound; rows then need a basic slack or
    # an artificial carrying the residual.
    status = [_LOWER] * ncols
    residual = [
        b[i] - sum(tab[i][j] * lo[j] for j in range(ncols) if lo[j])
        for i in range(m)
    ]
    basis = [-1] * m
    xb = [Fraction(0)] * m
    artificial: list[int] = []
    for i in range(m):
        col = slack_of.get(i)
        if col is not None:
            coef = tab[i][col]
            val = residual[i] / coef
            if val >= 0:
                basis[i] = col
                status[col] = _BASIC
                xb[i] = val
                continue
        acol = ncols + len(artificial)
        artificial.append(acol)
        coef = Fraction(1) if residual[i] >= 0 else Fraction(-1)
        for k, row in enumerate(tab):
            row.append(coef if k == i else Fraction(0))
        lo.append(Fraction(0))
        hi.append(None)
        c_full.append(Fraction(0))
        status.append(_BASIC)
        basis[i] = acol
        xb[i] = abs(residual[i])
    ncols = len(lo)
    allowed = [True] * ncols

    state = _State(tab, basis, xb, status, lo, hi, allowed)
    _reduce_basic_columns(state)

    if artificial:
        art_set = set(artificial)
        c1 = [Fraction(1) if j in art_set else Fraction(0) for j in range(ncols)]
        outcome = _iterate(state, _reduced_costs(state, c1))
        if outcome == UNBOUNDED:
            raise SolverError("phase one claims an unbounded artificial objective")
        infeas = sum(
            state.xb[i] for i in range(m) if state.basis[i] in art_set
        ) + sum(
            _value_at_bound(state, j)
            for j in artificial
            if state.status[j] != _BASIC
        )
        if infeas > 0:
            return LPResult(INFEASIBLE)
        _drive_out_artificials(state, art_set)
        for j in artificial:
            state.allowed[j] = False
            state.hi[j] = Fraction(0)

    outcome = _iterate(state, _reduced_costs(state, c_full))
    if outcome == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [_variable_value(state, j) for j in range(n)]
    value = sum(cj * xj for cj, xj in zip(c, x))
    return LPResult(OPTIMAL, value, x)


class _State:
    __slots__ = ("tab", "basis", "xb", "status", "lo", "hi", "allowed")

    def __init__(self, tab, basis, xb, status, lo, hi, allowed):
        self.tab = tab
        self.basis = basis
        self.xb = xb
        self.status = status
        self.lo = lo
        self.hi = hi
        self.allowed = allowed


def _value_at_bound(state: _State, j: int) -> Fraction:
    return state.lo[j] if state.status[j] == _LOWER else state.hi[j]


def _variable_value(state: _State, j: int) -> Fraction:
    if state.status[j] == _BASIC:
        return state.xb[state.basis.index(j)]
    return _value_at_bound(state, j)


def _reduced_costs(state: _State, cost: list[Fraction]) -> list[Fraction]:
    m = len(state.basis)
    d = list(cost)
    for i in range(m):
        cb = cost[state.basis[i]]
        if cb:
            row = state.tab[i]
            for j in range(len(d)):
                if row[j]:
                    d[j] -= cb * row[j]
    return d


def _reduce_basic_columns(state: _State) -> None:
    # Ensure the tableau carries the identity on basic columns; needed when
    # initial slack columns had coefficient -1.
    for i, col in enumerate(state.basis):
        piv = state.tab[i][col]
        if piv == 1:
            continue
        state.tab[i] = [v / piv for v in state.tab[i]]
        for k in range(len(state.tab)):
            if k != i and state.tab[k][col]:
                f = state.tab[k][col]
                rowi = state.tab[i]
                state.tab[k] = [vk - f * vi for vk, vi in zip(state.tab[k], rowi)]


def _iterate(state: _State, d: list[Fraction]) -> str:
    tab, basis, xb = state.tab, state.basis, state.xb
    status, lo, hi, allowed = state.status, state.lo, state.hi, state.allowed
    m = len(basis)
    ncols = len(lo)
    zero = Fraction(0)
    degenerate_streak = 0
    while True:
        use_bland = degenerate_streak >= _BLAND_AFTER
        enter = -1
        direction = 0
        best_score = zero
        for j in range(ncols):
            if not allowed[j] or status[j] == _BASIC:
                continue
            if hi[j] is not None and hi[j] == lo[j]:
                continue
            if status[j] == _LOWER and d[j] < 0:
                cand = 1
                score = -d[j]
            elif status[j] == _UPPER and d[j] > 0:
                cand = -1
                score = d[j]
            else:
                continue
            if use_bland:
                enter, direction = j, cand
                break
            if score > best_score:
                best_score, enter, direction = score, j, cand
        if enter == -1:
            return OPTIMAL
        j = enter

        flip_limit = None if hi[j] is None else hi[j] - lo[j]
        row_cap = None
        leave_row = -1
        leave_to = _LOWER
        for i in range(m):
            a = tab[i][j] * direction
            if a > 0:
                cap = (xb[i] - lo[basis[i]]) / a
                to = _LOWER
            elif a < 0 and hi[basis[i]] is not None:
                cap = (hi[basis[i]] - xb[i]) / (-a)
                to = _UPPER
            else:
                continue
            if (
                row_cap is None
                or cap < row_cap
                or (cap == row_cap and basis[i] < basis[leave_row])
            ):
                row_cap, leave_row, leave_to = cap, i, to
        if row_cap is None and flip_limit is None:
            return UNBOUNDED

        if row_cap is None or (flip_limit is not None and flip_limit <= row_cap):
            t = flip_limit
            if t:
                for i in range(m):
                    if tab[i][j]:
                        xb[i] -= tab[i][j] * direction * t
            status[j] = _UPPER if status[j] == _LOWER else _LOWER
            degenerate_streak = 0
            continue

        t = row_cap
        for i in range(m):
            if i != leave_row and tab[i][j]:
                xb[i] -= tab[i][j] * direction * t
        enter_value = lo[j] + t if direction == 1 else hi[j] - t
        leaving = basis[leave_row]
        status[leaving] = leave_to
        _pivot(state, d, leave_row, j)
        xb[leave_row] = enter_value
        degenerate_streak = degenerate_streak + 1 if t == 0 else 0


def _pivot(state: _State, d: list[Fraction] | None, row: int, col: int) -> None:
    tab = state.tab
    piv = tab[row][col]
    if piv != 1:
        tab[row] = [v / piv for v in tab[row]]
    prow = tab[row]
    for i in range(len(tab)):
        if i != row and tab[i][col]:
            f = tab[i][col]
            tab[i] = [vi - f * vp for vi, vp in zip(tab[i], prow)]
    if d is not None and d[col]:
        f = d[col]
        for j in range(len(d)):
            if prow[j]:
                d[j] -= f * prow[j]
    state.basis[row] = col
    state.status[col] = _BASIC


def _drive_out_artificials(state: _State, art_set: set[int]) -> None:
    for row in range(len(state.basis)):
        if state.basis[row] not in art_set:
            continue
        pivot_col = -1
        for j in range(len(state.lo)):
            if j in art_set or state.status[j] == _BASIC:
                continue
            if state.tab[row][j]:
                pivot_col = j
                break
        if pivot_col == -1:
            # Redundant row: the artificial stays basic, pinned at zero.
            continue
        leaving = state.basis[row]
        value = _value_at_bound(state, pivot_col)
        state.status[leaving] = _LOWER
        _pivot(state, None, row, pivot_col)
        state.xb[row] = value


def _satisfies(
    x: list[Fraction],
    rows: Sequence[Sequence[Fraction | int]],
    senses: Sequence[str],
    rhs: Sequence[Fraction | int],
    bounds: Sequence[Bound],
) -> bool:
    for (l, u), xj in zip(bounds, x):
        if xj < l or (u is not None and xj > u):
            return False
    for row, sense, b in zip(rows, senses, rhs):
        v = sum(coef * xj for coef, xj in zip(row, x) if coef)
        if sense == "<=" and v > b:
            return False
        if sense == ">=" and v < b:
            return False
        if sense == "=" and v != b:
            return False
    return True


def solve_ip(
    objective: Sequence[Fraction | int],
    rows: Sequence[Sequence[Fraction | int]],
    senses: Sequence[str],
    rhs: Sequence[Fraction | int],
    bounds: Sequence[Bound],
    integral_objective: bool = False,
    node_limit: int = 200_000,
    cutoff: Fraction | int | None = None,
    hint=None,
) -> LPResult:
    """Minimize over integer points by branch and bound on the LP relaxation.

    Branches on the first fractional variable with floor/ceiling bound splits;
    never assumes the relaxation is integral.  With integral_objective=True the
    relaxation value is rounded up before bound pruning, which is valid whenever
    every integer point has integer objective.

    cutoff is an exclusive upper bound: subtrees that cannot beat it are
    pruned, and status CUTOFF means no integer point below it exists (which
    subsumes infeasibility).  hint, if given, maps a node's fractional vertex
    to a candidate integral point (or None); candidates are verified against
    the original constraints before they can become incumbents.
    """
    best: LPResult | None = None
    best_value: Fraction | None = None if cutoff is None else Fraction(cutoff)

    def offer(x: list[Fraction], value: Fraction) -> None:
        nonlocal best, best_value
        if best_value is None or value < best_value:
            best = LPResult(OPTIMAL, value, x)
            best_value = value

    c = [Fraction(v) for v in objective]
    stack: list[tuple[Bound, ...]] = [tuple(bounds)]
    nodes = 0
    while stack:
        node_bounds = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise SolverError(f"branch and bound exceeded {node_limit} nodes")
        res = solve_lp(objective, rows, senses, rhs, node_bounds)
        if res.status == UNBOUNDED:
            raise SolverError("integer program has an unbounded relaxation")
        if res.status != OPTIMAL:
            continue
        bound_value = res.value
        if integral_objective:
            bound_value = Fraction(math.ceil(bound_value))
        if best_value is not None and bound_value >= best_value:
            continue
        frac_j = -1
        for j, xj in enumerate(res.x):
            if xj.denominator != 1:
                frac_j = j
                break
        if frac_j == -1:
            offer(res.x, res.value)
            continue
        if hint is not None:
            guess = hint(res.x)
            if guess is not None:
                guess = [Fraction(v) for v in guess]
                if all(v.denominator == 1 for v in guess) and _satisfies(
                    guess, rows, senses, rhs, bounds
                ):
                    offer(guess, sum(cj * v for cj, v in zip(c, guess)))
                    if best_value is not None and bound_value >= best_value:
                        continue
        xj = res.x[frac_j]
        fl = math.floor(xj)
        blo, bhi = node_bounds[frac_j]
        down = list(node_bounds)
        down[frac_j] = (blo, Fraction(fl))
        up = list(node_bounds)
        up[frac_j] = (Fraction(fl + 1), bhi)
        if xj - fl >= Fraction(1, 2):
            stack.append(tuple(down))
            stack.append(tuple(up))
        else:
            stack.append(tuple(up))
            stack.append(tuple(down))
    if best is None:
        return LPResult(CUTOFF if cutoff is not None else INFEASIBLE)
    return best
