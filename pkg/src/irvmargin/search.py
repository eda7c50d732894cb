"""Branch-and-bound search for margins of victory.

compute_movc finds the minimum number of ballots whose rankings must change
for some member of an alternate set to win; compute_mov is the special case
where every non-winner is an alternate.  The frontier holds elimination-order
suffixes, ordered by the LP lower bound of the distance model (ties: longer
suffix first, then lexicographic).  Expanding a suffix prepends each absent
candidate; a suffix covering all candidates is scored exactly, cut off at
the incumbent upper bound, and improvements become the new incumbent.  Nodes
whose bound reaches the upper bound are pruned, and the incumbent value is
the margin once the frontier empties.

The upper bound starts at the last-round margin when the realized runner-up
is an alternate (the realized order with its last two entries swapped always
costs at most that much).  For alternate sets that exclude the runner-up that
initialization would be unsound, so the bound starts open and the first scored
complete order sets it.

Single-threaded by design: the frontier is safe to share because profiles and
nodes are immutable and the only mutable state is the incumbent, but identical
values and witnesses must come back regardless of worker count, so callers
parallelize across independent searches (e.g. seats) instead.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable

from .ballots import Profile
from .distance import (
    EliminationSequence,
    Manipulation,
    exact_distance,
    lower_bound,
    swap_final_witness,
)
from .tabulate import TieRule, last_round_margin, run_election


class EmptyAlternates(ValueError):
    """The alternate set is empty."""


class AlternateIsWinner(ValueError):
    """The alternate set contains the realized winner."""


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    lps_solved: int = 0
    ips_solved: int = 0


@dataclass(frozen=True)
class MarginResult:
    """The margin plus the cheapest witness found first.

    value == exact_distance(witness_order) and applying witness_manipulation
    makes witness_order adversarially valid, electing its final entry.  Only
    the value is unique; distinct optimal witnesses may exist.
    """

    value: int
    winner: str
    alternates: tuple[str, ...]
    witness_order: EliminationSequence
    witness_manipulation: Manipulation
    stats: SearchStats


def compute_movc(
    profile: Profile,
    alternates: Iterable[str],
    tie_rule: TieRule = TieRule.FAIL,
) -> MarginResult:
    """Margin of victory restricted to the given alternate winners."""
    alts = frozenset(alternates)
    if not alts:
        raise EmptyAlternates("no alternate winners requested")
    ids = set(profile.candidate_ids)
    unknown = alts - ids
    if unknown:
        raise ValueError(f"unknown alternate candidates: {sorted(unknown)}")
    count = run_election(profile, tie_rule)
    winner = count.winner
    if winner in alts:
        raise AlternateIsWinner(f"{winner} already wins this profile")

    stats = SearchStats()
    lrm = last_round_margin(count)
    runner_up = count.rounds[-1].eliminated
    upper: int | None = lrm if runner_up in alts else None
    incumbent: tuple[tuple[str, ...], Manipulation] | None = None

    n = len(profile.candidate_ids)
    frontier: list[tuple[int, int, tuple[str, ...]]] = []
    for a in sorted(alts):
        heapq.heappush(frontier, (0, -1, (a,)))

    while frontier:
        bound, _, order = heapq.heappop(frontier)
        if upper is not None and bound >= upper:
            continue
        stats.nodes_expanded += 1
        for c in sorted(ids.difference(order)):
            child = (c,) + order
            if len(child) == n:
                stats.ips_solved += 1
                outcome = exact_distance(
                    profile, EliminationSequence(child, complete=True), cutoff=upper
                )
                if outcome is not None:
                    upper, manip = outcome
                    incumbent = (child, manip)
            else:
                child_bound = lower_bound(
                    profile, EliminationSequence(child, complete=False)
                )
                stats.lps_solved += 1
                if upper is None or child_bound < upper:
                    heapq.heappush(frontier, (child_bound, -len(child), child))

    if incumbent is None:
        # Nothing beat the last-round-margin start, so the margin is exactly
        # that; mint the witness from the realized order with the final two
        # entries swapped, whose distance can never exceed the last-round
        # margin and here cannot be below it either.
        value, manip = swap_final_witness(profile, count)
        if value != upper:
            raise AssertionError(
                f"swapped-final witness costs {value}, expected {upper}"
            )
        incumbent = (manip.sequence.order, manip)

    order, manip = incumbent
    return MarginResult(
        value=upper,
        winner=winner,
        alternates=tuple(sorted(alts)),
        witness_order=EliminationSequence(order, complete=True),
        witness_manipulation=manip,
        stats=stats,
    )


def compute_mov(profile: Profile, tie_rule: TieRule = TieRule.FAIL) -> MarginResult:
    """Margin of victory: cheapest change electing any other candidate."""
    count = run_election(profile, tie_rule)
    others = [c for c in profile.candidate_ids if c != count.winner]
    return compute_movc(profile, others, tie_rule)
