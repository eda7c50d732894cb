"""Instant-runoff tabulation: round tallies, elimination, winner, last-round margin."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .ballots import Profile, first_preference


class UnresolvedTie(RuntimeError):
    """Two or more candidates tie for elimination under the fail-on-tie rule."""


class TieRule(enum.Enum):
    FAIL = "fail"
    LEXICOGRAPHIC = "lex"


@dataclass(frozen=True)
class TallyMap:
    """Votes per standing candidate for one round, plus the exhausted count."""

    votes: dict[str, int]
    exhausted: int

    def __getitem__(self, candidate: str) -> int:
        return self.votes[candidate]


@dataclass(frozen=True)
class CountRound:
    standing: tuple[str, ...]
    tallies: TallyMap
    eliminated: str


@dataclass(frozen=True)
class CountResult:
    """A completed count: one CountRound per elimination, ending at two candidates."""

    rounds: tuple[CountRound, ...]
    winner: str

    @cached_property
    def elimination_order(self) -> tuple[str, ...]:
        return tuple(r.eliminated for r in self.rounds) + (self.winner,)

    @property
    def last_round_tallies(self) -> TallyMap:
        return self.rounds[-1].tallies


def tally(profile: Profile, standing: Iterable[str]) -> TallyMap:
    """First-preference tallies over the standing set; exhausted ballots counted apart."""
    votes = {c: 0 for c in sorted(standing)}
    exhausted = 0
    for ballot in profile.ballots:
        top = first_preference(ballot, votes)
        if top is None:
            exhausted += ballot.count
        else:
            votes[top] += ballot.count
    return TallyMap(votes, exhausted)


def run_election(profile: Profile, tie_rule: TieRule = TieRule.FAIL) -> CountResult:
    """Run the instant-runoff count to a winner.

    Each round eliminates the standing candidate with the lowest tally.  Ties
    for the minimum either abort the count (TieRule.FAIL, the default) or
    eliminate the smallest id (TieRule.LEXICOGRAPHIC).
    """
    standing = set(profile.candidate_ids)
    rounds: list[CountRound] = []
    while len(standing) > 1:
        tm = tally(profile, standing)
        low = min(tm.votes[c] for c in standing)
        tied = sorted(c for c in standing if tm.votes[c] == low)
        if len(tied) > 1 and tie_rule is TieRule.FAIL:
            raise UnresolvedTie(
                f"candidates {', '.join(tied)} tie on {low} votes; "
                "rerun with the lexicographic rule to force a result"
            )
        out = tied[0]
        rounds.append(CountRound(tuple(sorted(standing)), tm, out))
        standing.remove(out)
    return CountResult(tuple(rounds), standing.pop())


def last_round_margin(result: CountResult) -> int:
    """Ceil of half the final-round tally gap; an upper bound on the margin of victory."""
    final = result.rounds[-1]
    a, b = (final.tallies[c] for c in final.standing)
    return (abs(a - b) + 1) // 2
