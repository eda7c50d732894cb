"""Brute-force ground truth for margins on small instances.

Everything here is definition-shaped and shares no machinery with the LP or
the frontier search: winners are found by branching on every tied elimination,
and margins by enumerating manipulations outright.  Capped hard because the
enumeration is exponential; the caps are the contract, exceeding them raises.

oracle_movc works per candidate elimination order.  A manipulation that makes
some alternate win must realize a complete order ending in an alternate, and
for a fixed order only two things matter: which original ballots were removed
(their per-round first preferences are fixed) and how the rewritten ballots
credit tallies round by round.  A rewritten ballot behaves as a token that
sits on one standing candidate and, when that candidate is eliminated, either
jumps to a candidate eliminated later or exhausts; that is exactly the space
of rankings whose positions in the order strictly increase, and any such path
is a concrete ranking.  So: enumerate removal vectors over the distinct
rankings, then ask a round-by-round token feasibility question for the k
rewritten ballots.  First k that works is the margin.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator

from .ballots import Profile, first_preference
from .tabulate import tally


class OracleCapExceeded(ValueError):
    """The instance is too large for exhaustive checking."""


class _AboveCap:
    def __repr__(self) -> str:
        return "ABOVE_CAP"

    def __bool__(self) -> bool:
        return False


ABOVE_CAP = _AboveCap()


@dataclass(frozen=True)
class OracleConfig:
    max_changes: int = 10
    max_candidates: int = 4
    max_distinct_types: int = 10


def adversarial_winners(profile: Profile) -> set[str]:
    """Candidates who can win under some resolution of elimination ties."""
    memo: dict[frozenset[str], frozenset[str]] = {}

    def winners(standing: frozenset[str]) -> frozenset[str]:
        if len(standing) == 1:
            return standing
        if standing in memo:
            return memo[standing]
        tm = tally(profile, standing)
        low = min(tm.votes[c] for c in standing)
        out: frozenset[str] = frozenset()
        for c in sorted(standing):
            if tm.votes[c] == low:
                out |= winners(standing - {c})
        memo[standing] = out
        return out

    return set(winners(frozenset(profile.candidate_ids)))


def order_attainable(profile: Profile, order: Iterable[str]) -> bool:
    """Is the complete order a valid adversarial elimination order?"""
    order = tuple(order)
    if sorted(order) != sorted(profile.candidate_ids):
        return False
    for i in range(len(order) - 1):
        standing = order[i:]
        tm = tally(profile, standing)
        if tm.votes[order[i]] != min(tm.votes[c] for c in standing):
            return False
    return True


def oracle_movc(
    profile: Profile,
    alternates: Iterable[str],
    config: OracleConfig | None = None,
):
    """Smallest number of rewritten ballots electing an alternate, or ABOVE_CAP.

    Exhaustive within OracleConfig caps; raises OracleCapExceeded when the
    instance itself is out of range.
    """
    cfg = config or OracleConfig()
    alts = sorted(set(alternates))
    ids = sorted(profile.candidate_ids)
    if not alts or not set(alts) <= set(ids):
        raise ValueError("alternates must be a nonempty subset of the candidates")
    if len(ids) > cfg.max_candidates:
        raise OracleCapExceeded(
            f"{len(ids)} candidates exceeds the cap of {cfg.max_candidates}"
        )
    if len(profile.ballots) > cfg.max_distinct_types:
        raise OracleCapExceeded(
            f"{len(profile.ballots)} distinct rankings exceeds the cap of "
            f"{cfg.max_distinct_types}"
        )

    orders = [
        rest + (a,)
        for a in alts
        for rest in permutations([c for c in ids if c != a])
    ]
    plans = [_OrderPlan(profile, order) for order in orders]
    for k in range(cfg.max_changes + 1):
        for plan in plans:
            if plan.reachable(k):
                return k
    return ABOVE_CAP


class _OrderPlan:
    """Feasibility of one complete order at a given rewrite budget."""

    def __init__(self, profile: Profile, order: tuple[str, ...]):
        self.order = order
        n = len(order)
        # credit[line][r] = position the line's ballots count toward in round r,
        # from first preferences over the standing suffix; None once exhausted.
        position = {c: i for i, c in enumerate(order)}
        self.counts = [b.count for b in profile.ballots]
        self.credit = []
        for ballot in profile.ballots:
            row = []
            for r in range(n - 1):
                top = first_preference(ballot, order[r:])
                row.append(None if top is None else position[top])
            self.credit.append(row)
        self._bases_seen: dict[tuple, bool] = {}

    def reachable(self, k: int) -> bool:
        n = len(self.order)
        for removal in _bounded_vectors(k, self.counts):
            base = self._base_tallies(removal)
            ok = self._bases_seen.get((k, base))
            if ok is None:
                ok = _tokens_feasible(base, k, n)
                self._bases_seen[(k, base)] = ok
            if ok:
                return True
        return False

    def _base_tallies(self, removal: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        n = len(self.order)
        rows = []
        for r in range(n - 1):
            row = [0] * n
            for line, kept in enumerate(self.counts):
                pos = self.credit[line][r]
                if pos is not None:
                    row[pos] += kept - removal[line]
            rows.append(tuple(row[r:]))
        return tuple(rows)


def _tokens_feasible(
    base: tuple[tuple[int, ...], ...], k: int, n: int
) -> bool:
    """Can k added ballots be routed so every round's eliminee is minimal?

    base[r] holds kept-ballot tallies for order[r:]; tokens[j] rides
    candidate r+j at round r and may redistribute to strictly later
    candidates (or exhaust) when its candidate is eliminated.
    """
    rounds = n - 1
    memo: dict[tuple[int, tuple[int, ...]], bool] = {}

    def feasible(r: int, tokens: tuple[int, ...]) -> bool:
        key = (r, tokens)
        cached = memo.get(key)
        if cached is not None:
            return cached
        row = base[r]
        lowest = row[0] + tokens[0]
        ok = all(lowest <= row[j] + tokens[j] for j in range(1, len(row)))
        if ok and r < rounds - 1:
            ok = False
            for split in _compositions(tokens[0], len(tokens)):
                nxt = tuple(
                    tokens[j + 1] + split[j] for j in range(len(tokens) - 1)
                )
                if feasible(r + 1, nxt):
                    ok = True
                    break
        memo[key] = ok
        return ok

    return any(feasible(0, start) for start in _compositions(k, n))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All nonnegative integer tuples of the given length summing to total.

    With parts = m the last bucket absorbs the remainder, so for token
    transitions the final slot doubles as the exhaust bin.
    """
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _bounded_vectors(total: int, caps: list[int]) -> Iterator[tuple[int, ...]]:
    """Nonnegative vectors summing to total with per-slot caps."""
    if not caps:
        if total == 0:
            yield ()
        return
    head_cap = min(caps[0], total)
    for head in range(head_cap + 1):
        for rest in _bounded_vectors(total - head, caps[1:]):
            yield (head,) + rest
