"""Ranked-ballot data model: candidates, ballots, profiles, and the file format.

A profile is an immutable multiset of strict partial rankings over a declared
candidate roster.  Identical rankings are merged at construction, ballots are
kept in a canonical sorted order, and the serialization below round-trips
bit-exactly through parse_profile.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

# Separators used by the ballot file format; ":" also delimits id:party in the
# header line, and whitespace would make diagnostics ambiguous.
_FORBIDDEN_IN_ID = re.compile(r"[,>:\s]")

HEADER_PREFIX = "# candidates:"


class ProfileError(ValueError):
    """A profile violates a structural invariant."""


class ParseError(ProfileError):
    """A ballot file could not be parsed.  Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Candidate:
    """A candidate: stable id, display name, and party code ("none" if unaffiliated)."""

    id: str
    name: str = ""
    party: str = "none"

    def __post_init__(self):
        if not self.id or _FORBIDDEN_IN_ID.search(self.id):
            raise ProfileError(f"invalid candidate id {self.id!r}")
        if not self.name:
            object.__setattr__(self, "name", self.id)


@dataclass(frozen=True)
class Ballot:
    """A count of identical ballots sharing one strict ranking.

    The ranking is a non-empty sequence of distinct candidate ids, most
    preferred first.  Voters need not rank every candidate.
    """

    ranking: tuple[str, ...]
    count: int

    def __post_init__(self):
        object.__setattr__(self, "ranking", tuple(self.ranking))
        if not self.ranking:
            raise ProfileError("ballot ranks no candidates")
        if len(set(self.ranking)) != len(self.ranking):
            raise ProfileError(f"duplicate candidate in ranking {self.ranking!r}")
        if self.count < 1:
            raise ProfileError(f"nonpositive ballot count {self.count}")


@dataclass(frozen=True)
class Profile:
    """An election: candidate roster plus a normalized ballot multiset.

    Construction merges ballots with identical rankings, sorts them
    lexicographically, and validates every ranking against the roster.
    """

    candidates: tuple[Candidate, ...]
    ballots: tuple[Ballot, ...]

    def __post_init__(self):
        roster = tuple(sorted(self.candidates, key=lambda c: c.id))
        if len(roster) < 2:
            raise ProfileError("a profile needs at least two candidates")
        ids = [c.id for c in roster]
        if len(set(ids)) != len(ids):
            raise ProfileError("duplicate candidate id in roster")
        known = set(ids)
        merged: dict[tuple[str, ...], int] = {}
        for ballot in self.ballots:
            for cid in ballot.ranking:
                if cid not in known:
                    raise ProfileError(f"ballot ranks unknown candidate {cid!r}")
            merged[ballot.ranking] = merged.get(ballot.ranking, 0) + ballot.count
        normal = tuple(
            Ballot(ranking, count) for ranking, count in sorted(merged.items())
        )
        object.__setattr__(self, "candidates", roster)
        object.__setattr__(self, "ballots", normal)

    @cached_property
    def candidate_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.candidates)

    @cached_property
    def total(self) -> int:
        return sum(b.count for b in self.ballots)

    def party_of(self, candidate_id: str) -> str:
        for c in self.candidates:
            if c.id == candidate_id:
                return c.party
        raise KeyError(candidate_id)

    @staticmethod
    def from_rankings(
        counts: Mapping[str, int],
        parties: Mapping[str, str] | None = None,
        extra_candidates: Iterable[str] = (),
    ) -> "Profile":
        """Convenience constructor from {"a>b>c": count} style mappings."""
        parties = dict(parties or {})
        ballots = []
        seen: set[str] = set(extra_candidates)
        for text, count in counts.items():
            ranking = tuple(tok.strip() for tok in text.split(">"))
            ballots.append(Ballot(ranking, count))
            seen.update(ranking)
        roster = tuple(
            Candidate(cid, party=parties.get(cid, "none")) for cid in sorted(seen)
        )
        return Profile(roster, tuple(ballots))


def restrict(ballot: Ballot, standing: Iterable[str]) -> tuple[str, ...]:
    """Project a ranking onto the standing candidates, preserving order."""
    keep = set(standing)
    return tuple(c for c in ballot.ranking if c in keep)


def first_preference(ballot: Ballot, standing: Iterable[str]) -> str | None:
    """The ballot's most-preferred standing candidate, or None if exhausted."""
    keep = set(standing)
    for c in ballot.ranking:
        if c in keep:
            return c
    return None


def parse_profile(text: str) -> Profile:
    """Parse the ballot file format.

    The roster comes from a single header line::

        # candidates: a:none,b:IND,c:ALP

    Every other ``#`` line is a comment.  Records are ``count,c1>c2>...``
    with positive integer counts.  Duplicate rankings are merged; errors
    carry the offending line number.
    """
    candidates: list[Candidate] | None = None
    ballots: list[Ballot] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.lower().startswith(HEADER_PREFIX):
                if candidates is not None:
                    raise ParseError("duplicate candidate roster line", lineno)
                candidates = _parse_roster(line[len(HEADER_PREFIX):], lineno)
            continue
        if candidates is None:
            raise ParseError("ballot record before candidate roster", lineno)
        ballots.append(_parse_record(line, candidates, lineno))
    if candidates is None:
        raise ParseError("no candidate roster line found")
    try:
        return Profile(tuple(candidates), tuple(ballots))
    except ProfileError as exc:
        raise ParseError(str(exc)) from exc


def _parse_roster(body: str, lineno: int) -> list[Candidate]:
    entries = [e.strip() for e in body.split(",")]
    if entries == [""]:
        raise ParseError("empty candidate roster", lineno)
    roster = []
    for entry in entries:
        if ":" not in entry:
            raise ParseError(f"roster entry {entry!r} is not id:party", lineno)
        cid, _, party = entry.partition(":")
        cid, party = cid.strip(), party.strip()
        if not cid or not party:
            raise ParseError(f"roster entry {entry!r} is not id:party", lineno)
        try:
            roster.append(Candidate(cid, party=party))
        except ProfileError as exc:
            raise ParseError(str(exc), lineno) from exc
    return roster


def _parse_record(line: str, roster: list[Candidate], lineno: int) -> Ballot:
    head, sep, tail = line.partition(",")
    if not sep:
        raise ParseError("record is not count,ranking", lineno)
    try:
        count = int(head.strip())
    except ValueError:
        raise ParseError(f"bad ballot count {head.strip()!r}", lineno) from None
    if count < 1:
        raise ParseError(f"nonpositive ballot count {count}", lineno)
    tokens = [t.strip() for t in tail.split(">")]
    if any(not t for t in tokens):
        raise ParseError("empty candidate id in ranking", lineno)
    known = {c.id for c in roster}
    for tok in tokens:
        if tok not in known:
            raise ParseError(f"unknown candidate {tok!r} in ranking", lineno)
    if len(set(tokens)) != len(tokens):
        raise ParseError("duplicate candidate in ranking", lineno)
    return Ballot(tuple(tokens), count)


def serialize_profile(profile: Profile) -> str:
    """Emit the canonical ballot file: sorted roster, sorted rankings."""
    lines = [
        HEADER_PREFIX + " "
        + ",".join(f"{c.id}:{c.party}" for c in profile.candidates)
    ]
    for ballot in profile.ballots:
        lines.append(f"{ballot.count},{'>'.join(ballot.ranking)}")
    return "\n".join(lines) + "\n"
