"""Chamber-level aggregation: fewest ballot changes to flip or build a majority.

Seat records carry per-seat margins (last-round margin, margin of victory,
and targeted margins keyed by coalition).  Scenario arithmetic then reduces
to sorting: changing control needs the cheapest W - T + 1 coalition seats to
fall, reaching control needs the cheapest T - W' seats to be captured, where
T is the majority threshold and W (W') the seats currently held.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class CoalitionLacksMajority(ValueError):
    """Lose-majority analysis of a coalition that does not hold a majority."""


class MissingMovc(ValueError):
    """A seat needed by the scenario has no margin toward the target coalition."""


def coalition_key(parties: Iterable[str]) -> str:
    """Canonical name for a coalition: sorted, upper-cased, '+'-joined."""
    named = sorted({p.strip().upper() for p in parties if p.strip()})
    if not named:
        raise ValueError("empty coalition")
    return "+".join(named)


@dataclass(frozen=True)
class SeatRecord:
    """Published margins for one single-member seat.

    movc_by_target maps coalition keys (see coalition_key) to the number of
    ballot changes needed to elect some candidate of that coalition; zero for
    seats the coalition already holds.
    """

    seat: str
    num_candidates: int
    lrm: int
    mov: int
    winner: str
    winner_party: str
    movc_by_target: Mapping[str, int]

    def movc_for(self, key: str) -> int | None:
        return self.movc_by_target.get(key)


@dataclass(frozen=True)
class ParliamentScenario:
    mode: str
    coalition: tuple[str, ...]
    threshold: int
    seats_needed: int
    chosen_seats: tuple[tuple[str, int], ...]
    total_changes: int


def threshold(num_seats: int) -> int:
    """Seats required for a strict majority of a chamber of num_seats."""
    if num_seats < 1:
        raise ValueError("a chamber needs at least one seat")
    return (num_seats + 2) // 2


def _coalition_set(coalition: Iterable[str]) -> frozenset[str]:
    parties = frozenset(p.strip().upper() for p in coalition if p.strip())
    if not parties:
        raise ValueError("empty coalition")
    return parties


def _party_roster(records: Sequence[SeatRecord]) -> frozenset[str]:
    roster = {r.winner_party.upper() for r in records}
    for r in records:
        for key in r.movc_by_target:
            roster.update(key.upper().split("+"))
    return frozenset(roster)


def seats_to_lose_majority(
    records: Sequence[SeatRecord],
    coalition: Iterable[str],
    threshold_seats: int,
    complement_key: str | None = None,
) -> ParliamentScenario:
    """Fewest ballot changes flipping enough coalition seats to break a majority.

    Each flipped seat must go to a candidate outside the coalition.  The cost
    per seat is, in order of preference: the margin stored under
    complement_key; the margin stored under the key for every non-coalition
    party in the records' roster; otherwise the seat's MOV, which equals the
    margin toward non-coalition candidates whenever no seat fields two
    coalition candidates.
    """
    parties = _coalition_set(coalition)
    held = [r for r in records if r.winner_party.upper() in parties]
    surplus = len(held) - threshold_seats + 1
    if surplus < 1:
        raise CoalitionLacksMajority(
            f"coalition {coalition_key(parties)} holds {len(held)} of the "
            f"{threshold_seats} seats needed for a majority"
        )
    lookup_key = complement_key
    if lookup_key is None:
        complement = _party_roster(records) - parties
        if complement:
            candidate_key = coalition_key(complement)
            if all(r.movc_for(candidate_key) is not None for r in held):
                lookup_key = candidate_key

    def cost(record: SeatRecord) -> int:
        if lookup_key is not None:
            value = record.movc_for(lookup_key)
            if value is None:
                raise MissingMovc(
                    f"seat {record.seat!r} lacks movc:{lookup_key}"
                )
            return value
        return record.mov

    ranked = sorted(held, key=lambda r: (cost(r), r.seat))
    chosen = tuple((r.seat, cost(r)) for r in ranked[:surplus])
    return ParliamentScenario(
        mode="lose-majority",
        coalition=tuple(sorted(parties)),
        threshold=threshold_seats,
        seats_needed=surplus,
        chosen_seats=chosen,
        total_changes=sum(v for _, v in chosen),
    )


def seats_to_win(
    records: Sequence[SeatRecord],
    coalition: Iterable[str],
    threshold_seats: int,
) -> ParliamentScenario:
    """Fewest ballot changes giving the coalition a majority of seats.

    Uses each non-coalition seat's margin toward the coalition
    (movc_by_target under the coalition's key) and picks the cheapest
    threshold - held seats.  A coalition already at the threshold needs
    nothing: the scenario comes back empty with zero total.
    """
    parties = _coalition_set(coalition)
    key = coalition_key(parties)
    held = sum(1 for r in records if r.winner_party.upper() in parties)
    needed = threshold_seats - held
    if needed <= 0:
        return ParliamentScenario(
            mode="win-majority",
            coalition=tuple(sorted(parties)),
            threshold=threshold_seats,
            seats_needed=0,
            chosen_seats=(),
            total_changes=0,
        )
    targets = [r for r in records if r.winner_party.upper() not in parties]
    missing = [r.seat for r in targets if r.movc_for(key) is None]
    if missing:
        raise MissingMovc(
            f"seats lacking movc:{key}: {', '.join(sorted(missing))}"
        )
    if needed > len(targets):
        raise ValueError(
            f"coalition {key} cannot reach {threshold_seats} seats: "
            f"only {len(targets)} seats are winnable"
        )
    ranked = sorted(targets, key=lambda r: (r.movc_for(key), r.seat))
    chosen = tuple((r.seat, r.movc_for(key)) for r in ranked[:needed])
    return ParliamentScenario(
        mode="win-majority",
        coalition=tuple(sorted(parties)),
        threshold=threshold_seats,
        seats_needed=needed,
        chosen_seats=chosen,
        total_changes=sum(v for _, v in chosen),
    )


_BASE_COLUMNS = ["seat", "num_candidates", "lrm", "mov", "winner", "winner_party"]


def load_seat_records(text: str) -> list[SeatRecord]:
    """Parse the seat-record CSV; movc:<KEY> columns become movc_by_target."""
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    missing = [c for c in _BASE_COLUMNS if c not in header]
    if missing:
        raise ValueError(f"seat CSV missing columns: {', '.join(missing)}")
    movc_columns = [c for c in header if c.startswith("movc:")]
    records = []
    for i, row in enumerate(reader, start=2):
        try:
            movc = {}
            for col in movc_columns:
                cell = (row[col] or "").strip()
                if cell:
                    movc[coalition_key(col[len("movc:"):].split("+"))] = int(cell)
            records.append(
                SeatRecord(
                    seat=row["seat"].strip(),
                    num_candidates=int(row["num_candidates"]),
                    lrm=int(row["lrm"]),
                    mov=int(row["mov"]),
                    winner=row["winner"].strip(),
                    winner_party=row["winner_party"].strip(),
                    movc_by_target=movc,
                )
            )
        except (ValueError, AttributeError, KeyError) as exc:
            raise ValueError(f"line {i}: bad seat record ({exc})") from exc
    if not records:
        raise ValueError("seat CSV contains no records")
    return records


def dump_seat_records(records: Sequence[SeatRecord]) -> str:
    """Canonical CSV for seat records (inverse of load_seat_records)."""
    keys = sorted({k for r in records for k in r.movc_by_target})
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_BASE_COLUMNS + [f"movc:{k}" for k in keys])
    for r in records:
        row = [r.seat, r.num_candidates, r.lrm, r.mov, r.winner, r.winner_party]
        for k in keys:
            v = r.movc_for(k)
            row.append("" if v is None else v)
        writer.writerow(row)
    return out.getvalue()
