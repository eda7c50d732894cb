from __future__ import annotations

import random

import pytest

from irvmargin import (
    CoalitionLacksMajority,
    MissingMovc,
    SeatRecord,
    coalition_key,
    dump_seat_records,
    load_seat_records,
    seats_to_lose_majority,
    seats_to_win,
    threshold,
)

LOSE_COALITION_SEATS = [
    ("East Hills", 189),
    ("Lismore", 209),
    ("Upper Hunter", 866),
    ("Monaro", 1122),
    ("Coogee", 1243),
    ("Tweed", 1291),
    ("Penrith", 2576),
    ("Holsworthy", 2902),
]

WIN_ALP_CLP_SEATS = [
    ("East Hills", 189),
    ("Lismore", 209),
    ("Upper Hunter", 866),
    ("Monaro", 1122),
    ("Balina", 1130),
    ("Coogee", 1243),
    ("Tweed", 1291),
    ("Balmain", 1731),
    ("Penrith", 2576),
    ("Holsworthy", 2902),
    ("Goulburn", 2945),
    ("Oatley", 3006),
    ("Newtown", 3536),
]

WIN_ALP_CLP_GRE_SEATS = [
    ("East Hills", 189),
    ("Lismore", 209),
    ("Upper Hunter", 866),
    ("Monaro", 1122),
    ("Coogee", 1243),
    ("Tweed", 1291),
    ("Penrith", 2576),
    ("Holsworthy", 2902),
    ("Goulburn", 2945),
    ("Oatley", 3006),
]


def _record(
    seat: str,
    winner_party: str,
    mov: int,
    movc: dict[str, int] | None = None,
) -> SeatRecord:
    return SeatRecord(
        seat=seat,
        num_candidates=5,
        lrm=mov,
        mov=mov,
        winner=winner_party.lower(),
        winner_party=winner_party,
        movc_by_target=dict(movc or {}),
    )


def test_threshold_examples() -> None:
    assert threshold(93) == 47
    assert threshold(4) == 3
    assert threshold(5) == 3
    assert threshold(6) == 4
    assert threshold(100) == 51
    assert threshold(1) == 1


def test_coalition_key_normalizes() -> None:
    assert coalition_key(["nat", "LIB"]) == "LIB+NAT"
    assert coalition_key(["ALP"]) == "ALP"
    assert coalition_key(["gre", "clp", "alp"]) == "ALP+CLP+GRE"


def test_fixture_round_trips(nsw_records_text: str) -> None:
    records = load_seat_records(nsw_records_text)
    assert len(records) == 93
    assert dump_seat_records(records) == nsw_records_text
    sydney = next(r for r in records if r.seat == "Sydney")
    assert sydney.mov == 2864
    assert sydney.movc_for("ALP+CLP") == 5583
    assert sydney.movc_for("ALP+CLP+GRE") == 5583
    assert sydney.movc_for("LIB+NAT") is None
    held = next(r for r in records if r.seat == "Gosford")
    assert held.movc_for("ALP+CLP") == 0


def test_fixture_margin_invariants(nsw_records_text: str) -> None:
    # Coalition margins can never beat the unrestricted margin; the zero
    # entries mark seats the coalition already holds.
    for record in load_seat_records(nsw_records_text):
        assert 0 < record.mov <= record.lrm, record.seat
        for key, value in record.movc_by_target.items():
            if record.winner_party in key.split("+"):
                assert value == 0, (record.seat, key)
            else:
                assert value >= record.mov, (record.seat, key)


def test_lose_majority_totals(nsw_records_text: str) -> None:
    records = load_seat_records(nsw_records_text)
    scenario = seats_to_lose_majority(records, ["LIB", "NAT"], threshold(93))
    assert scenario.mode == "lose-majority"
    assert scenario.seats_needed == 8
    assert scenario.chosen_seats == tuple(LOSE_COALITION_SEATS)
    assert scenario.total_changes == 10398


def test_win_majority_totals(nsw_records_text: str) -> None:
    records = load_seat_records(nsw_records_text)
    scenario = seats_to_win(records, ["ALP", "CLP"], threshold(93))
    assert scenario.seats_needed == 13
    assert scenario.chosen_seats == tuple(WIN_ALP_CLP_SEATS)
    assert scenario.total_changes == 22746


def test_win_majority_with_greens(nsw_records_text: str) -> None:
    records = load_seat_records(nsw_records_text)
    scenario = seats_to_win(records, ["ALP", "CLP", "GRE"], threshold(93))
    assert scenario.seats_needed == 10
    assert scenario.chosen_seats == tuple(WIN_ALP_CLP_GRE_SEATS)
    assert scenario.total_changes == 16349


def test_sydney_uses_movc_not_mov(nsw_records_text: str) -> None:
    # Sydney's margin of victory (2864) undercuts Newtown's targeted value
    # (3536), but electing just anyone in Sydney does not help the
    # coalition; the targeted value (5583) keeps Sydney out of the basket.
    records = load_seat_records(nsw_records_text)
    npos = {r.seat: i for i, r in enumerate(records)}
    substituted = list(records)
    sydney = records[npos["Sydney"]]
    substituted[npos["Sydney"]] = SeatRecord(
        seat=sydney.seat,
        num_candidates=sydney.num_candidates,
        lrm=sydney.lrm,
        mov=sydney.mov,
        winner=sydney.winner,
        winner_party=sydney.winner_party,
        movc_by_target={**sydney.movc_by_target, "ALP+CLP": sydney.mov},
    )
    scenario = seats_to_win(substituted, ["ALP", "CLP"], threshold(93))
    chosen = dict(scenario.chosen_seats)
    assert chosen["Sydney"] == 2864
    assert "Newtown" not in chosen
    assert scenario.total_changes == 22746 - 3536 + 2864 == 22074


def test_scenarios_ignore_record_order(nsw_records_text: str) -> None:
    records = load_seat_records(nsw_records_text)
    shuffled = list(records)
    random.Random(3).shuffle(shuffled)
    base = seats_to_lose_majority(records, ["LIB", "NAT"], threshold(93))
    moved = seats_to_lose_majority(shuffled, ["LIB", "NAT"], threshold(93))
    assert base == moved
    assert seats_to_win(records, ["ALP", "CLP"], threshold(93)) == seats_to_win(
        shuffled, ["ALP", "CLP"], threshold(93)
    )


def test_lose_requires_majority() -> None:
    records = [_record(f"s{i}", "ALP", 100 + i) for i in range(5)]
    with pytest.raises(CoalitionLacksMajority):
        seats_to_lose_majority(records, ["LIB"], threshold(5))


def test_lose_prefers_explicit_complement_key() -> None:
    records = [
        _record("s1", "LIB", 50, {"ALP": 300}),
        _record("s2", "LIB", 60, {"ALP": 100}),
        _record("s3", "ALP", 10),
    ]
    scenario = seats_to_lose_majority(
        records, ["LIB"], threshold(3), complement_key="ALP"
    )
    assert scenario.seats_needed == 1
    assert scenario.chosen_seats == (("s2", 100),)
    with pytest.raises(MissingMovc):
        seats_to_lose_majority(
            records, ["LIB"], threshold(3), complement_key="GRE"
        )


def test_lose_falls_back_to_roster_complement_then_mov() -> None:
    keyed = [
        _record("s1", "LIB", 50, {"ALP": 300}),
        _record("s2", "LIB", 60, {"ALP": 100}),
        _record("s3", "ALP", 10),
    ]
    # Both held seats carry the roster-complement key, so it is used.
    scenario = seats_to_lose_majority(keyed, ["LIB"], threshold(3))
    assert scenario.chosen_seats == (("s2", 100),)
    bare = [
        _record("s1", "LIB", 50),
        _record("s2", "LIB", 60),
        _record("s3", "ALP", 10),
    ]
    # No keyed values anywhere: fall back to each seat's margin of victory.
    scenario = seats_to_lose_majority(bare, ["LIB"], threshold(3))
    assert scenario.chosen_seats == (("s1", 50),)


def test_win_when_already_holding_majority() -> None:
    records = [_record(f"s{i}", "ALP", 100) for i in range(3)]
    scenario = seats_to_win(records, ["ALP"], threshold(3))
    assert scenario.seats_needed == 0
    assert scenario.chosen_seats == ()
    assert scenario.total_changes == 0


def test_win_requires_target_values() -> None:
    records = [
        _record("s1", "LIB", 50),
        _record("s2", "LIB", 60, {"ALP": 80}),
        _record("s3", "ALP", 10),
    ]
    with pytest.raises(MissingMovc):
        seats_to_win(records, ["ALP"], threshold(3))


def test_win_ranks_by_target_value_then_seat() -> None:
    records = [
        _record("s1", "LIB", 50, {"ALP": 70}),
        _record("s2", "LIB", 60, {"ALP": 70}),
        _record("s3", "LIB", 10, {"ALP": 90}),
        _record("s4", "ALP", 10),
    ]
    scenario = seats_to_win(records, ["ALP"], threshold(4))
    assert scenario.seats_needed == 2
    assert scenario.chosen_seats == (("s1", 70), ("s2", 70))
    assert scenario.total_changes == 140


def test_malformed_records_carry_line_numbers() -> None:
    header = (
        "seat,num_candidates,lrm,mov,winner,winner_party,movc:ALP\n"
    )
    with pytest.raises(ValueError, match="line 2"):
        load_seat_records(header + "X,notanint,5,5,w,LIB,9\n")
    with pytest.raises(ValueError, match="line 3"):
        load_seat_records(header + "X,4,5,5,w,LIB,9\nY,4,5,5,w\n")
