from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from irvmargin.cli import main

EXAMPLE_WITH_PARTIES = """\
# candidates: a:ALP, b:LIB, c:GRE
55,a
41,b>c
15,c
25,c>a
"""

SMALL_SEAT = """\
# candidates: x:ALP, y:LIB
6,x
9,y
"""

CHEAP_SEAT = """\
# candidates: z:ALP, w:LIB
4,z
3,w
"""

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def seat_file(tmp_path: Path) -> Path:
    path = tmp_path / "seat.ballots"
    path.write_text(EXAMPLE_WITH_PARTIES, encoding="utf-8")
    return path


@pytest.fixture
def manifest(tmp_path: Path) -> Path:
    (tmp_path / "seat1.ballots").write_text(EXAMPLE_WITH_PARTIES, encoding="utf-8")
    (tmp_path / "seat2.ballots").write_text(SMALL_SEAT, encoding="utf-8")
    (tmp_path / "seat3.ballots").write_text(CHEAP_SEAT, encoding="utf-8")
    path = tmp_path / "manifest.json"
    path.write_text(
        json.dumps(
            {
                "seats": [
                    {"name": "First", "path": "seat1.ballots", "parties": {}},
                    {"name": "Second", "path": "seat2.ballots", "parties": {}},
                    {"name": "Third", "path": "seat3.ballots", "parties": {}},
                ],
                "options": {},
            }
        ),
        encoding="utf-8",
    )
    return path


def test_tabulate_table_format(seat_file: Path, capsys: pytest.CaptureFixture) -> None:
    assert main(["tabulate", str(seat_file), "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "eliminated: c" in out
    assert "eliminated: b" in out
    assert "winner: a" in out
    assert "last-round margin: 20" in out


def test_tabulate_csv_format(seat_file: Path, capsys: pytest.CaptureFixture) -> None:
    assert main(["tabulate", str(seat_file), "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "kind,round,key,value"
    assert "tally,1,a,55" in lines
    assert "tally,2,a,80" in lines
    assert "winner,,a," in lines
    assert "lrm,,,20" in lines


def test_tabulate_json_is_byte_identical_across_runs(
    seat_file: Path, capsys: pytest.CaptureFixture
) -> None:
    assert main(["tabulate", str(seat_file), "--format", "json"]) == 0
    first = capsys.readouterr().out
    assert main(["tabulate", str(seat_file), "--format", "json"]) == 0
    second = capsys.readouterr().out
    assert first == second
    report = json.loads(first)
    assert report["winner"] == "a"
    assert report["last_round_margin"] == 20
    assert first == json.dumps(report, indent=2, sort_keys=True) + "\n"


def test_margin_json_report(seat_file: Path, capsys: pytest.CaptureFixture) -> None:
    assert main(["margin", str(seat_file), "--format", "json", "--stats"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["value"] == 1
    assert report["winner"] == "a"
    assert report["witness_order"] == ["b", "a", "c"]
    assert report["witness_changes"] == {
        "removals": {"b>c": 1},
        "additions": {"c": 1},
    }
    assert report["stats"] == {
        "nodes_expanded": 4,
        "lps_solved": 4,
        "ips_solved": 2,
    }


def test_movc_alias_with_candidate_ids(
    seat_file: Path, capsys: pytest.CaptureFixture
) -> None:
    assert main(["movc", str(seat_file), "--alternates", "b", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["value"] == 10
    assert report["witness_order"] == ["a", "c", "b"]


def test_alternates_accept_party_codes(
    seat_file: Path, capsys: pytest.CaptureFixture
) -> None:
    assert main(["margin", str(seat_file), "--alternates", "GRE", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["alternates"] == ["c"]
    assert report["value"] == 1


def test_unknown_alternate_fails(seat_file: Path, capsys: pytest.CaptureFixture) -> None:
    assert main(["margin", str(seat_file), "--alternates", "zz"]) == 1
    assert "zz" in capsys.readouterr().err


def test_winner_as_alternate_fails(seat_file: Path, capsys: pytest.CaptureFixture) -> None:
    assert main(["margin", str(seat_file), "--alternates", "a"]) == 1
    assert "already wins" in capsys.readouterr().err


def test_tabulate_two_candidate_race(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    pair = tmp_path / "pair.ballots"
    pair.write_text("# candidates: a:none,b:none\n3,a\n2,b\n", encoding="utf-8")
    assert main(["tabulate", str(pair), "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["winner"] == "a"
    assert report["last_round_margin"] == 1


def test_parse_errors_report_line_numbers(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    bad = tmp_path / "bad.ballots"
    bad.write_text("# candidates: a:none,b:none\n1,a\nnope\n", encoding="utf-8")
    assert main(["tabulate", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "line 3" in err


def test_missing_roster_fails(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    bad = tmp_path / "bad.ballots"
    bad.write_text("1,a\n", encoding="utf-8")
    assert main(["tabulate", str(bad)]) == 1
    assert "line 1" in capsys.readouterr().err


def test_tie_failure_exits_nonzero(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    tied = tmp_path / "tied.ballots"
    tied.write_text("# candidates: a:none,b:none\n5,a\n5,b\n", encoding="utf-8")
    assert main(["tabulate", str(tied)]) == 1
    assert "tie" in capsys.readouterr().err
    assert main(["tabulate", str(tied), "--tie-rule", "lex"]) == 0


def test_seeded_tabulate_needs_no_file(capsys: pytest.CaptureFixture) -> None:
    assert main(["tabulate", "--seed", "1", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["rounds"]) == 7
    opening = report["rounds"][0]
    assert sum(opening["tallies"].values()) + opening["exhausted"] == 50_000


def test_dump_lp_writes_model_to_stderr(
    seat_file: Path, capsys: pytest.CaptureFixture
) -> None:
    assert main(["margin", str(seat_file), "--dump-lp", "--format", "json"]) == 0
    captured = capsys.readouterr()
    assert "minimize:" in captured.err
    assert "conserve:" in captured.err
    json.loads(captured.out)


def test_parliament_fixture_totals(capsys: pytest.CaptureFixture) -> None:
    records = str(FIXTURES / "nsw2015.csv")
    assert main(
        ["parliament", records, "--coalition", "LIB+NAT", "--mode", "lose", "--format", "json"]
    ) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["total_changes"] == 10398
    assert report["threshold"] == 47
    assert len(report["seats"]) == 8
    assert report["seats"][0] == {"seat": "East Hills", "changes": 189}

    assert main(
        ["parliament", records, "--coalition", "ALP+CLP", "--mode", "win", "--format", "json"]
    ) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["total_changes"] == 22746
    assert len(report["seats"]) == 13

    assert main(
        ["parliament", records, "--coalition", "ALP+CLP+GRE", "--mode", "win", "--format", "json"]
    ) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["total_changes"] == 16349
    assert len(report["seats"]) == 10


def test_parliament_manifest_win(manifest: Path, capsys: pytest.CaptureFixture) -> None:
    assert main(
        ["parliament", str(manifest), "--coalition", "LIB", "--mode", "win", "--format", "json"]
    ) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["mode"] == "win-majority"
    assert report["threshold"] == 2
    assert report["seats"] == [{"seat": "Third", "changes": 1}]
    assert report["total_changes"] == 1


def test_parliament_manifest_lose(manifest: Path, capsys: pytest.CaptureFixture) -> None:
    assert main(
        ["parliament", str(manifest), "--coalition", "ALP", "--mode", "lose", "--format", "json"]
    ) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["mode"] == "lose-majority"
    assert report["seats_needed"] == 1
    # Both held seats flip for 1; the tie breaks on the seat name.
    assert report["seats"] == [{"seat": "First", "changes": 1}]


def test_parliament_workers_do_not_change_output(
    manifest: Path, capsys: pytest.CaptureFixture
) -> None:
    args = ["parliament", str(manifest), "--coalition", "LIB", "--mode", "win", "--format", "json"]
    assert main(args + ["--workers", "1"]) == 0
    serial = capsys.readouterr().out
    assert main(args + ["--workers", "2"]) == 0
    parallel = capsys.readouterr().out
    assert serial == parallel


def test_parliament_lose_without_majority_fails(
    manifest: Path, capsys: pytest.CaptureFixture
) -> None:
    assert main(
        ["parliament", str(manifest), "--coalition", "GRE", "--mode", "lose"]
    ) == 1
    assert "majority" in capsys.readouterr().err


def test_oracle_subcommand(seat_file: Path, capsys: pytest.CaptureFixture) -> None:
    assert main(["oracle", str(seat_file), "--alternates", "b"]) == 0
    assert "10" in capsys.readouterr().out
    assert main(["oracle", "--seed", "2", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["value"] == 4
    assert report["above_cap"] is False


def test_module_entry_point_runs() -> None:
    proc = subprocess.run(
        [sys.executable, "-m", "irvmargin", "--help"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "tabulate" in proc.stdout
    assert "oracle" not in proc.stdout.split("positional")[0]
