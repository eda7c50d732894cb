from __future__ import annotations

from pathlib import Path

import pytest

from irvmargin import Profile, parse_profile

EXAMPLE1 = """\
# candidates: a:none, b:none, c:none
55,a
41,b>c
15,c
25,c>a
"""

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def example1() -> Profile:
    """Three-candidate profile where the true margin (1) sits far below
    the last-round margin (20)."""
    return parse_profile(EXAMPLE1)


@pytest.fixture
def nsw_records_text() -> str:
    return (FIXTURES / "nsw2015.csv").read_text(encoding="utf-8")
