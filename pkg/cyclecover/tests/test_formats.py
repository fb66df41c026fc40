# cyclecover/tests/test_formats.py

import pytest
from hypothesis import given

from cyclecover.core import verify_partition
from cyclecover.errors import ParseError
from cyclecover.formats import (
    format_instance,
    format_partition,
    parse_instance,
    parse_partition,
    read_instance,
    read_partition,
    write_instance,
)
from cyclecover.instances import gen_tri_config
from cyclecover.oracle import min_cycle_partition
from cyclecover.schemas import Cycle, CyclePartition, EdgeColouring

from .strategies import local_colourings


def test_format_instance_layout():
    """✅ Header "n s" then one shrinking row per vertex."""
    c, _ = gen_tri_config((1, 1, 1))
    text = format_instance(c, ["three colours"])
    assert text == "# three colours\n3 3\n0 1\n2\n"


def test_parse_instance_skips_comments():
    """✅ Comment and blank lines are ignored."""
    c = parse_instance("# hello\n\n3 1\n0 0\n# mid\n0\n")
    assert c == EdgeColouring.monochromatic(3)


def test_parse_degenerate_sizes():
    """✅ n = 0 and n = 1 have no rows."""
    assert parse_instance("0 0\n").n == 0
    assert parse_instance("1 0\n").n == 1


@pytest.mark.parametrize(
    "text",
    [
        "",
        "3\n0 0\n0\n",
        "3 1\n0 0 0\n0\n",
        "3 1\n0 0\n",
        "3 2\n0 0\n0\n",
        "3 1\n0 x\n0\n",
    ],
)
def test_parse_instance_errors(text):
    """❌ Malformed instance text raises ParseError."""
    with pytest.raises(ParseError):
        parse_instance(text)


@given(local_colourings(max_n=9))
def test_instance_file_is_stable(tmp_path_factory, c):
    path = tmp_path_factory.mktemp("inst") / "c.txt"
    write_instance(path, c)
    again = read_instance(path)
    assert again == c
    assert format_instance(again) == path.read_text(encoding="utf-8")


def test_partition_text():
    """✅ Colourless cycles are written with '-' and summary lines are skipped on read."""
    p = CyclePartition(cycles=(Cycle.of([0, 1, 2], 0), Cycle.of([3]), Cycle.empty()))
    text = format_partition(p)
    assert text == "0 0 1 2\n- 3\n-\n"
    assert parse_partition(text + "cycles=3 valid=True\n") == p


def test_parse_partition_errors():
    """❌ Colour on a singleton or a non-integer vertex is rejected."""
    with pytest.raises(ParseError):
        parse_partition("0 1\n")
    with pytest.raises(ParseError):
        parse_partition("0 1 a\n")


def test_partition_file_verifies_identically(tmp_path):
    """✅ A written witness reads back to the same verdict."""
    c, _ = gen_tri_config((2, 1, 2))
    _, p = min_cycle_partition(c)
    path = tmp_path / "p.txt"
    path.write_text(format_partition(p), encoding="utf-8")
    assert verify_partition(c, read_partition(path)) == verify_partition(c, p)
