import numpy as np
import pytest

from groupmax.cuts import CutSet, export_cuts, format_cutset, import_cuts, parse_cutset
from groupmax.utils.errors import CutFileParseError

ABS_FILE = "cuts v1 dim=1 n=2\n0.0 1.0\n0.0 -1.0\n"


def test_absolute_value_file():
    cuts = CutSet([[1.0], [-1.0]], [0.0, 0.0])
    assert format_cutset(cuts) == ABS_FILE
    assert parse_cutset(ABS_FILE) == cuts


def test_file_round_trip_is_bit_exact(tmp_path, rng):
    cuts = CutSet(rng.standard_normal((7, 3)), rng.standard_normal(7) / 3, x_tilde=[0.1, -2.5])
    path = export_cuts(cuts, tmp_path / "cuts" / "set.txt")
    loaded = import_cuts(path)
    assert loaded == cuts
    assert loaded.is_conditional
    np.testing.assert_array_equal(loaded.x_tilde, [0.1, -2.5])


@pytest.mark.parametrize(
    ("text", "line_number"),
    [
        ("", 1),
        ("cutz v1 dim=1 n=1\n0 1\n", 1),
        ("cuts v2 dim=1 n=1\n0 1\n", 1),
        ("cuts v1 dim=0 n=1\n0 1\n", 1),
        ("cuts v1 dim=1 n=1 extra\n0 1\n", 1),
        ("cuts v1 dim=1 n=2\n0.0 1.0\n", 3),
        ("cuts v1 dim=1 n=1\n0.0 1.0\n2.0 3.0\n", 3),
        ("cuts v1 dim=2 n=1\n0.0 1.0\n", 2),
        ("cuts v1 dim=1 n=2\n0.0 1.0\n0.0 abc\n", 3),
        ("cuts v1 dim=1 n=1\nnan 1.0\n", 2),
    ],
)
def test_malformed_files_name_the_line(text, line_number):
    with pytest.raises(CutFileParseError) as excinfo:
        parse_cutset(text)
    assert excinfo.value.line_number == line_number
    assert str(excinfo.value).startswith(f"line {line_number}:")
