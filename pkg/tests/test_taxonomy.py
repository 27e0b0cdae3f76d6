import pytest
from hypothesis import given
from hypothesis import strategies as st

from mpglab.errors import CoordinateError
from mpglab.taxonomy import (
    Cell,
    all_cells,
    cell_from_index,
    cell_index,
    validate_cell,
    validate_unique_assignment,
)


def test_validate_cell_corners():
    assert validate_cell(1, 1) == Cell(1, 1)
    assert validate_cell(6, 3) == Cell(6, 3)


def test_validate_cell_out_of_range_layer():
    with pytest.raises(CoordinateError, match="layer"):
        validate_cell(7, 1)
    with pytest.raises(CoordinateError, match="layer"):
        validate_cell(0, 2)


def test_validate_cell_out_of_range_domain():
    with pytest.raises(CoordinateError, match="domain"):
        validate_cell(3, 4)
    with pytest.raises(CoordinateError, match="domain"):
        validate_cell(3, 0)


def test_cell_index_examples():
    assert cell_index(Cell(1, 1)) == 0
    assert cell_index(Cell(2, 1)) == 3  # (2-1)*3 + (1-1)
    assert cell_index(Cell(6, 3)) == 17  # (6-1)*3 + (3-1)


def test_cell_index_bijection():
    indices = [cell_index(cell) for cell in all_cells()]
    assert sorted(indices) == list(range(18))


@given(st.integers(min_value=0, max_value=17))
def test_cell_index_round_trip(k):
    assert cell_index(cell_from_index(k)) == k


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=3))
def test_validate_round_trip(layer, domain):
    cell = validate_cell(layer, domain)
    assert cell_from_index(cell_index(cell)) == cell


def test_cell_names_present():
    cell = Cell(2, 3)
    assert cell.layer_name == "Facility"
    assert "Economics" in cell.domain_name


def test_unique_assignment_passes_on_disjoint_ids():
    pairs = [("a", Cell(1, 1)), ("b", Cell(1, 2)), ("c", Cell(6, 3))]
    report = validate_unique_assignment(pairs)
    assert report.passed
    assert report.assignments["a"] == Cell(1, 1)
    assert report.coverage[Cell(6, 3)] == 1


def test_unique_assignment_flags_multi_cell_metric():
    pairs = [("pue", Cell(2, 1)), ("pue", Cell(6, 3))]
    report = validate_unique_assignment(pairs)
    assert not report.passed
    assert report.multi_cell_ids == ["pue"]


def test_unique_assignment_flags_duplicates_within_a_cell():
    pairs = [("pue", Cell(2, 1)), ("pue", Cell(2, 1))]
    report = validate_unique_assignment(pairs)
    assert not report.passed
    assert report.duplicate_ids == ["pue"]
    assert not report.multi_cell_ids


def test_unique_assignment_empty_catalog_is_vacuously_fine():
    report = validate_unique_assignment([])
    assert report.passed
    assert report.assignments == {}
