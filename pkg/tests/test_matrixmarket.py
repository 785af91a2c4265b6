import numpy as np
import pytest

from sparsekaczmarz import read_matrix_market, write_matrix_market
from sparsekaczmarz.errors import ParseError, UnsupportedFieldError


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def test_coordinate_real_general(tmp_path):
    path = tmp_path / "diag.mtx"
    write_lines(
        path,
        [
            "%%MatrixMarket matrix coordinate real general",
            "2 2 2",
            "1 1 3.0",
            "2 2 4.0",
        ],
    )
    assert np.array_equal(read_matrix_market(path), np.diag([3.0, 4.0]))


def test_one_based_indices_convert(tmp_path):
    path = tmp_path / "corner.mtx"
    write_lines(
        path,
        [
            "%%MatrixMarket matrix coordinate real general",
            "3 3 1",
            "3 1 -2.5",
        ],
    )
    out = read_matrix_market(path)
    assert out[2, 0] == -2.5
    assert np.count_nonzero(out) == 1


def test_symmetric_lower_triangle_expands(tmp_path):
    path = tmp_path / "sym.mtx"
    write_lines(
        path,
        [
            "%%MatrixMarket matrix coordinate real symmetric",
            "3 3 4",
            "1 1 1.0",
            "2 1 5.0",
            "3 2 -1.0",
            "3 3 2.0",
        ],
    )
    out = read_matrix_market(path)
    expected = np.array([[1.0, 5.0, 0.0], [5.0, 0.0, -1.0], [0.0, -1.0, 2.0]])
    assert np.array_equal(out, expected)


def test_duplicate_entries_are_summed(tmp_path):
    path = tmp_path / "dup.mtx"
    write_lines(
        path,
        [
            "%%MatrixMarket matrix coordinate real general",
            "2 2 3",
            "1 1 1.5",
            "1 1 2.5",
            "2 1 1.0",
        ],
    )
    out = read_matrix_market(path)
    assert out[0, 0] == 4.0
    assert out[1, 0] == 1.0


def test_comments_and_blank_lines_skipped(tmp_path):
    path = tmp_path / "comments.mtx"
    write_lines(
        path,
        [
            "%%MatrixMarket matrix coordinate real general",
            "% a comment",
            "",
            "1 2 2",
            "1 1 7.0",
            "% trailing comment",
            "1 2 8.0",
        ],
    )
    assert np.array_equal(read_matrix_market(path), [[7.0, 8.0]])


def test_array_format_column_major(tmp_path):
    path = tmp_path / "arr.mtx"
    write_lines(
        path,
        [
            "%%MatrixMarket matrix array real general",
            "2 3 ".strip(),
            "1.0",
            "2.0",
            "3.0",
            "4.0",
            "5.0",
            "6.0",
        ],
    )
    out = read_matrix_market(path)
    assert np.array_equal(out, [[1.0, 3.0, 5.0], [2.0, 4.0, 6.0]])


def test_array_symmetric(tmp_path):
    path = tmp_path / "arrsym.mtx"
    write_lines(
        path,
        [
            "%%MatrixMarket matrix array real symmetric",
            "2 2",
            "1.0",
            "2.0",
            "3.0",
        ],
    )
    assert np.array_equal(read_matrix_market(path), [[1.0, 2.0], [2.0, 3.0]])


def test_integer_field_reads_as_float(tmp_path):
    path = tmp_path / "int.mtx"
    write_lines(
        path,
        [
            "%%MatrixMarket matrix coordinate integer general",
            "1 1 1",
            "1 1 7",
        ],
    )
    assert read_matrix_market(path)[0, 0] == 7.0


def test_round_trip_exact(tmp_path):
    rng = np.random.default_rng(0)
    a = rng.standard_normal((6, 4))
    a[rng.random((6, 4)) < 0.5] = 0.0
    path = tmp_path / "rt.mtx"
    write_matrix_market(path, a)
    assert np.array_equal(read_matrix_market(path), a)


def test_bad_banner(tmp_path):
    path = tmp_path / "bad.mtx"
    write_lines(path, ["% not a banner", "1 1 1", "1 1 1.0"])
    with pytest.raises(ParseError) as exc:
        read_matrix_market(path)
    assert exc.value.line_number == 1


def test_complex_field_unsupported(tmp_path):
    path = tmp_path / "cplx.mtx"
    write_lines(path, ["%%MatrixMarket matrix coordinate complex general", "1 1 1", "1 1 1.0 0.0"])
    with pytest.raises(UnsupportedFieldError):
        read_matrix_market(path)


def test_pattern_field_unsupported(tmp_path):
    path = tmp_path / "pat.mtx"
    write_lines(path, ["%%MatrixMarket matrix coordinate pattern general", "1 1 1", "1 1"])
    with pytest.raises(UnsupportedFieldError):
        read_matrix_market(path)


def test_malformed_entry_reports_line(tmp_path):
    path = tmp_path / "mal.mtx"
    write_lines(
        path,
        [
            "%%MatrixMarket matrix coordinate real general",
            "2 2 2",
            "1 1 1.0",
            "2 oops 1.0",
        ],
    )
    with pytest.raises(ParseError) as exc:
        read_matrix_market(path)
    assert exc.value.line_number == 4


def test_out_of_range_index(tmp_path):
    path = tmp_path / "oob.mtx"
    write_lines(
        path,
        ["%%MatrixMarket matrix coordinate real general", "2 2 1", "3 1 1.0"],
    )
    with pytest.raises(ParseError):
        read_matrix_market(path)


def test_entry_count_mismatch(tmp_path):
    path = tmp_path / "count.mtx"
    write_lines(
        path,
        ["%%MatrixMarket matrix coordinate real general", "2 2 2", "1 1 1.0"],
    )
    with pytest.raises(ParseError):
        read_matrix_market(path)
