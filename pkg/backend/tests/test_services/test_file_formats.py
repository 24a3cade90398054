"""
Tests for the structure-constant and Gram matrix text formats.
"""

import numpy as np
import pytest

from app.core.exceptions import DefinitenessError, InputFormatError, StructureConstantsError
from app.models.lie_algebra import FamilyTag
from app.services.file_formats import (
    format_matrix,
    format_structure_constants,
    parse_gram_matrix,
    parse_structure_constants,
    read_gram_matrix,
    read_structure_constants,
    write_gram_matrix,
    write_structure_constants,
)
from app.services.lie_algebra_service import LieAlgebraService


def test_read_heisenberg(sample_structure_file):
    g = read_structure_constants(sample_structure_file)
    assert g.dim == 3
    assert g.c[0, 1, 2] == 1.0
    assert g.c[1, 0, 2] == -1.0
    assert g.family_tag is FamilyTag.CUSTOM


def test_parse_ignores_comments_and_blank_lines():
    g = parse_structure_constants("# rh2 plus a line\n\n3\n  1 2 2 1.0  \n# end\n")
    np.testing.assert_array_equal(g.c, LieAlgebraService.build_family(FamilyTag.RH2_SUM_ABELIAN, 3).c)


def test_family_tag_is_attached():
    g = parse_structure_constants("3\n1 2 2 1\n", FamilyTag.RH2_SUM_ABELIAN)
    assert g.family_tag is FamilyTag.RH2_SUM_ABELIAN


def test_format_structure_constants():
    g = LieAlgebraService.build_family(FamilyTag.RH_LINE_SUM, 4)
    assert format_structure_constants(g) == "4\n1 3 3 1.0\n1 4 4 1.0\n"


def test_structure_constants_file_round_trip(tmp_path):
    g = LieAlgebraService.milnor_algebra(FamilyTag.RH_LINE_SUM, 5, 0.1)
    path = tmp_path / "alg.txt"
    write_structure_constants(g, path)
    np.testing.assert_array_equal(read_structure_constants(path).c, g.c)


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "empty"),
        ("# only a comment\n", "empty"),
        ("three\n", "dimension"),
        ("1\n", "at least 2"),
        ("3\n1 2 3\n", "expected"),
        ("3\n1 2 x 1.0\n", "cannot parse"),
        ("3\n2 1 3 1.0\n", "indices"),
        ("3\n1 2 4 1.0\n", "indices"),
        ("3\n1 2 3 nan\n", "finite"),
        ("3\n1 2 3 1.0\n1 2 3 2.0\n", "duplicate"),
    ],
)
def test_malformed_structure_constants(text, message):
    with pytest.raises(InputFormatError, match=message):
        parse_structure_constants(text)


def test_non_lie_file_is_rejected():
    with pytest.raises(StructureConstantsError):
        parse_structure_constants("3\n1 2 3 1\n1 3 1 1\n")


def test_read_gram_matrix(sample_gram_file):
    G = read_gram_matrix(sample_gram_file)
    np.testing.assert_array_equal(G.G, [[2.0, 0.0, 0.0], [0.0, 1.0, 0.5], [0.0, 0.5, 1.0]])


def test_gram_matrix_file_round_trip(tmp_path, sample_metric):
    path = tmp_path / "G.txt"
    write_gram_matrix(sample_metric, path)
    np.testing.assert_array_equal(read_gram_matrix(path).G, sample_metric.G)


def test_format_matrix_precision():
    assert format_matrix(np.array([[1.0, 0.5]]), precision=3) == "1 0.5\n"


@pytest.mark.parametrize("text", ["", "1 2\n3\n", "1 a\nb 1\n"])
def test_malformed_gram_matrix(text):
    with pytest.raises(InputFormatError):
        parse_gram_matrix(text)


def test_indefinite_gram_matrix():
    with pytest.raises(DefinitenessError):
        parse_gram_matrix("1 2\n2 1\n")


def test_binary_file_is_rejected(tmp_path):
    path = tmp_path / "bin.txt"
    path.write_bytes(b"\xff\xfe\x00\x81")
    with pytest.raises(InputFormatError):
        read_gram_matrix(path)
