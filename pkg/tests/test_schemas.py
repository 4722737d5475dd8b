"""
Tests for scenario and report schemas
"""
import pytest
from pydantic import ValidationError

from app.schemas import (
    CurveRecordSchema,
    LatticeSchema,
    LefschetzCaseSchema,
    SearchSection,
    TableSchema,
)


class TestRationalFields:
    """Test exact rationals on the wire"""

    def test_canonical_strings(self):
        lattice = LatticeSchema(name="L", basis=["A", "B"], gram=[[2, "2/4"], ["1/2", "-6/3"]])
        assert lattice.gram == [["2", "1/2"], ["1/2", "-2"]]

    def test_float_rejected(self):
        with pytest.raises(ValidationError) as exc_info:
            LatticeSchema(name="L", basis=["A"], gram=[[0.5]])
        assert "not exact" in str(exc_info.value)

    def test_garbage_rejected(self):
        with pytest.raises(ValidationError):
            LatticeSchema(name="L", basis=["A"], gram=[["two"]])


class TestShapes:
    """Test structural validation"""

    def test_gram_shape(self):
        with pytest.raises(ValidationError):
            LatticeSchema(name="L", basis=["A", "B"], gram=[[1, 0]])

    def test_table_symmetry(self):
        TableSchema(labels=["A", "B"], matrix=[[1, 2], [2, 1]])
        with pytest.raises(ValidationError) as exc_info:
            TableSchema(labels=["A", "B"], matrix=[[1, 2], [3, 1]])
        assert "A.B" in str(exc_info.value)

    def test_negative_genus(self):
        with pytest.raises(ValidationError):
            CurveRecordSchema(label="E", genus=-1, mults=[0])

    def test_extra_fields_forbidden(self):
        with pytest.raises(ValidationError):
            CurveRecordSchema(label="E", genus=4, mults=[0], colour="red")


class TestSections:
    """Test defaults and section validators"""

    def test_search_defaults(self):
        section = SearchSection()
        assert (section.kd, section.d2) == (2, 0)
        assert section.profile == []

    def test_lefschetz_case_sign(self):
        assert LefschetzCaseSchema(trace=0, h20_sign=-1).q_terms == 0
        with pytest.raises(ValidationError):
            LefschetzCaseSchema(trace=0, h20_sign=0)
