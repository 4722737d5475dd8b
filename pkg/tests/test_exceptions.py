"""
Tests for custom exceptions
"""
from fastapi import status

from app.core.exceptions import (
    DegenerateGramError,
    DivisibilityError,
    DomainError,
    DuplicateLabelError,
    InvolutionError,
    LatticeMismatchError,
    ReportFormatError,
    ScenarioValidationError,
    UnknownLabelError,
    WorkbenchError,
)


class TestWorkbenchError:
    """Test base WorkbenchError class"""

    def test_defaults(self):
        error = WorkbenchError("Test error")
        assert error.message == "Test error"
        assert error.status_code == status.HTTP_400_BAD_REQUEST
        assert error.details == {}
        assert str(error) == "Test error"

    def test_custom_values(self):
        error = WorkbenchError("Custom error", status_code=409, details={"field": "value"})
        assert error.status_code == 409
        assert error.details == {"field": "value"}


class TestDomainErrors:
    """Test the errors raised by the computation layer"""

    def test_domain_error(self):
        error = DomainError("out of range", details={"n": -1})
        assert error.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
        assert error.details == {"n": -1}
        assert isinstance(error, WorkbenchError)

    def test_lattice_mismatch(self):
        error = LatticeMismatchError("NS(X)", "NS(Y)")
        assert error.message == "Lattice mismatch: NS(X) vs NS(Y)"
        assert error.details == {"left": "NS(X)", "right": "NS(Y)"}

    def test_degenerate_gram(self):
        assert DegenerateGramError("Z").message == "Gram matrix of Z is degenerate"
        assert DegenerateGramError("Z", "block is singular").message == "block is singular"

    def test_labels(self):
        assert DuplicateLabelError("K", "NS(Y)").status_code == status.HTTP_409_CONFLICT
        error = UnknownLabelError("E9", "NS(X)")
        assert error.message == "Unknown label E9 on NS(X)"
        assert error.status_code == status.HTTP_404_NOT_FOUND
        assert UnknownLabelError("E9").message == "Unknown label E9"

    def test_divisibility(self):
        error = DivisibilityError(("E1", "E2"), 1, 3)
        assert error.message == "Pairing residue 1 of pair (E1,E2) is not divisible by 3"
        assert error.details == {"pair": ["E1", "E2"], "residue": "1", "order": 3}

    def test_involution(self):
        error = InvolutionError("not an involution", {"label": "R1"})
        assert error.status_code == status.HTTP_422_UNPROCESSABLE_ENTITY
        assert error.details == {"label": "R1"}


class TestInputErrors:
    """Test errors about malformed input"""

    def test_scenario_validation(self):
        error = ScenarioValidationError("curves.records", "duplicate curve labels")
        assert error.message == "Invalid scenario entry curves.records: duplicate curve labels"
        assert error.details == {"entry": "curves.records"}

    def test_report_format(self):
        error = ReportFormatError("xml")
        assert error.message == "Unknown report format: xml"
        assert error.status_code == status.HTTP_400_BAD_REQUEST
