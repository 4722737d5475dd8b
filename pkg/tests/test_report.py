"""
Tests for value rendering and report output
"""
from fractions import Fraction

import pytest
import sympy

from app.core.exceptions import ReportFormatError
from app.schemas.report import AssertionResult, CaseEntrySchema, ReplayReport
from app.services.report import emit_report, exit_code, judge, overall_status, render_value


def _report(status="pass") -> ReplayReport:
    return ReplayReport(
        scenario="demo",
        overall=status,
        assertions=[AssertionResult(
            id="search.pairing", description="Pairing of the two classes",
            computed="8/9", expected="8/9", status=status,
        )],
        cases=[CaseEntrySchema(case="branch", constraints=["e = 0"], outcome="eliminated", certificate="mod 9")],
    )


class TestRenderValue:
    """Test the canonical rendering of computed values"""

    @pytest.mark.parametrize("value,text", [
        (None, "null"),
        (True, "true"),
        (Fraction(16, 18), "8/9"),
        (sympy.Rational(-4, 2), "-2"),
        ("  6/3 ", "2"),
        ("assumed", "assumed"),
        (2 * sympy.Symbol("m") - 8, "2*m - 8"),
        ([1, [Fraction(1, 2), None]], "[1, [1/2, null]]"),
        ({"a": 1}, "{a: 1}"),
    ])
    def test_values(self, value, text):
        assert render_value(value) == text

    def test_unrenderable(self):
        with pytest.raises(TypeError):
            render_value(1.5)


class TestJudge:
    """Test comparison against expectations"""

    def test_exact_match(self):
        assert judge(Fraction(8, 9), "16/18") == ("8/9", "8/9", "pass")
        assert judge([2, 2, 0], [2, 2, 1])[2] == "fail"

    def test_predicates(self):
        assert judge(Fraction(4, 3), "nonintegral")[2] == "pass"
        assert judge(3, "nonintegral")[2] == "fail"
        assert judge(3, "integral")[2] == "pass"
        assert judge("non-numerical", "integral")[2] == "fail"

    def test_assumed_keeps_computed(self):
        assert judge(0, "assumed") == ("0", "assumed", "assumed")

    def test_overall(self):
        assert overall_status(["pass", "assumed"]) == "pass"
        assert overall_status(["pass", "fail"]) == "fail"


class TestEmitReport:
    """Test text and JSON report output"""

    def test_text(self):
        text = emit_report(_report(), "text")
        lines = text.splitlines()
        assert lines[0] == "scenario: demo"
        assert lines[1].startswith("ID")
        assert "search.pairing | pass" in text
        assert "  branch: eliminated" in text
        assert lines[-1] == "overall: pass"

    def test_json(self):
        text = emit_report(_report(), "json")
        assert ReplayReport.model_validate_json(text) == _report()

    def test_unknown_format(self):
        with pytest.raises(ReportFormatError):
            emit_report(_report(), "xml")

    def test_exit_codes(self):
        assert exit_code(_report("pass")) == 0
        assert exit_code(_report("fail")) == 1
