"""
Tests for involution actions and the fixed-point case analysis
"""
from fractions import Fraction

import pytest
import sympy

from app.core.exceptions import DomainError, InvolutionError
from app.models.lefschetz import FixedLocusHypothesis
from app.models.matrix import RationalMatrix
from app.services import lefschetz
from app.services.lattice import pair
from app.services.replay import CANONICAL_LABEL

EQUATION = "2*x**2 = (m-4)**2 - 3"


@pytest.fixture(scope="module")
def pipeline(builtin_pipeline):
    return builtin_pipeline


@pytest.fixture(scope="module")
def nsy(pipeline):
    return pipeline.artifact("nsy")


class TestFixedPointFormulas:
    """Test the topological and holomorphic fixed-point relations"""

    @pytest.mark.parametrize("trace,sign,expected", [(0, -1, 0), (0, 1, 4), (-2, -1, -2), (-2, 1, 2)])
    def test_topological(self, trace, sign, expected):
        assert lefschetz.topological_constraint(trace, sign) == expected

    def test_topological_odd_cohomology(self):
        assert lefschetz.topological_constraint(0, -1, q_terms=2) == -2

    def test_sign_must_be_unit(self):
        with pytest.raises(DomainError):
            lefschetz.topological_constraint(0, 0)

    def test_requirements(self):
        requirements = lefschetz.fixed_locus_requirements(-2, -1)
        assert requirements.sum_self_intersection == 2
        assert str(requirements.canonical_degree) == "2*m"
        requirements = lefschetz.fixed_locus_requirements(2, 1)
        assert requirements.sum_self_intersection == 6
        assert str(requirements.canonical_degree) == "2*m - 8"

    def test_holomorphic(self):
        assert lefschetz.holomorphic_constraint(FixedLocusHypothesis(0, (), -1)) == 0
        assert lefschetz.holomorphic_constraint(FixedLocusHypothesis(4, (), 1)) == 0
        assert lefschetz.holomorphic_constraint(FixedLocusHypothesis(1, (), -1)) == Fraction(-1, 2)

    def test_hypothesis_euler_number(self):
        hypothesis = FixedLocusHypothesis(2, ((1, 0), (0, -4)), -1)
        assert hypothesis.euler_number == 6

    def test_hypothesis_validation(self):
        with pytest.raises(DomainError):
            FixedLocusHypothesis(-1)
        with pytest.raises(DomainError):
            FixedLocusHypothesis(0, h20_sign=2)

    def test_resolved_invariants(self):
        invariants = lefschetz.resolved_quotient_invariants(22, -2, 1)
        assert str(invariants.e) == "2*m + 10"
        assert str(invariants.b2) == "2*m + 8"
        assert sympy.expand(invariants.K2 - (2 - 2 * lefschetz.M)) == 0


class TestDiophantine:
    """Test equation parsing, residue certificates and the integer search"""

    def test_parse_equation(self):
        x, m = sympy.symbols("x m")
        expected = sympy.expand(2 * x ** 2 - (m - 4) ** 2 + 3)
        assert lefschetz.parse_equation("2x^2 = (m-4)^2 - 3") == expected
        assert lefschetz.parse_equation(EQUATION) == expected

    def test_parse_equation_errors(self):
        with pytest.raises(DomainError):
            lefschetz.parse_equation("x = 1 = 2")

    def test_no_solutions_mod_nine(self):
        verdict = lefschetz.modular_nonsolvability(EQUATION, 9)
        assert not verdict.solvable
        assert verdict.residues_checked == 81
        assert verdict.describe() == "no solutions mod 9"

    def test_solvable_mod_two(self):
        verdict = lefschetz.modular_nonsolvability(EQUATION, 2)
        assert verdict.solvable
        assert verdict.witness is not None

    def test_modulus_bound(self):
        with pytest.raises(DomainError):
            lefschetz.modular_nonsolvability(EQUATION, 1)

    def test_integer_search(self):
        assert lefschetz.integer_search(EQUATION, 200) == []
        assert lefschetz.integer_search("x^2 = m", 3) == [
            {"x": 0, "m": 0}, {"x": -1, "m": 1}, {"x": 1, "m": 1},
        ]

    def test_integer_search_shape(self):
        with pytest.raises(DomainError):
            lefschetz.integer_search("x*m = 1", 5)
        with pytest.raises(DomainError):
            lefschetz.integer_search("m = 1", 5)


class TestDeterminantObstruction:
    """Test the never-a-square determinant certificate"""

    def blocks(self):
        a2 = RationalMatrix.from_rows([[-2, 1], [1, -2]])
        return [
            (RationalMatrix.from_rows([[-2]]), (2, 0)),
            (a2, (0, 1)), (a2, (0, 1)), (a2, (0, 1)),
            (RationalMatrix.from_rows([[-1, 3], [3, -1]]), (0, 1)),
        ]

    def test_never_square(self):
        verdict = lefschetz.nonsquare_determinant_obstruction(self.blocks())
        assert verdict.describe() == "2^(2*m + 3)*3^(3)"
        assert verdict.never_square
        assert verdict.certificate_prime == 2
        assert verdict.evaluate(2) == 3456

    def test_square_determinant(self):
        verdict = lefschetz.nonsquare_determinant_obstruction([(RationalMatrix.from_rows([[4]]), (0, 1))])
        assert not verdict.never_square
        assert verdict.certificate_prime is None

    def test_degenerate_block(self):
        verdict = lefschetz.nonsquare_determinant_obstruction([(RationalMatrix.from_rows([[0]]), (0, 1))])
        assert verdict.degenerate
        assert verdict.describe() == "determinant vanishes"
        assert verdict.evaluate(3) == 0


class TestInvolutionOnNSY:
    """Test the involution on the reduced lattice of the resolved quotient"""

    def test_c1_candidates(self, pipeline):
        candidates = pipeline.artifact("candidates")
        assert [c.render() for c in candidates.candidates] == ["C1'", "-E1'+3E3'+3R2-R3-C1'"]
        coefficients = sympy.Poly(candidates.quadratic, candidates.parameter).all_coeffs()
        assert coefficients == [-12, -12, -2]

    def test_traces(self, pipeline):
        assert [lefschetz.trace(action) for action in pipeline.artifact("actions")] == [0, -2]

    def test_action_is_isometric_involution(self, pipeline, nsy):
        action = pipeline.artifact("actions")[1]
        e1 = nsy.class_of("E1'")
        image = lefschetz.apply_action(action, e1)
        assert image == nsy.class_of("R3")
        assert lefschetz.apply_action(action, image) == e1
        assert pair(image, image) == pair(e1, e1)

    def test_non_isometric_image_rejected(self, pipeline, nsy):
        with pytest.raises(InvolutionError):
            lefschetz.build_action(nsy, pipeline.artifact("involution"), nsy.class_of("E1'"))

    def test_fixed_curve_branches(self, nsy):
        """Test the A = 0 branch survives and the pairing-2 branch has no rational class"""
        zero = lefschetz.fixed_curve_class_solve(nsy, [0, 0, 0], 0, include_c1=True)
        assert zero.kind == "unique"
        assert [cls.render() for cls in zero.classes] == ["0"]
        two = lefschetz.fixed_curve_class_solve(nsy, [2, 2, 2], 0, include_c1=True)
        assert two.kind == "none"
        assert not two.has_rational_solution

    def test_fixed_locus_outcome(self, nsy):
        branches = [lefschetz.fixed_curve_class_solve(nsy, [t] * 3, 0, include_c1=True) for t in (0, 2)]
        survivor = lefschetz.fixed_locus_outcome(lefschetz.fixed_locus_requirements(0, -1), branches)
        assert survivor is not None
        assert (survivor.isolated_pairs, survivor.curves) == (0, ())
        assert lefschetz.fixed_locus_outcome(lefschetz.fixed_locus_requirements(4, 1), branches) is None

    def test_canonical_degree_reduction(self, nsy):
        reduced = lefschetz.reduce_with_canonical_degree(nsy, nsy.class_of(CANONICAL_LABEL), 6, -8)
        assert sympy.expand(reduced - lefschetz.parse_equation(EQUATION)) == 0

    def test_reduction_needs_two_classes(self, nsy):
        with pytest.raises(DomainError):
            lefschetz.reduce_with_canonical_degree(nsy, nsy.class_of(CANONICAL_LABEL), 6, -8, ("E1'",))
