"""
Tests for cyclic quotient lattices and free involution quotients
"""
import json
from fractions import Fraction

import pytest

from app.core.exceptions import DivisibilityError, DomainError, InvolutionError
from app.models.quotient import InvolutionSpec
from app.schemas.scenario import QuotientSetupSchema
from app.services import quotient
from app.services.lattice import lattice_from_rows, pair
from app.services.replay import standalone_setup


@pytest.fixture
def setup_dict(data_dir):
    return json.loads((data_dir / "quotient-setup.json").read_text(encoding="utf-8"))


@pytest.fixture
def quotient_lattice(setup_dict):
    return quotient.build_quotient_lattice(standalone_setup(QuotientSetupSchema.model_validate(setup_dict)))


class TestHirzebruchJung:
    """Test resolution chains and discrepancies"""

    @pytest.mark.parametrize("n,a,chain", [
        (3, 1, (-3,)),
        (3, 2, (-2, -2)),
        (5, 2, (-3, -2)),
        (7, 3, (-3, -2, -2)),
    ])
    def test_chains(self, n, a, chain):
        assert quotient.hj_chain(n, a).self_intersections == chain

    def test_discrepancies(self):
        assert quotient.discrepancies(quotient.hj_chain(3, 1)) == (Fraction(-1, 3),)
        assert quotient.discrepancies(quotient.hj_chain(3, 2)) == (Fraction(0), Fraction(0))
        assert quotient.discrepancies(quotient.hj_chain(4, 1)) == (Fraction(-1, 2),)

    @pytest.mark.parametrize("n,a", [(3, 3), (4, 2), (1, 0)])
    def test_invalid_types(self, n, a):
        with pytest.raises(DomainError):
            quotient.hj_chain(n, a)


class TestQuotientLattice:
    """Test the resolved quotient of the three E curves"""

    def test_basis(self, quotient_lattice):
        lattice = quotient_lattice.lattice
        assert lattice.rank == 18
        assert lattice.basis[:6] == ("E1'", "E2'", "E3'", "R1", "R2", "R3")
        assert quotient_lattice.exceptional_labels[3:5] == ("R11", "R12")

    def test_divisibility_rule(self, quotient_lattice):
        """Test (A.B - sum of local products) / 3"""
        lattice = quotient_lattice.lattice
        assert lattice.gram_entry("E1'", "E1'") == -3
        assert lattice.gram_entry("E1'", "E2'") == 0
        assert lattice.gram_entry("E1'", "R1") == 3
        assert lattice.gram_entry("E3'", "R2") == 4

    def test_chain_blocks(self, quotient_lattice):
        lattice = quotient_lattice.lattice
        assert lattice.gram_entry("R1", "R1") == -3
        assert lattice.gram_entry("R11", "R11") == -2
        assert lattice.gram_entry("R11", "R12") == 1
        assert lattice.gram_entry("R12", "R21") == 0

    def test_residue_not_divisible(self, setup_dict):
        setup_dict["table"]["matrix"][0][1] = 14
        setup_dict["table"]["matrix"][1][0] = 14
        setup = standalone_setup(QuotientSetupSchema.model_validate(setup_dict))
        with pytest.raises(DivisibilityError) as exc_info:
            quotient.build_quotient_lattice(setup)
        assert exc_info.value.message == "Pairing residue 1 of pair (E1,E2) is not divisible by 3"

    def test_pullback(self, quotient_lattice):
        """Test the exceptional part of a pulled-back fibre"""
        fibre = quotient.pullback(quotient_lattice, "-3E1+15E2")
        assert fibre.render() == "-3E1'+15E2'+7R1+4R2+13R3"
        assert quotient.exceptional_orthogonality(fibre, quotient_lattice) == {}

    def test_pushforward(self, quotient_lattice):
        assert quotient.pushforward(quotient_lattice, "2/9E3") == {"E3": Fraction(2, 3)}
        with pytest.raises(DomainError):
            quotient.pushforward(quotient_lattice, "C1")

    def test_canonical_class(self, quotient_lattice):
        canonical = quotient.canonical_on_resolution(quotient_lattice)
        assert canonical.render() == "E3'+R2"
        assert pair(canonical, canonical) == 2

    def test_projection_formula(self, quotient_lattice):
        assert quotient.projection_formula_holds(quotient_lattice) == []


class TestInvariants:
    """Test Riemann-Hurwitz and Noether"""

    def test_quotient_genus(self):
        assert quotient.quotient_genus(4, 3, 6) == 0
        assert quotient.quotient_genus(4, 3, 3) == 1
        assert quotient.quotient_genus(10, 3, 9) == 1

    def test_quotient_genus_inconsistent(self):
        with pytest.raises(DomainError):
            quotient.quotient_genus(4, 3, 1)

    def test_noether(self):
        invariants = quotient.noether_invariants(9, 1, 1, 1)
        assert (invariants.e, invariants.b2, invariants.h11) == (3, 5, 3)
        invariants = quotient.noether_invariants(1, 1, 0, 0)
        assert (invariants.e, invariants.b2, invariants.h11) == (11, 9, 9)

    def test_noether_rejects_inconsistent_chi(self):
        with pytest.raises(DomainError):
            quotient.noether_invariants(9, 2, 1, 1)

    def test_singular_canonical_square(self):
        assert quotient.quotient_canonical_square(9, 3) == 3


class TestFreeQuotient:
    """Test orbit lattices of free involutions"""

    @pytest.fixture
    def lattice(self):
        return lattice_from_rows("L", ["A", "B", "C"], [[-1, 0, 1], [0, -1, 1], [1, 1, 2]])

    def test_orbit_pairings(self, lattice):
        spec = InvolutionSpec(swaps=(("A", "B"),), fixed_labels=("C",))
        z = quotient.free_involution_quotient(lattice, spec, "Z")
        assert z.basis == ("a", "c")
        assert z.gram.to_rows() == [[-1, 1], [1, 1]]

    def test_image_label_override(self, lattice):
        spec = InvolutionSpec(swaps=(("A", "B"),), fixed_labels=("C",), image_labels={"A": "u"})
        assert quotient.free_involution_quotient(lattice, spec).basis == ("u", "c")

    def test_form_must_be_preserved(self):
        lattice = lattice_from_rows("L", ["A", "B"], [[-1, 0], [0, -2]])
        with pytest.raises(InvolutionError):
            quotient.free_involution_quotient(lattice, InvolutionSpec(swaps=(("A", "B"),)))

    def test_generators_must_be_partitioned(self, lattice):
        with pytest.raises(InvolutionError):
            quotient.free_involution_quotient(lattice, InvolutionSpec(swaps=(("A", "B"),)))

    def test_label_used_twice(self):
        with pytest.raises(InvolutionError):
            InvolutionSpec(swaps=(("A", "B"),), fixed_labels=("A",)).permutation()

    def test_apply_permutation(self, lattice):
        spec = InvolutionSpec(swaps=(("A", "B"),), fixed_labels=("C",))
        image = quotient.apply_permutation(lattice.generator("A") * 2 + lattice.generator("C"), spec)
        assert image.render() == "2B+C"

    def test_verify_equivalences(self, lattice):
        report = quotient.verify_equivalences(lattice, [("A+B", "B+A"), ("A", "B")])
        assert not report.all_hold
        assert [(c.lhs, c.rhs) for c in report.failures] == [("A", "B")]
