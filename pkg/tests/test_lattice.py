"""
Tests for intersection lattices, divisor classes and numerical equivalence
"""
import random
from fractions import Fraction

import pytest

from app.core.exceptions import (
    DegenerateGramError,
    DomainError,
    DuplicateLabelError,
    LatticeMismatchError,
    UnknownLabelError,
)
from app.models.lattice import DivisorClass, render_combination
from app.models.matrix import RationalMatrix
from app.services.lattice import (
    class_from_combination,
    compare_gram,
    coords_from_pairings,
    embed_by_pairings,
    equivalence_pairs,
    lattice_from_rows,
    numerically_equal,
    pair,
    pairing_vector,
    parse_combination,
    register_class,
    restrict_lattice,
)


class TestPairing:
    """Test the bilinear form on NS(X)"""

    def test_generator_pairings(self, nsx):
        assert pair(nsx.generator("E1"), nsx.generator("E3")) == 9
        assert pair(nsx.generator("C1"), nsx.generator("C1")) == -1

    def test_coords_from_pairings_round_trip(self, nsx):
        """Test a class is recovered from its pairings with the basis"""
        d = DivisorClass(nsx, ("1/9", "-1/9", "2/9"))
        pairings = [pair(d, nsx.generator(label)) for label in nsx.basis]
        assert pairings == [2, 2, 0]
        assert coords_from_pairings(nsx, pairings) == d

    def test_embedded_curve_keeps_its_square(self, nsx):
        """Test E2 embedded by its pairings reproduces E2^2 = 5"""
        e2 = embed_by_pairings(nsx, "E2", [13, 9, 7])
        assert pair(e2, e2) == 5
        assert nsx.class_of("E2") == e2

    def test_albanese_fibre(self, nsx):
        """Test F = -E1 + 5E2 has F^2 = 0 and K.F = 36"""
        embed_by_pairings(nsx, "E2", [13, 9, 7])
        fibre = class_from_combination(nsx, "-E1+5E2")
        assert pair(fibre, fibre) == 0
        assert pair(nsx.class_of("E3"), fibre) == 36

    def test_degenerate_gram(self):
        lattice = lattice_from_rows("flat", ["A", "B"], [[1, 1], [1, 1]])
        with pytest.raises(DegenerateGramError):
            coords_from_pairings(lattice, [1, 1])

    def test_wrong_number_of_pairings(self, nsx):
        with pytest.raises(DomainError):
            coords_from_pairings(nsx, [1, 2])

    def test_mixing_lattices(self, nsx):
        other = lattice_from_rows("other", ["A"], [[1]])
        with pytest.raises(LatticeMismatchError):
            pair(nsx.generator("E1"), other.generator("A"))


class TestCombinations:
    """Test parsing and rendering of formal combinations"""

    def test_parse(self):
        assert parse_combination("-3E1'+15E2'+1/3R1") == {
            "E1'": Fraction(-3), "E2'": Fraction(15), "R1": Fraction(1, 3),
        }

    def test_repeated_labels_accumulate(self):
        assert parse_combination("E1 + E1 - 1/2 C1") == {"E1": Fraction(2), "C1": Fraction(-1, 2)}

    def test_zero(self):
        assert parse_combination("0") == {}
        assert parse_combination("") == {}

    def test_missing_sign(self):
        with pytest.raises(DomainError):
            parse_combination("E1 E2")

    def test_garbage(self):
        with pytest.raises(DomainError):
            parse_combination("E1 + ?")

    def test_zero_denominator(self):
        with pytest.raises(DomainError):
            parse_combination("3/0R1")

    def test_render(self, nsx):
        assert DivisorClass(nsx, ("1/9", "-1/9", "2/9")).render() == "1/9E1-1/9E3+2/9C1"
        assert nsx.zero().render() == "0"
        assert render_combination({"R1": -1, "E1'": 0}) == "-R1"

    def test_unknown_label(self, nsx):
        with pytest.raises(UnknownLabelError):
            class_from_combination(nsx, "E1+Z9")

    def test_duplicate_registration(self, nsx):
        register_class(nsx, "K", nsx.generator("E3"))
        with pytest.raises(DuplicateLabelError):
            register_class(nsx, "K", nsx.generator("E3"))


class TestEquivalence:
    """Test numerical equivalence, table comparison and restriction"""

    def test_canonical_relation(self, nsx):
        """Test 9E3 = 3E1 + 3C1 + 3C2 numerically"""
        embed_by_pairings(nsx, "C2", [11, 9, 17])
        lhs = class_from_combination(nsx, "9E3")
        rhs = class_from_combination(nsx, "3E1+3C1+3C2")
        assert numerically_equal(lhs, rhs)
        assert not numerically_equal(lhs, class_from_combination(nsx, "3E1+3C1"))

    def test_compare_gram_reports_mismatches(self, nsx):
        expected = RationalMatrix.from_rows([[5, 10, 11], [10, 9, 9], [11, 9, -1]])
        mismatches = compare_gram(nsx, ["E1", "E3", "C1"], expected)
        assert len(mismatches) == 1
        assert mismatches[0].describe() == "E1.E3: computed 9, expected 10"

    def test_restrict_keeps_dependent_generators(self):
        lattice = lattice_from_rows("L", ["A", "B", "C"], [[1, 0, 1], [0, 1, 1], [1, 1, 2]])
        sub = restrict_lattice(lattice, ["A", "B"], "L'")
        assert sub.rank == 2
        assert sub.class_of("C").coords == (Fraction(1), Fraction(1))

    def test_restrict_rejects_independent_generator(self):
        lattice = lattice_from_rows("L", ["A", "B", "C"], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        with pytest.raises(DomainError):
            restrict_lattice(lattice, ["A", "B"], "L'")

    def test_equivalence_chains(self):
        assert equivalence_pairs(["A = B = C", "D=E"]) == [("A", "B"), ("B", "C"), ("D", "E")]
        with pytest.raises(DomainError):
            equivalence_pairs(["A"])


# Pairings of the remaining tabulated curves with (E1, E3, C1)
CURVE_PAIRINGS = {
    "E2": [13, 9, 7],
    "C2": [11, 9, 17],
    "C3": [25, 27, 37],
    "C4": [25, 27, 19],
}


class TestSurfaceRelations:
    """Test the numerical relations among the tabulated curves on NS(X)"""

    @pytest.fixture
    def surface(self, nsx):
        for label, pairings in CURVE_PAIRINGS.items():
            embed_by_pairings(nsx, label, pairings)
        return nsx

    @pytest.mark.parametrize("lhs,rhs", [
        ("E1+E2", "2E3"),
        ("4E3", "C1+C3"),
        ("C1+C3", "C2+C4"),
        ("3E3", "E1+C1+C2"),
        ("E2+E3", "C1+C2"),
    ])
    def test_relation_holds(self, surface, lhs, rhs):
        assert numerically_equal(class_from_combination(surface, lhs), class_from_combination(surface, rhs))

    def test_unrelated_classes_differ(self, surface):
        assert not numerically_equal(class_from_combination(surface, "E1+E2"), class_from_combination(surface, "3E3"))


class TestRegistry:
    """Test named classes are registered on the lattice in place"""

    def test_registration_is_shared_and_ignored_by_equality(self, nsx):
        before = hash(nsx)
        copy = lattice_from_rows(nsx.name, nsx.basis, [[5, 9, 11], [9, 9, 9], [11, 9, -1]])
        register_class(nsx, "F", nsx.generator("E3") * 2)
        assert nsx.has_label("F")
        assert not copy.has_label("F")
        assert nsx == copy
        assert hash(nsx) == before
        assert nsx.labels == ("E1", "E3", "C1", "F")


class TestRandomisedProperties:
    """Seeded property checks of the pairing and coordinate recovery"""

    SEED = 20240611
    ROUNDS = 200

    @staticmethod
    def _rational(rng: random.Random) -> Fraction:
        return Fraction(rng.randint(-30, 30), rng.randint(1, 12))

    def _class(self, rng: random.Random, lattice) -> DivisorClass:
        return DivisorClass(lattice, tuple(self._rational(rng) for _ in range(lattice.rank)))

    def test_bilinear_and_symmetric(self, nsx):
        rng = random.Random(self.SEED)
        for _ in range(self.ROUNDS):
            d1, d2, d3 = (self._class(rng, nsx) for _ in range(3))
            a = self._rational(rng)
            assert pair(d1, d2) == pair(d2, d1)
            assert pair(d1 * a + d2, d3) == a * pair(d1, d3) + pair(d2, d3)
            assert pair(d3, d1 - d2) == pair(d3, d1) - pair(d3, d2)

    def test_coordinates_round_trip(self, nsx):
        rng = random.Random(self.SEED + 1)
        for _ in range(self.ROUNDS):
            d = self._class(rng, nsx)
            assert coords_from_pairings(nsx, pairing_vector(d)) == d

    def test_round_trip_on_random_nondegenerate_lattices(self):
        rng = random.Random(self.SEED + 2)
        checked = 0
        while checked < 50:
            size = rng.randint(1, 4)
            rows = [[0] * size for _ in range(size)]
            for i in range(size):
                for j in range(i, size):
                    rows[i][j] = rows[j][i] = rng.randint(-6, 6)
            lattice = lattice_from_rows("random", [f"G{i}" for i in range(size)], rows)
            d = self._class(rng, lattice)
            try:
                recovered = coords_from_pairings(lattice, pairing_vector(d))
            except DegenerateGramError:
                continue
            assert recovered == d
            checked += 1
