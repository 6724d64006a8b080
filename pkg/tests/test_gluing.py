import random
from fractions import Fraction

import pytest

from gaudin.algebra import AlgebraSignature, Mode, commutator, poisson_bracket
from gaudin.gluing import (
    PatternError,
    classical_limits_match,
    diagonal_embedding,
    elementary_glue,
    hg_membership_check,
    iterate_pattern,
    left_comb_pattern,
    limit_gaudin_algebra,
    parse_pattern,
    quantum_bending_generators,
    rank_completeness_check,
    shift_embedding,
    _talalaev_point_generators,
)
from gaudin.lax import (
    bending_lax_rational,
    gaudin_lax,
    lax_from_groups,
    spectral_invariants,
)
from gaudin.linalg import spans_equal
from gaudin.manin import commutation_matrix
from gaudin.sampling import random_ncpoly


class TestParsePattern:
    def test_partial_collision_tree(self):
        pattern = parse_pattern("[1,2,[3,4,5]@3]", 5)
        assert pattern.root.leaves() == [1, 2, 3, 4, 5]
        inner = pattern.root.internal_children()[0]
        assert inner.location == 3
        assert inner.leaves() == [3, 4, 5]

    def test_trivial_pattern(self):
        pattern = parse_pattern("[1,2,3]", 3)
        assert pattern.root.is_trivial()

    def test_duplicate_leaf(self):
        with pytest.raises(PatternError, match="duplicate leaf"):
            parse_pattern("[1,1,2]", 3)

    def test_missing_leaf(self):
        with pytest.raises(PatternError, match="missing leaves"):
            parse_pattern("[1,2]", 3)

    def test_single_child_node(self):
        with pytest.raises(PatternError, match="at least 2 children"):
            parse_pattern("[1,[2]]", 2)

    def test_malformed_location_reports_position(self):
        with pytest.raises(PatternError) as err:
            parse_pattern("[1,2]@x", 2)
        assert err.value.position == 6

    def test_fractional_location(self):
        pattern = parse_pattern("[[1,2]@-3/2,3]", 3)
        assert pattern.root.internal_children()[0].location == Fraction(-3, 2)


class TestElementaryGlue:
    def test_partial_collision_matrices(self):
        sig = AlgebraSignature(2, 5, Mode.CLASSICAL)
        fam = elementary_glue(sig, fixed=[0, 1], collapsing=[2, 3, 4], w=3)
        l1_expected = lax_from_groups(sig, [([3], 2), ([4], 3), ([5], 4)], "L1")
        l2_expected = lax_from_groups(
            sig, [([1], 0), ([2], 1), ([3, 4, 5], 3)], "L2")
        assert fam.matrices[0] == l1_expected
        assert fam.matrices[1] == l2_expected

    def test_degenerate_single_collapse(self):
        sig = AlgebraSignature(2, 3, Mode.CLASSICAL)
        fam = elementary_glue(sig, fixed=[0, 1], collapsing=[7], w=5)
        assert fam.matrices[0] == lax_from_groups(sig, [([3], 7)], "L1")
        assert fam.matrices[1] == lax_from_groups(
            sig, [([1], 0), ([2], 1), ([3], 5)], "L2")

    def test_cross_family_poisson_commutativity(self, c3):
        fam = elementary_glue(c3, fixed=[0], collapsing=[1, 2], w=5)
        first = spectral_invariants(fam.matrices[0])
        second = spectral_invariants(fam.matrices[1])
        for h1 in first.exprs():
            for h2 in second.exprs():
                assert poisson_bracket(h1, h2).is_zero()

    def test_coincident_points_rejected(self, c3):
        with pytest.raises(ValueError):
            elementary_glue(c3, fixed=[0], collapsing=[1, 2], w=0)
        with pytest.raises(ValueError):
            elementary_glue(c3, fixed=[0], collapsing=[1, 1], w=5)


class TestIteratePattern:
    def test_left_comb_three_sites(self, c3):
        pattern, poles = left_comb_pattern(3, 0, 1)
        fam = iterate_pattern(c3, pattern, poles)
        assert fam.matrices[0] == bending_lax_rational(c3, 1, 0, 1)
        assert fam.matrices[1] == bending_lax_rational(c3, 2, 0, 1)

    def test_left_comb_matches_rational_clusters_n4(self):
        sig = AlgebraSignature(2, 4, Mode.CLASSICAL)
        pattern, poles = left_comb_pattern(4, 0, 1)
        fam = iterate_pattern(sig, pattern, poles)
        for k in range(1, 4):
            assert fam.matrices[k - 1] == bending_lax_rational(sig, k, 0, 1)

    def test_trivial_pattern_is_gaudin(self, c3):
        fam = iterate_pattern(c3, parse_pattern("[1,2,3]", 3))
        assert fam.matrices == [gaudin_lax(c3, [0, 1, 2])]

    def test_partial_collision_equals_elementary(self):
        sig = AlgebraSignature(2, 5, Mode.CLASSICAL)
        fam = iterate_pattern(sig, parse_pattern("[1,2,[3,4,5]@3]", 5),
                              poles=[0, 1, 2, 3, 4])
        ele = elementary_glue(sig, fixed=[0, 1], collapsing=[2, 3, 4], w=3)
        assert fam.matrices[0] == ele.matrices[0]
        assert fam.matrices[1] == ele.matrices[1]

    def test_fresh_locations_avoid_siblings(self, c3):
        fam = iterate_pattern(c3, parse_pattern("[[1,2],3]", 3))
        root = fam.matrices[1]
        # leaf 3 sits at pole 2; the unlocated node must pick something else
        locations = {p for p, _ in root.poles}
        assert Fraction(2) in locations and len(locations) == 2

    def test_all_family_members_commute(self, c3):
        for text in ["[1,2,3]", "[[1,2]@5,3]", "[1,[2,3]@7]"]:
            fam = iterate_pattern(c3, parse_pattern(text, 3))
            exprs = fam.invariant_family().exprs()
            for i in range(len(exprs)):
                for j in range(i + 1, len(exprs)):
                    assert poisson_bracket(exprs[i], exprs[j]).is_zero(), text

    def test_four_site_elementary_family_commutes(self):
        sig = AlgebraSignature(2, 4, Mode.CLASSICAL)
        fam = elementary_glue(sig, fixed=[0, 1], collapsing=[2, 3], w=7)
        exprs = fam.invariant_family().exprs()
        for i in range(len(exprs)):
            for j in range(i + 1, len(exprs)):
                assert poisson_bracket(exprs[i], exprs[j]).is_zero()


class TestRankCompleteness:
    def test_elementary_glue_matches_generic(self, c3):
        fam = elementary_glue(c3, fixed=[0], collapsing=[1, 2], w=5)
        generic = spectral_invariants(gaudin_lax(c3, [0, 1, 2]))
        rep = rank_completeness_check(c3, fam, generic, trials=5, seed=42)
        assert rep.passed
        assert all(r["limit"] == r["generic"] for r in rep.info["ranks"])

    def test_family_against_itself(self, c2):
        fam = iterate_pattern(c2, parse_pattern("[1,2]", 2))
        generic = fam.invariant_family()
        rep = rank_completeness_check(c2, fam, generic, trials=3, seed=1)
        assert rep.passed

    def test_two_site_families_coincide(self, c2):
        fam = elementary_glue(c2, fixed=[0], collapsing=[1], w=5)
        generic = spectral_invariants(gaudin_lax(c2, [0, 1]))
        rep = rank_completeness_check(c2, fam, generic, trials=5, seed=3)
        assert rep.passed


class TestHgMembership:
    def test_two_site_identity(self, c2):
        fam = elementary_glue(c2, fixed=[0], collapsing=[1], w=5)
        rep = hg_membership_check(c2, fam)
        assert rep.passed
        assert rep.info["combination"]

    def test_rank_one_any_sites(self):
        sig = AlgebraSignature(1, 4, Mode.CLASSICAL)
        pattern, poles = left_comb_pattern(4)
        fam = iterate_pattern(sig, pattern, poles)
        assert hg_membership_check(sig, fam).passed

    def test_bending_family_n3(self, c3):
        pattern, poles = left_comb_pattern(3)
        fam = iterate_pattern(c3, pattern, poles)
        assert hg_membership_check(c3, fam).passed


class TestEmbeddings:
    def test_full_diagonal(self, q2):
        src = AlgebraSignature(2, 1, Mode.QUANTUM)
        image = diagonal_embedding(src.gen(1, 1, 2), 2)
        assert image == q2.gen(1, 1, 2) + q2.gen(2, 1, 2)

    def test_diagonal_identity_when_sites_match(self, q2):
        p = q2.gen(2, 1, 2) * q2.gen(1, 2, 1)
        assert diagonal_embedding(p, 2) == p

    def test_diagonal_homomorphism(self, q2, rng):
        for _ in range(15):
            p = random_ncpoly(rng, q2, 2, 2)
            q = random_ncpoly(rng, q2, 2, 2)
            assert diagonal_embedding(p * q, 4) == \
                diagonal_embedding(p, 4) * diagonal_embedding(q, 4)

    def test_shift_relabels(self, q3):
        src = AlgebraSignature(2, 2, Mode.QUANTUM)
        assert shift_embedding(src.gen(2, 1, 2), 3) == q3.gen(3, 1, 2)

    def test_shift_zero_is_identity(self, q2):
        p = q2.gen(1, 1, 2)
        assert shift_embedding(p, 2, shift=0) == p

    def test_shift_homomorphism(self, rng):
        src = AlgebraSignature(2, 2, Mode.QUANTUM)
        for _ in range(15):
            p = random_ncpoly(rng, src, 2, 2)
            q = random_ncpoly(rng, src, 2, 2)
            assert shift_embedding(p * q, 4) == \
                shift_embedding(p, 4) * shift_embedding(q, 4)

    def test_shift_injective_on_basis(self):
        src = AlgebraSignature(2, 2, Mode.QUANTUM)
        p = src.gen(1, 1, 1) * src.gen(2, 1, 2)
        image = shift_embedding(p, 4, shift=2)
        assert list(image.terms) == [((3, 1, 1), (4, 1, 2))]


class TestLimitGaudinAlgebra:
    def test_elementary_glue_cross_commutators(self, q3):
        pattern = parse_pattern("[1,[2,3]@3]", 3)
        gens = limit_gaudin_algebra(q3, pattern, poles=[0, 1, 2], eval_points=[5, 7])
        rep = commutation_matrix([g for _, g in gens], [l for l, _ in gens])
        assert rep.passed

    def test_rank_one_everything_central(self):
        sig = AlgebraSignature(1, 3, Mode.QUANTUM)
        pattern = parse_pattern("[1,[2,3]@3]", 3)
        gens = limit_gaudin_algebra(sig, pattern, poles=[0, 1, 2], eval_points=[5])
        assert commutation_matrix([g for _, g in gens]).passed

    def test_two_site_algebra_pole_independent(self):
        sig = AlgebraSignature(2, 2, Mode.QUANTUM)
        pts = [Fraction(u) for u in (5, 7, 11, 13, 17, 19, 23)]
        span_a = [g.terms for _, g in
                  _talalaev_point_generators(sig, [Fraction(0), Fraction(1)], pts)]
        span_b = [g.terms for _, g in
                  _talalaev_point_generators(sig, [Fraction(2), Fraction(-3)], pts)]
        assert spans_equal(span_a, span_b)

    def test_non_tail_collapse_rejected(self, q3):
        pattern = parse_pattern("[[1,2]@5,3]", 3)
        with pytest.raises(ValueError, match="trailing"):
            limit_gaudin_algebra(q3, pattern, poles=[0, 1, 2])

    def test_direct_generators_of_glued_matrices_commute(self, q3):
        # the glued matrices are Gaudin-type, so the column-determinant
        # generators of the two factors commute jointly
        from gaudin.manin import talalaev_generators
        fam = elementary_glue(q3, fixed=[0], collapsing=[1, 2], w=5)
        gens = []
        for matrix in fam.matrices:
            out = talalaev_generators(matrix)
            for u in (7, 11):
                gens.extend(out.qh_eval(u)[:2])
        assert commutation_matrix(gens).passed


class TestQuantumBending:
    @pytest.mark.parametrize("sites", [2, 3])
    def test_classical_limits_match(self, sites):
        sig = AlgebraSignature(2, sites, Mode.QUANTUM)
        pairs = quantum_bending_generators(sig)
        assert pairs
        assert classical_limits_match(pairs).passed

    def test_pairwise_quantum_commutativity_n3(self):
        sig = AlgebraSignature(2, 3, Mode.QUANTUM)
        pairs = quantum_bending_generators(sig)
        rep = commutation_matrix([p["generator"] for p in pairs])
        assert rep.passed

    def test_rank_one_generators_central(self):
        sig = AlgebraSignature(1, 3, Mode.QUANTUM)
        pairs = quantum_bending_generators(sig)
        gens = [p["generator"] for p in pairs]
        for letter in sig.letters():
            for g in gens:
                assert commutator(sig.gen(*letter), g).is_zero()
