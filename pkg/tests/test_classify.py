"""Classifier unit tests with hand-checked residue tuples.

The three worked fixtures reappear here in distilled form: the residue
data was computed by hand from the monodromies (discrete logs in the
cyclic subgroup generated by each root) and frozen, so these tests pin
the decision procedure independently of the rewriting machinery.
"""

import math
import random

import pytest

from necroots.classify import (
    EQUIVALENT,
    INCONCLUSIVE,
    NOT_EQUIVALENT,
    PREDICTION_ABELIAN,
    PREDICTION_EVEN_QUOTIENT,
    PREDICTION_NONE,
    PREDICTION_ODD_N,
    Case1Tuple,
    InvariantTuple,
    apply_moves,
    classify_nonorientable,
    classify_orientable,
    compute_z,
    flip_x_class,
    global_inversion,
    theorem_prediction,
    tuple_orbit,
)
from necroots.monodromy import SquareRootPair
from necroots.signature import NecSignature


SIG_233 = NecSignature(2, "-", (3, 3))
SIG_222 = NecSignature(2, "-", (2, 2))
SIG_644 = NecSignature(6, "-", (4, 4))


def c8c3_tuples():
    # order-24 cyclic root pair on (2; -; [3,3]); residues are discrete
    # logs base g1 = ut resp. g2 = u^5 t in C8 x C3
    t1 = InvariantTuple(24, SIG_233, ((3, 8), (3, 16)), 0, d_first=9)
    t2 = InvariantTuple(24, SIG_233, ((3, 16), (3, 8)), 0, d_first=21)
    return t1, t2


def ex1_tuples():
    t1 = InvariantTuple(16, SIG_222, ((2, 8), (2, 8)), 8, d_first=1)
    t2 = InvariantTuple(16, SIG_222, ((2, 8), (2, 8)), 8, d_first=3)
    return t1, t2


def ex2_tuples():
    t1 = InvariantTuple(8, SIG_644, ((4, 2), (4, 2)), 2)
    t2 = InvariantTuple(8, SIG_644, ((4, 2), (4, 2)), 6)
    return t1, t2


class TestConstruction:
    def test_normalizes_mod_two_m(self):
        t = InvariantTuple(16, SIG_222, ((2, 24), (2, -8)), 40, d_first=17)
        assert t.x_classes == ((2, 8), (2, 8))
        assert t.d_sum == 8
        assert t.d_first == 1

    def test_rejects_odd_residue(self):
        with pytest.raises(ValueError, match="even"):
            InvariantTuple(16, SIG_222, ((2, 8), (2, 7)), 8)

    def test_rejects_even_marking(self):
        with pytest.raises(ValueError, match="odd"):
            InvariantTuple(16, SIG_222, ((2, 8), (2, 8)), 8, d_first=4)

    def test_rejects_wrong_period(self):
        # residue 4 has order 4 mod 16, not 2
        with pytest.raises(ValueError, match="order"):
            InvariantTuple(16, SIG_222, ((2, 4), (2, 8)), 2)

    def test_rejects_period_mismatch_with_signature(self):
        with pytest.raises(ValueError, match="periods"):
            InvariantTuple(24, SIG_233, ((3, 8),), 8)

    def test_rejects_broken_long_relation(self):
        with pytest.raises(ValueError, match="long relation"):
            InvariantTuple(16, SIG_222, ((2, 8), (2, 8)), 2)

    def test_rejects_odd_root_order(self):
        with pytest.raises(ValueError, match="two_m"):
            InvariantTuple(6, NecSignature(2, "-", (3,)), ((3, 2),), 2)

    def test_rejects_orientable_sub_signature(self):
        with pytest.raises(ValueError, match="minus"):
            InvariantTuple(16, NecSignature(2, "+", (2, 2)), ((2, 8), (2, 8)), 8)


class TestZ:
    def test_frozen_values(self):
        assert compute_z(24, [8, 16], 0, True) == 8
        assert compute_z(16, [8, 8], 8, True) == 8
        assert compute_z(8, [2, 2], 6, True) == 2

    def test_no_classes_no_glide_sum(self):
        assert compute_z(16, [], 0, True) == 16

    def test_odd_genus_ignores_glide_sum(self):
        assert compute_z(16, [8, 8], 2, False) == 8

    def test_tuple_property(self):
        t1, _ = c8c3_tuples()
        assert t1.z == 8


class TestMoves:
    def test_flip_moves_old_residue_into_glide_sum(self):
        t = InvariantTuple(8, SIG_644, ((4, 2), (4, 2)), 6)
        u = flip_x_class(t, 0)
        assert u.x_classes == ((4, 6), (4, 2))
        assert u.d_sum == 0
        assert u.d_first is None

    def test_flip_is_involution(self):
        t, _ = c8c3_tuples()
        assert flip_x_class(flip_x_class(t, 1), 1) == t

    def test_inversion(self):
        t = InvariantTuple(8, SIG_644, ((4, 2), (4, 2)), 6)
        u = global_inversion(t)
        assert u.x_classes == ((4, 6), (4, 6))
        assert u.d_sum == 2

    def test_inversion_negates_marking(self):
        t1, _ = ex1_tuples()
        assert global_inversion(t1).d_first == 15

    def test_moves_preserve_z(self):
        t, _ = ex2_tuples()
        for moves, u in tuple_orbit(t):
            assert u.z == t.z, moves

    def test_orbit_size_and_determinism(self):
        t, _ = ex2_tuples()
        first = list(tuple_orbit(t))
        assert len(first) == 8
        assert first[0][0] == ()
        assert first == list(tuple_orbit(t))

    def test_apply_moves_replays_orbit(self):
        t, _ = c8c3_tuples()
        for moves, u in tuple_orbit(t):
            assert apply_moves(t, moves) == u


class TestOrientable:
    def test_plain_match(self):
        t = Case1Tuple(12, (2, 4), (6,))
        v = classify_orientable(t, Case1Tuple(12, (4, 2), (6,)))
        assert v.outcome == EQUIVALENT
        assert v.moves == ()

    def test_match_after_inversion(self):
        t1 = Case1Tuple(8, (2, 6), (1, 3))
        t2 = Case1Tuple(8, (6, 2), (7, 5))
        v = classify_orientable(t1, t2)
        assert v.outcome == EQUIVALENT
        assert v.moves == (("invert",),)

    def test_mismatch(self):
        v = classify_orientable(Case1Tuple(8, (2, 2)), Case1Tuple(8, (2, 6)))
        assert v.outcome == NOT_EQUIVALENT
        assert v.failed_condition == 1

    def test_rotation_values_must_share_modulus(self):
        with pytest.raises(ValueError):
            classify_orientable(Case1Tuple(8, (2,)), Case1Tuple(12, (2,)))


class TestNonorientableFixtures:
    def test_cyclic24_pair_fails_glide_marking(self):
        t1, t2 = c8c3_tuples()
        v = classify_nonorientable(t1, t2)
        assert v.outcome == NOT_EQUIVALENT
        assert v.failed_condition == 3
        # the markings sit in distinct sign classes mod z = 8
        assert t1.d_first_classes() == frozenset({1, 7})
        assert t2.d_first_classes() == frozenset({5, 3})

    def test_order16_pair_fails_glide_marking(self):
        t1, t2 = ex1_tuples()
        v = classify_nonorientable(t1, t2)
        assert v.outcome == NOT_EQUIVALENT
        assert v.failed_condition == 3
        assert t1.d_first_classes() == frozenset({1, 7})
        assert t2.d_first_classes() == frozenset({3, 5})

    def test_order8_pair_fails_glide_sum(self):
        t1, t2 = ex2_tuples()
        v = classify_nonorientable(t1, t2)
        assert v.outcome == NOT_EQUIVALENT
        assert v.failed_condition == 2

    def test_order8_orbit_glide_sums(self):
        # with the cone multiset held fixed the orbit only reaches 6
        t1, t2 = ex2_tuples()
        sums = {
            u.d_sum
            for _, u in tuple_orbit(t2)
            if u.sorted_classes() == t1.sorted_classes()
        }
        assert sums == {6}


class TestNonorientableStructure:
    def test_self_is_equivalent_with_empty_moves(self):
        for t in (*c8c3_tuples(), *ex1_tuples(), *ex2_tuples()):
            v = classify_nonorientable(t, t)
            assert v.outcome == EQUIVALENT
            assert v.moves == ()

    def test_modulus_mismatch_raises(self):
        t1, _ = ex1_tuples()
        u1, _ = ex2_tuples()
        with pytest.raises(ValueError):
            classify_nonorientable(t1, u1)

    def test_signature_mismatch(self):
        t1 = InvariantTuple(8, SIG_644, ((4, 2), (4, 2)), 2)
        t2 = InvariantTuple(8, NecSignature(4, "-", (4, 4)), ((4, 2), (4, 2)), 2)
        v = classify_nonorientable(t1, t2)
        assert v.outcome == NOT_EQUIVALENT
        assert v.failed_condition is None
        assert "signature" in v.reason

    def test_cone_multiset_mismatch_is_condition_one(self):
        # mod 24 the order-12 residues split into sign classes {2,22}
        # and {10,14}, so these multisets differ on the whole orbit
        sig = NecSignature(2, "-", (12, 12))
        t1 = InvariantTuple(24, sig, ((12, 2), (12, 2)), 10)
        t2 = InvariantTuple(24, sig, ((12, 2), (12, 10)), 6)
        v = classify_nonorientable(t1, t2)
        assert v.outcome == NOT_EQUIVALENT
        assert v.failed_condition == 1

    def test_flip_alignment_found(self):
        t = InvariantTuple(8, SIG_644, ((4, 2), (4, 6)), 0)
        u = flip_x_class(t, 1)
        v = classify_nonorientable(t, u)
        assert v.outcome == EQUIVALENT
        assert apply_moves(u, v.moves).sorted_classes() == t.sorted_classes()
        assert apply_moves(u, v.moves).d_sum == t.d_sum

    def test_order_two_residue_disables_glide_sum_check(self):
        # flips slide the glide sum freely when a residue equals m, so a
        # bare d_sum difference cannot separate the pair
        sig = NecSignature(4, "-", (2, 2))
        t1 = InvariantTuple(16, sig, ((2, 8), (2, 8)), 8)
        t2 = InvariantTuple(16, sig, ((2, 8), (2, 8)), 0)
        v = classify_nonorientable(t1, t2)
        assert v.outcome == EQUIVALENT

    def test_genus_two_low_z_passes_without_marking(self):
        t1 = InvariantTuple(8, NecSignature(2, "-", (4, 4)), ((4, 2), (4, 2)), 2)
        t2 = InvariantTuple(8, NecSignature(2, "-", (4, 4)), ((4, 2), (4, 2)), 2, d_first=5)
        assert t1.z == 2
        v = classify_nonorientable(t1, t2)
        assert v.outcome == EQUIVALENT

    def test_genus_two_missing_marking_is_inconclusive(self):
        t1, t2 = ex1_tuples()
        bare = InvariantTuple(t2.two_m, t2.sub_signature, t2.x_classes, t2.d_sum)
        v = classify_nonorientable(t1, bare)
        assert v.outcome == INCONCLUSIVE
        assert "marking" in v.reason

    def test_symmetry_on_fixtures(self):
        for t1, t2 in (c8c3_tuples(), ex1_tuples(), ex2_tuples()):
            assert (
                classify_nonorientable(t1, t2).outcome
                == classify_nonorientable(t2, t1).outcome
            )


def random_invariant_tuple(rng, genus=None, with_marking=True):
    two_m = 2 * rng.choice([2, 4, 6, 8, 12])
    if genus is None:
        genus = rng.choice([1, 2, 3, 4])
    count = rng.randint(0, 3)
    classes = []
    for _ in range(count):
        r = rng.choice(range(2, two_m, 2))
        classes.append((two_m // math.gcd(r, two_m), r))
    total = sum(r for _, r in classes)
    # 2*d + total = 0 mod two_m has the two solutions -total/2 mod m shifted by m
    d_sum = (-(total // 2)) % (two_m // 2) + rng.choice([0, two_m // 2])
    d_first = None
    if genus == 2 and with_marking:
        d_first = rng.choice(range(1, two_m, 2))
    sig = NecSignature(genus, "-", tuple(p for p, _ in classes))
    return InvariantTuple(two_m, sig, tuple(classes), d_sum, d_first=d_first)


class TestRandomizedProperties:
    def test_reflexive_and_symmetric(self):
        rng = random.Random(20260816)
        for _ in range(300):
            t = random_invariant_tuple(rng)
            assert classify_nonorientable(t, t).outcome == EQUIVALENT
            u = random_invariant_tuple(rng, genus=t.sub_signature.genus)
            if u.two_m != t.two_m:
                continue
            a = classify_nonorientable(t, u)
            b = classify_nonorientable(u, t)
            assert a.outcome == b.outcome

    def test_moved_tuple_stays_equivalent_with_replayable_witness(self):
        rng = random.Random(42)
        for _ in range(300):
            t = random_invariant_tuple(rng)
            moves = []
            if rng.random() < 0.5:
                moves.append(("invert",))
            for i in range(len(t.x_classes)):
                if rng.random() < 0.5:
                    moves.append(("flip", i))
            u = apply_moves(t, tuple(moves))
            v = classify_nonorientable(t, u)
            assert v.outcome == EQUIVALENT
            w = apply_moves(u, v.moves)
            assert w.sorted_classes() == t.sorted_classes()
            m = t.two_m // 2
            if all(r != m for _, r in t.x_classes):
                assert w.d_sum == t.d_sum


class TestPrediction:
    @staticmethod
    def pair(n, abelian):
        return SquareRootPair(1, 2, 3, 4, n, abelian, (0,))

    def test_odd_index_wins_first(self):
        assert theorem_prediction(self.pair(3, False), 2, 5) == PREDICTION_ODD_N
        assert theorem_prediction(self.pair(1, True), 2, 2) == PREDICTION_ODD_N

    def test_even_quotient_genus_needs_other_orbit_genus(self):
        assert theorem_prediction(self.pair(2, False), 6, 4) == PREDICTION_EVEN_QUOTIENT
        assert theorem_prediction(self.pair(2, False), 2, 4) == PREDICTION_NONE

    def test_odd_quotient_genus_needs_abelian(self):
        assert theorem_prediction(self.pair(2, True), 2, 3) == PREDICTION_ABELIAN
        assert theorem_prediction(self.pair(2, False), 6, 3) == PREDICTION_NONE

    def test_fixture_shapes(self):
        # order-24 pair: n = 1 odd; order-16 pair: n = 2, quotient genus
        # 2 but orbit genus 2; order-8 pair: nonabelian, quotient genus 3
        assert theorem_prediction(self.pair(1, True), 2, 2) == PREDICTION_ODD_N
        assert theorem_prediction(self.pair(2, True), 2, 2) == PREDICTION_NONE
        assert theorem_prediction(self.pair(2, False), 6, 3) == PREDICTION_NONE
