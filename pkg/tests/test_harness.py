"""Verification harness: enumeration, conjugacy witnesses, scan rows, fixtures.

Row pins below were frozen from hand-checked small cases; the dicyclic
witness and the census triples are derived in comments where the
arithmetic fits on a line.
"""

import pytest

from necroots.classify import (
    EQUIVALENT,
    NOT_EQUIVALENT,
    PREDICTION_ABELIAN,
    PREDICTION_EVEN_QUOTIENT,
    PREDICTION_NONE,
    PREDICTION_ODD_N,
    classify_nonorientable,
    theorem_prediction,
)
from necroots.groups import (
    FiniteGroup,
    cyclic,
    direct_product,
    generated_subgroup,
    semidirect_c2,
)
from necroots.harness import (
    BUNDLED_SIGNATURES,
    FIXTURE_IDS,
    ScanSummary,
    bundled_groups,
    enumerate_epimorphisms,
    fixture_monodromy,
    homology_oracle,
    paper_example,
    proposition_conjugacy_check,
    scan_cell,
)
from necroots.homology import abelian_invariants
from necroots.monodromy import SquareRootPair, pair_census, validate
from necroots.schreier import (
    build_schreier,
    homology_invariants,
    invariant_tuple_from_system,
    relator_matrix,
)
from necroots.signature import NecSignature


def dicyclic12() -> FiniteGroup:
    """<r, s : r^6 = 1, s^2 = r^3, s r s^-1 = r^-1>; ids 0..5 are r^k, 6..11 r^k*s."""
    def mul(x, y):
        ax, kx = divmod(x, 6)
        ay, ky = divmod(y, 6)
        if ax == 0 and ay == 0:
            return (kx + ky) % 6
        if ax == 0 and ay == 1:
            return 6 + (kx + ky) % 6
        if ax == 1 and ay == 0:
            return 6 + (kx - ky) % 6
        return (kx - ky + 3) % 6

    table = [[mul(x, y) for y in range(12)] for x in range(12)]
    labels = [f"r^{k}" for k in range(6)] + [f"r^{k}*s" for k in range(6)]
    return FiniteGroup(table, labels, {"r": 1, "s": 6}, "Dic12")


class TestEnumeration:
    def test_cyclic4_target_is_empty(self):
        # glide images are odd powers of u, so the squared glides multiply
        # to the identity and the long relation forces a trivial elliptic
        # image, which cannot have order 2
        assert enumerate_epimorphisms(NecSignature(2, "-", (2,)), cyclic(4)) == []

    def test_free_genus3_onto_c2(self):
        monos = enumerate_epimorphisms(NecSignature(3, "-", ()), cyclic(2))
        assert len(monos) == 1
        # the character pins the handles to the identity and d to the involution
        assert dict(monos[0].images) == {"d": 1, "a1": 0, "b1": 0}

    def test_order2_cell_count_and_membership(self, ex1):
        mono, _, _ = ex1
        group = direct_product(cyclic(16), cyclic(2, "t"))
        monos = enumerate_epimorphisms(NecSignature(2, "-", (2,)), group)
        assert len(monos) == 32
        assert sum(1 for m in monos if dict(m.images) == dict(mono.images)) == 1

    def test_all_results_are_valid_and_sorted(self):
        group = semidirect_c2(8, 5)
        monos = enumerate_epimorphisms(NecSignature(2, "-", (2,)), group)
        assert monos
        assert all(validate(m).valid for m in monos)
        keys = [tuple(m.image_ids()) for m in monos]
        assert keys == sorted(keys)
        again = enumerate_epimorphisms(NecSignature(2, "-", (2,)), group)
        assert [tuple(m.image_ids()) for m in again] == keys

    def test_non_hyperbolic_signature_warns(self):
        with pytest.warns(UserWarning, match="not hyperbolic"):
            result = enumerate_epimorphisms(NecSignature(2, "-", ()), cyclic(2))
        assert result == []

    def test_boundary_cycles_rejected(self):
        with pytest.raises(ValueError, match="reflection-free"):
            enumerate_epimorphisms(NecSignature(2, "-", (2,), 1), cyclic(4))


class TestPropositionCheck:
    def test_dicyclic_witness(self):
        group = dicyclic12()
        r, s = group.gen_names["r"], group.gen_names["s"]
        rs = group.mul(r, s)
        # s^2 = (rs)^2 = r^3, <s, rs> is the whole group, so n = 12/4 = 3
        pair = SquareRootPair(s, rs, group.power(r, 3), 2, 3, False, tuple(range(12)))
        alpha, w = proposition_conjugacy_check(group, pair)
        assert (alpha, w) == (2, 1)
        conj = group.power(group.mul(s, rs), alpha)
        assert conj == group.power(r, 4)
        lhs = group.mul(group.mul(conj, group.power(rs, 2 * w + 1)), group.inv(conj))
        assert lhs == s

    def test_identical_roots_need_no_conjugation(self, c8c3):
        mono, g1, _ = c8c3
        group = mono.group
        f = group.mul(g1, g1)
        sub = generated_subgroup(group, [g1])
        pair = SquareRootPair(g1, g1, f, 4, len(sub) // 8, True, sub)
        assert proposition_conjugacy_check(group, pair) == (0, 0)

    def test_worked_pair_is_a_thirteenth_power(self, c8c3):
        mono, g1, g2 = c8c3
        pairs, _ = pair_census(mono)
        pair = next(p for p in pairs if {p.g1, p.g2} == {g1, g2})
        assert pair.n == 1
        alpha, w = proposition_conjugacy_check(mono.group, pair)
        assert (alpha, w) == (0, 6)
        assert pair.g1 == mono.group.power(pair.g2, 13)

    def test_even_n_is_rejected(self, ex1):
        mono, g1, g2 = ex1
        pairs, _ = pair_census(mono)
        pair = next(p for p in pairs if {p.g1, p.g2} == {g1, g2})
        assert pair.n == 2
        with pytest.raises(ValueError, match="n odd"):
            proposition_conjugacy_check(mono.group, pair)


class TestHomologyOracle:
    def test_fixture_roots(self, c8c3, ex1, ex2):
        for mono, g1, g2 in (c8c3, ex1, ex2):
            assert homology_oracle(mono, g1)
            assert homology_oracle(mono, g2)
            assert homology_oracle(mono, g1, strategy="glide-shift")

    def test_block_reduction_matches_joint_matrix(self, ex1, ex2):
        # the oracle reduces the relator block alone; the joint matrix
        # with definition rows must give the same invariants
        for mono, g1, g2 in (ex1, ex2):
            for g in (g1, g2):
                system = build_schreier(mono, g)
                assert homology_invariants(system) == abelian_invariants(relator_matrix(system))


class TestTheoremPrediction:
    @staticmethod
    def _pair(n: int, abelian: bool) -> SquareRootPair:
        return SquareRootPair(0, 0, 0, 2, n, abelian, ())

    def test_odd_n(self):
        assert theorem_prediction(self._pair(3, False), 5, 4) == PREDICTION_ODD_N

    def test_even_quotient(self):
        assert theorem_prediction(self._pair(2, False), 3, 4) == PREDICTION_EVEN_QUOTIENT

    def test_even_quotient_blocked_at_genus_two(self):
        assert theorem_prediction(self._pair(2, False), 2, 4) == PREDICTION_NONE

    def test_odd_quotient_abelian(self):
        assert theorem_prediction(self._pair(2, True), 4, 3) == PREDICTION_ABELIAN

    def test_odd_quotient_nonabelian(self):
        assert theorem_prediction(self._pair(2, False), 4, 3) == PREDICTION_NONE


class TestScanRows:
    def test_order2_cell_pinned_row(self, ex1):
        mono, g1, g2 = ex1
        cell = scan_cell(NecSignature(2, "-", (2,)), direct_product(cyclic(16), cyclic(2, "t")))
        assert cell.monodromies == 32
        assert len(cell.rows) == 96
        row = next(
            r for r in cell.rows
            if dict(r.images) == dict(mono.images) and {r.g1, r.g2} == {g1, g2}
        )
        assert (row.m, row.n, row.abelian) == (8, 2, True)
        assert (row.quotient_genus, row.sub_genus) == (2, 2)
        # even quotient genus, but the genus-2 subgroup blocks that clause
        assert row.prediction == PREDICTION_NONE
        assert (row.verdict, row.failed_condition) == (NOT_EQUIVALENT, 3)
        assert row.agreement and row.conjugacy_witness is None
        assert row.lemma2_checked and row.homology_ok

    def test_odd_n_cell_is_fully_witnessed(self, c8c3):
        mono, g1, g2 = c8c3
        group = direct_product(cyclic(8), cyclic(3, "t"))
        cell = scan_cell(NecSignature(2, "-", (3, 3)), group)
        assert cell.monodromies == 96
        assert len(cell.rows) == 192
        assert all(r.n % 2 == 1 for r in cell.rows)
        assert all(r.prediction == PREDICTION_ODD_N for r in cell.rows)
        assert all(r.verdict == EQUIVALENT for r in cell.rows)
        assert all(r.conjugacy_witness is not None for r in cell.rows)
        mine = [r for r in cell.rows if dict(r.images) == dict(mono.images)]
        u = group.gen_names["u"]
        u5 = group.power(u, 5)
        assert [(r.g1, r.g2, r.conjugacy_witness) for r in mine] == [
            (u, u5, (0, 2)),
            (g1, g2, (0, 6)),
        ]

    def test_mixed_prediction_cell_agrees(self):
        cell = scan_cell(NecSignature(2, "-", (2, 2)), direct_product(cyclic(4), cyclic(2, "t")))
        assert cell.monodromies == 40
        assert len(cell.rows) == 120
        counts = {}
        for r in cell.rows:
            counts[r.prediction] = counts.get(r.prediction, 0) + 1
        assert counts == {
            PREDICTION_ODD_N: 80,
            PREDICTION_EVEN_QUOTIENT: 32,
            PREDICTION_NONE: 8,
        }
        assert all(r.verdict == EQUIVALENT for r in cell.rows)
        assert all(r.agreement for r in cell.rows)
        assert all(r.homology_ok for r in cell.rows)

    def test_census_representative_of_worked_pair(self, ex2):
        mono, g1, g2 = ex2
        group = mono.group
        u, c = group.gen_names["u"], group.gen_names["c"]
        cu = group.mul(c, u)
        cu3 = group.mul(c, group.power(u, 3))
        pairs, odd_m = pair_census(mono)
        assert odd_m == 0
        assert [(p.g1, p.g2) for p in pairs] == [
            (u, group.power(u, 5)),
            (u, cu3),
            (cu, group.mul(c, group.power(u, 5))),
        ]
        # the worked roots name the same pair of cyclic subgroups
        rep = pairs[1]
        assert generated_subgroup(group, [rep.g1]) == generated_subgroup(group, [g1])
        assert generated_subgroup(group, [rep.g2]) == generated_subgroup(group, [g2])
        assert (rep.m, rep.n, rep.abelian) == (4, 2, False)
        t1 = invariant_tuple_from_system(build_schreier(mono, rep.g1))
        t2 = invariant_tuple_from_system(build_schreier(mono, rep.g2))
        assert {t1.d_sum, t2.d_sum} == {2, 6}
        verdict = classify_nonorientable(t1, t2)
        assert (verdict.outcome, verdict.failed_condition) == (NOT_EQUIVALENT, 2)

    def test_transversal_choice_does_not_change_rows(self):
        sig = NecSignature(2, "-", (2,))
        group = direct_product(cyclic(16), cyclic(2, "t"))
        key = lambda r: (r.images, r.g1, r.g2, r.verdict, r.failed_condition, r.agreement)
        bfs = [key(r) for r in scan_cell(sig, group).rows]
        shifted = [key(r) for r in scan_cell(sig, group, strategy="glide-shift").rows]
        assert bfs == shifted

    def test_summary_accounting(self):
        cells = (
            scan_cell(NecSignature(2, "-", (2,)), direct_product(cyclic(16), cyclic(2, "t"))),
            scan_cell(NecSignature(2, "-", (3, 3)), direct_product(cyclic(8), cyclic(3, "t"))),
        )
        summary = ScanSummary(cells)
        assert summary.populated_cells == 2
        assert summary.total_monodromies == 128
        assert len(summary.rows) == 288
        assert summary.disagreements == []

    def test_bundled_plan(self):
        assert len(BUNDLED_SIGNATURES) == 5
        assert all(sig.sign == "-" for sig in BUNDLED_SIGNATURES)
        assert [g.name for g in bundled_groups()] == [
            "C16xC2", "C8xC3", "C4xC2", "C8:C2(t5)", "C12:C2(t7)", "C8xC2",
        ]


class TestFixtureReports:
    def test_all_fixture_reports_pass(self):
        for fixture_id in FIXTURE_IDS:
            report = paper_example(fixture_id)
            assert report.passed, [
                (c.name, c.expected, c.got) for c in report.checks if not c.ok
            ]
            assert report.verdict.outcome == NOT_EQUIVALENT

    def test_residue_checks_surface_in_report(self):
        report = paper_example("c8c3")
        values = {check.name: check.got for check in report.checks}
        assert values["glide residue g1"] == 9
        assert values["glide residue g2"] == 21
        assert values["residue modulus z"] == 8
        assert values["kernel genus"] == 17

    def test_reports_pass_with_glide_shift_transversal(self):
        for fixture_id in FIXTURE_IDS:
            assert paper_example(fixture_id, strategy="glide-shift").passed

    def test_unknown_fixture_rejected(self):
        with pytest.raises(ValueError, match="unknown fixture"):
            paper_example("no-such-fixture")
