from fractions import Fraction

import pytest

from derivscan.lemma_engine import (
    CLOSED_FORM_ARITY,
    LemmaConfig,
    check_degree_schedule,
    closed_forms_low,
    contradiction_certificate,
    degree_schedule,
    leading_ledger,
    reconstruct_sequence,
    residual,
    residual_registry,
)
from derivscan.poly import Polynomial

SMALL_GRID = [
    LemmaConfig(m, alpha, j0)
    for m in (2, 3)
    for alpha in (1, 2)
    for j0 in (1, 2, 3)
]


class TestConfig:
    def test_l_derived(self):
        assert LemmaConfig(2, 1, 2).l == 4
        assert LemmaConfig(5, 3, 4).l == 20

    def test_m1_rejected(self):
        with pytest.raises(ValueError):
            LemmaConfig(1, 1, 1)


class TestReconstruction:
    def test_top_entry_normalized(self):
        for cfg in SMALL_GRID:
            seq = reconstruct_sequence(cfg)
            assert seq.entries[cfg.l] == Polynomial.constant(seq.arity, 1)

    def test_scalar_region(self):
        cfg = LemmaConfig(3, 1, 2)
        seq = reconstruct_sequence(cfg)
        for s in range(1, cfg.m):
            assert seq.entries[cfg.l - s] == Polynomial.variable(seq.arity, 1 + s)

    def test_bottom_entry_m2_alpha1_depth1(self):
        # Chain 1, lam1, f_0 with f_0 = x^2 + c0.
        cfg = LemmaConfig(2, 1, 1)
        seq = reconstruct_sequence(cfg)
        x = Polynomial.variable(seq.arity, 1)
        c0 = Polynomial.variable(seq.arity, seq.variable_index("c0"))
        assert seq.entries[0] == x ** 2 + c0

    def test_tracked_linear_term_depth2(self):
        # At (m, alpha, j0) = (2, 1, 2) the entry f_1 carries the tracked
        # term -l*x = -4x.
        cfg = LemmaConfig(2, 1, 2)
        seq = reconstruct_sequence(cfg)
        linear = seq.entries[1].coefficient_of_power(1, 1)
        assert linear.constant_value() == -4

    def test_recurrence_holds(self):
        # f'_{i-m} = i x^alpha f_i - (i+1) f_{i+1} for every computed step.
        cfg = LemmaConfig(3, 2, 2)
        seq = reconstruct_sequence(cfg)
        x_alpha = Polynomial.variable(seq.arity, 1) ** cfg.alpha
        for i in range(cfg.l, cfg.m - 1, -1):
            lhs = seq.entry(i - cfg.m).partial_derivative(1)
            rhs = x_alpha * seq.entry(i).scale(i) - seq.entry(i + 1).scale(i + 1)
            assert lhs == rhs

    def test_entry_outside_range_is_zero(self):
        cfg = LemmaConfig(2, 1, 1)
        seq = reconstruct_sequence(cfg)
        assert not seq.entry(-1)
        assert not seq.entry(cfg.l + 3)


class TestDegreeSchedule:
    def test_expected_map_m2_alpha1_depth2(self):
        cfg = LemmaConfig(2, 1, 2)
        assert degree_schedule(cfg) == {
            4: ("exact", 0),
            2: ("exact", 2),
            0: ("exact", 4),
            3: ("at_most", 0),
            1: ("at_most", 2),
        }

    def test_m3_alpha2_depth1(self):
        cfg = LemmaConfig(3, 2, 1)
        seq = reconstruct_sequence(cfg)
        assert seq.entries[0].degree_in(1) == 3
        assert seq.entries[1].degree_in(1) <= 0
        assert seq.entries[2].degree_in(1) <= 0
        assert check_degree_schedule(seq).ok

    def test_grid_has_no_violations(self):
        for cfg in SMALL_GRID:
            report = check_degree_schedule(reconstruct_sequence(cfg))
            assert report.ok, report.violations

    def test_violation_detected_on_tampered_sequence(self):
        cfg = LemmaConfig(2, 1, 1)
        seq = reconstruct_sequence(cfg)
        tampered = seq.__class__(
            config=cfg,
            arity=seq.arity,
            entries=(Polynomial.zero(seq.arity),) + seq.entries[1:],
            registry=seq.registry,
        )
        assert not check_degree_schedule(tampered).ok


class TestClosedForms:
    def test_first_form(self):
        forms = closed_forms_low(LemmaConfig(2, 1, 1))
        a_x = Polynomial(CLOSED_FORM_ARITY, {(1, 1, 0): 1})
        b = Polynomial(CLOSED_FORM_ARITY, {(0, 0, 1): 1})
        assert forms[0] == a_x + b

    def test_second_form(self):
        alpha = 2
        forms = closed_forms_low(LemmaConfig(2, alpha, 1))
        expected = Polynomial(
            CLOSED_FORM_ARITY,
            {(alpha + 1, 1, 0): Fraction(1, 2), (alpha, 0, 1): Fraction(1, 2)},
        )
        assert forms[1] == expected

    def test_m3_alpha2_top_form(self):
        forms = closed_forms_low(LemmaConfig(3, 2, 1))
        expected = Polynomial(
            CLOSED_FORM_ARITY,
            {(5, 1, 0): Fraction(1, 3), (4, 0, 1): Fraction(1, 3)},
        )
        assert forms[2] == expected

    def test_forms_satisfy_bottom_recurrence(self):
        # i x^alpha f_i = (i+1) f_{i+1} whenever the entry below is zero.
        for m, alpha in [(2, 1), (3, 2), (4, 3)]:
            forms = closed_forms_low(LemmaConfig(m, alpha, 1))
            x_alpha = Polynomial.variable(CLOSED_FORM_ARITY, 1) ** alpha
            for i in range(1, m):
                assert x_alpha * forms[i - 1].scale(i) == forms[i].scale(i + 1)


class TestLeadingLedger:
    def test_base_cases(self):
        for cfg in SMALL_GRID:
            ledger = leading_ledger(cfg)
            assert ledger.A[1] == Fraction(cfg.l, cfg.alpha + 1)
            assert ledger.B[1] == Fraction(-cfg.l)

    def test_contraction_example(self):
        # (m, alpha, j0) = (2, 1, 2): A_2 = (l - m) A_1 / (2 (alpha+1)) = 1.
        ledger = leading_ledger(LemmaConfig(2, 1, 2))
        assert ledger.A[2] == 1

    def test_signs(self):
        for cfg in SMALL_GRID:
            ledger = leading_ledger(cfg)
            assert all(v > 0 for v in ledger.A.values())
            assert all(v < 0 for v in ledger.B.values())

    def test_cross_check_against_reconstruction(self):
        # The ledgers and the symbolic chain are independent code paths;
        # their tracked coefficients must agree wherever entries exist.
        for cfg in SMALL_GRID:
            seq = reconstruct_sequence(cfg)
            ledger = leading_ledger(cfg)
            for j, value in ledger.A.items():
                entry = seq.entry(cfg.l - j * cfg.m)
                lead = entry.coefficient_of_power(1, j * (cfg.alpha + 1))
                assert lead.constant_value() == value
            for j, value in ledger.B.items():
                index = cfg.l - j * cfg.m - 1
                if index < 0:
                    continue
                slot = (j - 1) * (cfg.alpha + 1) + 1
                tracked = seq.entry(index).coefficient_of_power(1, slot)
                assert tracked.constant_value() == value
            for j, companion in ledger.Acompanion.items():
                index = cfg.l - j * cfg.m - 1
                if index < 0:
                    continue
                slot = j * (cfg.alpha + 1)
                assert seq.entry(index).coefficient_of_power(1, slot) == companion


class TestResidual:
    def test_chain_rows_vanish(self):
        for cfg in [LemmaConfig(2, 1, 2), LemmaConfig(3, 2, 1)]:
            seq = reconstruct_sequence(cfg)
            res = residual(cfg, seq, 0, 0)
            for i in range(cfg.m, cfg.l + cfg.m + 1):
                assert not res.coefficient_of_power(2, i), f"row y^{i} survives"

    def test_bottom_row_is_f1_minus_target(self):
        cfg = LemmaConfig(2, 1, 2)
        seq = reconstruct_sequence(cfg)
        a, b = Fraction(3), Fraction(-1, 2)
        res = residual(cfg, seq, a, b)
        big_arity = seq.arity + 1
        mapping = {1: 1, **{k: k + 1 for k in range(2, seq.arity + 1)}}
        f1 = seq.entries[1].rename_variables(big_arity, mapping)
        x = Polynomial.variable(big_arity, 1)
        expected = f1 - x.scale(a) - Polynomial.constant(big_arity, b)
        assert res.coefficient_of_power(2, 0) == expected

    def test_matches_direct_application(self):
        # Defining property: the residual is d(r) - (a x + b) computed on
        # the nose, here re-derived from the row recurrences instead.
        cfg = LemmaConfig(2, 2, 1)
        seq = reconstruct_sequence(cfg)
        res = residual(cfg, seq, 1, 2)
        big_arity = seq.arity + 1
        mapping = {1: 1, **{k: k + 1 for k in range(2, seq.arity + 1)}}
        x_alpha = Polynomial.variable(big_arity, 1) ** cfg.alpha

        def f(i):
            return seq.entry(i).rename_variables(big_arity, mapping)

        for i in range(1, cfg.l + cfg.m + 1):
            row = (
                f(i - cfg.m).partial_derivative(1)
                + f(i + 1).scale(i + 1)
                - x_alpha * f(i).scale(i)
            )
            assert res.coefficient_of_power(2, i) == row

    def test_symbolic_target_can_zero_the_bottom_row(self):
        # With depth 1 the bottom entry is the scalar lam1, so choosing
        # b = lam1 kills the y^0 row exactly.
        cfg = LemmaConfig(2, 1, 1)
        seq = reconstruct_sequence(cfg)
        names = [name for name, _ in residual_registry(cfg)]
        lam1 = Polynomial.variable(seq.arity + 1, names.index("lam1") + 1)
        res = residual(cfg, seq, 0, lam1)
        assert not res.coefficient_of_power(2, 0)

    def test_registry_layout(self):
        cfg = LemmaConfig(2, 1, 2)
        names = [name for name, _ in residual_registry(cfg)]
        assert names[:3] == ["x", "y", "lam1"]
        assert set(names[3:]) == {"c2", "c1", "c0"}


class TestCertificates:
    def test_m2_alpha1_sign_clash(self):
        cert = contradiction_certificate(2, 1)
        assert cert.complete
        case1 = cert.cases[0]
        assert case1.status == "sign-clash" and case1.j0 == 2
        details = dict(case1.details)
        ledger = leading_ledger(LemmaConfig(2, 1, 2))
        assert details["A_at_j1"] == str(ledger.A[1])
        assert details["B_at_j1"] == str(ledger.B[1])
        assert Fraction(details["a_from_leading_slot"]) > 0
        assert Fraction(details["a_from_subleading_slot"]) < 0

    def test_m3_alpha1_case1_has_no_candidate(self):
        cert = contradiction_certificate(3, 1)
        assert cert.cases[0].status == "no-admissible-j0"
        assert cert.complete

    def test_m2_alpha2_case_split(self):
        cert = contradiction_certificate(2, 2)
        assert cert.cases[0].status == "sign-clash" and cert.cases[0].j0 == 2
        assert cert.cases[1].status == "no-admissible-j0"
        assert cert.cases[2].status == "degree-absurdity"

    def test_depth1_always_excluded(self):
        for m in (2, 3, 4):
            for alpha in (1, 2):
                cert = contradiction_certificate(m, alpha)
                assert cert.j0_exclusion.status == "excluded"

    def test_grid_complete(self):
        for m in range(2, 7):
            for alpha in range(1, 5):
                assert contradiction_certificate(m, alpha).complete

    def test_json_shape(self):
        data = contradiction_certificate(2, 1).to_json_dict()
        assert data["complete"] is True
        assert {c["label"] for c in data["cases"]} == {"case-1", "case-2", "case-3"}

    def test_sign_clash_paths_disagree_in_sign(self):
        # Whenever a case matches an integer depth, the two forced values
        # for the same scalar must have opposite signs.
        for m in range(2, 7):
            for alpha in range(1, 5):
                cert = contradiction_certificate(m, alpha)
                for case in cert.cases[:2]:
                    if case.status != "sign-clash":
                        continue
                    details = dict(case.details)
                    symbol = "a" if case.label == "case-1" else "b"
                    assert Fraction(details[f"{symbol}_from_leading_slot"]) > 0
