import random
from fractions import Fraction

import pytest

from derivscan.darboux import (
    DarbouxWitness,
    ScanConfig,
    control_derivation,
    darboux_search_fixed_cofactor,
    default_scan_config,
    enumerate_cofactors,
    exact_quotient,
    principal_stability_check,
    stable_ideal_scan,
    verify_darboux,
)
from derivscan.derivation import (
    Derivation,
    FamilyParams,
    jordan_derivation,
    two_variable_derivation,
)
from derivscan.poly import Polynomial, parse


def euler():
    return control_derivation("euler")


def ddx():
    return control_derivation("ddx")


class TestVerify:
    def test_euler_scales_coordinates(self):
        assert verify_darboux(euler(), parse("x1", 2), parse("1", 2))

    def test_ddx_kills_other_variable(self):
        assert verify_darboux(ddx(), parse("x2", 2), parse("0", 2))

    def test_family_coordinate_not_stable(self):
        # d(x) = y^2 is not a multiple of x.
        d = two_variable_derivation(2, 1)
        assert not verify_darboux(d, parse("x1", 2), parse("0", 2))

    def test_witness_constructor_enforces_relation(self):
        with pytest.raises(ValueError):
            DarbouxWitness.checked(ddx(), parse("x1", 2), parse("0", 2))
        with pytest.raises(ValueError):
            DarbouxWitness.checked(ddx(), parse("5", 2), parse("0", 2))


class TestExactDivision:
    def test_quotients(self):
        f = parse("x1^2 - x2^2", 2)
        assert exact_quotient(f, parse("x1 - x2", 2)) == parse("x1 + x2", 2)
        assert exact_quotient(f, parse("x1 + x2", 2)) == parse("x1 - x2", 2)

    def test_non_divisible(self):
        assert exact_quotient(parse("x1^2 + 1", 2), parse("x1 + 1", 2)) is None

    def test_random_products_divide(self):
        rng = random.Random(0xDA)
        for _ in range(200):
            arity = rng.randint(1, 3)

            def rand_poly():
                terms = {
                    tuple(rng.randint(0, 2) for _ in range(arity)): Fraction(
                        rng.randint(-4, 4), rng.randint(1, 3)
                    )
                    for _ in range(rng.randint(1, 3))
                }
                return Polynomial(arity, terms)

            p = rand_poly()
            q = rand_poly()
            if not p or not q:
                continue
            assert exact_quotient(p * q, p) == q


class TestPrincipalStability:
    def test_constant_of_motion(self):
        assert principal_stability_check(ddx(), parse("x2^2", 2)) == parse("0", 2)

    def test_power_of_scaled_coordinate(self):
        d = Derivation(2, (parse("x1", 2), parse("0", 2)))
        assert principal_stability_check(d, parse("x1^3", 2)) == parse("3", 2)

    def test_family_candidate_rejected(self):
        d = two_variable_derivation(2, 1)
        assert principal_stability_check(d, parse("1 - x1*x2", 2)) is None

    def test_agreement_with_verify(self):
        rng = random.Random(0x5E)
        derivations = [euler(), ddx(), two_variable_derivation(2, 1)]
        for _ in range(200):
            d = rng.choice(derivations)
            terms = {
                (rng.randint(0, 2), rng.randint(0, 2)): Fraction(rng.randint(-3, 3))
                for _ in range(rng.randint(1, 3))
            }
            p = Polynomial(2, terms)
            if not p:
                continue
            q = principal_stability_check(d, p)
            if q is not None:
                assert verify_darboux(d, p, q)
            else:
                # No cofactor can work when exact division fails.
                assert d.apply(p) != parse("0", 2) * p or not d.apply(p)


class TestFixedCofactorSearch:
    def test_euler_unit_cofactor(self):
        found = darboux_search_fixed_cofactor(euler(), parse("1", 2), 1)
        assert sorted(str(p) for p in found) == ["x1", "x2"]

    def test_ddx_zero_cofactor(self):
        found = darboux_search_fixed_cofactor(ddx(), parse("0", 2), 2)
        assert sorted(str(p) for p in found) == ["x2", "x2^2"]

    def test_family_zero_cofactor_trivial(self):
        d = two_variable_derivation(2, 1)
        assert darboux_search_fixed_cofactor(d, parse("0", 2), 6) == []


class TestEnumeration:
    def test_count(self):
        box = (-1, 1)
        cofactors = list(enumerate_cofactors(2, 1, box))
        assert len(cofactors) == 3 ** 3
        assert len(set(cofactors)) == len(cofactors)
        assert Polynomial.zero(2) in cofactors

    def test_degree_and_box_respected(self):
        for q in enumerate_cofactors(2, 1, (-2, 2)):
            assert q.total_degree() <= 1
            assert all(
                c.denominator == 1 and -2 <= c <= 2 for c in q.terms.values()
            )


class TestScan:
    def test_euler_degree_zero_box(self):
        report = stable_ideal_scan(euler(), ScanConfig(2, 0, (-2, 2)))
        assert {str(w.q) for w in report.witnesses} == {"1", "2"}
        by_cofactor = {}
        for w in report.witnesses:
            by_cofactor.setdefault(str(w.q), []).append(str(w.p))
        assert sorted(by_cofactor["1"]) == ["x1", "x2"]
        assert sorted(by_cofactor["2"]) == ["x1*x2", "x1^2", "x2^2"]

    def test_controls_found_with_defaults(self):
        ddx_report = stable_ideal_scan(ddx(), default_scan_config(ddx(), degree_p=2))
        assert any(str(w.p) == "x2" and str(w.q) == "0" for w in ddx_report.witnesses)
        euler_report = stable_ideal_scan(
            euler(), default_scan_config(euler(), degree_p=2, cofactor_degree=0)
        )
        assert any(str(w.p) == "x1" and str(w.q) == "1" for w in euler_report.witnesses)

    def test_family_d2_clean(self):
        d = two_variable_derivation(2, 1)
        report = stable_ideal_scan(d, ScanConfig(6, 1, (-2, 2)))
        assert not report.found
        assert report.cofactors_scanned == 5 ** 3

    def test_family_d3_clean_small_box(self):
        d = jordan_derivation(FamilyParams(3, 2, 1))
        report = stable_ideal_scan(d, ScanConfig(4, 2, (-1, 1)))
        assert not report.found
        assert report.cofactors_scanned == 3 ** 10

    def test_report_wording_keeps_incompleteness(self):
        report = stable_ideal_scan(ddx(), ScanConfig(2, 0, (-1, 1)))
        assert report.complete_in_p
        assert not report.complete_in_cofactors

    def test_witnesses_sound_and_bounded(self):
        report = stable_ideal_scan(euler(), ScanConfig(3, 1, (-1, 1)))
        top = max(int(c.total_degree()) for c in euler().coefficients)
        for w in report.witnesses:
            assert verify_darboux(euler(), w.p, w.q)
            assert w.q.total_degree() <= top - 1 or not w.q


class TestDefaults:
    def test_cofactor_degree_from_coefficients(self):
        d = two_variable_derivation(2, 1)  # coefficient degrees 2 and 2
        config = default_scan_config(d, degree_p=4)
        assert config.cofactor_degree == 1
        assert config.coefficient_box == (-2, 2)

    def test_constant_coefficient_derivation(self):
        config = default_scan_config(ddx(), degree_p=3)
        assert config.cofactor_degree == 0

    def test_unknown_control_rejected(self):
        with pytest.raises(ValueError):
            control_derivation("spiral")
