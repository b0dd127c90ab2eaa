"""Acceptance gate: one check per shipped guarantee, at its stated tolerance.

Each test prints as a single pass/fail line under pytest -v.  Timed checks
measure wall-clock inside the test so the budget is part of the contract.
"""

import random
import time
from fractions import Fraction

import pytest

from quadmean.densities import (
    census_check,
    census_expected,
    density_total,
    mass_identity_check,
    orbital_volume_bruteforce,
    orbital_volume_closed,
    remark_sums_check,
)
from quadmean.fields import (
    DiscriminantTable,
    analytic_class_number_imaginary,
    analytic_hr_real,
)
from quadmean.meanvalue import (
    convergence_report,
    empirical_sum,
    euler_product,
    parse_conditions,
)
from quadmean.orbits import (
    congruence_solution_check,
    congruence_solution_count,
    lift_saturation_check,
    standard_representatives,
    stabilizer_order,
    torus_order,
)
from quadmean.residue import square_class_labels


@pytest.fixture(scope="module")
def neg_table():
    t0 = time.monotonic()
    table = DiscriminantTable.compute(-1, 10**6, workers=4)
    return table, time.monotonic() - t0


@pytest.fixture(scope="module")
def pos_table():
    t0 = time.monotonic()
    table = DiscriminantTable.compute(1, 10**5, workers=4)
    return table, time.monotonic() - t0


def _ramified_reps(p):
    return [r for r in standard_representatives(p) if r.is_ramified]


def test_criterion_1_ramified_volumes_brute_equal_closed():
    t0 = time.monotonic()
    for p in (2, 3, 5):
        q = Fraction(p)
        for rep in _ramified_reps(p):
            closed = orbital_volume_closed(rep)
            assert closed == Fraction(1, 2) * q**-rep.delta * (1 - 1 / q) * (1 - q**-2)
            assert orbital_volume_bruteforce(rep, rep.n) == closed, rep.algebra
    assert time.monotonic() - t0 < 60.0


def test_criterion_2_stabilizer_and_torus_orders_exact():
    for p in (2, 3, 5):
        for rep in _ramified_reps(p):
            ring = rep.natural_ring()
            n, delta = rep.n, rep.delta
            expected_torus = p ** (2 * n - 1) * (p - 1)
            assert torus_order(rep, ring) == expected_torus, rep.algebra
            assert stabilizer_order(rep, ring) == 2 * p**delta * expected_torus, rep.algebra


def test_criterion_3_congruence_count_and_characterization():
    for p in (2, 3, 5):
        for rep in _ramified_reps(p):
            ring = rep.natural_ring()
            assert congruence_solution_count(rep, ring) == 2 * p**rep.delta, rep.algebra
            chk = congruence_solution_check(rep, ring)
            assert chk.solutions == chk.described, rep.algebra
            assert chk.disjoint, rep.algebra
            if p == 2 and rep.delta % 2 == 0:
                assert chk.branch_sizes == (p**rep.delta, p**rep.delta)
            assert chk.passed


def test_criterion_4_orbit_lifts_saturate_one_level_deeper():
    for p in (2, 3):
        for rep in _ramified_reps(p):
            sat = lift_saturation_check(rep, rep.n + 1)
            assert sat.passed, rep.algebra
            assert not sat.missing
            assert sat.lifts == p**3


def test_criterion_5_ramified_extension_census():
    for p in (2, 3, 5):
        assert census_check(p).passed
        for chk in remark_sums_check(p):
            assert chk.passed
    assert len(square_class_labels(2)) - 1 == 7  # seven quadratic extensions of the dyadic field
    assert census_expected(2) == {2: 2, 3: 4}


def test_criterion_6_density_mass_identity():
    for q in (2, 3, 5, 7):
        chk = mass_identity_check(q)
        assert chk.passed
        assert density_total(q) == 1 - Fraction(q) ** -2 - Fraction(q) ** -3 + Fraction(q) ** -4


def test_criterion_7_conditioned_sums_track_density_ratios(neg_table):
    table, build_seconds = neg_table
    assert build_seconds < 600.0

    def s(label):
        return empirical_sum(table, parse_conditions(f"inf=C,2={label}"))

    assert s("split") / s("unram") == pytest.approx(3.0, rel=0.02)
    assert s("ram:-1") / s("ram:-5") == pytest.approx(1.0, rel=0.02)
    shallow = ("ram:-1", "ram:-5")     # associated level-2 discriminant valuation
    deep = ("ram:2", "ram:-2", "ram:10", "ram:-10")  # valuation 3
    for a in shallow:
        for b in deep:
            assert s(a) / s(b) == pytest.approx(2.0, rel=0.02), (a, b)


def test_criterion_8_mean_value_matches_prediction(neg_table, pos_table):
    neg, _ = neg_table
    pos, _ = pos_table

    rows = convergence_report(neg, parse_conditions("inf=C"), (10**4, 10**5, 10**6))
    assert abs(rows[-1].ratio - 1) < 0.05
    assert abs(rows[-1].ratio - 1) < abs(rows[0].ratio - 1)

    rows = convergence_report(pos, parse_conditions("inf=RxR"), (10**4, 10**5))
    assert abs(rows[-1].ratio - 1) < 0.05
    assert abs(rows[-1].ratio - 1) < abs(rows[0].ratio - 1)


def test_criterion_9_sampled_oracles_and_euler_stability(neg_table, pos_table):
    neg, _ = neg_table
    pos, _ = pos_table
    rng = random.Random(2026)

    small = neg.truncated(10**4)
    for i in rng.sample(range(len(small)), 50):
        exact = analytic_class_number_imaginary(-int(small.magnitude[i]))
        assert exact.denominator == 1
        assert int(exact) == int(small.h[i])

    small = pos.truncated(10**4)
    for i in rng.sample(range(len(small)), 50):
        got = float(small.hr()[i])
        want = analytic_hr_real(int(small.magnitude[i]))
        assert abs(got / want - 1) < 1e-6

    assert abs(euler_product(10**5) / euler_product(10**6) - 1) <= 1e-5
