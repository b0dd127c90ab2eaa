"""Group action, standard representatives, orbits, stabilizers."""

import random

import pytest

from quadmean.orbits import (
    ALG_SPLIT,
    BinaryQF,
    CapacityError,
    GroupElement,
    QuadraticAlgebraDescriptor,
    StandardRep,
    act,
    congruence_solution_check,
    congruence_solution_count,
    congruence_solution_set,
    coset_normal_form_check,
    discriminant,
    group_order,
    lift_saturation_check,
    orbit_size,
    ramified_algebra,
    stabilizer_elements,
    stabilizer_order,
    standard_representatives,
    torus_contains,
    torus_element,
    torus_order,
    unramified_algebra,
)
from quadmean.residue import ResidueRing


def random_element(rng: random.Random, ring: ResidueRing) -> GroupElement:
    m = ring.modulus
    p = ring.p
    while True:
        t = rng.randrange(m)
        a, b, c, d = (rng.randrange(m) for _ in range(4))
        if t % p and (a * d - b * c) % p:
            return GroupElement(ring, t, a, b, c, d)


def test_group_element_validation():
    ring = ResidueRing(3, 2)
    with pytest.raises(ValueError):
        GroupElement(ring, 3, 1, 0, 0, 1)  # scalar not a unit
    with pytest.raises(ValueError):
        GroupElement(ring, 1, 1, 1, 1, 1)  # determinant zero
    e = GroupElement.identity(ring)
    assert (e.t, e.a, e.b, e.c, e.d) == (1, 1, 0, 0, 1)


def test_group_law_and_inverse():
    rng = random.Random(3)
    for p, n in ((2, 4), (3, 2), (5, 2)):
        ring = ResidueRing(p, n)
        e = GroupElement.identity(ring)
        for _ in range(40):
            g = random_element(rng, ring)
            h = random_element(rng, ring)
            k = random_element(rng, ring)
            assert (g * h) * k == g * (h * k)
            assert g * g.inverse() == e
            assert g.inverse() * g == e


def test_act_is_left_action():
    rng = random.Random(4)
    for p, n in ((2, 4), (3, 2), (7, 1)):
        ring = ResidueRing(p, n)
        m = ring.modulus
        for _ in range(60):
            x = BinaryQF(rng.randrange(m), rng.randrange(m), rng.randrange(m))
            g = random_element(rng, ring)
            h = random_element(rng, ring)
            assert act(g, act(h, x)) == act(g * h, x)
            assert act(GroupElement.identity(ring), x) == BinaryQF(x.x0 % m, x.x1 % m, x.x2 % m)


def test_act_substitutes_rows():
    # (g.x)(v) = t * x(v * g2) pointwise
    rng = random.Random(9)
    ring = ResidueRing(3, 3)
    m = ring.modulus
    for _ in range(50):
        x = BinaryQF(rng.randrange(m), rng.randrange(m), rng.randrange(m))
        g = random_element(rng, ring)
        y = act(g, x)
        v1, v2 = rng.randrange(m), rng.randrange(m)
        w1 = v1 * g.a + v2 * g.c
        w2 = v1 * g.b + v2 * g.d
        assert y(v1, v2) % m == g.t * x(w1, w2) % m


def test_discriminant_scales_by_square_of_character():
    rng = random.Random(12)
    for p, n in ((2, 5), (3, 2)):
        ring = ResidueRing(p, n)
        m = ring.modulus
        for _ in range(60):
            x = BinaryQF(rng.randrange(m), rng.randrange(m), rng.randrange(m))
            g = random_element(rng, ring)
            lhs = discriminant(act(g, x)) % m
            assert lhs == g.character**2 * discriminant(x) % m


def test_standard_representatives_shape():
    reps2 = standard_representatives(2)
    assert [str(r.algebra) for r in reps2] == [
        "split", "unramified(5)", "ramified(-1)", "ramified(-5)",
        "ramified(2)", "ramified(-2)", "ramified(10)", "ramified(-10)",
    ]
    assert [r.form.coeffs() for r in reps2[2:]] == [
        (1, 2, 2), (1, 2, 6), (1, 0, -2), (1, 0, 2), (1, 0, -10), (1, 0, 10),
    ]
    assert [r.n for r in reps2] == [3, 3, 5, 5, 6, 6, 6, 6]
    reps3 = standard_representatives(3)
    assert [r.form.coeffs() for r in reps3] == [(0, 1, 0), (1, 1, 2), (1, 0, -3), (1, 0, -6)]
    assert [r.delta for r in reps3] == [0, 0, 1, 1]
    reps7 = standard_representatives(7)
    assert reps7[1].form.coeffs() == (1, 1, 3)


def test_representative_validation_rejects_mismatches():
    with pytest.raises(ValueError):
        StandardRep(3, ALG_SPLIT, BinaryQF(1, 1, 0))
    with pytest.raises(ValueError):
        # discriminant 1 - 4*5 = -19 is 1 mod 5, a unit square
        StandardRep(5, unramified_algebra(5), BinaryQF(1, 1, 5))
    with pytest.raises(ValueError):
        # not Eisenstein: constant term 9 has valuation 2
        StandardRep(3, ramified_algebra(3, 3), BinaryQF(1, 0, 9))
    with pytest.raises(ValueError):
        # wrong ramified class: disc of (1, 0, -6) is 24, class 6 not 3
        StandardRep(3, ramified_algebra(3, 3), BinaryQF(1, 0, -6))


def test_descriptor_validation():
    with pytest.raises(ValueError):
        QuadraticAlgebraDescriptor("ramified")  # no square class
    with pytest.raises(ValueError):
        QuadraticAlgebraDescriptor("bogus")
    with pytest.raises(ValueError):
        ramified_algebra(2, 5)  # 5 is the unramified class at 2
    assert ramified_algebra(2, -1).disc_valuation == 2
    assert ramified_algebra(2, 2).disc_valuation == 3
    assert ramified_algebra(5, 10).disc_valuation == 1


FROZEN_COUNTS = [
    # (p, rep index, torus, orbit, stabilizer, group)
    (3, 2, 54, 72, 324, 23328),
    (2, 2, 512, 1536, 4096, 6291456),
    (2, 4, 2048, 6144, 32768, 201326592),
]


@pytest.mark.parametrize("p,idx,torus,orbit,stab,group", FROZEN_COUNTS)
def test_frozen_orbit_counts(p, idx, torus, orbit, stab, group):
    rep = standard_representatives(p)[idx]
    ring = rep.natural_ring()
    assert group_order(ring) == group
    assert torus_order(rep, ring) == torus
    assert orbit_size(rep, ring) == orbit
    assert stabilizer_order(rep, ring) == stab
    assert stab == 2 * p**rep.delta * torus
    assert orbit * stab == group


def test_group_order_small_levels():
    assert group_order(ResidueRing(3, 1)) == 96
    assert group_order(ResidueRing(3, 2)) == 23328
    assert group_order(ResidueRing(2, 5)) == 6291456
    # one level up multiplies by p^5
    assert group_order(ResidueRing(3, 3)) == 23328 * 3**5


def test_torus_is_multiplicative():
    # products and inverses of torus elements stay in the torus shape
    rng = random.Random(21)
    for p in (2, 3):
        for rep in standard_representatives(p):
            if not rep.is_ramified:
                continue
            ring = rep.natural_ring()
            m = ring.modulus
            got = 0
            while got < 25:
                g = torus_element(rep, ring, rng.randrange(m), rng.randrange(m))
                h = torus_element(rep, ring, rng.randrange(m), rng.randrange(m))
                if g is None or h is None:
                    continue
                got += 1
                assert torus_contains(rep, g)
                assert torus_contains(rep, g * h)
                assert torus_contains(rep, g.inverse())


def test_torus_fixes_the_form():
    rng = random.Random(22)
    for p in (2, 3, 5):
        for rep in standard_representatives(p):
            if not rep.is_ramified:
                continue
            ring = rep.natural_ring()
            m = ring.modulus
            got = 0
            while got < 15:
                g = torus_element(rep, ring, rng.randrange(m), rng.randrange(m))
                if g is None:
                    continue
                got += 1
                y = act(g, rep.form)
                assert y.coeffs() == tuple(v % m for v in rep.form.coeffs())


def test_torus_element_rejects_non_unit_norm():
    rep = standard_representatives(3)[2]
    ring = rep.natural_ring()
    # x(0, 1) = a2 = -3 has valuation 1, not a unit
    assert torus_element(rep, ring, 0, 1) is None
    assert torus_element(rep, ring, 3, 3) is None


def test_congruence_counts_all_ramified():
    for p in (2, 3, 5):
        for rep in standard_representatives(p):
            if not rep.is_ramified:
                continue
            ring = rep.natural_ring()
            assert congruence_solution_count(rep, ring) == 2 * p**rep.delta


def test_congruence_solution_set_frozen_dyadic():
    # the two branch cosets for the trace-valuation-1 representative
    rep = standard_representatives(2)[2]
    assert rep.form.coeffs() == (1, 2, 2)
    sols = congruence_solution_set(rep, rep.natural_ring())
    assert sols == {
        (0, 1), (0, 17), (16, 1), (16, 17),
        (2, 15), (2, 31), (18, 15), (18, 31),
    }


def test_congruence_characterization():
    for p in (2, 3, 5):
        for rep in standard_representatives(p):
            if not rep.is_ramified:
                continue
            cc = congruence_solution_check(rep, rep.natural_ring())
            assert cc.passed
            assert cc.disjoint
            assert sum(cc.branch_sizes) == 2 * p**rep.delta
            if rep.delta % 2 == 0:
                assert len(cc.branch_sizes) == 2
                assert cc.branch_sizes[0] == cc.branch_sizes[1]


def test_coset_normal_form():
    # every stabilizer element factors through a unique lower unipotent
    # representative over the torus; fibers all have torus size
    for p, idx in ((3, 2), (3, 3), (2, 2), (2, 3), (2, 4)):
        rep = standard_representatives(p)[idx]
        ring = rep.natural_ring()
        res = coset_normal_form_check(rep, ring)
        assert res.passed, res.detail
        assert res.coset_count == 2 * p**rep.delta
        assert res.stabilizer_size == res.coset_count * res.torus_size


def test_stabilizer_scan_matches_quotient():
    for p, idx in ((3, 2), (2, 2)):
        rep = standard_representatives(p)[idx]
        ring = rep.natural_ring()
        elems = stabilizer_elements(rep, ring)
        assert len(elems) == stabilizer_order(rep, ring)
        m = ring.modulus
        for g in elems[:: max(1, len(elems) // 40)]:
            assert act(g, rep.form).coeffs() == tuple(v % m for v in rep.form.coeffs())


def test_lift_saturation():
    for p in (2, 3):
        for rep in standard_representatives(p):
            res = lift_saturation_check(rep, rep.n + 1)
            assert res.passed
            assert res.lifts == p**3
            assert res.missing == ()


def test_lift_saturation_level_guard():
    rep = standard_representatives(3)[2]
    with pytest.raises(ValueError):
        lift_saturation_check(rep, rep.n)


def test_orbit_capacity_guard():
    with pytest.raises(CapacityError):
        orbit_size(BinaryQF(0, 1, 0), ResidueRing(2, 10))


def test_orbit_size_is_constant_on_the_orbit():
    rng = random.Random(31)
    rep = standard_representatives(3)[2]
    ring = rep.natural_ring()
    base = orbit_size(rep, ring)
    for _ in range(5):
        g = random_element(rng, ring)
        moved = act(g, rep.form)
        assert orbit_size(moved, ring) == base


def test_multiplication_matrix_determinant_is_the_form_value():
    # exhaustive on small rings, sampled beyond
    from quadmean.orbits import torus_matrix

    for p, n in ((2, 5), (2, 6), (3, 3)):
        for rep in standard_representatives(p):
            if rep.form.x0 != 1:
                continue  # the multiplication matrix needs a monic form
            ring = ResidueRing(p, n)
            m = ring.modulus
            for c in range(m):
                for d in range(m):
                    a, b, cc, dd = torus_matrix(rep, ring, c, d)
                    assert (a * dd - b * cc) % m == rep.form(c, d) % m

    rng = random.Random(37)
    for rep in standard_representatives(5):
        if rep.form.x0 != 1:
            continue
        ring = rep.natural_ring()
        m = ring.modulus
        for _ in range(300):
            c, d = rng.randrange(m), rng.randrange(m)
            a, b, cc, dd = torus_matrix(rep, ring, c, d)
            assert (a * dd - b * cc) % m == rep.form(c, d) % m


def test_orbit_stabilizer_product_from_independent_counts():
    # BFS orbit times enumerated stabilizer recovers the full group order
    for p in (2, 3):
        for rep in standard_representatives(p):
            if not rep.is_ramified:
                continue
            ring = rep.natural_ring()
            scanned = len(stabilizer_elements(rep, ring))
            assert orbit_size(rep, ring) * scanned == group_order(ring), rep.algebra


def test_stabilizer_factors_through_congruence_solutions():
    for p in (2, 3, 5):
        for rep in standard_representatives(p):
            if not rep.is_ramified:
                continue
            ring = rep.natural_ring()
            product = congruence_solution_count(rep, ring) * torus_order(rep, ring)
            assert stabilizer_order(rep, ring) == product, rep.algebra


def test_representative_discriminants_lie_in_distinct_square_classes():
    from quadmean.residue import square_class

    for p in (2, 3, 5, 7):
        reps = standard_representatives(p)
        labels = [square_class(discriminant(r.form), p).label for r in reps]
        assert len(set(labels)) == len(labels), (p, labels)
