from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from g2lab.weyl_torus import (IDENTITY, TorusPoint, WeylElement, d12_elements, fundamental_representative,
                              in_fundamental_domain, orbit, s3_elements)

T6 = WeylElement(0, 1, -1, 1)

rationals = st.fractions(min_value=0, max_value=1, max_denominator=60)
points = st.builds(TorusPoint.of, rationals, rationals)


def test_torus_point_is_canonical_mod_1():
    assert TorusPoint.of("4/21", "20/21") == TorusPoint.of(Fraction(25, 21), Fraction(-1, 21))
    p = TorusPoint(2, 4, 8)
    assert (p.num1, p.num2, p.den) == (1, 2, 4)
    assert TorusPoint.of("1/2", "1/3").den == 6


def test_torus_point_rejects_bad_denominator():
    with pytest.raises(ValueError):
        TorusPoint(1, 1, 0)


def test_d12_group_axioms():
    d12 = d12_elements()
    assert len(set(d12)) == 12
    assert IDENTITY in d12
    assert all(g.det in (1, -1) for g in d12)
    closure = {g @ h for g in d12 for h in d12}
    assert closure == set(d12)


def test_t6_has_order_six():
    g = IDENTITY
    powers = []
    for _ in range(6):
        g = g @ T6
        powers.append(g)
    assert powers[-1] == IDENTITY
    assert IDENTITY not in powers[:-1]


def test_s3_subgroup():
    s3 = s3_elements()
    assert len(set(s3)) == 6
    assert set(s3) <= set(d12_elements())
    r = -T6
    assert r @ r @ r == IDENTITY


def test_orbit_sizes():
    assert orbit(TorusPoint.of(0, 0)) == {TorusPoint.of(0, 0)}
    assert len(orbit(TorusPoint.of("1/3", "2/3"))) == 2
    assert len(orbit(TorusPoint.of("4/21", "20/21"))) == 12
    # (1/3, 2/3) is fixed by S3 but not by D12
    assert orbit(TorusPoint.of("1/3", "2/3"), s3_elements()) == {TorusPoint.of("1/3", "2/3")}


def test_fundamental_domain_examples():
    assert in_fundamental_domain(TorusPoint.of("4/21", "20/21"))
    assert in_fundamental_domain(TorusPoint.of(0, 0))
    assert not in_fundamental_domain(TorusPoint.of(0, 0), strict=True)
    assert not in_fundamental_domain(TorusPoint.of("1/2", "1/4"))


@given(points)
def test_every_orbit_meets_the_domain(p):
    reps = fundamental_representative(p)
    assert reps
    assert all(q in orbit(p) for q in reps)


@given(points)
def test_interior_points_have_one_representative_and_free_orbit(p):
    reps = fundamental_representative(p, strict=True)
    assert len(reps) <= 1
    if reps:
        assert len(orbit(p)) == 12
        assert fundamental_representative(p) == reps


@given(points, st.sampled_from(d12_elements()))
def test_orbit_is_group_invariant(p, g):
    assert orbit(g(p)) == orbit(p)


def test_act_float_matches_exact_action():
    p = TorusPoint.of("2/7", "3/7")
    for g in d12_elements():
        x = g.act_float(p.as_float()) % 1.0
        assert x == pytest.approx(g(p).as_float() % 1.0, abs=1e-15)
