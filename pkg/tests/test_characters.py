import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from g2lab.characters import (DominantWeight, LaurentPoly2, chi_fund_eval, chi_fund_laurent, chi_fusion_laurent,
                              chi_general, chi_weyl_laurent, dimension_of, evaluate_fundamental_polynomial,
                              fundamental_polynomial, fuse_with_fundamental)
from g2lab.weyl_torus import TorusPoint, d12_elements

thetas = st.tuples(st.floats(0, 1), st.floats(0, 1))
weights = st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda t: t[0] >= t[1]).map(lambda t: DominantWeight(*t))


def test_fundamental_laurent_coefficients():
    s1, s2 = chi_fund_laurent(1), chi_fund_laurent(2)
    assert (s1.constant_term(), s1.coefficient_sum(), len(s1)) == (1, 7, 7)
    assert (s2.constant_term(), s2.coefficient_sum(), len(s2)) == (2, 14, 13)
    for poly in (s1, s2):
        assert all(poly[(-a, -b)] == c for (a, b), c in poly.coeffs.items())


def test_laurent_algebra():
    p = LaurentPoly2({(1, 0): 1, (0, 1): 2})
    assert (p - p).coeffs == {}
    assert (p * p).bound == 2 * p.bound
    assert (p ** 0) == LaurentPoly2.one()
    assert 0 not in (p + p.scale(-1) + LaurentPoly2.monomial(2, 2)).coeffs.values()


def test_fundamental_values_at_special_points():
    assert chi_fund_eval(1, TorusPoint.of(0, 0)) == pytest.approx(7)
    assert chi_fund_eval(2, TorusPoint.of(0, 0)) == pytest.approx(14)
    p = TorusPoint.of("1/3", "2/3")
    assert chi_fund_eval(1, p) == pytest.approx(-2)
    # the second character is 5 here, not -2: (-2, 5) is the only image point with x = -2
    assert chi_fund_eval(2, p) == pytest.approx(5)


@given(thetas)
def test_eval_matches_laurent(th):
    for j in (1, 2):
        assert chi_fund_laurent(j).evaluate(np.array(th)).real == pytest.approx(chi_fund_eval(j, th), abs=1e-12)


@given(thetas, st.sampled_from(d12_elements()))
def test_characters_are_d12_invariant(th, g):
    gth = g.act_float(np.array(th))
    for j in (1, 2):
        assert chi_fund_eval(j, gth) == pytest.approx(chi_fund_eval(j, th), abs=1e-11)


def test_chi_general_examples():
    assert chi_general(DominantWeight(0, 0), (0.3, 0.1)) == pytest.approx(1)
    th = (0.137, 0.871)
    assert chi_general(DominantWeight(1, 0), th) == pytest.approx(chi_fund_eval(1, th), abs=1e-10)
    # limit evaluation on the singular set gives the dimension
    assert chi_general(DominantWeight(1, 1), (0.0, 0.0)) == pytest.approx(14, abs=1e-6)
    assert chi_general(DominantWeight(2, 0), (0.0, 0.0)) == pytest.approx(27, abs=1e-6)


def test_weyl_and_fusion_characters_agree():
    for a in range(5):
        for b in range(a + 1):
            w = DominantWeight(a, b)
            assert chi_weyl_laurent(w) == chi_fusion_laurent(w)
            assert chi_weyl_laurent(w).coefficient_sum() == w.dimension()


def test_dimensions():
    dims = {(1, 0): 7, (1, 1): 14, (2, 0): 27, (2, 1): 64, (2, 2): 77, (3, 0): 77}
    for (a, b), d in dims.items():
        assert DominantWeight(a, b).dimension() == d


def test_fusion_rules():
    D = DominantWeight
    assert fuse_with_fundamental(1, D(0, 0)) == [D(1, 0)]
    assert sorted(fuse_with_fundamental(1, D(1, 0))) == sorted([D(1, 0), D(2, 0), D(0, 0), D(1, 1)])
    assert dimension_of(fuse_with_fundamental(1, D(1, 0))) == 49
    assert sorted(fuse_with_fundamental(1, D(1, 1))) == sorted([D(2, 1), D(1, 0), D(2, 0)])
    assert dimension_of(fuse_with_fundamental(1, D(1, 1))) == 98


@settings(max_examples=30)
@given(weights, st.sampled_from([1, 2]))
def test_fusion_dimension_is_multiplicative(w, j):
    d = 7 if j == 1 else 14
    assert dimension_of(fuse_with_fundamental(j, w)) == d * w.dimension()


@settings(max_examples=20)
@given(weights)
def test_fusion_matches_character_product(w):
    prod = chi_fund_laurent(1) * chi_weyl_laurent(w)
    total = LaurentPoly2()
    for t in fuse_with_fundamental(1, w):
        total = total + chi_weyl_laurent(t)
    assert total == prod


@settings(max_examples=15)
@given(weights, thetas)
def test_fundamental_polynomial_reproduces_character(w, th):
    coeffs = fundamental_polynomial(w)
    val = evaluate_fundamental_polynomial(coeffs, np.array(th))
    assert val == pytest.approx(chi_weyl_laurent(w).evaluate(np.array(th)).real, abs=1e-8)


def test_bad_index():
    with pytest.raises(ValueError):
        chi_fund_laurent(3)
    with pytest.raises(ValueError):
        DominantWeight(0, 1)
