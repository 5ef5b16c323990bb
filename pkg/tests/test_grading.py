import itertools

import pytest
from hypothesis import given, strategies as st

from binforms import reference_values as ref
from binforms.grading import (MultiDegree, PoincareSeries, SeriesInconsistencyError, degree_bound,
                              functional_equation_check, invariant_dimension,
                              multidegrees_of_total, poincare_coeffs, poincare_series,
                              series_expand, series_numerator, weight_count)
from binforms.polys import VAR_WEIGHT

HSOP = (3, 4, 4, 5, 5, 6, 6, 7)
_SLOTS = ((0, 2), (2, 6), (6, 11))


def enumerate_weights(d):
    """Weights of every monomial of multidegree d, by brute force."""
    per_slot = []
    for (lo, hi), k in zip(_SLOTS, d):
        per_slot.append([sum(VAR_WEIGHT[i] for i in combo)
                         for combo in itertools.combinations_with_replacement(range(lo, hi), k)])
    return [sum(ws) for ws in itertools.product(*per_slot)]


def brute_count(d, w):
    return enumerate_weights(d).count(w)


def test_quadratic_quartic_counts():
    assert weight_count((0, 0, 2), 0) == 3
    assert weight_count((0, 0, 2), 2) == 2
    assert len(enumerate_weights((0, 0, 2))) == 15
    assert weight_count((0, 0, 0), 0) == 1


multideg = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))


@given(multideg, st.integers(-12, 12))
def test_weight_count_matches_enumeration(d, w):
    assert weight_count(d, w) == brute_count(d, w)


@given(multideg, st.integers(-30, 30))
def test_weight_symmetry(d, w):
    assert weight_count(d, w) == weight_count(d, -w)


@given(st.tuples(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8)))
def test_odd_top_weight_gives_zero(d):
    if (d[0] + 3 * d[1] + 4 * d[2]) % 2:
        assert invariant_dimension(d) == 0
        assert weight_count(d, 0) == 0
    assert invariant_dimension(d) >= 0


def test_dimensions():
    assert invariant_dimension((2, 4, 3)) == 8
    assert invariant_dimension((1, 5, 4)) == 12
    assert invariant_dimension((0, 0, 1)) == 0
    assert invariant_dimension((0, 0, 2)) == 1


def test_multidegree_helpers():
    d = MultiDegree(2, 4, 3)
    assert d.total == 9 and d.admissible()
    assert not MultiDegree(1, 0, 0).admissible()
    assert d - MultiDegree(1, 1, 1) == (1, 3, 2)
    assert MultiDegree(1, 1, 1) <= d and not d <= MultiDegree(1, 1, 1)
    assert all(m.total == 5 and m.admissible() for m in multidegrees_of_total(5))


def test_poincare_coefficients_through_30():
    coeffs = poincare_coeffs(30)
    assert tuple(coeffs) == ref.POINCARE_COEFFS
    assert coeffs[7] == 31 and coeffs[29] == 39614
    assert coeffs[:2] == [1, 0]


def test_poincare_from_per_multidegree_sums_matches_rational_form():
    # independent path: expand the published numerator over the hsop denominators
    assert series_expand(ref.NUMERATOR, HSOP, 30) == poincare_coeffs(30)


def test_numerator():
    num = series_numerator(poincare_coeffs(45), HSOP)
    assert tuple(num) == ref.NUMERATOR
    assert num[14] == 94 and num[29] == 1 and len(num) == 30


def test_trivial_numerator():
    assert series_numerator([1] * 10, [1]) == [1]


def test_wrong_denominators_inconsistent():
    with pytest.raises(SeriesInconsistencyError):
        series_numerator(poincare_coeffs(45), (2, 2, 2, 2, 2, 2, 2, 2))


def test_numerator_needs_enough_terms():
    with pytest.raises(ValueError):
        series_numerator(poincare_coeffs(30), HSOP)


def test_functional_equation():
    res = functional_equation_check(ref.NUMERATOR, HSOP, 11)
    assert res.holds and res.failing_index is None
    assert len(res.checked) == 30


def test_functional_equation_perturbed():
    bad = list(ref.NUMERATOR)
    bad[0] = 2
    res = functional_equation_check(bad, HSOP, 11)
    assert not res.holds and res.failing_index == 0


def test_functional_equation_palindrome_property():
    a = ref.NUMERATOR
    assert all(a[k] == a[29 - k] for k in range(30))


def test_degree_bound():
    assert degree_bound(HSOP, 11) == 29
    assert degree_bound((7,), 7) == 0
    assert degree_bound(HSOP, 10) == 30
    with pytest.raises(ValueError):
        degree_bound((), 11)


def test_poincare_series_dataclass():
    s = poincare_series(30, HSOP)
    assert s.coeffs == ref.POINCARE_COEFFS and s.numerator == ref.NUMERATOR
    with pytest.raises(SeriesInconsistencyError):
        PoincareSeries((1, 0, 2), (1,), (2,))
    with pytest.raises(ValueError):
        PoincareSeries((1, -1), (1, -1), ())
