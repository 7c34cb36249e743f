from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conifold.errors import CompletenessError, DomainError, ExceptionalWeightError
from conifold.spectra import explicit_spectrum, flat_torus_spectrum, harvey_lawson_gram, sphere_spectrum
from conifold.surd import QuadSurd
from conifold.weights import (
    exceptional_at,
    exceptional_in_interval,
    exceptional_set,
    gammas_from_eigenvalue,
    is_nonexceptional,
    nearest_exceptional,
    require_nonexceptional,
    required_cutoff,
)

HL = flat_torus_spectrum(harvey_lawson_gram(3), 100)
S2 = sphere_spectrum(3, 40)


def listing(ws):
    return [(w.gamma, w.multiplicity) for w in ws]


@pytest.mark.parametrize("e,expected", [(0, (0, -1)), (2, (1, -2)), (6, (2, -3))])
def test_gammas_examples(e, expected):
    assert gammas_from_eigenvalue(e, 3) == expected


def test_gammas_negative_rejected():
    with pytest.raises(DomainError):
        gammas_from_eigenvalue(-1, 3)
    with pytest.raises(DomainError):
        gammas_from_eigenvalue(1, 2)


@given(st.fractions(0, 100, max_denominator=20), st.integers(3, 8))
@settings(max_examples=200, deadline=None)
def test_root_identity_and_symmetry(e, m):
    gp, gm = gammas_from_eigenvalue(e, m)
    for g in (gp, gm):
        assert g * g + g * (m - 2) - e == 0
    assert gp + gm == 2 - m
    assert gp * gm == -e
    assert gp >= 0 >= 2 - m >= gm


def test_numeric_roots_to_1e12():
    gp, gm = gammas_from_eigenvalue(1.7320508, 4)
    assert abs(gp * (gp + 2) - 1.7320508) < 1e-12
    assert abs(gm * (gm + 2) - 1.7320508) < 1e-12


def test_interval_examples():
    assert listing(exceptional_in_interval(sphere_spectrum(3, 12), 3, 0, 2)) == [(0, 1), (1, 3), (2, 5)]
    assert listing(exceptional_in_interval(HL, 3, 0, 2)) == [(0, 1), (1, 6), (2, 6)]
    assert exceptional_in_interval(S2, 3, Fraction(-1, 2), Fraction(-1, 10)) == []


def test_interval_completeness_error_names_cutoff():
    with pytest.raises(CompletenessError) as err:
        exceptional_in_interval(sphere_spectrum(3, 5), 3, 0, 2)
    assert err.value.required_cutoff == 6


def test_lower_branch_included():
    ws = exceptional_in_interval(S2, 3, -4, 0)
    assert listing(ws) == [(-4, 7), (-3, 5), (-2, 3), (-1, 1), (0, 1)]


@given(st.integers(3, 6), st.fractions(Fraction(1, 100), Fraction(99, 100), max_denominator=100))
@settings(max_examples=100, deadline=None)
def test_gap_property(m, t):
    delta = t * Fraction(m - 2, 2)
    for spec in (sphere_spectrum(m, 40), flat_torus_spectrum(harvey_lawson_gram(m), 12)):
        assert exceptional_in_interval(spec, m, 2 - m + delta, -delta) == []


@given(
    st.fractions(-3, 3, max_denominator=4),
    st.fractions(0, 2, max_denominator=4),
    st.fractions(0, 2, max_denominator=4),
)
@settings(max_examples=100, deadline=None)
def test_scans_concatenate(a, w1, w2):
    b, c = a + w1, a + w1 + w2
    left = listing(exceptional_in_interval(HL, 3, a, b))
    right = listing(exceptional_in_interval(HL, 3, b, c))
    whole = listing(exceptional_in_interval(HL, 3, a, c))
    # a weight at b shows up in both halves
    doubled = [x for x in left if x[0] == b]
    assert sorted(left + right, key=lambda x: float(x[0])) == sorted(whole + doubled, key=lambda x: float(x[0]))
    gammas = [g for g, _ in whole]
    assert all(x < y for x, y in zip(gammas, gammas[1:]))


def test_nonexceptional_examples():
    assert is_nonexceptional([Fraction(-1, 2)], [(S2, 3)])
    v = is_nonexceptional([1], [(S2, 3)])
    assert not v and v.end_index == 0 and v.witness.gamma == 1 and v.witness.multiplicity == 3
    assert is_nonexceptional([0.5, 1.7], [(HL, 3), (HL, 3)])
    v = is_nonexceptional([0.5, (QuadSurd.sqrt(33) - 1) * Fraction(1, 2)], [(HL, 3), (HL, 3)])
    assert not v and v.end_index == 1 and v.witness.multiplicity == 6


def test_require_nonexceptional_details():
    with pytest.raises(ExceptionalWeightError) as err:
        require_nonexceptional([0.5, 2], [(HL, 3), (HL, 3)])
    d = err.value.details()
    assert d["end"] == 1 and d["gamma"] == 2 and d["required_cutoff"] == 6


def test_numeric_spectrum_match_is_flagged_approximate():
    spec = explicit_spectrum([(0, 1), (2.0000001, 3)], 2, 3.0, exact=False)
    v = is_nonexceptional([1], [(spec, 3)])
    assert not v and v.approximate
    assert is_nonexceptional([1], [(spec, 3)], match_tol=1e-9)


def test_nearest_examples():
    d = nearest_exceptional([Fraction(11, 5)], [(HL, 3)], 1)[0]
    # e = 8 gives (-1 + sqrt(33))/2 ~ 2.3723, closer than gamma = 2
    assert d == QuadSurd(Fraction(-27, 10), Fraction(1, 2), 33)
    assert abs(float(d) - 0.17228) < 1e-4
    assert nearest_exceptional([0], [(S2, 3)], Fraction(1, 2)) == [0]
    assert nearest_exceptional([Fraction(-1, 2)], [(S2, 3)], Fraction(2, 5)) == [None]


def test_exceptional_set_multiplicity():
    ex = exceptional_set([(HL, 3), (S2, 3)], 0, 2)
    assert ex.multiplicity([1, 1]) == 9
    assert ex.total() == 13 + 9


def test_required_cutoff_convexity():
    assert required_cutoff(-3, 1, 3) == 6
    assert required_cutoff(Fraction(-1, 2), Fraction(-1, 4), 3) == 0
    assert exceptional_at(HL, 3, 1).multiplicity == 6
