from fractions import Fraction as F

from hypothesis import assume, given
from hypothesis import strategies as st

from slopestab.bundles import (
    BaseData,
    BundleScenario,
    SheafData,
    mu_sheaf,
    subbundle_slope_gap,
    tilde_m,
)
from slopestab.engine import (
    alphas_from_profile,
    futaki_at,
    margin_polynomial,
    mu_ideal,
    mu_quotient,
    normal_cone_weights,
    quotient_slope_from_alphas,
    verdict,
    weight_sum_oracle,
)
from slopestab.exact import PiecewisePolynomial, Polynomial, SignKind, poly_sign_on_interval, sign
from strategies import polynomials, profiles

fractions_in_unit = st.integers(1, 12).map(lambda j: F(j, 12))


def c_for(profile, t):
    return profile.seshadri.certified * t


def sgn(q):
    return (q > 0) - (q < 0)


@given(profiles(), fractions_in_unit)
def test_equivalence_chain(p, t):
    c = c_for(p, t)
    s = sgn(margin_polynomial(p)(c))
    assert sgn(mu_ideal(p, c) - p.mu) == s
    assert sgn(p.mu - mu_quotient(p, c)) == s
    assert sgn(futaki_at(p, c)) == -s
    assert normal_cone_weights(p, c).b0 < 0


@given(profiles(), fractions_in_unit)
def test_futaki_is_scaled_margin(p, t):
    c = c_for(p, t)
    assert futaki_at(p, c) == -margin_polynomial(p)(c) / p.a0(0) ** 2


@given(profiles(), fractions_in_unit)
def test_alphas_rebuild_quotient_slope(p, t):
    c = c_for(p, t)
    a1, a2 = alphas_from_profile(p)
    assert quotient_slope_from_alphas(a1, a2, c) == mu_quotient(p, c)


@given(profiles(dims=(2, 3)), st.sampled_from([F(1, 2), F(1)]))
def test_weight_oracle(p, t):
    c = c_for(p, t)
    a1, a2 = alphas_from_profile(p)
    step = c.denominator
    ks = [step * j for j in range(1, p.dim + 4)]
    assert weight_sum_oracle(a1, a2, c, ks, p.dim) == normal_cone_weights(p, c)


@given(profiles(), fractions_in_unit, st.integers(2, 4))
def test_thickening_penalty(p, t, m):
    c = c_for(p, t)
    thick = p.thicken(m)
    penalty = (m - 1) * (p.a0(c) - p.a0(0)) / (2 * p.a0.integral(0, c))
    assert penalty < 0
    assert mu_ideal(thick, c / m) == mu_ideal(p, c) + penalty


@given(profiles(), fractions_in_unit, st.fractions(min_value=F(1, 5), max_value=5, max_denominator=5))
def test_twist_invariance(p, t, r):
    c = c_for(p, t)
    tw = p.twist(r)
    assert mu_ideal(tw, c * r) == mu_ideal(p, c) / r
    assert mu_quotient(tw, c * r) == mu_quotient(p, c) / r
    assert sgn(margin_polynomial(tw)(c * r)) == sgn(margin_polynomial(p)(c))


@given(profiles(), st.sampled_from([2, 3]))
def test_twist_keeps_verdict(p, r):
    assert verdict(p.twist(r)).kind is verdict(p).kind


@st.composite
def bundle_cases(draw):
    base = BaseData.curve(draw(st.integers(0, 3)), draw(st.integers(1, 3)))
    rank = draw(st.integers(2, 4))
    E = SheafData(rank, draw(st.integers(-3, 6)), base)
    Fs = SheafData(draw(st.integers(1, rank - 1)), draw(st.integers(-3, 6)), base)
    return BundleScenario(E, (Fs,), draw(st.integers(3, 8))), Fs


@given(bundle_cases())
def test_bundle_sign_law(case):
    scn, Fs = case
    r = scn.E.rank - 1
    assume((r + 1) * tilde_m(scn.E, scn.m) > scn.E.base.muB)
    try:
        gap = subbundle_slope_gap(scn, Fs)
    except ValueError:
        assume(False)
    assert sgn(gap) == sgn(mu_sheaf(scn.E) - mu_sheaf(Fs))


GRID = [F(j, 1001) for j in range(1, 1001)]


def gap_index(summary, t):
    """Index of the root-free gap containing t, or None if t lies in an isolating interval."""
    idx = 0
    for lo, hi in summary.roots:
        if lo <= t <= hi:
            return None
        if hi < t:
            idx += 1
    return idx


@given(st.one_of(polynomials(), st.lists(fractions_in_unit, min_size=1, max_size=4)
                 .map(lambda rs: Polynomial.from_roots(rs + rs[:1]))))
def test_sign_summary_agrees_with_pointwise_signs(p):
    assume(not p.is_zero())
    summary = poly_sign_on_interval(p, 0, 1)
    for t in GRID:
        v = sign(p(t))
        if summary.kind is SignKind.STRICTLY_POSITIVE:
            assert v == 1
        elif summary.kind is SignKind.STRICTLY_NEGATIVE:
            assert v == -1
        else:
            i = gap_index(summary, t)
            if i is not None:
                assert v == summary.signs[i]


@given(polynomials(), fractions_in_unit, fractions_in_unit, fractions_in_unit)
def test_integral_additivity(p, a, b, c):
    a, b, c = sorted((a, b, c))
    assert p.integral(a, b) + p.integral(b, c) == p.integral(a, c)


@given(polynomials(), polynomials(), fractions_in_unit, fractions_in_unit)
def test_piecewise_integral_additivity(p, q, a, b):
    a, b = sorted((a, b))
    pw = PiecewisePolynomial([0, F(1, 2), 1], [p, q])
    assert pw.integral(0, a) + pw.integral(a, b) + pw.integral(b, 1) == pw.integral(0, 1)
    assert pw.cumulative()(b) == pw.integral(0, b)
