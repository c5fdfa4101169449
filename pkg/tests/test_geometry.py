import warnings
from fractions import Fraction as F

import pytest

from slopestab import catalog
from slopestab.engine import (
    Seshadri,
    VerdictKind,
    margin_polynomial,
    mu_ideal,
    mu_quotient,
    verdict,
)
from slopestab.exact import Polynomial
from slopestab.geometry import (
    CurveInNfoldData,
    DataConsistencyWarning,
    DivisorData,
    SurfaceCurveData,
    blowup_repolarize,
    curve_in_nfold_alphas,
    curve_in_nfold_quotient_slope,
    divisor_hilbert,
    divisor_profile,
    divisor_quotient_slope,
    nef_limit_test,
    nef_limit_test_divisor,
    smooth_curve_profile,
    smooth_curve_verdict,
    surface_curve,
    surface_profile,
)
from slopestab.engine import quotient_slope_from_alphas

x = Polynomial.x()


class TestSurfaceCurves:
    @pytest.mark.parametrize("q", [F(1, 10), F(1, 3), F(1, 2), F(3, 4), F(9, 10)])
    def test_blp2_closed_forms(self, q):
        mu_x, mu_q = surface_curve(catalog.blp2_exceptional_data(q), 1 - q)
        assert mu_x == (3 - q) / (1 - q * q)
        assert mu_q == 3 / ((1 - q) * (2 * q + 1))
        assert mu_q < mu_x

    def test_profile_agrees_with_formula(self):
        d = catalog.blp2_exceptional_data(F(1, 3))
        p = surface_profile(d)
        for c in (F(1, 7), F(1, 3), F(2, 3)):
            mu_x, mu_q = surface_curve(d, c)
            assert p.mu == mu_x
            assert mu_quotient(p, c) == mu_q

    def test_rational_curve_form(self):
        d = catalog.minus_two_curve_data(F(9, 10))
        c = F(2, 5)
        assert surface_curve(d, c)[1] == 3 * (d.LZ + c) / (c * (3 * d.LZ - c * d.Z2))

    def test_minus_two(self):
        mu_x, mu_q = surface_curve(catalog.minus_two_curve_data(F(9, 10)), F(2, 5))
        assert (mu_x, mu_q) == (F(210, 59), F(75, 22))

    def test_adjunction_warning(self):
        with pytest.warns(DataConsistencyWarning):
            d = SurfaceCurveData(KL=-3, L2=1, LZ=1, KZ=-3, Z2=1, genus=2, epsilon=Seshadri.exact(1))
        assert not d.adjunction_holds

    def test_adjunction_ok_is_silent(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            d = SurfaceCurveData(KL=-3, L2=1, LZ=1, KZ=-3, Z2=1, genus=0, epsilon=Seshadri.exact(1))
        assert d.adjunction_holds

    def test_rejects_c_beyond_epsilon(self):
        with pytest.raises(ValueError):
            surface_curve(catalog.blp2_exceptional_data(F(1, 2)), F(3, 4))

    def test_line_in_p2(self):
        # a line in P^2: quotient slope at c = 1 equals mu(P^2) = 3
        d = SurfaceCurveData(KL=-3, L2=1, LZ=1, KZ=-3, Z2=1, genus=0, epsilon=Seshadri.exact(1))
        assert surface_curve(d, 1) == (3, 3)


class TestDivisors:
    def test_blp2_divisor_formula(self):
        d = catalog.blp2_exceptional_data(F(1, 2)).as_divisor()
        assert divisor_quotient_slope(d, F(1, 2)) == 3

    def test_rejects_curves(self):
        with pytest.raises(ValueError):
            divisor_quotient_slope(DivisorData(1, (2, 1), (0,), Seshadri.exact(1)), F(1, 2))

    def test_validation(self):
        with pytest.raises(ValueError):
            DivisorData(2, (1, 1), (-3, -3))
        with pytest.raises(ValueError):
            DivisorData(2, (0, 1, 1), (-3, -3))

    def test_plane_in_p3(self):
        d = DivisorData(3, (1, 1, 1, 1), (-3, -3, -3), Seshadri.exact(1), True)
        a0, a1 = divisor_hilbert(3, d.LnjZj, d.LZK)
        assert a0 == (1 - x) ** 3 / 6
        assert a1 == (1 - x) ** 2
        p = divisor_profile(d)
        assert p.mu == 6
        for c in (F(1, 3), F(1, 2), 1):
            assert divisor_quotient_slope(d, c) == mu_quotient(p, c)
        assert verdict(p).kind is VerdictKind.SEMISTABLE_ONLY

    def test_hilbert_without_positivity(self):
        a0, _ = divisor_hilbert(2, (0, 1, -1), (-1, -2))
        assert a0(0) == 0


class TestCurvesInNfolds:
    def test_line_in_p3(self):
        d = CurveInNfoldData(3, 0, 1, 2, Seshadri.exact(1))
        a1, a2 = curve_in_nfold_alphas(d)
        for c in (F(1, 3), F(1, 2), 1):
            assert curve_in_nfold_quotient_slope(d, c) == quotient_slope_from_alphas(a1, a2, c)
        assert curve_in_nfold_quotient_slope(d, 1) == 6

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_formula_matches_alphas(self, n):
        d = CurveInNfoldData(n, 2, F(7, 2), F(3, 4), Seshadri.exact(F(1, 2)))
        a1, a2 = curve_in_nfold_alphas(d)
        for c in (F(1, 9), F(1, 4), F(1, 2)):
            assert curve_in_nfold_quotient_slope(d, c) == quotient_slope_from_alphas(a1, a2, c)

    def test_rejects_degenerate(self):
        d = CurveInNfoldData(2, 0, 1, 10, Seshadri.exact(1))
        with pytest.raises(ValueError):
            curve_in_nfold_quotient_slope(d, 1)

    def test_small_c_leading_term(self):
        d = CurveInNfoldData(3, 1, 2, 1, Seshadri.exact(1))
        c = F(1, 10 ** 6)
        assert curve_in_nfold_quotient_slope(d, c) * c * 2 * 3 * 4 * 2 == pytest.approx(
            9 * 8 * 2, rel=1e-5)

    def test_validation(self):
        with pytest.raises(ValueError):
            CurveInNfoldData(1, 0, 1, 0)
        with pytest.raises(ValueError):
            CurveInNfoldData(2, 0, 0, 0)


class TestSmoothCurves:
    def test_profile(self):
        p = smooth_curve_profile(2, 2, 1)
        assert p.mu == F(-1, 2)
        assert p.seshadri.certified == 2
        assert p.saturates_at_epsilon is None
        assert smooth_curve_profile(0, 1, 1).saturates_at_epsilon is True

    def test_examples(self):
        assert smooth_curve_verdict(1, 1, 1).kind is VerdictKind.STABLE_AGAINST
        v = smooth_curve_verdict(0, 1, 1)
        assert v.describe() == "SemistableOnly(boundary_equality_at=1)"
        v = smooth_curve_verdict(0, 2, 1)
        assert v.equality_at == 2
        assert mu_quotient(smooth_curve_profile(0, 2, 1), 2) == F(1, 2)

    def test_rational_fat_points_stable(self):
        for d in (2, 3):
            assert smooth_curve_verdict(0, 3, d).kind is VerdictKind.STABLE_AGAINST

    def test_quotient_slope_is_one_over_c(self):
        p = smooth_curve_profile(3, 5, 2)
        for c in (F(1, 2), 2, F(5, 2)):
            assert mu_quotient(p, c) == 1 / c

    def test_validation(self):
        for args in ((-1, 1, 1), (0, 0, 1), (0, 1, 0)):
            with pytest.raises(ValueError):
                smooth_curve_profile(*args)


class TestBlowups:
    def test_identity(self):
        p = catalog.pn_point(2)
        assert blowup_repolarize(p, 0) is p

    def test_point_in_p2(self):
        p = blowup_repolarize(catalog.pn_point(2), F(1, 2))
        assert p.a0 == (1 - (x + F(1, 2)) ** 2) / 2
        assert p.seshadri.certified == F(1, 2)

    def test_rejects_large_d(self):
        with pytest.raises(ValueError):
            blowup_repolarize(catalog.pn_point(2), 1)

    def test_slope_formula(self):
        p, d, c = catalog.pn_point(2), F(1, 4), F(3, 4)
        q = blowup_repolarize(p, d)
        num = (p.a1 + p.a0.derivative() / 2).integral(d, c)
        assert mu_ideal(q, c - d) == num / p.a0.integral(d, c)

    def test_instability_persists_for_small_d(self):
        p = catalog.blp2_exceptional(F(1, 2))
        lo, hi = verdict(p).witness
        w = (lo + hi) / 2
        for d in (F(1, 100), F(1, 1000)):
            q = blowup_repolarize(p, d)
            assert margin_polynomial(q)(w - d) != 0
            assert verdict(q).kind is VerdictKind.STRICTLY_UNSTABLE

    def test_piecewise_profile(self):
        prof = catalog.shipped_profiles()["toric:p1xp1_point"]
        q = blowup_repolarize(prof, F(1, 2))
        assert q.a0(0) == prof.a0(F(1, 2))
        assert q.a0.start == 0


class TestNefLimit:
    # F = H - q E1 on the blow-up of P^2 at two points; Z = E1.
    def data(self, q):
        return 2, (1 - q * q, q, -1), (-3 + 2 * q, -2)

    def test_boundary_class_destabilises(self):
        q = F(1, 2)
        assert nef_limit_test_divisor(*self.data(q), 1 - q)

    def test_small_c_does_not(self):
        assert not nef_limit_test_divisor(*self.data(F(1, 2)), F(1, 4))

    def test_zero_data(self):
        assert not nef_limit_test(2, Polynomial(), Polynomial(), F(1, 2))

    def test_rejects_nonpositive_c(self):
        with pytest.raises(ValueError):
            nef_limit_test_divisor(*self.data(F(1, 2)), 0)
