from fractions import Fraction as F

import pytest

from slopestab import catalog
from slopestab.bundles import (
    AmplenessWarning,
    BaseData,
    BundleScenario,
    SheafData,
    Subsheaf,
    bundle_verdict,
    degree_Lm,
    mu_sheaf,
    projbundle_a0a1,
    projbundle_chi_oracle,
    slope_identities,
    subbundle_alphas,
    subbundle_profile,
    subbundle_slope_gap,
    tilde_m,
)
from slopestab.engine import (
    VerdictKind,
    alphas_from_profile,
    futaki_at,
    mu_quotient,
    normal_cone_weights,
    weight_sum_oracle,
)

ELLIPTIC = BaseData.curve(1, 1)


class TestSheaves:
    def test_base(self):
        b = BaseData.curve(2, 3)
        assert b.muB == F(-1, 3)
        with pytest.raises(ValueError):
            BaseData(1, 1, 5, genus=0)

    def test_mu(self):
        E = catalog.elliptic_bundle().E
        assert mu_sheaf(E) == F(1, 2)

    def test_identities(self):
        base = BaseData.curve(2, 2)
        E, Fs = SheafData(3, 5, base), SheafData(1, -1, base)
        rec = slope_identities(E, Fs, 4)
        assert rec.mu_sym_dual == 5 * base.muB - 4 * mu_sheaf(E)
        assert rec.mu_quotient == mu_sheaf(SheafData(2, 6, base))

    def test_tilde_m(self):
        E = catalog.elliptic_bundle().E
        assert tilde_m(E, 2) == F(3, 2)
        with pytest.warns(AmplenessWarning):
            tilde_m(E, 0)

    def test_scenario_validation(self):
        E = SheafData(2, 0, ELLIPTIC)
        with pytest.raises(ValueError):
            BundleScenario(E, (SheafData(2, 0, ELLIPTIC),), 1)
        with pytest.raises(ValueError):
            BundleScenario(E, (SheafData(1, 0, BaseData.curve(0, 1)),), 1)

    def test_higher_dimensional_base_rejected(self):
        base = BaseData(2, F(1, 2), 3)
        with pytest.raises(ValueError):
            projbundle_a0a1(SheafData(2, 0, base), 1)


class TestProjectiveBundle:
    @pytest.mark.parametrize("g, degB, rank, deg, m", [(1, 1, 2, 1, 2), (0, 1, 3, 2, 1),
                                                       (2, 3, 2, -1, 4), (3, 2, 4, 7, 5)])
    def test_chi_oracle(self, g, degB, rank, deg, m):
        E = SheafData(rank, deg, BaseData.curve(g, degB))
        assert projbundle_a0a1(E, m) == projbundle_chi_oracle(E, m)

    def test_degree(self):
        E = SheafData(3, 2, BaseData.curve(2, 2))
        a0, _ = projbundle_a0a1(E, 3)
        assert degree_Lm(E, 3) == a0 * 6


class TestSubbundles:
    def test_elliptic_gap(self):
        scn = catalog.elliptic_bundle()
        assert subbundle_slope_gap(scn, scn.subsheaves[0].sheaf) == F(-1, 4)

    @pytest.mark.parametrize("r, s", [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)])
    def test_gap_matches_profile(self, r, s):
        E = SheafData(r, 1, ELLIPTIC)
        Fs = SheafData(s, 2, ELLIPTIC)
        scn = BundleScenario(E, (Fs,), 3)
        p = subbundle_profile(scn, Fs)
        assert subbundle_slope_gap(scn, Fs) == mu_quotient(p, 1) - p.mu

    @pytest.mark.parametrize("r, s", [(2, 1), (3, 1), (3, 2), (4, 2)])
    def test_weight_oracle(self, r, s):
        E = SheafData(r, 0, ELLIPTIC)
        Fs = SheafData(s, 1, ELLIPTIC)
        scn = BundleScenario(E, (Fs,), 2)
        p = subbundle_profile(scn, Fs)
        a1, a2 = alphas_from_profile(p)
        assert (a1, a2) == subbundle_alphas(scn, Fs)
        ks = range(1, p.dim + 5)
        assert weight_sum_oracle(a1, a2, 1, ks, p.dim) == normal_cone_weights(p, 1)

    def test_profile_total_volume(self):
        scn = catalog.elliptic_bundle()
        p = subbundle_profile(scn, scn.subsheaves[0].sheaf)
        a0, a1 = projbundle_a0a1(scn.E, scn.m)
        assert (p.a0(0), p.a1(0)) == (a0, a1)
        assert p.seshadri.certified == 1


class TestVerdict:
    def test_elliptic_unstable(self):
        res = bundle_verdict(catalog.elliptic_bundle())
        assert res.aggregate.kind is VerdictKind.STRICTLY_UNSTABLE
        assert res.per_subsheaf[0].gap < 0

    def test_equal_slopes(self):
        E = SheafData(2, 0, ELLIPTIC)
        Fs = SheafData(1, 0, ELLIPTIC)
        scn = BundleScenario(E, (Subsheaf(Fs, True),), 2)
        res = bundle_verdict(scn)
        assert res.aggregate.kind is VerdictKind.SEMISTABLE_ONLY
        assert res.aggregate.equality_at == 1
        assert "polystable-consistent" in res.per_subsheaf[0].note
        assert futaki_at(subbundle_profile(scn, Fs), 1) == 0

    def test_non_split_equality_flagged(self):
        E = SheafData(2, 0, ELLIPTIC)
        scn = BundleScenario(E, (Subsheaf(SheafData(1, 0, ELLIPTIC), False),), 2)
        assert "not polystable" in bundle_verdict(scn).per_subsheaf[0].note

    def test_stable_subsheaf(self):
        E = SheafData(2, 1, ELLIPTIC)
        scn = BundleScenario(E, (SheafData(1, 0, ELLIPTIC),), 2)
        assert bundle_verdict(scn).aggregate.kind is VerdictKind.STABLE_AGAINST

    def test_worst_case_aggregate(self):
        E = SheafData(3, 3, ELLIPTIC)
        subs = (SheafData(1, 0, ELLIPTIC), SheafData(2, 3, ELLIPTIC))
        res = bundle_verdict(BundleScenario(E, subs, 3))
        kinds = [r.verdict.kind for r in res.per_subsheaf]
        assert kinds == [VerdictKind.STABLE_AGAINST, VerdictKind.STRICTLY_UNSTABLE]
        assert res.aggregate.kind is VerdictKind.STRICTLY_UNSTABLE

    def test_empty(self):
        res = bundle_verdict(BundleScenario(SheafData(2, 0, ELLIPTIC), (), 1))
        assert res.aggregate.kind is VerdictKind.INCONCLUSIVE
