from fractions import Fraction as F

import pytest

from slopestab import catalog
from slopestab.engine import (
    VerdictKind,
    futaki,
    futaki_at,
    mu_ideal,
    mu_quotient,
    normal_cone_weights,
    verdict,
)
from slopestab.exact import Polynomial
from slopestab.toric import (
    Polytope,
    ToricSubscheme,
    breakpoints,
    convex_hull,
    destabilizer_scan,
    donaldson_to_normal_cone,
    donaldson_weights,
    ehrhart_fit,
    lattice_count,
    lattice_length,
    primitive,
    scan_candidates,
    slice,
    toric_profile,
    toric_seshadri,
    toric_surface_seshadri,
)

x = Polynomial.x()


class TestPolytopes:
    def test_primitive(self):
        assert primitive((F(2), F(4))) == ((1, 2), F(1, 2))
        assert primitive((F(1, 2), F(3, 4))) == ((2, 3), F(4))

    def test_lattice_length(self):
        assert lattice_length((0, 0), (2, 2)) == 2
        assert lattice_length((0, 0), (F(1, 2), 0)) == F(1, 2)

    def test_hull_drops_interior(self):
        hull = convex_hull([(0, 0), (2, 0), (0, 2), (F(1, 2), F(1, 2)), (1, 0)])
        assert len(hull) == 3

    def test_from_halfspaces_matches_vertices(self):
        P = catalog.blp2_polytope(F(1, 2))
        Q = Polytope.from_vertices(P.vertices)
        assert P.area() == Q.area() == F(3, 8)
        assert {h.normal for h in P.halfspaces} == {h.normal for h in Q.halfspaces}

    def test_area_and_perimeter(self):
        P = catalog.p2_polytope()
        assert P.area() == F(1, 2)
        assert P.lattice_perimeter() == 3

    def test_rejects_degenerate(self):
        with pytest.raises(ValueError):
            Polytope.from_vertices([(0, 0), (1, 1), (2, 2)])
        with pytest.raises(ValueError):
            Polytope.from_halfspaces([((1, 0), 0), ((0, 1), 0)])

    def test_lattice_count(self):
        assert lattice_count(catalog.p2_polytope(), 3) == 10
        assert lattice_count(catalog.p1xp1_polytope(), 3) == 16

    def test_integrate_affine(self):
        P = catalog.p2_polytope()
        assert P.integrate_affine((1, 1), 0) == F(1, 3)


class TestSubschemes:
    def test_validate_rejects_non_supporting(self):
        Z = ToricSubscheme((((1, 0), F(1, 2), 1),))
        with pytest.raises(ValueError):
            Z.validate(catalog.p2_polytope())

    def test_from_facets(self):
        P = catalog.p2_polytope()
        Z = ToricSubscheme.from_facets(P, {0: 1})
        Z.validate(P)
        assert Z.is_divisorial(P)
        assert not catalog.origin_point().is_divisorial(P)

    def test_slices(self):
        P, Z = catalog.p2_polytope(), catalog.origin_point()
        assert slice(P, Z, 0) is P
        assert slice(P, Z, F(1, 2)).area() == F(3, 8)
        assert breakpoints(P, Z) == [0, 1]


class TestProfiles:
    def test_p2_point(self):
        prof = toric_profile(catalog.p2_polytope(), catalog.origin_point())
        assert prof.a0.pieces == ((1 - x * x) / 2,)
        assert prof.a1.pieces == ((3 - x) / 2,)
        assert prof.seshadri.certified == 1
        assert verdict(prof).kind is VerdictKind.SEMISTABLE_ONLY

    def test_p1xp1_point(self):
        prof = catalog.shipped_profiles()["toric:p1xp1_point"]
        assert prof.a0.breakpoints == (0, 1, 2)
        assert prof.seshadri.certified == 1
        assert prof.a0(F(1, 2)) == 1 - F(1, 8)
        assert verdict(prof).kind is VerdictKind.STABLE_AGAINST

    def test_minus_two_matches_surface_profile(self):
        toric = catalog.shipped_profiles()["toric:minus_two_E1"]
        surf = catalog.minus_two_curve(F(9, 10))
        for c in (F(1, 10), F(1, 5), F(1, 3), F(2, 5)):
            assert toric.a0(c) == surf.a0(c)
            assert toric.a1(c) == surf.a1(c)
            assert mu_quotient(toric, c) == mu_quotient(surf, c)

    def test_blp2_matches_surface_profile(self):
        toric = catalog.shipped_profiles()["toric:blp2_half_E"]
        surf = catalog.blp2_exceptional(F(1, 2))
        for c in (F(1, 8), F(1, 4), F(1, 2)):
            assert mu_ideal(toric, c) == mu_ideal(surf, c)

    def test_profile_piece_interpolation_is_exact(self):
        P = catalog.blp2_lattice_polytope()
        Z = catalog.diagonal_facet(1)
        prof = toric_profile(P, Z)
        for c in (F(1, 7), F(3, 11), F(5, 6)):
            S = slice(P, Z, c)
            assert prof.a0(c) == S.area()
            assert 2 * prof.a1(c) == S.lattice_perimeter()


class TestSeshadri:
    def test_blp2(self):
        for q in (F(1, 10), F(1, 2), F(9, 10)):
            assert toric_surface_seshadri(catalog.blp2_polytope(q), catalog.diagonal_facet(q)) == 1 - q

    def test_p2_line(self):
        P = catalog.p2_polytope()
        assert toric_surface_seshadri(P, ToricSubscheme((((0, 1), 0, 1),))) == 1

    def test_minus_two(self):
        r = F(9, 10)
        assert toric_surface_seshadri(catalog.minus_two_polytope(r),
                                      catalog.diagonal_facet(F(1, 2))) == r - F(1, 2)

    def test_rejects_points(self):
        with pytest.raises(ValueError):
            toric_surface_seshadri(catalog.p2_polytope(), catalog.origin_point())

    def test_general_point(self):
        assert toric_seshadri(catalog.p2_polytope(), catalog.origin_point()) == 1
        assert toric_seshadri(catalog.p1xp1_polytope(), catalog.origin_point()) == 1

    def test_thickened_point(self):
        Z = ToricSubscheme((((1, 0), 0, 2), ((0, 1), 0, 2)))
        assert toric_seshadri(catalog.p2_polytope(), Z) == F(1, 2)

    def test_two_point_blowup_continuity(self):
        # blow up the origin (q1) and the corner (1, 0) (q2); Z = first exceptional curve
        q1 = F(1, 3)
        values = []
        for q2 in (F(1, 10), F(1, 100), F(1, 1000)):
            P = Polytope.from_halfspaces([((1, 0), 0), ((0, 1), 0), ((-1, -1), -1),
                                          ((1, 1), q1), ((-1, 0), q2 - 1)])
            eps = toric_surface_seshadri(P, catalog.diagonal_facet(q1))
            assert eps == 1 - q1 - q2
            values.append(eps)
        assert values == sorted(values)
        assert 1 - q1 - values[-1] == F(1, 1000)


class TestDonaldson:
    def test_p2_point_weight(self):
        w = donaldson_weights(catalog.p2_polytope(), catalog.origin_point(), 1)
        assert w.b0 == F(-1, 3)

    @pytest.mark.parametrize("name", sorted(catalog.toric_cases()))
    def test_shift_recovers_normal_cone(self, name):
        P, Z = catalog.toric_cases()[name]
        prof = toric_profile(P, Z)
        a0, a1 = prof.a0(0), prof.a1(0)
        eps = prof.seshadri.certified
        for c in (eps / 3, eps / 2, eps):
            wd = donaldson_weights(P, Z, c)
            we = normal_cone_weights(prof, c)
            assert donaldson_to_normal_cone(wd, a0, a1, c) == we
            # the raw weights belong to the inverse action
            assert futaki(a0, a1, wd) == -futaki_at(prof, c)

    def test_small_c(self):
        w = donaldson_weights(catalog.p2_polytope(), catalog.origin_point(), F(1, 10 ** 6))
        assert abs(w.b0) < F(1, 10 ** 5) and abs(w.b1) < F(1, 10 ** 5)

    def test_divisorial_p2(self):
        P = catalog.p2_polytope()
        Z = ToricSubscheme((((0, 1), 0, 1),))
        prof = toric_profile(P, Z)
        c = F(1, 2)
        shifted = donaldson_to_normal_cone(donaldson_weights(P, Z, c), prof.a0(0), prof.a1(0), c)
        assert shifted == normal_cone_weights(prof, c)


class TestEhrhart:
    @pytest.mark.parametrize("name", ["p2_point", "p1xp1_point", "blp2_lattice_E"])
    @pytest.mark.parametrize("xv", [F(0), F(1, 4), F(1, 2)])
    def test_fit_matches_slice(self, name, xv):
        P, Z = catalog.toric_cases()[name]
        prof = toric_profile(P, Z)
        A, B, _ = ehrhart_fit(P, Z, xv, range(4, 21))
        assert (A, B) == (prof.a0(xv), prof.a1(xv))

    def test_needs_samples(self):
        P, Z = catalog.toric_cases()["p2_point"]
        with pytest.raises(ValueError):
            ehrhart_fit(P, Z, F(1, 4), [4, 8])


class TestScan:
    def test_blp2_exceptional_first(self):
        hits = destabilizer_scan(catalog.blp2_polytope(F(1, 2)), 2)
        top = hits[0]
        assert top.key == ("facet", (1,), (1,))
        assert top.subscheme.faces[0][:2] == ((1, 1), F(1, 2))
        assert top.verdict.kind is VerdictKind.STRICTLY_UNSTABLE
        assert top.futaki < 0

    def test_p2_no_strict_destabiliser(self):
        hits = destabilizer_scan(catalog.p2_polytope(), 2)
        assert hits
        assert all(h.verdict.kind is not VerdictKind.STRICTLY_UNSTABLE for h in hits)

    def test_budget_zero(self):
        assert destabilizer_scan(catalog.p2_polytope(), 0) == []
        assert scan_candidates(catalog.p2_polytope(), 0) == []

    def test_deterministic(self):
        P = catalog.blp2_polytope(F(1, 3))
        assert [h.key for h in destabilizer_scan(P, 2)] == [h.key for h in destabilizer_scan(P, 2)]

    def test_candidate_count(self):
        # 4 facets x 2 multiplicities + 4 corners x 4 multiplicity pairs
        assert len(scan_candidates(catalog.blp2_polytope(F(1, 2)), 2)) == 24
