"""Named example profiles used by the demos, the CLI self-check and the tests."""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .bundles import BaseData, BundleScenario, SheafData, subbundle_profile
from .engine import Seshadri, SlopeProfile
from .exact import Polynomial, Q, RationalLike
from .geometry import SurfaceCurveData, smooth_curve_profile, surface_profile
from .toric import Polytope, ToricSubscheme, toric_profile

x = Polynomial.x()


def pn_point(n: int) -> SlopeProfile:
    """A point in P^n with O(1): ``a0 = (1 - x^n)/n!``, ``a1 = ((n+1) - (n-1) x^(n-1)) / (2 (n-1)!)``."""
    a0 = (1 - x ** n) / factorial(n)
    a1 = ((n + 1) - x ** (n - 1) * (n - 1)) / (2 * factorial(n - 1))
    return SlopeProfile(n, a0, a1, Seshadri.exact(1), True, f"point in P^{n}")


def p1_point() -> SlopeProfile:
    return smooth_curve_profile(0, 1, 1)


def blp2_exceptional_data(q: RationalLike) -> SurfaceCurveData:
    """Bl_1 P^2 with ``L = H - qE`` and Z = E; epsilon = 1 - q since ``H - (q+c)E`` is nef for c <= 1 - q."""
    q = Q(q)
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    return SurfaceCurveData(KL=q - 3, L2=1 - q * q, LZ=q, KZ=-1, Z2=-1, genus=0,
                            epsilon=Seshadri.exact(1 - q), saturates=True)


def blp2_exceptional(q: RationalLike) -> SlopeProfile:
    return surface_profile(blp2_exceptional_data(q), f"exceptional curve of Bl1 P2, q={Q(q)}")


def minus_two_curve_data(r: RationalLike) -> SurfaceCurveData:
    """The -2-curve E1 on the two-step blow-up, ``L = H - E1/2 - r E2``, ``c_r = r - 1/2``.

    Intersections: ``H^2 = 1, E1^2 = -2, E2^2 = -1, E1.E2 = 1``, ``K = -3H + E1 + 2E2``.
    The toric nef test gives epsilon(E1) = r - 1/2 exactly.
    """
    r = Q(r)
    if not Fraction(1, 2) < r < 1:
        raise ValueError("r must lie in (1/2, 1)")
    return SurfaceCurveData(KL=r - 3, L2=(1 + 2 * r - 2 * r * r) / 2, LZ=1 - r, KZ=0, Z2=-2,
                            genus=0, epsilon=Seshadri.exact(r - Fraction(1, 2)), saturates=True)


def minus_two_curve(r: RationalLike) -> SlopeProfile:
    return surface_profile(minus_two_curve_data(r), f"-2-curve, r={Q(r)}")


# ---- toric polygons

def p2_polytope() -> Polytope:
    return Polytope.from_vertices([(0, 0), (1, 0), (0, 1)])


def p1xp1_polytope() -> Polytope:
    return Polytope.from_vertices([(0, 0), (1, 0), (1, 1), (0, 1)])


def blp2_polytope(q: RationalLike) -> Polytope:
    return Polytope.from_halfspaces([((1, 0), 0), ((0, 1), 0), ((-1, -1), -1), ((1, 1), Q(q))])


def blp2_lattice_polytope() -> Polytope:
    """``2H - E`` on Bl_1 P^2, a lattice polygon."""
    return Polytope.from_vertices([(1, 0), (2, 0), (0, 2), (0, 1)])


def minus_two_polytope(r: RationalLike) -> Polytope:
    return Polytope.from_halfspaces([((1, 0), 0), ((0, 1), 0), ((-1, -1), -1),
                                     ((1, 1), Fraction(1, 2)), ((2, 1), Q(r))])


def origin_point() -> ToricSubscheme:
    return ToricSubscheme((((1, 0), 0, 1), ((0, 1), 0, 1)), "torus-fixed point at the origin")


def diagonal_facet(offset: RationalLike, label: str = "E") -> ToricSubscheme:
    return ToricSubscheme((((1, 1), Q(offset), 1),), label)


def toric_cases() -> dict:
    """(polytope, subscheme) pairs shipped as toric scenarios."""
    return {
        "p2_point": (p2_polytope(), origin_point()),
        "p2_line": (p2_polytope(), ToricSubscheme((((0, 1), 0, 1),), "line p2 = 0")),
        "p1xp1_point": (p1xp1_polytope(), origin_point()),
        "blp2_half_E": (blp2_polytope(Fraction(1, 2)), diagonal_facet(Fraction(1, 2))),
        "blp2_lattice_E": (blp2_lattice_polytope(), diagonal_facet(1)),
        "minus_two_E1": (minus_two_polytope(Fraction(9, 10)), diagonal_facet(Fraction(1, 2), "E1")),
    }


def elliptic_bundle() -> BundleScenario:
    """``E = O + O(p)`` over an elliptic curve, ``F = O(p)``, ``m = 2``."""
    base = BaseData.curve(1, 1)
    F = SheafData(1, 1, base, "O(p)")
    return BundleScenario(SheafData(2, 1, base, "O + O(p)"), (F,), 2)


def shipped_profiles() -> dict:
    """Every profile shipped with the package, keyed by a stable name."""
    out = {
        "p1_point": p1_point(),
        "p2_point": pn_point(2),
        "p3_point": pn_point(3),
        "p4_point": pn_point(4),
        "genus2_canonical_d1": smooth_curve_profile(2, 2, 1),
        "blp2_E_q1/3": blp2_exceptional(Fraction(1, 3)),
        "blp2_E_q1/2": blp2_exceptional(Fraction(1, 2)),
        "minus_two_r9/10": minus_two_curve(Fraction(9, 10)),
    }
    for name, (P, Z) in toric_cases().items():
        out[f"toric:{name}"] = toric_profile(P, Z, name)
    scn = elliptic_bundle()
    out["bundle:elliptic_O+O(p)"] = subbundle_profile(scn, scn.subsheaves[0].sheaf)
    return out
