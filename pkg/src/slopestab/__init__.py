"""Exact slope stability of polarised varieties.

Everything is computed over the rationals.  A subscheme enters through
its slope profile ``(a0, a1)``; the engine turns that into slopes,
normal-cone weights, Futaki invariants and a verdict on ``(0, epsilon]``.
"""

from .bundles import BaseData, BundleScenario, SheafData, Subsheaf, bundle_verdict, subbundle_profile
from .engine import (
    Seshadri,
    SeshadriKind,
    SlopeProfile,
    Verdict,
    VerdictKind,
    WeightPair,
    futaki,
    futaki_at,
    margin_polynomial,
    mu_ideal,
    mu_quotient,
    normal_cone_weights,
    verdict,
    weight_sum_oracle,
)
from .exact import PiecewisePolynomial, Polynomial, Q, fmt
from .geometry import (
    CurveInNfoldData,
    DivisorData,
    SurfaceCurveData,
    divisor_profile,
    smooth_curve_profile,
    surface_curve,
    surface_profile,
)
from .scenario import Scenario, ScenarioError, load_scenario
from .toric import Polytope, ToricSubscheme, destabilizer_scan, toric_profile, toric_seshadri

__version__ = "0.1.0"

__all__ = [
    "BaseData", "BundleScenario", "CurveInNfoldData", "DivisorData", "PiecewisePolynomial",
    "Polynomial", "Polytope", "Q", "Scenario", "ScenarioError", "Seshadri", "SeshadriKind",
    "SheafData", "SlopeProfile", "Subsheaf", "SurfaceCurveData", "ToricSubscheme", "Verdict",
    "VerdictKind", "WeightPair", "bundle_verdict", "destabilizer_scan", "divisor_profile", "fmt",
    "futaki", "futaki_at", "load_scenario", "margin_polynomial", "mu_ideal", "mu_quotient",
    "normal_cone_weights", "smooth_curve_profile", "subbundle_profile", "surface_curve",
    "surface_profile", "toric_profile", "toric_seshadri", "verdict", "weight_sum_oracle",
]
