"""Projective bundles P(E) over a polarised curve.

For a base B with ``chi(O_B(k)) = a0B k^b + a1B k^(b-1) + ...`` the sheaf
slope used here is ``mu_E = deg E / (a0B (b-1)! rank E) + mu(B)``.  Only
curve bases (b = 1) are exact; higher-dimensional bases would need Chern
class data and are rejected.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Optional, Sequence

from .engine import (
    Seshadri,
    SlopeProfile,
    Verdict,
    VerdictKind,
    mu_quotient,
    slope_of_variety,
)
from .exact import Polynomial, Q, RationalLike, fmt, interpolate


class AmplenessWarning(UserWarning):
    """``L_m`` fails the degree test for ampleness."""


@dataclass(frozen=True)
class BaseData:
    b: int
    a0B: Fraction
    muB: Fraction
    genus: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "a0B", Q(self.a0B))
        object.__setattr__(self, "muB", Q(self.muB))
        if self.b < 1:
            raise ValueError("base dimension must be positive")
        if self.a0B <= 0:
            raise ValueError("a0B must be positive")
        if self.genus is not None and self.b == 1 and self.muB != Fraction(1 - self.genus) / self.a0B:
            raise ValueError(f"mu(B) = {fmt(self.muB)} inconsistent with genus {self.genus} "
                             f"and degree {fmt(self.a0B)}")

    @classmethod
    def curve(cls, genus: int, degree: RationalLike = 1) -> "BaseData":
        """A genus-g curve with ``O_B(1)`` of the given degree."""
        d = Q(degree)
        if genus < 0:
            raise ValueError("genus must be nonnegative")
        return cls(1, d, Fraction(1 - genus) / d, genus)


@dataclass(frozen=True)
class SheafData:
    rank: int
    deg: Fraction
    base: BaseData
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "deg", Q(self.deg))
        if self.rank < 1:
            raise ValueError("rank must be at least 1")


@dataclass(frozen=True)
class Subsheaf:
    """A saturated subsheaf F of E; ``direct_summand`` is the user's assertion, if any."""

    sheaf: SheafData
    direct_summand: Optional[bool] = None


@dataclass(frozen=True)
class BundleScenario:
    E: SheafData
    subsheaves: tuple
    m: Fraction

    def __post_init__(self):
        object.__setattr__(self, "m", Q(self.m))
        subs = tuple(s if isinstance(s, Subsheaf) else Subsheaf(s) for s in self.subsheaves)
        object.__setattr__(self, "subsheaves", subs)
        for s in subs:
            if s.sheaf.base != self.E.base:
                raise ValueError("subsheaf lives on a different base")
            if not 1 <= s.sheaf.rank < self.E.rank:
                raise ValueError(f"subsheaf rank {s.sheaf.rank} must lie in [1, rank E)")


def _lead_factor(base: BaseData) -> Fraction:
    return base.a0B * factorial(base.b - 1)


def mu_sheaf(s: SheafData) -> Fraction:
    return s.deg / (_lead_factor(s.base) * s.rank) + s.base.muB


@dataclass(frozen=True)
class SlopeRecord:
    mu_sym_dual: Fraction
    mu_tensor: Fraction
    mu_quotient: Fraction


def slope_identities(E: SheafData, F: SheafData, k: int) -> SlopeRecord:
    """Slopes of ``S^k E^*``, ``E (x) F`` and ``E / F``, each checked against its identity."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    base = E.base
    r = E.rank - 1
    rk = comb(r + k, k)
    sym = SheafData(rk, -k * rk * E.deg / E.rank, base)
    tens = SheafData(E.rank * F.rank, E.deg * F.rank + F.deg * E.rank, base)
    mu_E, mu_F = mu_sheaf(E), mu_sheaf(F)
    out = SlopeRecord(mu_sheaf(sym), mu_sheaf(tens), Fraction(0))
    if out.mu_sym_dual != (1 + k) * base.muB - k * mu_E:
        raise RuntimeError("internal error: symmetric power slope identity")
    if out.mu_tensor != mu_E + mu_F - base.muB:
        raise RuntimeError("internal error: tensor slope identity")
    if F.rank < E.rank:
        G = SheafData(E.rank - F.rank, E.deg - F.deg, base)
        mu_G = mu_sheaf(G)
        if E.rank * mu_E != F.rank * mu_F + G.rank * mu_G:
            raise RuntimeError("internal error: additivity of slopes")
        out = SlopeRecord(out.mu_sym_dual, out.mu_tensor, mu_G)
    return out


def tilde_m(E: SheafData, m: RationalLike) -> Fraction:
    """``m + (mu(B) - mu_E) / b``; warns when ``L_m`` is not ample."""
    m = Q(m)
    mt = m + (E.base.muB - mu_sheaf(E)) / E.base.b
    if mt <= 0:
        warnings.warn(f"m~ = {fmt(mt)} <= 0: L_m is not ample", AmplenessWarning, stacklevel=2)
    return mt


def _require_curve(base: BaseData):
    if base.b != 1:
        raise ValueError("only curve bases are exact: for b >= 2 the lower-order terms "
                         "depend on Chern classes of E that are not part of the input")


def projbundle_a0a1(E: SheafData, m: RationalLike) -> tuple[Fraction, Fraction]:
    """Leading Hilbert coefficients of ``(P(E), L_m)`` over a curve."""
    _require_curve(E.base)
    mt = tilde_m(E, m)
    r = E.rank - 1
    lead = E.base.a0B / factorial(r)
    return lead * mt, lead * (Fraction(r * (r + 1), 2) * mt + E.base.muB)


def degree_Lm(E: SheafData, m: RationalLike) -> Fraction:
    """``deg L_m = a0B (r+1) m~``, equal to ``n! a0`` with ``n = r + 1``."""
    _require_curve(E.base)
    return E.base.a0B * E.rank * tilde_m(E, m)


def projbundle_chi_oracle(E: SheafData, m: RationalLike, dim_check: bool = True
                          ) -> tuple[Fraction, Fraction]:
    """Top two coefficients of ``chi(S^k E^* (m k))`` fitted from Riemann-Roch on the curve."""
    _require_curve(E.base)
    m = Q(m)
    g = E.base.genus
    if g is None:
        g = 1 - E.base.muB * E.base.a0B
        if g.denominator != 1:
            raise ValueError("base genus is not integral")
    r = E.rank - 1
    n = r + 1
    pts = []
    for k in range(1, n + 4):
        rank = comb(r + k, k)
        deg = -k * rank * E.deg / E.rank + rank * m * k * E.base.a0B
        pts.append((k, deg + rank * (1 - g)))
    fit = interpolate(pts)
    if dim_check and fit.degree > n:
        raise ValueError("Euler characteristic is not polynomial of degree n")
    return fit.coeff(n), fit.coeff(n - 1)


# ---------------------------------------------------------------- subbundles


@dataclass(frozen=True)
class SubbundleData:
    r: int
    s: int
    t: int
    mt: Fraction
    mu_E: Fraction
    mu_F: Fraction


def _subbundle_data(scn: BundleScenario, F: SheafData) -> SubbundleData:
    _require_curve(scn.E.base)
    E = scn.E
    r, s = E.rank - 1, F.rank - 1
    t = r - s - 1
    mt = tilde_m(E, scn.m)
    if mt <= 0:
        raise ValueError(f"m~ = {fmt(mt)} must be positive")
    return SubbundleData(r, s, t, mt, mu_sheaf(E), mu_sheaf(F))


def subbundle_alphas(scn: BundleScenario, F: SheafData) -> tuple[Polynomial, Polynomial]:
    """Graded pieces of the filtration of ``L_m`` by powers of the ideal of ``P(F)``."""
    D = _subbundle_data(scn, F)
    r, s, t = D.r, D.s, D.t
    x = Polynomial.x()
    one_minus = 1 - x
    base = one_minus ** s * x ** t
    gamma = (1 - x * Fraction(r + 1, t + 1)) * (D.mu_E - D.mu_F)
    two_delta = Polynomial()
    if s > 0:
        two_delta = two_delta + one_minus ** (s - 1) * x ** t * (s * (s + 1))
    if t > 0:
        two_delta = two_delta + one_minus ** s * x ** (t - 1) * (t * (t + 1))
    lead = scn.E.base.a0B / (factorial(s) * factorial(t))
    alpha1 = base * (gamma + D.mt) * lead
    alpha2 = (two_delta / 2 * (gamma + D.mt) + base * scn.E.base.muB) * lead
    return alpha1, alpha2


def subbundle_profile(scn: BundleScenario, F: SheafData) -> SlopeProfile:
    """Full Hilbert profile of ``P(F)`` in ``(P(E), L_m)``, with epsilon = 1.

    Sections of ``L_m^k`` vanishing to order k along ``P(F)`` generate, so
    saturation holds at c = 1.
    """
    a0, a1 = projbundle_a0a1(scn.E, scn.m)
    alpha1, alpha2 = subbundle_alphas(scn, F)
    p0 = a0 - alpha1.antiderivative()
    p1 = a1 - alpha2.antiderivative() + (alpha1 - alpha1(0)) / 2
    return SlopeProfile(scn.E.rank, p0, p1, Seshadri.exact(1), True,
                        F.label or f"P(F), rank {F.rank} deg {fmt(F.deg)}")


def subbundle_slope_gap(scn: BundleScenario, F: SheafData) -> Fraction:
    """``mu_1(O_P(F)) - mu(P(E))``, computed exactly and checked against its factorised form."""
    D = _subbundle_data(scn, F)
    a0, a1 = projbundle_a0a1(scn.E, scn.m)
    alpha1, alpha2 = subbundle_alphas(scn, F)
    lin = 1 - Polynomial.x()
    den = (alpha1 * lin).integral(0, 1)
    if den <= 0:
        raise ValueError("int_0^1 (1-x) alpha1 must be positive; m~ too small for this subsheaf")
    num = (alpha2 * lin).integral(0, 1) + alpha1(0) / 2
    gap = num / den - slope_of_variety(a0, a1)
    a0B, muB, r = scn.E.base.a0B, scn.E.base.muB, D.r
    C = a0B ** 2 * (D.s + 1) / (factorial(r + 2) * factorial(r) * a0 * den)
    closed = C * (D.mu_E - D.mu_F) * ((r + 1) * D.mt - muB)
    if gap != closed:
        raise RuntimeError(f"internal error: slope gap {fmt(gap)} != factorised {fmt(closed)}")
    return gap


@dataclass(frozen=True)
class SubsheafResult:
    sheaf: SheafData
    gap: Fraction
    verdict: Verdict
    note: str = ""


@dataclass(frozen=True)
class BundleResult:
    per_subsheaf: tuple
    aggregate: Verdict
    hypothesis: str = "epsilon(P(F), L_m) = 1 (holds when mu_F >= mu_E)"


_SEVERITY = {
    VerdictKind.STABLE_AGAINST: 0,
    VerdictKind.SEMISTABLE_ONLY: 1,
    VerdictKind.INCONCLUSIVE: 2,
    VerdictKind.STRICTLY_UNSTABLE: 3,
}


def bundle_verdict(scn: BundleScenario) -> BundleResult:
    """Test ``(P(E), L_m)`` against ``P(F)`` at c = 1 for each listed subsheaf."""
    _require_curve(scn.E.base)
    results = []
    for sub in scn.subsheaves:
        F = sub.sheaf
        gap = subbundle_slope_gap(scn, F)
        one = (Fraction(1), Fraction(1))
        if gap < 0:
            v, note = Verdict.unstable(one, tested=one), "P(F) destabilises"
        elif gap == 0:
            v = Verdict.semistable_only(Fraction(1), interval=one, tested=one)
            if sub.direct_summand is False:
                note = "equality at c = 1 and F is not a direct summand: not polystable"
            elif sub.direct_summand is True:
                note = "equality at c = 1 from a direct summand: polystable-consistent"
            else:
                note = "equality at c = 1; polystability depends on whether F splits off"
        else:
            v, note = Verdict.stable(tested=one), "quotient slope above mu(P(E)) at c = 1"
        results.append(SubsheafResult(F, gap, v, note))
    if results:
        worst = max(results, key=lambda res: _SEVERITY[res.verdict.kind]).verdict
    else:
        worst = Verdict.inconclusive("no subsheaves listed")
    return BundleResult(tuple(results), worst)
