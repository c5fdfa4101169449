"""Closed-form slope data built from intersection numbers.

Intersection numbers are inputs; nothing here computes cohomology or
checks nefness.  Seshadri constants are supplied by the caller unless a
formula pins them down (smooth curves, toric surfaces elsewhere).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb, factorial
from typing import Optional, Sequence

from .engine import (
    Seshadri,
    SeshadriKind,
    SlopeProfile,
    Verdict,
    quotient_slope_from_alphas,
    verdict,
)
from .exact import PiecewisePolynomial, Polynomial, Q, RationalLike, fmt


class DataConsistencyWarning(UserWarning):
    """Raised (as a warning) when supplied intersection numbers contradict each other."""


def _positive(c: RationalLike, name="c") -> Fraction:
    c = Q(c)
    if c <= 0:
        raise ValueError(f"{name} must be positive, got {fmt(c)}")
    return c


def _check_c(c, seshadri: Seshadri) -> Fraction:
    c = _positive(c)
    if seshadri.certified is not None and c > seshadri.certified:
        raise ValueError(f"c = {fmt(c)} exceeds epsilon = {fmt(seshadri.certified)}")
    return c


# ---------------------------------------------------------------- data records


@dataclass(frozen=True)
class SurfaceCurveData:
    """A curve Z on a smooth polarised surface (X, L)."""

    KL: Fraction
    L2: Fraction
    LZ: Fraction
    KZ: Fraction
    Z2: Fraction
    genus: Optional[int] = None
    epsilon: Seshadri = field(default_factory=Seshadri.unknown)
    saturates: Optional[bool] = None

    def __post_init__(self):
        for name in ("KL", "L2", "LZ", "KZ", "Z2"):
            object.__setattr__(self, name, Q(getattr(self, name)))
        if self.L2 <= 0:
            raise ValueError("L2 must be positive")
        if self.LZ <= 0:
            raise ValueError("LZ must be positive")
        if self.genus is not None:
            if self.genus < 0:
                raise ValueError("genus must be nonnegative")
            if 2 * self.genus - 2 != self.KZ + self.Z2:
                warnings.warn(
                    f"adjunction fails: 2g - 2 = {2 * self.genus - 2} but KZ + Z2 = "
                    f"{fmt(self.KZ + self.Z2)}", DataConsistencyWarning, stacklevel=3)

    @property
    def adjunction_holds(self) -> bool:
        return self.genus is not None and 2 * self.genus - 2 == self.KZ + self.Z2

    def as_divisor(self) -> "DivisorData":
        return DivisorData(2, (self.L2, self.LZ, self.Z2),
                           (self.LZ + self.KL, self.KZ + self.Z2),
                           epsilon=self.epsilon, saturates=self.saturates)


@dataclass(frozen=True)
class DivisorData:
    """A divisor Z in (X, L) of dimension n.

    ``LnjZj[j] = L^(n-j).Z^j`` for j = 0..n and
    ``LZK[j] = L^(n-1-j).Z^j.(K_X + Z)`` for j = 0..n-1.
    """

    n: int
    LnjZj: tuple
    LZK: tuple
    epsilon: Seshadri = field(default_factory=Seshadri.unknown)
    saturates: Optional[bool] = None

    def __post_init__(self):
        object.__setattr__(self, "LnjZj", tuple(Q(v) for v in self.LnjZj))
        object.__setattr__(self, "LZK", tuple(Q(v) for v in self.LZK))
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.LnjZj) != self.n + 1:
            raise ValueError(f"LnjZj needs n + 1 = {self.n + 1} entries")
        if len(self.LZK) != self.n:
            raise ValueError(f"LZK needs n = {self.n} entries")
        if self.LnjZj[0] <= 0:
            raise ValueError("L^n must be positive")

    def K_dot(self, j: int) -> Fraction:
        """``K_X . L^(n-1-j) . Z^j``."""
        return self.LZK[j] - self.LnjZj[j + 1]


@dataclass(frozen=True)
class CurveInNfoldData:
    n: int
    genus: int
    LZ: Fraction
    c1nu: Fraction
    epsilon: Seshadri = field(default_factory=Seshadri.unknown)

    def __post_init__(self):
        object.__setattr__(self, "LZ", Q(self.LZ))
        object.__setattr__(self, "c1nu", Q(self.c1nu))
        if self.n < 2:
            raise ValueError("ambient dimension must be at least 2")
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if self.LZ <= 0:
            raise ValueError("LZ must be positive")


# ---------------------------------------------------------------- curves in n-folds


def curve_in_nfold_alphas(d: CurveInNfoldData) -> tuple[Polynomial, Polynomial]:
    """Leading coefficients of chi(L^k|_Z (x) S^{xk} nu^*) in k, as polynomials in x."""
    n, x = d.n, Polynomial.x()
    lin = d.LZ - x * (d.c1nu / (n - 1))
    alpha1 = x ** (n - 2) * lin / factorial(n - 2)
    alpha2 = x ** (n - 2) * (1 - d.genus)
    if n > 2:
        alpha2 = alpha2 + x ** (n - 3) * lin * Fraction((n - 2) * (n - 1), 2)
    return alpha1, alpha2 / factorial(n - 2)


def curve_in_nfold_quotient_slope(d: CurveInNfoldData, c: RationalLike) -> Fraction:
    c = _check_c(c, d.epsilon)
    n = d.n
    den = 2 * n * c * ((n + 1) * d.LZ - c * d.c1nu)
    if den <= 0:
        raise ValueError("degenerate denominator: (n+1) LZ - c c1(nu) must be positive")
    num = n * n * (n * n - 1) * d.LZ - c * n * (n + 1) * ((n - 2) * d.c1nu + 2 * (d.genus - 1))
    return num / den


# ---------------------------------------------------------------- divisors


def _divisor_sums(d: DivisorData, c: Fraction) -> tuple[Fraction, Fraction]:
    n = d.n
    s1 = sum((comb(n - 1, j) * (-c) ** j / (j + 1) * d.LZK[j] for j in range(1, n)), Fraction(0))
    s2 = sum((comb(n, j) * (-c) ** j / (j + 1) * d.LnjZj[j] for j in range(1, n + 1)), Fraction(0))
    return s1, s2


def divisor_quotient_slope(d: DivisorData, c: RationalLike) -> Fraction:
    """Quotient slope of a divisor.

    Integrating ``a0(0) - a0(x)`` and ``a1(0) - a1(x) + (a0(0) - a0(x))'/2``
    over [0, c] gives ``-n (L^(n-1).Z + S1) / (2 S2)``.
    """
    if d.n < 2:
        raise ValueError("divisor formula needs n >= 2; use smooth_curve_verdict for curves")
    c = _check_c(c, d.epsilon)
    s1, s2 = _divisor_sums(d, c)
    if s2 >= 0:
        raise ValueError("degenerate denominator in the divisor quotient slope")
    return -d.n * (d.LnjZj[1] + s1) / (2 * s2)


def divisor_hilbert(n: int, LnjZj: Sequence, LZK: Sequence) -> tuple[Polynomial, Polynomial]:
    """``(L - xZ)^n / n!`` and ``-K.(L - xZ)^(n-1) / (2 (n-1)!)`` as polynomials in x.

    No positivity is required, so this also serves nef boundary classes.
    """
    LnjZj = [Q(v) for v in LnjZj]
    LZK = [Q(v) for v in LZK]
    a0 = Polynomial([comb(n, j) * (-1) ** j * LnjZj[j] for j in range(n + 1)]) / factorial(n)
    kdot = [LZK[j] - LnjZj[j + 1] for j in range(n)]
    a1 = Polynomial([comb(n - 1, j) * (-1) ** j * kdot[j] for j in range(n)])
    return a0, a1 * Fraction(-1, 2 * factorial(n - 1))


def divisor_profile(d: DivisorData, name: str = "") -> SlopeProfile:
    a0, a1 = divisor_hilbert(d.n, d.LnjZj, d.LZK)
    return SlopeProfile(d.n, a0, a1, d.epsilon, d.saturates, name)


# ---------------------------------------------------------------- curves on surfaces


def surface_curve(d: SurfaceCurveData, c: RationalLike) -> tuple[Fraction, Fraction]:
    """``(mu(X), mu_c(O_Z))`` for a curve on a surface."""
    c = _check_c(c, d.epsilon)
    mu_x = -d.KL / d.L2
    den = 2 * c * (3 * d.LZ - c * d.Z2)
    if den <= 0:
        raise ValueError("degenerate denominator: 3 LZ - c Z2 must be positive")
    mu_q = 3 * (2 * d.LZ - c * (d.KZ + d.Z2)) / den
    if d.genus == 0 and d.adjunction_holds:
        rational = 3 * (d.LZ + c) / (c * (3 * d.LZ - c * d.Z2))
        if rational != mu_q:
            raise RuntimeError("internal error: rational-curve form disagrees")
    return mu_x, mu_q


def surface_profile(d: SurfaceCurveData, name: str = "") -> SlopeProfile:
    return divisor_profile(d.as_divisor(), name)


# ---------------------------------------------------------------- smooth curves


def smooth_curve_profile(g: int, degL: RationalLike, d: int) -> SlopeProfile:
    """A divisor of degree d on a genus-g curve polarised by degree degL.

    ``L(-eps Z)`` has degree zero; on P^1 that is trivial, so sections
    saturate.  For g >= 1 saturation depends on the divisor and is left open.
    """
    degL = _positive(degL, "deg L")
    if g < 0:
        raise ValueError("genus must be nonnegative")
    if d < 1:
        raise ValueError("divisor degree must be positive")
    x = Polynomial.x()
    return SlopeProfile(1, degL - x * d, Polynomial.constant(1 - g),
                        Seshadri.exact(degL / d), True if g == 0 else None,
                        f"genus {g} curve")


def smooth_curve_verdict(g: int, degL: RationalLike, d: int) -> Verdict:
    return verdict(smooth_curve_profile(g, degL, d))


# ---------------------------------------------------------------- blow-ups and nef limits


def blowup_repolarize(profile: SlopeProfile, d: RationalLike) -> SlopeProfile:
    """Profile of the exceptional divisor of the blow-up along Z, polarised by ``L(-dE)``."""
    d = Q(d)
    if d < 0:
        raise ValueError("d must be nonnegative")
    if d == 0:
        return profile
    eps = profile.seshadri.certified
    if eps is None:
        raise ValueError("blow-up re-polarisation needs a certified Seshadri bound")
    if d >= eps:
        raise ValueError(f"d = {fmt(d)} must be below epsilon = {fmt(eps)}")
    a0, a1 = profile.a0, profile.a1
    if isinstance(a0, PiecewisePolynomial):
        a0, a1 = a0.restrict(d, a0.end), a1.restrict(d, a1.end)
    return replace(profile, a0=a0.shift(d), a1=a1.shift(d),
                   seshadri=Seshadri(profile.seshadri.kind, eps - d),
                   name=f"{profile.name} blown up (d={fmt(d)})" if profile.name else "")


def nef_limit_test(dim: int, a0F: Polynomial, a1F: Polynomial, c: RationalLike) -> bool:
    """Strict inequality forcing Z to destabilise every polarisation near a nef class F.

    ``a0F``, ``a1F`` are the Hilbert data of ``F(-xE)``; ``F`` itself need not
    be ample.  The caller certifies that F and ``F(-cE)`` are nef.
    """
    c = _positive(c)
    n = dim
    Fn = a0F(0) * factorial(n)
    KFn1 = -2 * factorial(n - 1) * a1F(0)
    t0 = a0F(0) - a0F
    t1 = a1F(0) - a1F
    lhs = Fn * (t1 + t0.derivative() / 2).integral(0, c)
    rhs = -Fraction(n, 2) * KFn1 * t0.integral(0, c)
    return lhs < rhs


def nef_limit_test_divisor(n: int, LnjZj: Sequence, LZK: Sequence, c: RationalLike) -> bool:
    """:func:`nef_limit_test` for a divisor Z, with F in place of L in the intersection data."""
    a0, a1 = divisor_hilbert(n, LnjZj, LZK)
    return nef_limit_test(n, a0, a1, c)


__all__ = [
    "CurveInNfoldData", "DataConsistencyWarning", "DivisorData", "SurfaceCurveData",
    "blowup_repolarize", "curve_in_nfold_alphas", "curve_in_nfold_quotient_slope",
    "divisor_hilbert", "divisor_profile", "divisor_quotient_slope", "nef_limit_test",
    "nef_limit_test_divisor", "quotient_slope_from_alphas", "smooth_curve_profile",
    "smooth_curve_verdict", "surface_curve", "surface_profile",
]
