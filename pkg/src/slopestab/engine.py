"""Slopes, normal-cone weights, the Donaldson-Futaki invariant and verdicts.

A :class:`SlopeProfile` carries the two leading Hilbert coefficients
``a0(x)``, ``a1(x)`` of ``chi(L^k (-x k E))`` on the blow-up along a
subscheme, together with what is known about the Seshadri constant.
Everything else here is a pure function of a profile.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .exact import (
    PiecewisePolynomial,
    Polynomial,
    Q,
    RationalLike,
    SignKind,
    fmt,
    interpolate,
    poly_sign_on_interval,
)

Carrier = Union[Polynomial, PiecewisePolynomial]


class SeshadriKind(enum.Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower-bound"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Seshadri:
    kind: SeshadriKind
    value: Optional[Fraction] = None

    @classmethod
    def exact(cls, value: RationalLike) -> "Seshadri":
        return cls(SeshadriKind.EXACT, Q(value))

    @classmethod
    def lower_bound(cls, value: RationalLike) -> "Seshadri":
        return cls(SeshadriKind.LOWER_BOUND, Q(value))

    @classmethod
    def unknown(cls) -> "Seshadri":
        return cls(SeshadriKind.UNKNOWN)

    def __post_init__(self):
        if self.kind is SeshadriKind.UNKNOWN:
            if self.value is not None:
                raise ValueError("unknown Seshadri constant cannot carry a value")
        elif self.value is None or self.value <= 0:
            raise ValueError("Seshadri value must be a positive rational")

    @property
    def certified(self) -> Optional[Fraction]:
        """Largest c known to satisfy c <= epsilon, if any."""
        return self.value

    def scaled(self, r: Fraction) -> "Seshadri":
        if self.value is None:
            return self
        return Seshadri(self.kind, self.value * r)

    def __str__(self):
        if self.kind is SeshadriKind.UNKNOWN:
            return "unknown"
        return f"{self.kind.value} {fmt(self.value)}"


def _at(f: Carrier, x) -> Fraction:
    return f(x)


def _pieces_on(f: Carrier, lo: Fraction, hi: Fraction):
    """(open sub-interval, polynomial) pairs covering (lo, hi), plus interior breakpoints."""
    if isinstance(f, Polynomial):
        return [((lo, hi), f)], []
    segs, points = [], []
    for (a, b), p in zip(zip(f.breakpoints, f.breakpoints[1:]), f.pieces):
        u, v = max(a, lo), min(b, hi)
        if u < v:
            segs.append(((u, v), p))
    for i, b in enumerate(f.breakpoints[1:-1], start=1):
        if lo < b < hi:
            points.append((b, f.pieces[i - 1], f.pieces[i]))
    return segs, points


def strictly_signed(f: Carrier, lo: Fraction, hi: Fraction, want: int) -> bool:
    """True iff ``want * f > 0`` everywhere on the open interval (lo, hi)."""
    segs, points = _pieces_on(f, lo, hi)
    target = SignKind.STRICTLY_POSITIVE if want > 0 else SignKind.STRICTLY_NEGATIVE
    for (u, v), p in segs:
        if poly_sign_on_interval(p, u, v).kind is not target:
            return False
    return all(want * left(b) > 0 and want * right(b) > 0 for b, left, right in points)


@dataclass(frozen=True)
class SlopeProfile:
    """Leading Hilbert data ``a0(x)``, ``a1(x)`` of a subscheme Z in (X, L).

    ``saturates_at_epsilon`` is ``None`` when unknown.
    """

    dim: int
    a0: Carrier
    a1: Carrier
    seshadri: Seshadri = field(default_factory=Seshadri.unknown)
    saturates_at_epsilon: Optional[bool] = None
    name: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if type(self.a0) is not type(self.a1):
            raise ValueError("a0 and a1 must use the same carrier")
        if isinstance(self.a0, PiecewisePolynomial):
            if self.a0.breakpoints != self.a1.breakpoints:
                raise ValueError("a0 and a1 must share breakpoints")
            if self.a0.start != 0:
                raise ValueError("piecewise profile must start at x = 0")
            pieces0, pieces1 = self.a0.pieces, self.a1.pieces
        else:
            pieces0, pieces1 = (self.a0,), (self.a1,)
        if any(p.degree > self.dim for p in pieces0):
            raise ValueError(f"deg a0(x) must be at most n = {self.dim}")
        if any(p.degree > self.dim - 1 for p in pieces1):
            raise ValueError(f"deg a1(x) must be at most n - 1 = {self.dim - 1}")
        if self.a0(0) <= 0:
            raise ValueError("a0(0) must be positive")
        eps = self.seshadri.certified
        if eps is not None:
            if isinstance(self.a0, PiecewisePolynomial) and eps > self.a0.end:
                raise ValueError("Seshadri bound beyond the profile's breakpoint span")
            if not strictly_signed(self.a0, Fraction(0), eps, +1):
                raise ValueError("a0(x) must be positive on (0, epsilon)")
            if not strictly_signed(self.a0.derivative(), Fraction(0), eps, -1):
                raise ValueError("a0'(x) must be negative on (0, epsilon)")

    @property
    def is_piecewise(self) -> bool:
        return isinstance(self.a0, PiecewisePolynomial)

    @property
    def mu(self) -> Fraction:
        """Slope of (X, L), taking a_i = a_i(0)."""
        return slope_of_variety(self.a0(0), self.a1(0))

    def check_c(self, c: RationalLike) -> Fraction:
        c = Q(c)
        if c <= 0:
            raise ValueError(f"c = {fmt(c)} must be positive")
        eps = self.seshadri.certified
        if self.seshadri.kind is SeshadriKind.EXACT and c > eps:
            raise ValueError(f"c = {fmt(c)} exceeds epsilon = {fmt(eps)}")
        if self.seshadri.kind is SeshadriKind.LOWER_BOUND and c > eps:
            raise ValueError(f"c = {fmt(c)} beyond the certified range (0, {fmt(eps)}]")
        if self.is_piecewise and c > self.a0.end:
            raise ValueError(f"c = {fmt(c)} beyond the profile's span")
        return c

    # transformers; see thicken/twist docstrings

    def thicken(self, m: int) -> "SlopeProfile":
        """Profile of the m-th thickening ``m Z`` (ideal ``I_Z^m``)."""
        if m < 1:
            raise ValueError("thickening order must be >= 1")
        return replace(self, a0=self.a0.scale_argument(m), a1=self.a1.scale_argument(m),
                       seshadri=self.seshadri.scaled(Fraction(1, m)),
                       name=f"{self.name} x{m}" if self.name else "")

    def twist(self, r: RationalLike) -> "SlopeProfile":
        """Profile of the same Z with respect to ``L^r``."""
        r = Q(r)
        if r <= 0:
            raise ValueError("twist must be positive")
        n = self.dim
        return replace(self, a0=self.a0.scale_argument(1 / r) * r**n,
                       a1=self.a1.scale_argument(1 / r) * r ** (n - 1),
                       seshadri=self.seshadri.scaled(r))


@dataclass(frozen=True)
class WeightPair:
    """Top two coefficients of the total weight ``w(k) = b0 k^(n+1) + b1 k^n + ...``."""

    b0: Fraction
    b1: Fraction

    def __iter__(self):
        return iter((self.b0, self.b1))


# ---------------------------------------------------------------- slopes


def slope_of_variety(a0: RationalLike, a1: RationalLike) -> Fraction:
    a0, a1 = Q(a0), Q(a1)
    if a0 <= 0:
        raise ValueError("a0 must be positive")
    return a1 / a0


def _ideal_parts(profile: SlopeProfile, c: Fraction) -> tuple[Fraction, Fraction]:
    num = profile.a1.integral(0, c) + (profile.a0(c) - profile.a0(0)) / 2
    den = profile.a0.integral(0, c)
    return num, den


def mu_ideal(profile: SlopeProfile, c: RationalLike) -> Fraction:
    """Slope of Z with respect to c."""
    c = profile.check_c(c)
    num, den = _ideal_parts(profile, c)
    if den <= 0:
        raise ValueError("integral of a0 over [0, c] must be positive")
    return num / den


def mu_ideal_limit(profile: SlopeProfile) -> Fraction:
    """Limit of ``mu_ideal`` as c -> 0+."""
    return (profile.a1(0) + profile.a0.derivative()(0) / 2) / profile.a0(0)


def mu_quotient(profile: SlopeProfile, c: RationalLike) -> Fraction:
    """Quotient slope of Z with respect to c."""
    c = profile.check_c(c)
    num, den = _ideal_parts(profile, c)
    if den <= 0:
        raise ValueError("integral of a0 over [0, c] must be positive")
    qden = den - c * profile.a0(0)
    if qden >= 0:
        raise ValueError("degenerate quotient denominator: c a0 - int a0 must be positive")
    return (num - c * profile.a1(0)) / qden


def alphas_from_profile(profile: SlopeProfile) -> tuple[Polynomial, Polynomial]:
    """Leading coefficients of chi(L^k I^{xk} / I^{xk+1}) as polynomials in x."""
    if profile.is_piecewise:
        raise ValueError("alphas_from_profile needs a polynomial profile")
    d0 = profile.a0.derivative()
    return -d0, -profile.a1.derivative() - d0.derivative() / 2


def _alphas_any(profile: SlopeProfile):
    d0 = profile.a0.derivative()
    return -d0, -profile.a1.derivative() - d0.derivative() * Fraction(1, 2)


def quotient_slope_from_alphas(alpha1: Carrier, alpha2: Carrier, c: RationalLike) -> Fraction:
    """Quotient slope rebuilt from the graded pieces of the filtration by powers of I_Z."""
    c = Q(c)
    lin = Polynomial([c, -1])
    num = (alpha2 * lin).integral(0, c) + c * alpha1(0) / 2
    den = (alpha1 * lin).integral(0, c)
    return num / den


def normal_cone_weights(profile: SlopeProfile, c: RationalLike) -> WeightPair:
    """Weights of the deformation to the normal cone polarised by L(-cP).

    Computed both from ``a0, a1`` and from the alphas; the two closed forms
    are related by integration by parts and must agree exactly.
    """
    c = profile.check_c(c)
    a0, a1 = profile.a0, profile.a1
    b0 = a0.integral(0, c) - c * a0(0)
    b1 = a1.integral(0, c) + (a0(c) - a0(0)) / 2 - c * a1(0)

    alpha1, alpha2 = _alphas_any(profile)
    lin = Polynomial([c, -1])
    b0_alt = -(alpha1 * lin).integral(0, c)
    b1_alt = -(alpha2 * lin).integral(0, c) - c * alpha1(0) / 2
    if (b0, b1) != (b0_alt, b1_alt):
        if not profile.is_piecewise or (a0.is_continuous() and a0.derivative().is_continuous()
                                        and a1.is_continuous()):
            raise RuntimeError("internal error: weight closed forms disagree "
                               f"({fmt(b0)}, {fmt(b1)}) vs ({fmt(b0_alt)}, {fmt(b1_alt)})")
    if not b0 < 0:
        raise RuntimeError(f"internal error: b0 = {fmt(b0)} is not negative")
    return WeightPair(b0, b1)


def futaki(a0: RationalLike, a1: RationalLike, w: WeightPair) -> Fraction:
    """Donaldson-Futaki invariant ``(b0 a1 - b1 a0) / a0^2``."""
    a0, a1 = Q(a0), Q(a1)
    if a0 <= 0:
        raise ValueError("a0 must be positive")
    return (w.b0 * a1 - w.b1 * a0) / (a0 * a0)


def futaki_at(profile: SlopeProfile, c: RationalLike) -> Fraction:
    return futaki(profile.a0(0), profile.a1(0), normal_cone_weights(profile, c))


def weight_sum_oracle(alpha1: Carrier, alpha2: Carrier, c: RationalLike,
                      ks: Iterable[int], dim: int) -> WeightPair:
    """Brute-force total weights for several k, fitted by a degree n+1 polynomial.

    For each k the finite sum ``-sum_{i<ck} (ck - i) chi_i`` with
    ``chi_i = alpha1(i/k) k^(n-1) + alpha2(i/k) k^(n-2)`` is evaluated exactly.
    """
    c = Q(c)
    ks = sorted(set(int(k) for k in ks))
    n = dim
    if len(ks) < n + 2:
        raise ValueError(f"need at least {n + 2} distinct k values, got {len(ks)}")
    samples = []
    for k in ks:
        ck = c * k
        if ck.denominator != 1:
            raise ValueError(f"c k = {fmt(ck)} is not integral for k = {k}")
        N = ck.numerator
        kk = Fraction(k)
        w = Fraction(0)
        for i in range(N):
            x = Fraction(i, k)
            w -= (N - i) * (alpha1(x) * kk ** (n - 1) + alpha2(x) * kk ** (n - 2))
        samples.append((k, w))
    fit = interpolate(samples[: n + 2])
    for k, w in samples[n + 2:]:
        if fit(k) != w:
            raise ValueError("weight samples are not a polynomial of degree n+1 in k; "
                             "check the alpha degrees")
    return WeightPair(fit.coeff(n + 1), fit.coeff(n))


# ---------------------------------------------------------------- verdict


def margin_polynomial(profile: SlopeProfile) -> Carrier:
    """``N(c) = a0(0) int_0^c (a1 + a0'/2) - a1(0) int_0^c a0``.

    Its sign on (0, epsilon] is the sign of ``mu_c(I_Z) - mu(X)``.
    """
    a0, a1 = profile.a0, profile.a1
    inner = a1 + a0.derivative() * Fraction(1, 2)
    return inner.cumulative() * a0(0) - a0.cumulative() * a1(0)


class VerdictKind(enum.Enum):
    STABLE_AGAINST = "StableAgainst"
    SEMISTABLE_ONLY = "SemistableOnly"
    STRICTLY_UNSTABLE = "StrictlyUnstable"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Outcome of the slope test of (X, L) against one subscheme.

    * ``witness`` (StrictlyUnstable): a rational interval inside (0, epsilon]
      on which the margin is strictly positive.  A degenerate interval
      ``(c, c)`` is a single witness point.
    * ``equality_at`` (SemistableOnly): the rational c with equality, when
      exact; otherwise ``equality_interval`` isolates it.
    * ``tested``: the certified interval of c values that was analysed.
    """

    kind: VerdictKind
    witness: Optional[tuple] = None
    equality_at: Optional[Fraction] = None
    equality_interval: Optional[tuple] = None
    reason: str = ""
    tested: Optional[tuple] = None

    @classmethod
    def stable(cls, tested=None) -> "Verdict":
        return cls(VerdictKind.STABLE_AGAINST, tested=tested)

    @classmethod
    def semistable_only(cls, at, interval=None, tested=None) -> "Verdict":
        return cls(VerdictKind.SEMISTABLE_ONLY, equality_at=at, equality_interval=interval,
                   tested=tested)

    @classmethod
    def unstable(cls, witness, tested=None) -> "Verdict":
        return cls(VerdictKind.STRICTLY_UNSTABLE, witness=tuple(witness), tested=tested)

    @classmethod
    def inconclusive(cls, reason: str, tested=None) -> "Verdict":
        return cls(VerdictKind.INCONCLUSIVE, reason=reason, tested=tested)

    def describe(self) -> str:
        k = self.kind.value
        if self.kind is VerdictKind.STRICTLY_UNSTABLE:
            a, b = self.witness
            return f"{k}(witness_interval=[{fmt(a)}, {fmt(b)}])"
        if self.kind is VerdictKind.SEMISTABLE_ONLY:
            if self.equality_at is not None:
                return f"{k}(boundary_equality_at={fmt(self.equality_at)})"
            a, b = self.equality_interval
            return f"{k}(equality_in=({fmt(a)}, {fmt(b)}))"
        if self.kind is VerdictKind.INCONCLUSIVE:
            return f"{k}({self.reason})"
        return k


def _scan_margin(N: Carrier, hi: Fraction):
    """Positive witnesses and interior zeros of N on (0, hi)."""
    positives, zeros = [], []
    segs, points = _pieces_on(N, Fraction(0), hi)
    for (u, v), p in segs:
        s = poly_sign_on_interval(p, u, v)
        if s.kind is SignKind.IDENTICALLY_ZERO:
            zeros.append(((u + v) / 2, (u + v) / 2))
            continue
        positives.extend(s.positive_gaps())
        zeros.extend(s.roots)
    for b, left, _ in points:
        val = left(b)
        if val > 0:
            positives.append((b, b))
        elif val == 0:
            zeros.append((b, b))
    return positives, zeros


def verdict(profile: SlopeProfile) -> Verdict:
    """Slope (semi)stability of (X, L) with respect to the profile's subscheme."""
    return classify_margin(margin_polynomial(profile), profile.seshadri,
                           profile.saturates_at_epsilon)


def alpha_margin(alpha1: Polynomial, alpha2: Polynomial, mu_X: RationalLike) -> Polynomial:
    """``mu(X) int_0^c (c-x) alpha1 - int_0^c (c-x) alpha2 - (c/2) alpha1(0)`` as a polynomial in c.

    Positive exactly where ``mu_c(O_Z) < mu(X)``, so it plays the role of
    :func:`margin_polynomial` when only the graded pieces are known.
    """
    mu_X = Q(mu_X)
    c = Polynomial.x()

    def weighted(alpha):
        # int_0^c (c - x) alpha(x) dx = c A1(c) - A2(c), A1 = int alpha, A2 = int x alpha
        return c * alpha.antiderivative() - (c * alpha).antiderivative()

    return weighted(alpha1) * mu_X - weighted(alpha2) - c * (alpha1(0) / 2)


def classify_margin(N: Carrier, ses: Seshadri, saturates: Optional[bool]) -> Verdict:
    """Apply the stability definition to a margin that is positive where Z destabilises."""
    if ses.kind is SeshadriKind.UNKNOWN:
        return Verdict.inconclusive("Seshadri constant unknown; no admissible c certified")
    eps = ses.certified
    tested = (Fraction(0), eps)
    positives, zeros = _scan_margin(N, eps)
    at_eps = N(eps)
    if positives:
        return Verdict.unstable(positives[0], tested=tested)
    if at_eps > 0:
        return Verdict.unstable((eps, eps), tested=tested)
    if zeros:
        a, b = zeros[0]
        if ses.kind is SeshadriKind.LOWER_BOUND:
            return Verdict.inconclusive(
                f"equality inside (0, {fmt(eps)}); semistability beyond the lower bound not certified",
                tested=tested)
        return Verdict.semistable_only(a if a == b else None, interval=(a, b), tested=tested)
    if ses.kind is SeshadriKind.LOWER_BOUND:
        return Verdict.inconclusive(
            f"margin negative on (0, {fmt(eps)}] but epsilon is only bounded below", tested=tested)
    if at_eps < 0:
        return Verdict.stable(tested=tested)
    # equality exactly at c = epsilon
    if saturates is True:
        return Verdict.semistable_only(eps, interval=(eps, eps), tested=tested)
    if saturates is False:
        return Verdict.stable(tested=tested)
    return Verdict.inconclusive(
        f"equality at c = epsilon = {fmt(eps)} but saturation at epsilon is unknown", tested=tested)
