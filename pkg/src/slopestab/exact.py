"""Exact rational scalars, univariate polynomials and sign analysis.

Every number in the package is a :class:`fractions.Fraction`.  Nothing in
this module ever touches a float.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

NEG_INF = -math.inf  # degree of the zero polynomial


def Q(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction, rejecting floats.

    Strings may be ``"p/q"`` or integers.  A zero denominator raises
    ``ValueError`` (never ``ZeroDivisionError``) so callers can report it as
    an input error.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                n, d = int(num), int(den)
            except ValueError:
                raise ValueError(f"malformed rational {value!r}") from None
            if d == 0:
                raise ValueError(f"zero denominator in {value!r}")
            return Fraction(n, d)
        try:
            return Fraction(int(text))
        except ValueError:
            raise ValueError(f"malformed rational {value!r}") from None
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def fmt(q: Fraction) -> str:
    """Render as ``"p/q"`` (or ``"p"`` for integers)."""
    q = Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


class Polynomial:
    """Dense univariate polynomial over the rationals.

    ``coeffs[i]`` is the coefficient of ``x**i``.  The zero polynomial has an
    empty coefficient tuple and degree ``-inf``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, c: RationalLike) -> "Polynomial":
        return cls([c])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable[RationalLike], lead: RationalLike = 1) -> "Polynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-Q(r), 1])
        return p

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __call__(self, x: RationalLike) -> Fraction:
        x = Q(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, scalar):
        return Polynomial(c / Q(scalar) for c in self.coeffs)

    def __divmod__(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        if len(rem) - 1 < dq:
            return Polynomial(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        lead = other.leading
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            quot[i - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Polynomial", self.coeffs))

    def __repr__(self):
        return f"Polynomial([{', '.join(fmt(c) for c in self.coeffs)}])"

    def __str__(self):
        return self.render()

    def render(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mag = abs(c)
            if i == 0:
                body = fmt(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"({fmt(mag)})*{mono}" if mag.denominator != 1 else f"{fmt(mag)}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for s, body in terms[1:]:
            out += f" {s} {body}"
        return out

    # calculus

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def antiderivative(self) -> "Polynomial":
        """Antiderivative vanishing at 0."""
        return Polynomial([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    cumulative = antiderivative

    def integral(self, lo: RationalLike, hi: RationalLike) -> Fraction:
        lo, hi = Q(lo), Q(hi)
        if lo > hi:
            raise ValueError(f"integration bounds reversed: {fmt(lo)} > {fmt(hi)}")
        F = self.antiderivative()
        return F(hi) - F(lo)

    def compose(self, inner: "Polynomial") -> "Polynomial":
        out = Polynomial()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def shift(self, d: RationalLike) -> "Polynomial":
        """``x -> p(x + d)``."""
        return self.compose(Polynomial([d, 1]))

    def scale_argument(self, r: RationalLike) -> "Polynomial":
        """``x -> p(r x)``."""
        r = Q(r)
        return Polynomial(c * r**i for i, c in enumerate(self.coeffs))

    def monic(self) -> "Polynomial":
        return self / self.leading if self.coeffs else self


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_eval(p: Polynomial, x: RationalLike) -> Fraction:
    return p(x)


def poly_derivative(p: Polynomial) -> Polynomial:
    return p.derivative()


def poly_definite_integral(p: Polynomial, lo: RationalLike, hi: RationalLike) -> Fraction:
    return p.integral(lo, hi)


# ---------------------------------------------------------------- sign analysis


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _variations(seq: Sequence[Polynomial], x: Fraction) -> int:
    signs = [sign(q(x)) for q in seq]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _squarefree(p: Polynomial) -> Polynomial:
    return (p // poly_gcd(p, p.derivative())).monic()


def count_roots(p: Polynomial, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of ``p`` in the open interval (lo, hi)."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    q = _squarefree(p)
    for end in (lo, hi):
        if q(end) == 0:
            q = q // Polynomial([-end, 1])
    if q.degree <= 0:
        return 0
    seq = sturm_sequence(q)
    return _variations(seq, lo) - _variations(seq, hi)


@dataclass(frozen=True)
class _Root:
    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi


def isolate_roots(p: Polynomial, lo: RationalLike, hi: RationalLike) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals for the distinct roots of ``p`` in (lo, hi).

    An interval ``(a, a)`` denotes the exact rational root ``a``; otherwise the
    root lies strictly inside the open interval ``(a, b)``.
    """
    return [(r.lo, r.hi) for r in _isolate(p, Q(lo), Q(hi))]


def _isolate(p: Polynomial, lo: Fraction, hi: Fraction) -> list[_Root]:
    q = _squarefree(p)
    out: list[_Root] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count_roots(q, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append(_Root(a, b))
            continue
        m = (a + b) / 2
        if q(m) == 0:
            out.append(_Root(m, m))
        stack.append((a, m))
        stack.append((m, b))
    out.sort(key=lambda r: r.lo)
    return out


def _bisect_root(q: Polynomial, r: _Root) -> _Root:
    m = (r.lo + r.hi) / 2
    if q(m) == 0:
        return _Root(m, m)
    if count_roots(q, r.lo, m) == 1:
        return _Root(r.lo, m)
    return _Root(m, r.hi)


def _separator(q: Polynomial, left: _Root, right: _Root) -> tuple[Fraction, _Root, _Root]:
    """A non-root point strictly between the roots in ``left`` and ``right``.

    Either argument may be a degenerate pseudo-root (an interval endpoint).
    """
    while True:
        if left.hi < right.lo:
            if not left.exact:
                return left.hi, left, right
            if not right.exact:
                return right.lo, left, right
            return (left.hi + right.lo) / 2, left, right
        if not left.exact and not right.exact:
            return left.hi, left, right
        if left.exact:
            right = _bisect_root(q, right)
        else:
            left = _bisect_root(q, left)


class SignKind(enum.Enum):
    STRICTLY_POSITIVE = "StrictlyPositive"
    STRICTLY_NEGATIVE = "StrictlyNegative"
    IDENTICALLY_ZERO = "IdenticallyZero"
    MIXED = "Mixed"


@dataclass(frozen=True)
class SignSummary:
    """Sign of a polynomial on an open interval (lo, hi).

    ``roots`` isolates every distinct interior root; ``signs`` has one entry
    per gap between consecutive roots (so ``len(roots) + 1`` entries) and
    records the constant sign on that gap.  ``zero_at_hi`` is only set when
    the closed right endpoint was requested and the polynomial vanishes there.
    """

    kind: SignKind
    lo: Fraction
    hi: Fraction
    roots: tuple = ()
    signs: tuple = ()
    samples: tuple = ()
    zero_at_lo: bool = False
    zero_at_hi: bool = False

    @property
    def sign_changes(self) -> bool:
        return any(a != b for a, b in zip(self.signs, self.signs[1:]))

    def positive_gaps(self) -> list[tuple[Fraction, Fraction]]:
        """Rational sub-intervals on which the polynomial is strictly positive."""
        if self.kind is SignKind.STRICTLY_POSITIVE:
            return [(self.lo, self.hi)]
        out = []
        bounds = [self.lo] + [x for r in self.roots for x in r] + [self.hi]
        for i, s in enumerate(self.signs):
            if s > 0:
                a, b = bounds[2 * i], bounds[2 * i + 1]
                out.append((a, b) if a < b else (self.samples[i], self.samples[i]))
        return out


def poly_sign_on_interval(p: Polynomial, lo: RationalLike, hi: RationalLike,
                          include_hi: bool = False) -> SignSummary:
    """Exact sign classification of ``p`` on (lo, hi), or (lo, hi] with ``include_hi``.

    A zero at the included right endpoint does not change the interior
    classification; it is reported through ``zero_at_hi``.
    """
    lo, hi = Q(lo), Q(hi)
    if not lo < hi:
        raise ValueError("empty interval")
    if p.is_zero():
        return SignSummary(SignKind.IDENTICALLY_ZERO, lo, hi, zero_at_lo=True,
                           zero_at_hi=include_hi)
    q = _squarefree(p)
    roots = _isolate(p, lo, hi)
    zero_hi = include_hi and p(hi) == 0
    zero_lo = p(lo) == 0
    edge_lo, edge_hi = _Root(lo, lo), _Root(hi, hi)
    if not roots:
        mid = (lo + hi) / 2
        kind = SignKind.STRICTLY_POSITIVE if p(mid) > 0 else SignKind.STRICTLY_NEGATIVE
        return SignSummary(kind, lo, hi, samples=(mid,), signs=(sign(p(mid)),),
                           zero_at_lo=zero_lo, zero_at_hi=zero_hi)
    chain = [edge_lo] + roots + [edge_hi]
    samples = []
    for i in range(len(chain) - 1):
        s, chain[i], chain[i + 1] = _separator(q, chain[i], chain[i + 1])
        samples.append(s)
    inner = tuple((r.lo, r.hi) for r in chain[1:-1])
    return SignSummary(SignKind.MIXED, lo, hi, roots=inner,
                       signs=tuple(sign(p(s)) for s in samples), samples=tuple(samples),
                       zero_at_lo=zero_lo, zero_at_hi=zero_hi)


# ---------------------------------------------------------------- piecewise


class PiecewisePolynomial:
    """Polynomial pieces on consecutive rational intervals.

    Piece ``i`` lives on ``[breakpoints[i], breakpoints[i+1]]``.  Evaluation at
    an interior breakpoint uses the right-hand piece.
    """

    __slots__ = ("breakpoints", "pieces")

    def __init__(self, breakpoints: Sequence[RationalLike], pieces: Sequence[Polynomial]):
        bps = tuple(Q(b) for b in breakpoints)
        pcs = tuple(p if isinstance(p, Polynomial) else Polynomial(p) for p in pieces)
        if len(bps) < 2:
            raise ValueError("need at least two breakpoints")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(pcs) != len(bps) - 1:
            raise ValueError("pieces count must equal breakpoints count - 1")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", pcs)

    def __setattr__(self, name, value):
        raise AttributeError("PiecewisePolynomial is immutable")

    @property
    def start(self) -> Fraction:
        return self.breakpoints[0]

    @property
    def end(self) -> Fraction:
        return self.breakpoints[-1]

    @property
    def degree(self):
        return max(p.degree for p in self.pieces)

    def piece_index(self, x: Fraction) -> int:
        x = Q(x)
        if not self.start <= x <= self.end:
            raise ValueError(f"{fmt(x)} outside [{fmt(self.start)}, {fmt(self.end)}]")
        for i in range(len(self.pieces) - 1, -1, -1):
            if x >= self.breakpoints[i]:
                return i
        return 0

    def __call__(self, x: RationalLike) -> Fraction:
        x = Q(x)
        return self.pieces[self.piece_index(x)](x)

    @property
    def continuity(self) -> tuple[bool, ...]:
        """Whether adjacent pieces agree at each interior breakpoint."""
        return tuple(self.pieces[i - 1](b) == self.pieces[i](b)
                     for i, b in enumerate(self.breakpoints[1:-1], start=1))

    def is_continuous(self) -> bool:
        return all(self.continuity)

    def derivative(self) -> "PiecewisePolynomial":
        return PiecewisePolynomial(self.breakpoints, [p.derivative() for p in self.pieces])

    def integral(self, lo: RationalLike, hi: RationalLike) -> Fraction:
        lo, hi = Q(lo), Q(hi)
        if lo > hi:
            raise ValueError(f"integration bounds reversed: {fmt(lo)} > {fmt(hi)}")
        if lo < self.start or hi > self.end:
            raise ValueError(f"[{fmt(lo)}, {fmt(hi)}] outside the breakpoint span")
        total = Fraction(0)
        for (a, b), p in zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces):
            u, v = max(a, lo), min(b, hi)
            if u < v:
                total += p.integral(u, v)
        return total

    def cumulative(self) -> "PiecewisePolynomial":
        """``x -> integral from start to x``, as a continuous piecewise polynomial."""
        out = []
        acc = Fraction(0)
        for (a, b), p in zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces):
            F = p.antiderivative()
            out.append(F + (acc - F(a)))
            acc += F(b) - F(a)
        return PiecewisePolynomial(self.breakpoints, out)

    def shift(self, d: RationalLike) -> "PiecewisePolynomial":
        """``x -> f(x + d)``, dropping any part left of 0 is the caller's job."""
        d = Q(d)
        return PiecewisePolynomial([b - d for b in self.breakpoints], [p.shift(d) for p in self.pieces])

    def scale_argument(self, r: RationalLike) -> "PiecewisePolynomial":
        r = Q(r)
        if r <= 0:
            raise ValueError("scale must be positive")
        return PiecewisePolynomial([b / r for b in self.breakpoints], [p.scale_argument(r) for p in self.pieces])

    def restrict(self, lo: RationalLike, hi: RationalLike) -> "PiecewisePolynomial":
        lo, hi = Q(lo), Q(hi)
        if not (self.start <= lo < hi <= self.end):
            raise ValueError("restriction outside span")
        bps = [lo] + [b for b in self.breakpoints if lo < b < hi] + [hi]
        pieces = [self.pieces[self.piece_index(a)] for a in bps[:-1]]
        return PiecewisePolynomial(bps, pieces)

    def _zip(self, other: "PiecewisePolynomial", op) -> "PiecewisePolynomial":
        if self.breakpoints != other.breakpoints:
            raise ValueError("piecewise operands must share breakpoints")
        return PiecewisePolynomial(self.breakpoints, [op(a, b) for a, b in zip(self.pieces, other.pieces)])

    def __add__(self, other):
        if isinstance(other, PiecewisePolynomial):
            return self._zip(other, lambda a, b: a + b)
        return PiecewisePolynomial(self.breakpoints, [p + other for p in self.pieces])

    __radd__ = __add__

    def __neg__(self):
        return PiecewisePolynomial(self.breakpoints, [-p for p in self.pieces])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PiecewisePolynomial):
            return self._zip(other, lambda a, b: a * b)
        return PiecewisePolynomial(self.breakpoints, [p * other for p in self.pieces])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PiecewisePolynomial):
            return NotImplemented
        return self.breakpoints == other.breakpoints and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.breakpoints, self.pieces))

    def __repr__(self):
        return f"PiecewisePolynomial({[fmt(b) for b in self.breakpoints]}, {list(self.pieces)!r})"

    def render(self, var: str = "x") -> str:
        parts = []
        for (a, b), p in zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces):
            parts.append(f"[{fmt(a)}, {fmt(b)}]: {p.render(var)}")
        return "; ".join(parts)


def piecewise_integral(pw: PiecewisePolynomial, lo: RationalLike, hi: RationalLike) -> Fraction:
    return pw.integral(lo, hi)


def interpolate(points: Sequence[tuple[RationalLike, RationalLike]]) -> Polynomial:
    """Lagrange interpolation through distinct rational abscissae."""
    pts = [(Q(x), Q(y)) for x, y in points]
    out = Polynomial()
    for i, (xi, yi) in enumerate(pts):
        term = Polynomial([yi])
        for j, (xj, _) in enumerate(pts):
            if j != i:
                term = term * Polynomial([-xj, 1]) / (xi - xj)
        out = out + term
    return out
