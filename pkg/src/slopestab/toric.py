"""Toric surfaces: polygons, level-set slicing, lattice counts and weights.

A polarised toric surface is a rational polygon ``P`` given by inward
primitive normals: ``u . p >= offset``.  A toric subscheme is a list of
nonnegative affine functionals ``f_i`` with multiplicities ``m_i``; its
ideal is spanned by the lattice points with ``sum f_i / m_i >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import product
from typing import Iterable, Optional, Sequence

from .engine import (
    Seshadri,
    SlopeProfile,
    Verdict,
    VerdictKind,
    WeightPair,
    futaki,
    normal_cone_weights,
    verdict,
)
from .exact import PiecewisePolynomial, Polynomial, Q, RationalLike, fmt, interpolate

Point = tuple  # (Fraction, Fraction)


def _lcm_den(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = out * v.denominator // math.gcd(out, v.denominator)
    return out


def primitive(vec: Sequence[RationalLike]) -> tuple[tuple[int, ...], Fraction]:
    """Primitive integer vector ``v`` and scale ``s > 0`` with ``v = s * vec``."""
    vec = [Q(a) for a in vec]
    if all(a == 0 for a in vec):
        raise ValueError("zero vector has no primitive direction")
    D = _lcm_den(vec)
    ints = [int(a * D) for a in vec]
    g = 0
    for a in ints:
        g = math.gcd(g, abs(a))
    return tuple(a // g for a in ints), Fraction(D, g)


def lattice_length(p: Point, q: Point) -> Fraction:
    """Length of segment pq measured in units of the primitive lattice vector along it."""
    d = (q[0] - p[0], q[1] - p[1])
    if d == (0, 0):
        return Fraction(0)
    _, s = primitive(d)
    return 1 / s


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Counter-clockwise hull without collinear points (monotone chain)."""
    pts = sorted(set((Q(a), Q(b)) for a, b in points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _angle_cmp(u, v) -> int:
    def half(w):
        return 0 if (w[1] > 0 or (w[1] == 0 and w[0] > 0)) else 1
    hu, hv = half(u), half(v)
    if hu != hv:
        return hu - hv
    cr = u[0] * v[1] - u[1] * v[0]
    return -1 if cr > 0 else (1 if cr < 0 else 0)


def _meet(u, a, v, b) -> Point:
    det = u[0] * v[1] - u[1] * v[0]
    if det == 0:
        raise ValueError("parallel lines do not meet")
    return ((a * v[1] - b * u[1]) / det, (u[0] * b - v[0] * a) / det)


@dataclass(frozen=True)
class Halfspace:
    normal: tuple
    offset: Fraction

    def value(self, p: Point) -> Fraction:
        return self.normal[0] * p[0] + self.normal[1] * p[1] - self.offset


@dataclass(frozen=True)
class Polytope:
    """A rational polygon with primitive inward normals.

    ``halfspaces`` lists the supporting halfspaces in counter-clockwise
    order of normal; any halfspace that is tight only at a vertex is kept
    as a ray of the fan.  Degenerate (empty, point, segment) polytopes only
    arise from slicing and have ``is_full_dimensional == False``.
    """

    vertices: tuple
    halfspaces: tuple
    dim: int = 2

    @classmethod
    def from_vertices(cls, vertices: Iterable[Sequence[RationalLike]]) -> "Polytope":
        pts = [tuple(Q(a) for a in v) for v in vertices]
        if any(len(p) != 2 for p in pts):
            raise ValueError("only dimension 2 is supported")
        hull = convex_hull(pts)
        if len(hull) < 3:
            raise ValueError("polytope must be full-dimensional")
        hs = []
        for i, p in enumerate(hull):
            q = hull[(i + 1) % len(hull)]
            normal, _ = primitive((p[1] - q[1], q[0] - p[0]))
            hs.append(Halfspace(normal, normal[0] * p[0] + normal[1] * p[1]))
        return cls._assemble(tuple(hull), hs)

    @classmethod
    def from_halfspaces(cls, halfspaces: Iterable, strict: bool = True) -> "Polytope":
        """From ``(normal, offset)`` pairs meaning ``normal . p >= offset``."""
        hs = []
        for normal, offset in halfspaces:
            normal = tuple(normal)
            if len(normal) != 2:
                raise ValueError("only dimension 2 is supported")
            if any(not isinstance(a, int) or isinstance(a, bool) for a in normal):
                raise ValueError(f"normal {normal} must be integral")
            prim, s = primitive(normal)
            if s != 1:
                raise ValueError(f"normal {normal} is not primitive")
            hs.append(Halfspace(prim, Q(offset)))
        if len(hs) < 3 and strict:
            raise ValueError("need at least three halfspaces")
        cand = []
        for i in range(len(hs)):
            for j in range(i + 1, len(hs)):
                try:
                    p = _meet(hs[i].normal, hs[i].offset, hs[j].normal, hs[j].offset)
                except ValueError:
                    continue
                if all(h.value(p) >= 0 for h in hs):
                    cand.append(p)
        hull = convex_hull(cand)
        if strict:
            if len(hull) < 3:
                raise ValueError("halfspaces do not cut out a full-dimensional polygon")
            if not cls._bounded(hs):
                raise ValueError("polytope is unbounded")
        return cls._assemble(tuple(hull), hs)

    @staticmethod
    def _bounded(hs) -> bool:
        normals = sorted({h.normal for h in hs}, key=cmp_to_key(_angle_cmp))
        for i, u in enumerate(normals):
            v = normals[(i + 1) % len(normals)]
            if len(normals) < 3 or u[0] * v[1] - u[1] * v[0] <= 0:
                return False
        return True

    @classmethod
    def _assemble(cls, hull, hs) -> "Polytope":
        if len(hull) >= 3:
            tight = {}
            for h in hs:
                if any(h.value(p) == 0 for p in hull):
                    if h.normal in tight and tight[h.normal] != h.offset:
                        raise ValueError("inconsistent halfspaces")
                    tight[h.normal] = h.offset
            hs = [Halfspace(u, o) for u, o in tight.items()]
            hs.sort(key=lambda h: cmp_to_key(_angle_cmp)(h.normal))
        return cls(tuple(hull), tuple(hs))

    # -- geometry

    @property
    def is_full_dimensional(self) -> bool:
        return len(self.vertices) >= 3

    def facets(self) -> list[tuple[int, Halfspace]]:
        """(index into halfspaces, halfspace) for halfspaces carrying an edge."""
        return [(i, h) for i, h in enumerate(self.halfspaces)
                if sum(1 for p in self.vertices if h.value(p) == 0) >= 2]

    def edges(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        if len(vs) < 2:
            return []
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def area(self) -> Fraction:
        vs = self.vertices
        if len(vs) < 3:
            return Fraction(0)
        return sum((_cross(vs[0], vs[i], vs[i + 1]) for i in range(1, len(vs) - 1)),
                   Fraction(0)) / 2

    def lattice_perimeter(self) -> Fraction:
        """Sum of lattice lengths of the boundary edges (a segment counts twice)."""
        return sum((lattice_length(p, q) for p, q in self.edges()), Fraction(0))

    def contains(self, p: Point) -> bool:
        return all(h.value(p) >= 0 for h in self.halfspaces)

    def dilate(self, k: RationalLike) -> "Polytope":
        k = Q(k)
        return Polytope(tuple((k * a, k * b) for a, b in self.vertices),
                        tuple(Halfspace(h.normal, k * h.offset) for h in self.halfspaces))

    def integrate_affine(self, w: Sequence, w0: RationalLike) -> Fraction:
        """Integral of ``w . p - w0`` over the polygon."""
        w0 = Q(w0)
        vs = self.vertices
        total = Fraction(0)
        for i in range(1, len(vs) - 1):
            tri = (vs[0], vs[i], vs[i + 1])
            mean = sum((w[0] * p[0] + w[1] * p[1] for p in tri), Fraction(0)) / 3 - w0
            total += _cross(*tri) / 2 * mean
        return total


def lattice_count(P: Polytope, k: int = 1) -> int:
    """Number of lattice points in ``k P``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if not P.vertices:
        return 0
    kP = P.dilate(k)
    xs = [v[0] for v in kP.vertices]
    count = 0
    for X in range(math.ceil(min(xs)), math.floor(max(xs)) + 1):
        lo, hi = None, None
        for h in kP.halfspaces:
            a, b = h.normal
            rest = h.offset - a * X
            if b > 0:
                bound = rest / b
                lo = bound if lo is None else max(lo, bound)
            elif b < 0:
                bound = rest / b
                hi = bound if hi is None else min(hi, bound)
            elif rest > 0:
                lo, hi = Fraction(1), Fraction(0)
                break
        if lo is None or hi is None:
            # vertical line through a degenerate polytope: use its vertices
            ys = [v[1] for v in kP.vertices if v[0] == X]
            if not ys:
                continue
            lo, hi = min(ys), max(ys)
        if lo <= hi:
            count += max(0, math.floor(hi) - math.ceil(lo) + 1)
    return count


# ---------------------------------------------------------------- subschemes


@dataclass(frozen=True)
class ToricSubscheme:
    """Faces ``(normal, offset, multiplicity)`` with ``f(p) = normal . p - offset``."""

    faces: tuple
    label: str = ""

    def __post_init__(self):
        if not self.faces:
            raise ValueError("a toric subscheme needs at least one face")
        clean = []
        for normal, offset, m in self.faces:
            normal = tuple(int(a) for a in normal)
            prim, s = primitive(normal)
            if s != 1:
                raise ValueError(f"conormal {normal} is not primitive")
            if int(m) != m or m < 1:
                raise ValueError("multiplicities must be positive integers")
            clean.append((normal, Q(offset), int(m)))
        object.__setattr__(self, "faces", tuple(clean))

    @classmethod
    def from_facets(cls, P: Polytope, multiplicities: dict, label: str = "") -> "ToricSubscheme":
        """Faces given by halfspace indices of ``P``."""
        faces = []
        for idx in sorted(multiplicities):
            if not 0 <= idx < len(P.halfspaces):
                raise ValueError(f"facet index {idx} out of range")
            h = P.halfspaces[idx]
            faces.append((h.normal, h.offset, multiplicities[idx]))
        return cls(tuple(faces), label)

    @property
    def level(self) -> tuple[tuple[Fraction, Fraction], Fraction]:
        """``(w, w0)`` with ``g(p) = sum f_i(p)/m_i = w . p - w0``."""
        w = [Fraction(0), Fraction(0)]
        w0 = Fraction(0)
        for normal, offset, m in self.faces:
            w[0] += Fraction(normal[0], m)
            w[1] += Fraction(normal[1], m)
            w0 += offset / m
        return (w[0], w[1]), w0

    def g(self, p: Point) -> Fraction:
        (a, b), w0 = self.level
        return a * p[0] + b * p[1] - w0

    def validate(self, P: Polytope) -> None:
        for normal, offset, _ in self.faces:
            vals = [normal[0] * p[0] + normal[1] * p[1] - offset for p in P.vertices]
            if min(vals) != 0:
                raise ValueError(f"functional {normal} . p - {fmt(offset)} must be >= 0 on P "
                                 "and vanish on a face")
        if min(self.g(p) for p in P.vertices) != 0:
            raise ValueError("the faces have no common point on P (empty subscheme)")
        (a, b), _ = self.level
        if a == 0 and b == 0:
            raise ValueError("degenerate level function")

    def is_divisorial(self, P: Polytope) -> bool:
        (a, b), _ = self.level
        W, _ = primitive((a, b))
        return any(h.normal == W for _, h in P.facets())

    def describe(self) -> str:
        if self.label:
            return self.label
        parts = [f"({n[0]},{n[1]}).p>={fmt(o)} x{m}" for n, o, m in self.faces]
        return " + ".join(parts)


def _cut(Z: ToricSubscheme, x: Fraction) -> Halfspace:
    (a, b), w0 = Z.level
    W, s = primitive((a, b))
    return Halfspace(W, s * (w0 + x))


def breakpoints(P: Polytope, Z: ToricSubscheme) -> list[Fraction]:
    return sorted({Z.g(p) for p in P.vertices})


def slice(P: Polytope, Z: ToricSubscheme, x: RationalLike) -> Polytope:
    """``P_x = {p in P : g(p) >= x}``."""
    x = Q(x)
    Z.validate(P)
    top = max(Z.g(p) for p in P.vertices)
    if not 0 <= x <= top:
        raise ValueError(f"x = {fmt(x)} outside [0, {fmt(top)}]")
    if x == 0:
        return P
    h = _cut(Z, x)
    return Polytope.from_halfspaces([(g.normal, g.offset) for g in P.halfspaces]
                                    + [(h.normal, h.offset)], strict=False)


def _require_surface(P: Polytope):
    if P.dim != 2:
        raise ValueError(f"dimension {P.dim} not supported; only toric surfaces")


# ---------------------------------------------------------------- Seshadri constants


def toric_seshadri(P: Polytope, Z: ToricSubscheme) -> Fraction:
    """Largest c with ``L(-cE)`` nef on the normalised blow-up along Z.

    The fan of the blow-up is that of P plus the ray of the level function.
    ``L(-cE)`` is nef iff every edge of the moved polygon keeps a
    nonnegative signed lattice length; each length is affine in c.
    """
    _require_surface(P)
    Z.validate(P)
    cut = _cut(Z, Fraction(0))
    (a, b), _ = Z.level
    _, s = primitive((a, b))
    rays = {h.normal: (h.offset, Fraction(0)) for h in P.halfspaces}
    base = rays.get(cut.normal, (cut.offset, Fraction(0)))[0]
    if base != cut.offset:
        raise RuntimeError("internal error: level ray offset mismatch")
    rays[cut.normal] = (cut.offset, s)
    order = sorted(rays, key=cmp_to_key(_angle_cmp))
    N = len(order)

    def corner(i, j):
        u, v = order[i], order[j]
        (ou, ku), (ov, kv) = rays[u], rays[v]
        p0 = _meet(u, ou, v, ov)
        p1 = _meet(u, ou + ku, v, ov + kv)
        return p0, (p1[0] - p0[0], p1[1] - p0[1])

    eps = None
    for j in range(N):
        u = order[j]
        d = (u[1], -u[0])
        q0, q1 = corner((j - 1) % N, j)
        r0, r1 = corner(j, (j + 1) % N)
        dd = d[0] * d[0] + d[1] * d[1]
        s0 = ((r0[0] - q0[0]) * d[0] + (r0[1] - q0[1]) * d[1]) / dd
        s1 = ((r1[0] - q1[0]) * d[0] + (r1[1] - q1[1]) * d[1]) / dd
        if s0 < 0:
            raise ValueError("polygon is not compatible with its fan (L not nef)")
        if s1 < 0:
            root = -s0 / s1
            eps = root if eps is None else min(eps, root)
    if eps is None or eps <= 0:
        raise ValueError("no positive c keeps L(-cE) nef")
    return eps


def toric_surface_seshadri(P: Polytope, Z: ToricSubscheme) -> Fraction:
    """Seshadri constant of an invariant divisor ``m D`` on a toric surface."""
    Z.validate(P)
    if not Z.is_divisorial(P):
        raise ValueError("toric_surface_seshadri needs a divisorial subscheme (a single facet)")
    return toric_seshadri(P, Z)


# ---------------------------------------------------------------- profiles and weights


def toric_profile(P: Polytope, Z: ToricSubscheme, name: str = "") -> SlopeProfile:
    """``a0(x) = vol(P_x)`` and ``a1(x) = vol(boundary P_x) / 2`` with the exact Seshadri constant.

    On a toric variety a nef line bundle is globally generated, so sections
    saturate at c = epsilon.
    """
    _require_surface(P)
    Z.validate(P)
    bps = breakpoints(P, Z)
    pieces0, pieces1 = [], []
    for lo, hi in zip(bps, bps[1:]):
        xs = [lo + (hi - lo) * Fraction(i, 4) for i in (1, 2, 3)]
        slices = [slice(P, Z, x) for x in xs]
        pieces0.append(interpolate([(x, s.area()) for x, s in zip(xs, slices)]))
        pieces1.append(interpolate([(x, s.lattice_perimeter() / 2) for x, s in zip(xs, slices)]))
    a0 = PiecewisePolynomial(bps, pieces0)
    a1 = PiecewisePolynomial(bps, pieces1)
    if a0(0) != P.area():
        raise RuntimeError("internal error: a0(0) differs from the area of P")
    return SlopeProfile(2, a0, a1, Seshadri.exact(toric_seshadri(P, Z)), True,
                        name or Z.describe())


def _segment_integral_min(p, q, Z: ToricSubscheme, c: Fraction) -> Fraction:
    """Integral of ``min(c, g)`` along pq with the lattice-normalised measure."""
    ell = lattice_length(p, q)
    if ell == 0:
        return Fraction(0)
    gp, gq = Z.g(p), Z.g(q)
    if gp <= c and gq <= c:
        return ell * (gp + gq) / 2
    if gp >= c and gq >= c:
        return ell * c
    # split where g = c
    t = (c - gp) / (gq - gp)
    below, above = (t, 1 - t) if gp < c else (1 - t, t)
    low_end = min(gp, gq)
    return ell * (below * (low_end + c) / 2 + above * c)


def donaldson_weights(P: Polytope, Z: ToricSubscheme, c: RationalLike) -> WeightPair:
    """``(-int_P f, -1/2 int_{dP} f)`` for ``f = min(c, g)``.

    These use the opposite orientation of the C*-action from
    :func:`normal_cone_weights`; see :func:`donaldson_to_normal_cone`.
    """
    _require_surface(P)
    Z.validate(P)
    c = Q(c)
    if c <= 0:
        raise ValueError("c must be positive")
    (a, b), w0 = Z.level
    top = max(Z.g(p) for p in P.vertices)
    if c >= top:
        body = P.integrate_affine((a, b), w0)
    else:
        upper = slice(P, Z, c)
        cut = _cut(Z, c)
        lower = Polytope.from_halfspaces(
            [(h.normal, h.offset) for h in P.halfspaces]
            + [(tuple(-a for a in cut.normal), -cut.offset)], strict=False)
        body = lower.integrate_affine((a, b), w0) + c * upper.area()
    boundary = sum((_segment_integral_min(p, q, Z, c) for p, q in P.edges()), Fraction(0))
    return WeightPair(-body, -boundary / 2)


def donaldson_to_normal_cone(w: WeightPair, a0: RationalLike, a1: RationalLike,
                             c: RationalLike) -> WeightPair:
    """Reverse the action and add ``(c a0, c a1)``; the shift cancels in the Futaki invariant."""
    c = Q(c)
    return WeightPair(-w.b0 - c * Q(a0), -w.b1 - c * Q(a1))


def ehrhart_fit(P: Polytope, Z: ToricSubscheme, x: RationalLike,
                ks: Iterable[int]) -> tuple[Fraction, Fraction, Fraction]:
    """Fit ``#(k P_x) = A k^2 + B k + C`` over the admissible k and return ``(A, B, C)``.

    Only k with ``x k`` integral are used; the remaining counts must agree
    with the fitted quadratic, which holds when ``k P_x`` is a lattice polygon.
    """
    x = Q(x)
    S = slice(P, Z, x)
    pts = [(k, lattice_count(S, k)) for k in sorted(set(ks)) if (x * k).denominator == 1]
    if len(pts) < 4:
        raise ValueError("need at least four admissible k values")
    fit = interpolate(pts[:3])
    for k, n in pts[3:]:
        if fit(k) != n:
            raise ValueError(f"lattice counts at x = {fmt(x)} are not a quadratic in k")
    return fit.coeff(2), fit.coeff(1), fit.coeff(0)


# ---------------------------------------------------------------- scan


@dataclass(frozen=True)
class ScanHit:
    subscheme: ToricSubscheme
    key: tuple
    c: Fraction
    futaki: Fraction
    epsilon: Fraction
    verdict: Verdict


def scan_candidates(P: Polytope, budget: int) -> list[tuple[tuple, ToricSubscheme]]:
    """Single facets and adjacent facet pairs with multiplicities up to ``budget``."""
    facets = P.facets()
    out = []
    for m in range(1, budget + 1):
        for i, _ in facets:
            out.append((("facet", (i,), (m,)), ToricSubscheme.from_facets(P, {i: m})))
    vertex_pairs = []
    for v in P.vertices:
        idx = tuple(i for i, h in facets if h.value(v) == 0)
        if len(idx) == 2:
            vertex_pairs.append(idx)
    for i, j in sorted(set(vertex_pairs)):
        for mi, mj in product(range(1, budget + 1), repeat=2):
            out.append((("point", (i, j), (mi, mj)), ToricSubscheme.from_facets(P, {i: mi, j: mj})))
    return out


def destabilizer_scan(P: Polytope, budget: int, grid: int = 16) -> list[ScanHit]:
    """Rank candidate subschemes by their most negative Futaki invariant.

    Each candidate is evaluated at ``c = eps j / grid`` for j = 1..grid, and
    at the verdict's witness when one exists.  Ties break on the candidate key.
    """
    _require_surface(P)
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    hits = []
    for key, Z in scan_candidates(P, budget):
        prof = toric_profile(P, Z)
        eps = prof.seshadri.certified
        v = verdict(prof)
        cs = [eps * j / grid for j in range(1, grid + 1)]
        if v.kind is VerdictKind.STRICTLY_UNSTABLE:
            lo, hi = v.witness
            cs.append((lo + hi) / 2)
        a0, a1 = prof.a0(0), prof.a1(0)
        best = min(((futaki(a0, a1, normal_cone_weights(prof, c)), c) for c in cs),
                   key=lambda t: (t[0], t[1]))
        hits.append(ScanHit(Z, key, best[1], best[0], eps, v))
    hits.sort(key=lambda h: (h.futaki, h.key))
    return hits
