"""Scenario files: TOML with a ``kind`` tag and rationals written as "p/q" strings.

The schema is documented in ``docs/scenario-format.md``.  Parsing
validates every field before any computation and reports errors by
dotted field path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import tomli_w

from .bundles import BaseData, BundleScenario, SheafData, Subsheaf
from .engine import Seshadri, SeshadriKind, SlopeProfile
from .exact import PiecewisePolynomial, Polynomial, Q, fmt
from .geometry import CurveInNfoldData, DivisorData, SurfaceCurveData
from .toric import Polytope, ToricSubscheme

KINDS = ("SurfaceCurve", "Divisor", "CurveInNfold", "SmoothCurve", "Toric", "Bundle", "RawProfile")
VERDICT_NAMES = ("StableAgainst", "SemistableOnly", "StrictlyUnstable", "Inconclusive")


class ScenarioError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass(frozen=True)
class Scenario:
    kind: str
    payload: Any
    name: str = ""
    description: str = ""
    expected_verdict: Optional[str] = None
    c_values: tuple = ()
    raw: dict = field(default_factory=dict, compare=False, repr=False)


# ---------------------------------------------------------------- field readers


class _Reader:
    def __init__(self, table: dict, path: str):
        if not isinstance(table, dict):
            raise ScenarioError(path, "expected a table")
        self.t, self.path = table, path
        self.used = set()

    def _p(self, key):
        return f"{self.path}.{key}" if self.path else key

    def has(self, key) -> bool:
        return key in self.t

    def get(self, key, default=None, required=True):
        if key not in self.t:
            if required:
                raise ScenarioError(self._p(key), "missing required field")
            return default
        self.used.add(key)
        return self.t[key]

    def rational(self, key, required=True, default=None, positive=False) -> Fraction:
        v = self.get(key, default, required)
        if v is None:
            return None
        q = _rational(v, self._p(key))
        if positive and q <= 0:
            raise ScenarioError(self._p(key), f"must be positive, got {fmt(q)}")
        return q

    def integer(self, key, required=True, default=None, minimum=None) -> int:
        v = self.get(key, default, required)
        if v is None:
            return None
        if isinstance(v, bool) or not isinstance(v, int):
            raise ScenarioError(self._p(key), f"expected an integer, got {v!r}")
        if minimum is not None and v < minimum:
            raise ScenarioError(self._p(key), f"must be >= {minimum}")
        return v

    def flag(self, key, default=None):
        v = self.get(key, default, required=False)
        if v is not None and not isinstance(v, bool):
            raise ScenarioError(self._p(key), "expected true or false")
        return v

    def rationals(self, key, required=True) -> list:
        v = self.get(key, None, required)
        if v is None:
            return None
        if not isinstance(v, list):
            raise ScenarioError(self._p(key), "expected a list")
        return [_rational(a, f"{self._p(key)}[{i}]") for i, a in enumerate(v)]

    def sub(self, key, required=True) -> "_Reader":
        v = self.get(key, None, required)
        if v is None:
            return None
        return _Reader(v, self._p(key))

    def finish(self):
        extra = sorted(set(self.t) - self.used)
        if extra:
            raise ScenarioError(self._p(extra[0]), "unknown field")


def _rational(v, path) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise ScenarioError(path, f"rationals must be integers or \"p/q\" strings, got {v!r}")
    try:
        return Q(v)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ScenarioError(path, f"malformed rational {v!r} ({exc})") from None


def _seshadri(r: _Reader, key="epsilon") -> Seshadri:
    if not r.has(key):
        return Seshadri.unknown()
    v = r.get(key)
    path = r._p(key)
    if isinstance(v, (str, int)) and not isinstance(v, bool):
        value = _rational(v, path)
        kind = "exact"
    else:
        s = _Reader(v, path)
        kind = s.get("kind")
        value = s.rational("value", required=kind != "unknown")
        s.finish()
    try:
        if kind == "exact":
            return Seshadri.exact(value)
        if kind == "lower-bound":
            return Seshadri.lower_bound(value)
        if kind == "unknown":
            return Seshadri.unknown()
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from None
    raise ScenarioError(f"{path}.kind", f"expected exact, lower-bound or unknown, got {kind!r}")


def _carrier(r: _Reader, key: str):
    v = r.get(key)
    path = r._p(key)
    if isinstance(v, list):
        return Polynomial(_rational(a, f"{path}[{i}]") for i, a in enumerate(v))
    s = _Reader(v, path)
    bps = s.rationals("breakpoints")
    pieces_raw = s.get("pieces")
    if not isinstance(pieces_raw, list):
        raise ScenarioError(f"{path}.pieces", "expected a list of coefficient lists")
    pieces = []
    for i, piece in enumerate(pieces_raw):
        if not isinstance(piece, list):
            raise ScenarioError(f"{path}.pieces[{i}]", "expected a coefficient list")
        pieces.append(Polynomial(_rational(a, f"{path}.pieces[{i}][{j}]") for j, a in enumerate(piece)))
    s.finish()
    try:
        return PiecewisePolynomial(bps, pieces)
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from None


# ---------------------------------------------------------------- kinds


def _surface_curve(r: _Reader):
    return SurfaceCurveData(KL=r.rational("KL"), L2=r.rational("L2"), LZ=r.rational("LZ"),
                            KZ=r.rational("KZ"), Z2=r.rational("Z2"),
                            genus=r.integer("genus", required=False, minimum=0),
                            epsilon=_seshadri(r), saturates=r.flag("saturates"))


def _divisor(r: _Reader):
    return DivisorData(r.integer("n", minimum=2), tuple(r.rationals("LnjZj")),
                       tuple(r.rationals("LZK")), epsilon=_seshadri(r),
                       saturates=r.flag("saturates"))


def _curve_in_nfold(r: _Reader):
    data = CurveInNfoldData(r.integer("n", minimum=2), r.integer("genus", minimum=0),
                            r.rational("LZ"), r.rational("c1nu"), epsilon=_seshadri(r))
    return {"data": data, "mu_X": r.rational("mu_X", required=False),
            "saturates": r.flag("saturates")}


def _smooth_curve(r: _Reader):
    return {"genus": r.integer("genus", minimum=0), "degL": r.rational("degL", positive=True),
            "d": r.integer("d", minimum=1)}


def _toric(r: _Reader):
    if r.has("vertices") == r.has("halfspaces"):
        raise ScenarioError(r._p("vertices"), "give exactly one of vertices or halfspaces")
    if r.has("vertices"):
        raw = r.get("vertices")
        if not isinstance(raw, list):
            raise ScenarioError(r._p("vertices"), "expected a list of points")
        pts = []
        for i, v in enumerate(raw):
            if not isinstance(v, list) or len(v) != 2:
                raise ScenarioError(f"{r._p('vertices')}[{i}]", "expected a pair of rationals")
            pts.append(tuple(_rational(a, f"{r._p('vertices')}[{i}][{j}]") for j, a in enumerate(v)))
        P = Polytope.from_vertices(pts)
    else:
        raw = r.get("halfspaces")
        hs = []
        for i, h in enumerate(raw):
            s = _Reader(h, f"{r._p('halfspaces')}[{i}]")
            normal = s.get("normal")
            if not (isinstance(normal, list) and all(isinstance(a, int) and not isinstance(a, bool)
                                                       for a in normal)):
                raise ScenarioError(s._p("normal"), "expected a list of integers")
            hs.append((tuple(normal), s.rational("offset")))
            s.finish()
        P = Polytope.from_halfspaces(hs)
    faces = []
    raw_faces = r.get("faces")
    if not isinstance(raw_faces, list) or not raw_faces:
        raise ScenarioError(r._p("faces"), "expected a nonempty list of faces")
    for i, f in enumerate(raw_faces):
        s = _Reader(f, f"{r._p('faces')}[{i}]")
        m = s.integer("multiplicity", required=False, default=1, minimum=1)
        if s.has("facet"):
            idx = s.integer("facet", minimum=0)
            if idx >= len(P.halfspaces):
                raise ScenarioError(s._p("facet"), f"index out of range (P has {len(P.halfspaces)})")
            h = P.halfspaces[idx]
            faces.append((h.normal, h.offset, m))
        else:
            normal = s.get("normal")
            if not (isinstance(normal, list) and all(isinstance(a, int) and not isinstance(a, bool)
                                                       for a in normal)):
                raise ScenarioError(s._p("normal"), "expected a list of integers")
            faces.append((tuple(normal), s.rational("offset"), m))
        s.finish()
    Z = ToricSubscheme(tuple(faces), r.get("label", "", required=False))
    try:
        Z.validate(P)
    except ValueError as exc:
        raise ScenarioError(r._p("faces"), str(exc)) from None
    return {"polytope": P, "subscheme": Z}


def _bundle(r: _Reader):
    b = r.sub("base")
    base = BaseData.curve(b.integer("genus", minimum=0), b.rational("degree", positive=True))
    b.finish()
    e = r.sub("E")
    E = SheafData(e.integer("rank", minimum=1), e.rational("deg"), base, e.get("label", "", False))
    e.finish()
    subs = []
    raw = r.get("subsheaves")
    if not isinstance(raw, list):
        raise ScenarioError(r._p("subsheaves"), "expected a list")
    for i, f in enumerate(raw):
        s = _Reader(f, f"{r._p('subsheaves')}[{i}]")
        F = SheafData(s.integer("rank", minimum=1), s.rational("deg"), base, s.get("label", "", False))
        if F.rank >= E.rank:
            raise ScenarioError(s._p("rank"), "subsheaf rank must be below rank E")
        subs.append(Subsheaf(F, s.flag("direct_summand")))
        s.finish()
    return BundleScenario(E, tuple(subs), r.rational("m"))


def _raw_profile(r: _Reader):
    dim = r.integer("dim", minimum=1)
    a0, a1 = _carrier(r, "a0"), _carrier(r, "a1")
    return SlopeProfile(dim, a0, a1, _seshadri(r), r.flag("saturates"), r.get("label", "", False))


_PARSERS = {
    "SurfaceCurve": _surface_curve,
    "Divisor": _divisor,
    "CurveInNfold": _curve_in_nfold,
    "SmoothCurve": _smooth_curve,
    "Toric": _toric,
    "Bundle": _bundle,
    "RawProfile": _raw_profile,
}


def parse_scenario(doc: dict) -> Scenario:
    top = _Reader(doc, "")
    kind = top.get("kind")
    if kind not in KINDS:
        raise ScenarioError("kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    name = top.get("name", "", required=False)
    description = top.get("description", "", required=False)
    expected = top.get("expected_verdict", None, required=False)
    if expected is not None and expected not in VERDICT_NAMES:
        raise ScenarioError("expected_verdict", f"unknown verdict {expected!r}")
    c_values = tuple(top.rationals("c", required=False) or ())
    for i, c in enumerate(c_values):
        if c <= 0:
            raise ScenarioError(f"c[{i}]", "c must be positive")
    body = top.sub("payload")
    try:
        payload = _PARSERS[kind](body)
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError("payload", str(exc)) from None
    body.finish()
    top.finish()
    return Scenario(kind, payload, name, description, expected, c_values, raw=doc)


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError("", f"{path}: not valid TOML ({exc})") from None
    return parse_scenario(doc)


def canonical_input(scn: Scenario) -> dict:
    """The scenario document with rationals normalised, suitable for echoing."""

    def norm(v):
        if isinstance(v, dict):
            return {k: norm(v[k]) for k in sorted(v)}
        if isinstance(v, list):
            return [norm(a) for a in v]
        if isinstance(v, str) and "/" in v:
            try:
                return fmt(Q(v))
            except ValueError:
                return v
        return v

    return norm(scn.raw)


def dumps_input(scn: Scenario) -> str:
    return tomli_w.dumps(canonical_input(scn))


def loads(text: str) -> dict:
    return tomllib.loads(text)
