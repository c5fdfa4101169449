"""Deterministic reports and CSV tables for scenarios.

Reports are TOML documents: an ``[input]`` table echoing the scenario
(normalised, so it re-parses to the same scenario) and a ``[result]``
table of exact values rendered as "p/q" strings.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

import tomli_w

from .bundles import bundle_verdict, mu_sheaf, projbundle_a0a1, subbundle_profile, tilde_m
from .engine import (
    SeshadriKind,
    SlopeProfile,
    Verdict,
    VerdictKind,
    alpha_margin,
    classify_margin,
    futaki,
    futaki_at,
    margin_polynomial,
    mu_ideal,
    mu_quotient,
    normal_cone_weights,
    verdict,
)
from .exact import fmt
from .geometry import (
    curve_in_nfold_alphas,
    curve_in_nfold_quotient_slope,
    divisor_profile,
    divisor_quotient_slope,
    smooth_curve_profile,
    surface_curve,
    surface_profile,
)
from .scenario import Scenario, canonical_input
from .toric import donaldson_to_normal_cone, donaldson_weights, toric_profile

EXIT_CODES = {
    VerdictKind.STABLE_AGAINST: 0,
    VerdictKind.SEMISTABLE_ONLY: 0,
    VerdictKind.STRICTLY_UNSTABLE: 2,
    VerdictKind.INCONCLUSIVE: 3,
}
EXIT_INPUT_ERROR = 1


def exit_code(v: Verdict) -> int:
    return EXIT_CODES[v.kind]


def approx(q: Fraction, digits: int = 12) -> str:
    """Decimal rendering with ``digits`` significant digits (display only)."""
    with localcontext() as ctx:
        ctx.prec = digits
        value = Decimal(q.numerator) / Decimal(q.denominator)
    return format(value, f".{digits}g")


@dataclass
class Report:
    scenario: Scenario
    verdict: Verdict
    result: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return exit_code(self.verdict)

    def render(self, footer_timestamp: bool = False) -> str:
        doc = {"input": canonical_input(self.scenario), "result": self.result}
        text = "# slopestab report\n" + tomli_w.dumps(doc)
        if footer_timestamp:
            stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
            text += f"# generated {stamp}\n"
        return text


def _verdict_fields(v: Verdict) -> dict:
    out = {"verdict": v.describe(), "verdict_kind": v.kind.value}
    if v.witness is not None:
        out["witness_interval"] = [fmt(v.witness[0]), fmt(v.witness[1])]
    if v.equality_at is not None:
        out["equality_at"] = fmt(v.equality_at)
    elif v.equality_interval is not None:
        out["equality_interval"] = [fmt(a) for a in v.equality_interval]
    if v.tested is not None:
        out["certified_interval"] = f"(0, {fmt(v.tested[1])}]"
    if v.reason:
        out["reason"] = v.reason
    return out


def _default_cs(scn: Scenario, eps) -> tuple:
    if scn.c_values:
        return scn.c_values
    return (eps,) if eps is not None else ()


def _profile_evaluations(profile: SlopeProfile, cs) -> list:
    rows = []
    N = margin_polynomial(profile)
    for c in cs:
        row = {"c": fmt(c)}
        try:
            w = normal_cone_weights(profile, c)
            row.update(mu_ideal=fmt(mu_ideal(profile, c)), mu_quotient=fmt(mu_quotient(profile, c)),
                       margin=fmt(N(c)), b0=fmt(w.b0), b1=fmt(w.b1),
                       futaki=fmt(futaki(profile.a0(0), profile.a1(0), w)))
        except ValueError as exc:
            row["error"] = str(exc)
        rows.append(row)
    return rows


def _profile_report(scn: Scenario, profile: SlopeProfile, eps_source: str, extra=None) -> Report:
    v = verdict(profile)
    eps = profile.seshadri.certified
    res = {"kind": scn.kind, "name": scn.name, "mu_X": fmt(profile.mu),
           "epsilon": str(profile.seshadri), "epsilon_source": eps_source,
           "saturates_at_epsilon": ("unknown" if profile.saturates_at_epsilon is None
                                    else str(profile.saturates_at_epsilon).lower()),
           "a0": profile.a0.render(), "a1": profile.a1.render(),
           "margin_polynomial": margin_polynomial(profile).render("c")}
    res.update(_verdict_fields(v))
    res["evaluations"] = _profile_evaluations(profile, _default_cs(scn, eps))
    if extra:
        res.update(extra)
    return Report(scn, v, res)


def scenario_profile(scn: Scenario) -> SlopeProfile:
    """The slope profile behind a scenario (bundle scenarios use their first subsheaf)."""
    p = scn.payload
    if scn.kind == "SurfaceCurve":
        return surface_profile(p, scn.name)
    if scn.kind == "Divisor":
        return divisor_profile(p, scn.name)
    if scn.kind == "SmoothCurve":
        return smooth_curve_profile(p["genus"], p["degL"], p["d"])
    if scn.kind == "Toric":
        return toric_profile(p["polytope"], p["subscheme"], scn.name)
    if scn.kind == "RawProfile":
        return p
    if scn.kind == "Bundle":
        if not p.subsheaves:
            raise ValueError("bundle scenario lists no subsheaves")
        return subbundle_profile(p, p.subsheaves[0].sheaf)
    raise ValueError(f"{scn.kind} scenarios carry no full slope profile")


def run_report(scn: Scenario) -> Report:
    p = scn.payload
    if scn.kind == "SurfaceCurve":
        profile = surface_profile(p, scn.name)
        rep = _profile_report(scn, profile, "user-supplied")
        for row in rep.result["evaluations"]:
            if "error" not in row:
                mu_x, mu_q = surface_curve(p, Fraction(row["c"]))
                if fmt(mu_q) != row["mu_quotient"] or fmt(mu_x) != rep.result["mu_X"]:
                    raise RuntimeError("internal error: surface formula disagrees with the profile")
        if p.genus is not None and not p.adjunction_holds:
            rep.result["warning"] = "adjunction 2g - 2 = KZ + Z2 fails for the supplied data"
        return rep
    if scn.kind == "Divisor":
        profile = divisor_profile(p, scn.name)
        rep = _profile_report(scn, profile, "user-supplied")
        for row in rep.result["evaluations"]:
            if "error" not in row and fmt(divisor_quotient_slope(p, Fraction(row["c"]))) != row["mu_quotient"]:
                raise RuntimeError("internal error: divisor formula disagrees with the profile")
        return rep
    if scn.kind == "SmoothCurve":
        profile = smooth_curve_profile(p["genus"], p["degL"], p["d"])
        return _profile_report(scn, profile, "formula: deg L / d")
    if scn.kind == "RawProfile":
        return _profile_report(scn, p, "user-supplied")
    if scn.kind == "Toric":
        return _toric_report(scn)
    if scn.kind == "CurveInNfold":
        return _curve_in_nfold_report(scn)
    if scn.kind == "Bundle":
        return _bundle_report(scn)
    raise ValueError(f"unsupported kind {scn.kind}")


def _toric_report(scn: Scenario) -> Report:
    P, Z = scn.payload["polytope"], scn.payload["subscheme"]
    profile = toric_profile(P, Z, scn.name)
    rep = _profile_report(scn, profile, "computed: toric nef test on the blown-up fan")
    rep.result["vertices"] = [[fmt(a), fmt(b)] for a, b in P.vertices]
    rep.result["breakpoints"] = [fmt(b) for b in profile.a0.breakpoints]
    a0, a1 = profile.a0(0), profile.a1(0)
    for row in rep.result["evaluations"]:
        if "error" in row:
            continue
        c = Fraction(row["c"])
        wd = donaldson_weights(P, Z, c)
        shifted = donaldson_to_normal_cone(wd, a0, a1, c)
        row["donaldson_b0"], row["donaldson_b1"] = fmt(wd.b0), fmt(wd.b1)
        row["futaki_from_donaldson_shifted"] = fmt(futaki(a0, a1, shifted))
    rep.result["note"] = ("weights from the level function min(c, g); a rational g is used "
                          "as given rather than scaled to an integral one")
    return rep


def _curve_in_nfold_report(scn: Scenario) -> Report:
    d, mu_X, sat = scn.payload["data"], scn.payload["mu_X"], scn.payload["saturates"]
    alpha1, alpha2 = curve_in_nfold_alphas(d)
    eps = d.epsilon.certified
    res = {"kind": scn.kind, "name": scn.name, "epsilon": str(d.epsilon),
           "epsilon_source": "user-supplied", "alpha1": alpha1.render(), "alpha2": alpha2.render()}
    if mu_X is None:
        v = Verdict.inconclusive("mu_X not supplied; only quotient slopes reported")
    else:
        res["mu_X"] = fmt(mu_X)
        N = alpha_margin(alpha1, alpha2, mu_X)
        res["margin_polynomial"] = N.render("c")
        v = classify_margin(N, d.epsilon, sat)
    res.update(_verdict_fields(v))
    rows = []
    for c in _default_cs(scn, eps):
        try:
            rows.append({"c": fmt(c), "mu_quotient": fmt(curve_in_nfold_quotient_slope(d, c))})
        except ValueError as exc:
            rows.append({"c": fmt(c), "error": str(exc)})
    res["evaluations"] = rows
    return Report(scn, v, res)


def _bundle_report(scn: Scenario) -> Report:
    b = scn.payload
    out = bundle_verdict(b)
    a0, a1 = projbundle_a0a1(b.E, b.m)
    res = {"kind": scn.kind, "name": scn.name, "mu_E": fmt(mu_sheaf(b.E)),
           "m_tilde": fmt(tilde_m(b.E, b.m)), "a0": fmt(a0), "a1": fmt(a1),
           "mu_X": fmt(a1 / a0), "epsilon": "exact 1", "epsilon_source": "hypothesis: " + out.hypothesis}
    res.update(_verdict_fields(out.aggregate))
    res["subsheaves"] = [{"rank": r.sheaf.rank, "deg": fmt(r.sheaf.deg), "mu_F": fmt(mu_sheaf(r.sheaf)),
                          "gap": fmt(r.gap), "verdict": r.verdict.describe(), "note": r.note}
                         for r in out.per_subsheaf]
    return Report(scn, out.aggregate, res)


# ---------------------------------------------------------------- CSV

CSV_COLUMNS = ("c", "mu_ideal", "mu_quotient", "mu_X", "margin", "futaki",
               "mu_ideal_approx", "mu_quotient_approx", "margin_approx", "futaki_approx", "note")


def emit_profile_csv(scn: Scenario, grid) -> str:
    """One row per grid point; exact columns first, 12-digit approximations after."""
    profile = scenario_profile(scn)
    N = margin_polynomial(profile)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    mu = profile.mu
    for c in grid:
        try:
            mi, mq, n, f1 = (mu_ideal(profile, c), mu_quotient(profile, c), N(c),
                             futaki_at(profile, c))
        except ValueError as exc:
            w.writerow([fmt(c), "", "", fmt(mu), "", "", "", "", "", "", f"invalid: {exc}"])
            continue
        w.writerow([fmt(c), fmt(mi), fmt(mq), fmt(mu), fmt(n), fmt(f1),
                    approx(mi), approx(mq), approx(n), approx(f1), ""])
    return buf.getvalue()
