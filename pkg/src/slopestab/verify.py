"""Self-check against golden exact values of the worked examples.

Each golden entry names a computation in :data:`CHECKS`; its rendered
result must equal the stored string exactly.  Shipped scenarios with an
``expected_verdict`` are checked as well, under the tag ``scenarios``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

from . import catalog
from .bundles import BundleScenario, SheafData, bundle_verdict, mu_sheaf, subbundle_slope_gap, tilde_m
from .engine import (
    alphas_from_profile,
    futaki,
    futaki_at,
    margin_polynomial,
    mu_ideal,
    mu_quotient,
    normal_cone_weights,
    verdict,
    weight_sum_oracle,
)
from .exact import fmt
from .geometry import (
    divisor_quotient_slope,
    smooth_curve_profile,
    smooth_curve_verdict,
    surface_curve,
)
from .report import run_report
from .scenario import load_scenario, loads
from .toric import (
    donaldson_to_normal_cone,
    donaldson_weights,
    ehrhart_fit,
    toric_profile,
    toric_surface_seshadri,
)


def _pair(a, b) -> str:
    return f"({fmt(a)}, {fmt(b)})"


def _blp2(q):
    d = catalog.blp2_exceptional_data(q)
    return surface_curve(d, 1 - Fraction(q))


def _toric_futaki_match(name: str, c) -> str:
    P, Z = catalog.toric_cases()[name]
    prof = toric_profile(P, Z)
    a0, a1 = prof.a0(0), prof.a1(0)
    shifted = donaldson_to_normal_cone(donaldson_weights(P, Z, c), a0, a1, c)
    return fmt(futaki(a0, a1, shifted) - futaki_at(prof, c))


def _ehrhart(name: str, x) -> str:
    P, Z = catalog.toric_cases()[name]
    A, B, _ = ehrhart_fit(P, Z, x, range(4, 21))
    prof = toric_profile(P, Z)
    return f"{_pair(A, B)} vs {_pair(prof.a0(x), prof.a1(x))}"


def _bundle_equal_slopes() -> str:
    base = catalog.elliptic_bundle().E.base
    F = SheafData(1, 0, base)
    return fmt(subbundle_slope_gap(BundleScenario(SheafData(2, 0, base), (F,), 2), F))


CHECKS: dict[str, Callable[[], str]] = {
    "p2_point.mu": lambda: fmt(catalog.pn_point(2).mu),
    "p2_point.mu_ideal(1/2)": lambda: fmt(mu_ideal(catalog.pn_point(2), Fraction(1, 2))),
    "p2_point.mu_ideal(1)": lambda: fmt(mu_ideal(catalog.pn_point(2), 1)),
    "p2_point.mu_quotient(1)": lambda: fmt(mu_quotient(catalog.pn_point(2), 1)),
    "p2_point.weights(1)": lambda: _pair(*normal_cone_weights(catalog.pn_point(2), 1)),
    "p2_point.weight_oracle(1)": lambda: _pair(*weight_sum_oracle(
        *alphas_from_profile(catalog.pn_point(2)), 1, range(6, 13), 2)),
    "p2_point.futaki(1)": lambda: fmt(futaki_at(catalog.pn_point(2), 1)),
    "p2_point.margin": lambda: margin_polynomial(catalog.pn_point(2)).render("c"),
    "curve.mu_genus2_deg2": lambda: fmt(smooth_curve_profile(2, 2, 1).mu),
    "curve.p1_point": lambda: smooth_curve_verdict(0, 1, 1).describe(),
    "curve.p1_deg2_point": lambda: smooth_curve_verdict(0, 2, 1).describe(),
    "curve.genus2_d3": lambda: smooth_curve_verdict(2, 2, 3).describe(),
    "blp2.muX(1/2)": lambda: fmt(_blp2(Fraction(1, 2))[0]),
    "blp2.muQ_eps(1/2)": lambda: fmt(_blp2(Fraction(1, 2))[1]),
    "blp2.muX(1/10)": lambda: fmt(_blp2(Fraction(1, 10))[0]),
    "blp2.muQ_eps(1/10)": lambda: fmt(_blp2(Fraction(1, 10))[1]),
    "blp2.divisor_formula(1/2)": lambda: fmt(divisor_quotient_slope(
        catalog.blp2_exceptional_data(Fraction(1, 2)).as_divisor(), Fraction(1, 2))),
    "blp2.verdict(1/2)": lambda: verdict(catalog.blp2_exceptional(Fraction(1, 2))).kind.value,
    "minus2.muX(9/10)": lambda: fmt(surface_curve(catalog.minus_two_curve_data(Fraction(9, 10)),
                                                  Fraction(2, 5))[0]),
    "minus2.muQ(9/10)": lambda: fmt(surface_curve(catalog.minus_two_curve_data(Fraction(9, 10)),
                                                  Fraction(2, 5))[1]),
    "toric.p2_point.a0": lambda: toric_profile(*catalog.toric_cases()["p2_point"]).a0.render(),
    "toric.p2_point.a1": lambda: toric_profile(*catalog.toric_cases()["p2_point"]).a1.render(),
    "toric.blp2_half.epsilon": lambda: fmt(toric_surface_seshadri(*catalog.toric_cases()["blp2_half_E"])),
    "toric.minus2.epsilon": lambda: fmt(toric_surface_seshadri(*catalog.toric_cases()["minus_two_E1"])),
    "toric.p2_line.epsilon": lambda: fmt(toric_surface_seshadri(*catalog.toric_cases()["p2_line"])),
    "toric.p2_point.ehrhart(1/4)": lambda: _ehrhart("p2_point", Fraction(1, 4)),
    "toric.blp2_lattice.ehrhart(1/2)": lambda: _ehrhart("blp2_lattice_E", Fraction(1, 2)),
    "toric.donaldson_gap.p2_point(1/2)": lambda: _toric_futaki_match("p2_point", Fraction(1, 2)),
    "toric.donaldson_gap.blp2_half(1/2)": lambda: _toric_futaki_match("blp2_half_E", Fraction(1, 2)),
    "bundles.mu_E": lambda: fmt(mu_sheaf(catalog.elliptic_bundle().E)),
    "bundles.m_tilde": lambda: fmt(tilde_m(catalog.elliptic_bundle().E, 2)),
    "bundles.gap": lambda: fmt(subbundle_slope_gap(catalog.elliptic_bundle(),
                                                   catalog.elliptic_bundle().subsheaves[0].sheaf)),
    "bundles.verdict": lambda: bundle_verdict(catalog.elliptic_bundle()).aggregate.kind.value,
    "bundles.equal_slopes_gap": _bundle_equal_slopes,
}


@dataclass(frozen=True)
class CheckResult:
    tag: str
    name: str
    expected: str
    actual: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def line(self) -> str:
        if self.ok:
            return f"PASS [{self.tag}] {self.name} = {self.actual}"
        return f"FAIL [{self.tag}] {self.name}: expected {self.expected}, got {self.actual}"


def data_path(*parts) -> Path:
    return Path(str(resources.files("slopestab").joinpath("data", *parts)))


def shipped_scenarios() -> list[Path]:
    return sorted(data_path("scenarios").glob("*.scenario"))


def verify_paper(only: Optional[str] = None, golden_path=None) -> list[CheckResult]:
    golden = loads(Path(golden_path or data_path("golden.toml")).read_text(encoding="utf-8"))
    out = []
    for entry in golden.get("check", []):
        tag, name, expected = entry["tag"], entry["name"], entry["expected"]
        if only and tag != only:
            continue
        fn = CHECKS.get(name)
        try:
            actual = fn() if fn else "<no such check>"
        except Exception as exc:  # report, don't abort the suite
            actual = f"<error: {exc}>"
        out.append(CheckResult(tag, name, expected, actual))
    if only in (None, "scenarios"):
        for path in shipped_scenarios():
            scn = load_scenario(path)
            if scn.expected_verdict is None:
                continue
            out.append(CheckResult("scenarios", path.name, scn.expected_verdict,
                                   run_report(scn).verdict.kind.value))
    return out
