"""Command-line front end.

    slopestab run SCENARIO [--footer-timestamps] [-o OUT]
    slopestab verify-paper [--only TAG] [--golden FILE]
    slopestab csv SCENARIO [--grid "1/4,1/2,1"]
    slopestab scan SCENARIO [--budget N] [--footer-timestamps]

Exit codes: 0 for StableAgainst or SemistableOnly, 2 for StrictlyUnstable,
3 for Inconclusive, 1 for any input error.  The scenario format is
described in docs/scenario-format.md.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional, Sequence

import tomli_w

from .exact import Q, fmt
from .report import EXIT_INPUT_ERROR, emit_profile_csv, exit_code, run_report, scenario_profile
from .scenario import ScenarioError, canonical_input, load_scenario
from .toric import destabilizer_scan
from .verify import verify_paper


def _parse_grid(text: str) -> list[Fraction]:
    out = []
    for i, tok in enumerate(t.strip() for t in text.split(",")):
        if not tok:
            continue
        try:
            out.append(Q(tok))
        except (ValueError, ZeroDivisionError) as exc:
            raise ScenarioError(f"--grid[{i}]", f"malformed rational {tok!r} ({exc})") from None
    return out


def _default_grid(scn, points: int = 8) -> list[Fraction]:
    eps = scenario_profile(scn).seshadri.certified
    if eps is None:
        raise ScenarioError("epsilon", "no certified Seshadri bound; pass --grid explicitly")
    return [eps * j / points for j in range(1, points + 1)]


def _footer() -> str:
    return f"# generated {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n"


def cmd_run(args) -> int:
    rep = run_report(load_scenario(args.scenario))
    text = rep.render(footer_timestamp=args.footer_timestamps)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return rep.exit_code


def cmd_verify(args) -> int:
    results = verify_paper(args.only, args.golden)
    for r in results:
        print(r.line())
    failed = sum(not r.ok for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_csv(args) -> int:
    scn = load_scenario(args.scenario)
    grid = _parse_grid(args.grid) if args.grid is not None else _default_grid(scn)
    sys.stdout.write(emit_profile_csv(scn, grid))
    return 0


def cmd_scan(args) -> int:
    scn = load_scenario(args.scenario)
    if scn.kind != "Toric":
        raise ScenarioError("kind", "scan needs a Toric scenario")
    if args.budget < 0:
        raise ScenarioError("--budget", "must be nonnegative")
    hits = destabilizer_scan(scn.payload["polytope"], args.budget)
    ranking = [{"rank": i + 1, "candidate": f"{h.key[0]} {list(h.key[1])} multiplicities {list(h.key[2])}",
                "subscheme": h.subscheme.describe(), "epsilon": fmt(h.epsilon), "c": fmt(h.c),
                "futaki": fmt(h.futaki), "verdict": h.verdict.describe()}
               for i, h in enumerate(hits)]
    doc = {"input": canonical_input(scn), "scan": {"budget": args.budget, "candidates": len(hits)}}
    if ranking:
        doc["ranking"] = ranking
    text = "# slopestab scan\n" + tomli_w.dumps(doc)
    if args.footer_timestamps:
        text += _footer()
    sys.stdout.write(text)
    return exit_code(hits[0].verdict) if hits else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slopestab", description="Exact slope stability checks.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evaluate a scenario and print a report")
    r.add_argument("scenario")
    r.add_argument("-o", "--output")
    r.add_argument("--footer-timestamps", action="store_true")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify-paper", help="check the worked examples against golden values")
    v.add_argument("--only", metavar="TAG")
    v.add_argument("--golden", metavar="FILE")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("csv", help="tabulate slopes and margin over a grid of c")
    c.add_argument("scenario")
    c.add_argument("--grid", help='comma-separated rationals, e.g. "1/4,1/2,1"')
    c.set_defaults(func=cmd_csv)

    s = sub.add_parser("scan", help="rank torus-invariant subschemes of a toric surface")
    s.add_argument("scenario")
    s.add_argument("--budget", type=int, default=2, help="maximum multiplicity (0 scans nothing)")
    s.add_argument("--footer-timestamps", action="store_true")
    s.set_defaults(func=cmd_scan)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
