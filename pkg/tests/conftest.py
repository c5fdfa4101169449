from hypothesis import settings

# exact rational arithmetic is slow on large denominators; keep runs reproducible
settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("repro")


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and "test_acceptance.py::test_criterion_" in rep.nodeid:
                name = rep.nodeid.split("::test_")[-1]
                lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{status} {name}")
