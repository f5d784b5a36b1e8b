import os

from hypothesis import HealthCheck, settings

# derandomized so that repeated runs are identical
settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


# -------------------------------------------------- acceptance summary

CRITERIA = {
    1: "golden fixtures",
    2: "free queries agree with the oracle (10,000 programs)",
    3: "contextual query sequences (programs with at most 6 atoms)",
    4: "semantic invariants",
    5: "well-founded conformance",
    6: "determinism",
}
_outcomes: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.outcome != "passed":
        if hasattr(report, "wasxfail"):
            outcome = "xfail"
        else:
            outcome = report.outcome
        if report.when == "call" or outcome != "skipped":
            _outcomes.setdefault(crit, []).append(outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        got = _outcomes.get(n)
        if not got:
            continue
        known = got.count("xfail")
        ok = all(o == "passed" for o in got)
        if ok:
            verdict = "PASS"
        elif all(o in ("passed", "xfail") for o in got):
            verdict = f"FAIL (known, {known} part(s) marked xfail; see notes/decisions.md)"
        else:
            verdict = "FAIL"
        terminalreporter.write_line(f"criterion {n} {title}: {verdict}")
