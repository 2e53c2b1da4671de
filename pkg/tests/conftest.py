import pytest
from hypothesis import HealthCheck, settings

from nlpva.algebras import builtin

# every property test is reproducible: derandomized, no deadline
settings.register_profile(
    "fixed", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("fixed")

BUILTIN_NAMES = ["potential-free-boson", "potential-virasoro-magri", "potential-affine-sl2", "gurarie-ludwig"]


@pytest.fixture(scope="session")
def algebras():
    return {name: builtin(name) for name in BUILTIN_NAMES}


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", None) == "call" and "test_acceptance" in rep.nodeid:
                lines += [ln for ln in rep.capstdout.splitlines() if ln.startswith("CRITERION ")]
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for ln in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(ln)
