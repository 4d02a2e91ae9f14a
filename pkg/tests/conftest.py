import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=int(os.environ.get("QLAG_HYPOTHESIS_EXAMPLES", "40")),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

GRID_Q = ("0.23", "0.5", "0.89", "0.94", "0.997")
GRID_DELTA = ("-1.9", "-1.5", "-1.1")
GRID = tuple((q, d) for q in GRID_Q for d in GRID_DELTA)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
