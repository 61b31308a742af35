import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "pdk",
    deadline=None,
    max_examples=int(os.environ.get("PDK_EXAMPLES", 60)),
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("pdk")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
