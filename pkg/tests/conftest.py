import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


def pytest_terminal_summary(terminalreporter):
    import sys

    for name, module in list(sys.modules.items()):
        if name.endswith("test_acceptance") and getattr(module, "RESULTS", None):
            terminalreporter.section("acceptance criteria")
            for number in sorted(module.RESULTS):
                terminalreporter.write_line(module.RESULTS[number])
