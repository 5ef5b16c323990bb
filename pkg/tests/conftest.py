import os

import pytest
from hypothesis import HealthCheck, settings

from binforms.generators import PipelineConfig, run_pipeline

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def pipeline11():
    return run_pipeline(config=PipelineConfig(max_degree=11))


@pytest.fixture(scope="session")
def pipeline14():
    return run_pipeline(config=PipelineConfig(max_degree=14))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
