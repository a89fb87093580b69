import pytest

from darbouxkit.scenarios import build_fields, builtin_scenario


@pytest.fixture(scope="session")
def akns_env():
    """AKNS pipeline with darboux, backlund and the sinh-Gordon Miura stage."""
    return build_fields(builtin_scenario("shg-from-akns-soliton"))


@pytest.fixture(scope="session")
def nlbq_env():
    """NLBq pipeline with darboux, backlund and the Kaup Miura stage."""
    return build_fields(builtin_scenario("kaup-from-nlbq-soliton"))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
