import pytest

from flatext import jets

ACCEPTANCE = {}


@pytest.fixture(params=jets.available_backends())
def backend(request):
    prev = jets.set_backend(request.param)
    yield request.param
    jets.set_backend(prev)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
