import functools

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


# expensive searches shared by several test modules
@functools.lru_cache(maxsize=None)
def sharp_nullspace(d):
    from sharppoly.nullsearch import enumerate_sharp

    return enumerate_sharp(d)


@functools.lru_cache(maxsize=None)
def sharp_mip(d):
    from sharppoly.mipsearch import mip_search

    return mip_search(d)


@functools.lru_cache(maxsize=None)
def with_terms(d, n):
    from sharppoly.nullsearch import enumerate_with_terms

    return enumerate_with_terms(d, n)


@functools.lru_cache(maxsize=None)
def scan_to(max_degree):
    from sharppoly.constructor import scan_uniqueness

    return scan_uniqueness(range(1, max_degree + 1, 2))


@pytest.fixture(scope="session")
def cached():
    return {
        "sharp_nullspace": sharp_nullspace,
        "sharp_mip": sharp_mip,
        "with_terms": with_terms,
        "scan_to": scan_to,
    }


# one pass/fail line per acceptance criterion in the terminal summary
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")
    config.addinivalue_line("markers", "slow: takes minutes")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        state = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        prev = _CRITERIA.get(n, (title, "PASS"))[1]
        # a criterion with several tests passes only if all do
        if prev == "FAIL" or state == "FAIL":
            state = "FAIL"
        _CRITERIA[n] = (title, state)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, state = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:>2} {state}: {title}")
