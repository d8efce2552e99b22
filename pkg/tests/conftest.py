import pytest

_ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    results = item.config.stash[_ACCEPTANCE_KEY]
    notes = [v for k, v in item.user_properties if k == "note"]
    entry = results.setdefault(marker.args[0], [marker.kwargs.get("title", item.name), [], []])
    entry[1].append(report.outcome)
    entry[2].extend(notes)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_ACCEPTANCE_KEY]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        title, outcomes, notes = results[n]
        verdict = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {n}: {title}")
        for note in notes:
            for line in str(note).splitlines():
                terminalreporter.write_line(f"        {line}")
