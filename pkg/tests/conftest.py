# acceptance tests tag themselves with a "criterion" user property; the
# summary below prints one verdict line for each of them
_verdicts: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    n, title = props["criterion"]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        # parametrized criteria pass only if every case does
        failed = _verdicts.get(n, ("PASS",))[0] == "FAIL" or not report.passed
        _verdicts[n] = ("FAIL" if failed else "PASS", title)


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_verdicts):
        verdict, title = _verdicts[n]
        terminalreporter.write_line(f"criterion {n:2d} {verdict}  {title}")
