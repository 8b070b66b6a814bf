import support


def pytest_terminal_summary(terminalreporter):
    if not support.CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(support.CRITERIA):
        ok, detail = support.CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
