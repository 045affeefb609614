import support


def pytest_terminal_summary(terminalreporter):
    if not support.ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(support.ACCEPTANCE):
        passed, detail = support.ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
