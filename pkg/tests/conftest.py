"""Collects acceptance verdicts and prints one line per criterion at the end of the run."""

ACCEPTANCE = {}


def record(criterion, passed, detail):
    """Store (and echo) one acceptance verdict; the caller still asserts."""
    ACCEPTANCE[criterion] = (bool(passed), detail)
    print(f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE, key=lambda c: (int(c.rstrip("ab")), c)):
        passed, detail = ACCEPTANCE[criterion]
        terminalreporter.write_line(f"{criterion:>4} {'PASS' if passed else 'FAIL'}  {detail}")
