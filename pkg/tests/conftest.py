"""Shared pytest wiring: re-emit acceptance verdicts after the run.

Acceptance tests record their one-line verdicts here so they stay visible
in plain ``pytest -v`` output, where per-test stdout is captured.
"""

acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
