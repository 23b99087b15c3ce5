import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
        if not any(line.startswith("criterion 7") for line in RESULTS):
            terminalreporter.write_line(
                "criterion 7: SKIP - optional external LiePRing data not supplied "
                "(set SCHUR_LIEPRING_DIR)")
