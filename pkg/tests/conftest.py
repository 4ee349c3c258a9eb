"""Shared pytest plumbing for the suite.

The end section of the terminal report folds the outcome of every
``test_cNN_*`` clause in test_acceptance.py into a single PASS/FAIL line
per numbered acceptance criterion, so the overall verdict is readable at
a glance even when a criterion is spread over many parametrized clauses.
"""

import re
from collections import defaultdict

_CLAUSE = re.compile(r"test_acceptance\.py::test_c(\d{2})_")

_TITLES = {
    1: "W-state 2D volumes",
    2: "W-state loss thresholds",
    3: "cat-state detection window",
    4: "Dicke-state volumes",
    5: "asymmetric three-mode states",
    6: "rigorous grid integration",
    7: "settings-matrix witness",
    8: "smoothed-parity point values",
    9: "randomized parity sampling",
    10: "kernel-matrix witness",
    11: "oracle equivalence",
    12: "soundness on separable states",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    tally = defaultdict(lambda: [0, 0])  # criterion -> [passed, failed]
    for outcome, column in (("passed", 0), ("failed", 1), ("error", 1)):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CLAUSE.search(getattr(report, "nodeid", ""))
            if match:
                tally[int(match.group(1))][column] += 1
    if not tally:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(tally):
        passed, failed = tally[number]
        verdict = "PASS" if failed == 0 else "FAIL"
        terminalreporter.write_line(
            "criterion %2d  %-32s %s  (%d/%d clauses)"
            % (number, _TITLES.get(number, ""), verdict, passed, passed + failed)
        )
