"""Shared pytest hooks.

Each acceptance test prints a single CRITERION line.  Capture would
swallow those, so the terminal summary replays them, and criteria that
fail before reaching their print get a synthesized FAIL line.
"""

import re


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for rep in terminalreporter.stats.get("passed", []):
        if "test_acceptance" in rep.nodeid:
            lines += [ln for ln in rep.capstdout.splitlines() if ln.startswith("CRITERION")]
    for outcome in ("failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" not in rep.nodeid:
                continue
            m = re.search(r"criterion_(\d+)", rep.nodeid)
            label = f"CRITERION {m.group(1)}" if m else rep.nodeid
            lines.append(f"{label}: FAIL ({rep.nodeid.rsplit('::', 1)[-1]})")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
