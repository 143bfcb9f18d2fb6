import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE_LABELS = {
    1: "elliptic kernel identities and inversions",
    2: "closed-form exponential map vs RK4",
    3: "product-form trajectory identities",
    4: "root function brackets and residuals",
    5: "jacobian closed forms vs finite differences",
    6: "conjugate time limits",
    7: "maxwell/conjugate interleaving",
    8: "wavefront and sphere cloud properties",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results: dict[int, bool] = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            m = re.search(r"criterion_(\d+)", nodeid)
            if m:
                num = int(m.group(1))
                results[num] = results.get(num, True) and outcome == "passed"
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        word = "PASS" if results[num] else "FAIL"
        label = _ACCEPTANCE_LABELS.get(num, "")
        terminalreporter.write_line(f"criterion {num}: {word}  {label}")
