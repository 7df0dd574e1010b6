import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))


def pytest_terminal_summary(terminalreporter):
    results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(results):
        ok, elapsed, limit, note = results[crit]
        bound = "no limit" if limit == float("inf") else f"limit {limit:g}s"
        line = f"criterion {crit:2d}: {'PASS' if ok else 'FAIL'}  {elapsed:7.2f}s ({bound})"
        terminalreporter.write_line(line + (f"  {note}" if note else ""))
