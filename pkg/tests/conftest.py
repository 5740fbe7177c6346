import sys
from pathlib import Path

# helpers.py / oracles.py live next to the tests
sys.path.insert(0, str(Path(__file__).parent))


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        print(f"\nACCEPTANCE {name}: {status}", file=sys.stderr)
    elif report.when == "setup" and report.skipped:
        print(f"\nACCEPTANCE {name}: SKIP", file=sys.stderr)
