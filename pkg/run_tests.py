"""Test runner script for FracWave tests.

Usage:
    python run_tests.py                  # fast unit tests
    python run_tests.py --integration    # plus stepper, harness and CLI runs
    python run_tests.py --slow           # plus the published table reproductions
    python run_tests.py --module test_dcc_kernels --class TestDccRows
"""

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from tests.conftest import setup_test_environment, teardown_test_environment

MODES = {
    "unit": ("Running unit tests...", "not integration and not slow"),
    "integration": ("Running unit and integration tests...", "not slow"),
    "slow": ("Running all tests, including the table reproductions...", "slow or not slow"),
}


def node_id(module: str, test_class: Optional[str], method: Optional[str]) -> str:
    """pytest node id for a module, class or method under tests/."""
    parts = [f"tests/{module.removesuffix('.py')}.py"]
    if test_class:
        parts.append(test_class)
        if method:
            parts.append(method)
    return "::".join(parts)


def run_pytest(args: List[str]) -> bool:
    import pytest

    setup_test_environment()
    try:
        return pytest.main([*args, "--tb=short"]) == 0
    finally:
        teardown_test_environment()


def main() -> int:
    load_dotenv()

    parser = argparse.ArgumentParser(description="Run FracWave tests")
    parser.add_argument("--integration", action="store_true", help="Also run end-to-end tests")
    parser.add_argument(
        "--slow",
        action="store_true",
        help="Also run the table reproductions (sets FRACWAVE_RUN_SLOW=true)",
    )
    parser.add_argument("--module", type=str, help="Run one test module (e.g. test_dcc_kernels)")
    parser.add_argument("--class", type=str, dest="test_class", help="Run one test class")
    parser.add_argument("--method", type=str, help="Run one test method")
    args = parser.parse_args()

    if args.slow:
        os.environ["FRACWAVE_RUN_SLOW"] = "true"

    if args.module:
        success = run_pytest([node_id(args.module, args.test_class, args.method)])
    else:
        mode = "slow" if args.slow else "integration" if args.integration else "unit"
        banner, marker = MODES[mode]
        print(banner)
        success = run_pytest(["tests/", "-m", marker])

    print("\nAll tests passed!" if success else "\nSome tests failed!")
    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())
