"""Configuration and utilities for running tests."""

import os
import sys
from pathlib import Path

# Add the project root to the Python path for tests
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


# Environment setup for tests
def setup_test_environment():
    """Set up test environment variables."""
    os.environ.setdefault("FRACWAVE_ENVIRONMENT", "testing")


def teardown_test_environment():
    """Clean up test environment."""
    if os.getenv("FRACWAVE_ENVIRONMENT") == "testing":
        del os.environ["FRACWAVE_ENVIRONMENT"]
