"""
Pytest configuration and fixtures.
"""

import sys
from pathlib import Path

import pytest
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Repository root on the path for `src.` imports
sys.path.insert(0, str(Path(__file__).parent))

from src.utils.logger import bind_run_context  # noqa: E402

CONFIG_ENV_VARS = (
    'GHZSYNTH_ARCHITECTURE',
    'GHZSYNTH_MINRANK_EXACT_LIMIT',
    'GHZSYNTH_MINRANK_MODE',
    'GHZSYNTH_BENCH_WORKERS',
)


@pytest.fixture(autouse=True)
def default_config_env(monkeypatch):
    """Tests see config file values, not overrides from a local .env."""
    for name in CONFIG_ENV_VARS:
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(autouse=True)
def clean_log_context():
    yield
    bind_run_context()
