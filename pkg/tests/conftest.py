"""Shared fixtures for the lab test suite."""

import logging
import sys
from pathlib import Path

import pytest
from loguru import logger

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.utils.config import LabConfig, use_config  # noqa: E402


@pytest.fixture(autouse=True)
def default_config():
    """Run every test against the built-in defaults, independent of the YAML file."""
    config = LabConfig()
    use_config(config)
    return config


@pytest.fixture(autouse=True)
def reset_logging():
    """Drop sinks installed by CLI runs; they hold pytest's captured stderr."""
    yield
    logger.remove()
    for handler in logging.root.handlers[:]:
        logging.root.removeHandler(handler)
    logging.root.setLevel(logging.WARNING)


@pytest.fixture
def gelfand():
    from src.nonlinearity import ExpCritical

    return ExpCritical(gamma=1.0, q=0.0)
