#!/usr/bin/env python3
"""Tests for environment-driven configuration"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from src.config import PadelConfig
from src.error_handler import ConfigError

VARIABLES = ("PADEL_DEPTH", "PADEL_DEPTH_CAP", "PADEL_BUDGET", "PADEL_STRICT_DEPTH",
             "PADEL_FORMAT", "PADEL_VERBOSE")


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in VARIABLES:
        monkeypatch.delenv(name, raising=False)


def test_defaults():
    config = PadelConfig.from_env()
    assert config == PadelConfig()
    assert config.depth == 3
    assert config.budget == 1_000_000
    assert config.output_format == "text"


def test_environment_values(monkeypatch):
    monkeypatch.setenv("PADEL_DEPTH", "2")
    monkeypatch.setenv("PADEL_BUDGET", "50_000")
    monkeypatch.setenv("PADEL_STRICT_DEPTH", "yes")
    monkeypatch.setenv("PADEL_FORMAT", "JSON")
    config = PadelConfig.from_env()
    assert config.depth == 2
    assert config.budget == 50000
    assert config.strict_depth
    assert config.output_format == "json"


@pytest.mark.parametrize("name,value", [
    ("PADEL_DEPTH", "three"),
    ("PADEL_BUDGET", "-5"),
    ("PADEL_FORMAT", "xml"),
])
def test_bad_environment_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ConfigError):
        PadelConfig.from_env()


def test_overrides_skip_unset_flags():
    config = PadelConfig(depth=4, verbose=True).with_overrides(depth=1, budget=None, output_format="json")
    assert config.depth == 1
    assert config.budget == 1_000_000
    assert config.output_format == "json"
    assert config.verbose
