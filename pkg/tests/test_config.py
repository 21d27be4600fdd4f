import logging

import pytest

import logger_config
from config import Config
from logger_config import set_level
from constants import DEFAULT_SEED, DEFAULT_TRIALS

KEYS = ("HRS_LAB_SEED", "HRS_LAB_TRIALS", "HRS_LAB_PRIME", "HRS_LAB_LOG_LEVEL")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in KEYS:
        monkeypatch.delenv(key, raising=False)


def test_defaults():
    assert Config.load()
    assert Config.SEED == DEFAULT_SEED
    assert Config.TRIALS == DEFAULT_TRIALS
    assert Config.PRIME_OVERRIDE is None
    assert Config.is_valid()


def test_values_from_environment(monkeypatch):
    monkeypatch.setenv("HRS_LAB_SEED", "9")
    monkeypatch.setenv("HRS_LAB_TRIALS", "12")
    monkeypatch.setenv("HRS_LAB_PRIME", "7")
    assert Config.load()
    assert (Config.SEED, Config.TRIALS, Config.PRIME_OVERRIDE) == (9, 12, 7)


@pytest.mark.parametrize("key, value", [
    ("HRS_LAB_TRIALS", "many"),
    ("HRS_LAB_TRIALS", "0"),
    ("HRS_LAB_PRIME", "4"),
    ("HRS_LAB_LOG_LEVEL", "loud"),
])
def test_invalid_values_fail(monkeypatch, key, value):
    monkeypatch.setenv(key, value)
    assert not Config.load()


@pytest.fixture
def root_level():
    root = logging.getLogger()
    saved = root.level
    yield root
    root.setLevel(saved)


def test_log_level_from_environment(monkeypatch, root_level):
    monkeypatch.setenv("HRS_LAB_LOG_LEVEL", "warning")
    assert Config.load()
    assert root_level.level == logging.WARNING


def test_set_level_accepts_names_and_numbers(root_level):
    assert set_level(" debug ") == logging.DEBUG
    assert root_level.level == logging.DEBUG
    assert set_level(logging.ERROR) == logging.ERROR
    with pytest.raises(ValueError):
        set_level("loud")


def test_log_format_shows_level_and_name():
    assert logger_config.handler.formatter is logger_config.formatter
    record = logging.LogRecord("suites", logging.WARNING, __file__, 1, "3 samples failed", None, None)
    assert logger_config.formatter.format(record).endswith("WARNING  suites: 3 samples failed")
