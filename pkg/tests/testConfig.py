import unittest

import pytest

from tracealg.config import (
    CURRENT_SCHEMA_VERSION,
    TERM_BUDGET_ENV,
    Settings,
    currentSettings,
    loadSettings,
    saveSettings,
    useSettings,
)
from tracealg.errors import ConfigError


class TestSettings(unittest.TestCase):
    def testDefaults(self) -> None:
        s = Settings()
        self.assertEqual(s.schemaVersion, CURRENT_SCHEMA_VERSION)
        self.assertEqual(s.sampleDenominator, 64)
        self.assertEqual(s.precheckPoints, 3)
        self.assertEqual(s.failureExponent, 64)

    def testLogLevelIsNormalized(self) -> None:
        self.assertEqual(Settings(logLevel="debug").logLevel, "DEBUG")
        with self.assertRaises(ValueError):
            Settings(logLevel="chatty")

    def testBudgetMustBePositive(self) -> None:
        with self.assertRaises(ValueError):
            Settings(termBudget=0)


def test_missing_file_gives_defaults(tmp_path):
    assert loadSettings(str(tmp_path / "none.yaml")) == Settings()
    assert loadSettings(None) == Settings()

def test_load_file(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text("termBudget: 500\nlogLevel: warning\n", encoding="utf-8")
    s = loadSettings(str(path))
    assert s.termBudget == 500
    assert s.logLevel == "WARNING"

@pytest.mark.parametrize("text", [
    "- 1\n- 2\n",
    "termBudget: -3\n",
    "sampleDenominator: many\n",
    f"schemaVersion: {CURRENT_SCHEMA_VERSION + 1}\n",
    "schemaVersion: 0\n",
    "schemaVersion: latest\n",
])
def test_bad_files(tmp_path, text):
    path = tmp_path / "s.yaml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError):
        loadSettings(str(path))

def test_env_override(monkeypatch):
    monkeypatch.setenv(TERM_BUDGET_ENV, "77")
    assert loadSettings().termBudget == 77
    useSettings(None)
    assert currentSettings().termBudget == 77

@pytest.mark.parametrize("raw", ["abc", "0", "-5"])
def test_bad_env_override(monkeypatch, raw):
    monkeypatch.setenv(TERM_BUDGET_ENV, raw)
    with pytest.raises(ConfigError):
        loadSettings()

def test_blank_env_is_ignored(monkeypatch):
    monkeypatch.setenv(TERM_BUDGET_ENV, "  ")
    assert loadSettings().termBudget == Settings().termBudget

def test_save_keeps_comments(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text("# tuned for the n=3 runs\ntermBudget: 500\nstale: 1\n", encoding="utf-8")
    saveSettings(str(path), Settings(termBudget=900), makeBackup=True)
    text = path.read_text(encoding="utf-8")
    assert "# tuned for the n=3 runs" in text
    assert "stale" not in text
    assert loadSettings(str(path)).termBudget == 900
    assert "termBudget: 500" in (tmp_path / "s.yaml.bak").read_text(encoding="utf-8")

def test_use_settings():
    useSettings(Settings(precheckPoints=0))
    assert currentSettings().precheckPoints == 0
    useSettings(None)
    assert currentSettings().precheckPoints == 3

def test_current_schema_version_loads(tmp_path):
    path = tmp_path / "s.yaml"
    text = f"schemaVersion: {CURRENT_SCHEMA_VERSION}\nprecheckPoints: 5\n"
    path.write_text(text, encoding="utf-8")
    assert loadSettings(str(path)).precheckPoints == 5
