#!/usr/bin/env python3
"""
Unit tests for runtime configuration in neighsum.config.
"""

import json
import os
import sys
import tempfile
import unittest
from unittest.mock import patch

# Add parent directory to path to import neighsum module
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from neighsum.config import DEFAULT_CONFIG, apply_env, default_config, load_config, validate_config
from neighsum.errors import ConfigError


class TestDefaults(unittest.TestCase):
    def test_default_config_is_a_copy(self):
        config = default_config()
        config["threads"] = 99
        self.assertEqual(DEFAULT_CONFIG["threads"], 1)

    def test_defaults_are_valid(self):
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(load_config(), DEFAULT_CONFIG)

    def test_thread_counts_must_be_positive(self):
        for threads in (0, -2, "4"):
            config = default_config()
            config["threads"] = threads
            with self.assertRaises(ConfigError, msg=threads):
                validate_config(config)
        config = default_config()
        config["threads"] = 8
        self.assertEqual(validate_config(config)["threads"], 8)


class TestLoadConfig(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, data):
        path = os.path.join(self.tmp.name, "neighsum.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write(data if isinstance(data, str) else json.dumps(data))
        return path

    def test_file_overrides(self):
        with patch.dict(os.environ, {}, clear=True):
            config = load_config(self.write({"threads": 4, "format": "csv"}))
        self.assertEqual(config["threads"], 4)
        self.assertEqual(config["format"], "csv")
        self.assertEqual(config["denseLimit"], DEFAULT_CONFIG["denseLimit"])

    def test_unknown_keys(self):
        with self.assertRaises(ConfigError) as ctx:
            load_config(self.write({"thread": 4}))
        self.assertIn("thread", str(ctx.exception))

    def test_unreadable(self):
        with self.assertRaises(ConfigError):
            load_config(self.write("{not json"))
        with self.assertRaises(ConfigError):
            load_config(self.write([1, 2]))
        with self.assertRaises(ConfigError):
            load_config(os.path.join(self.tmp.name, "missing.json"))

    def test_validation(self):
        with patch.dict(os.environ, {}, clear=True):
            for bad in ({"threads": 0}, {"denseLimit": True}, {"prefilterTolerance": 0.5}, {"format": "xml"}):
                with self.assertRaises(ConfigError, msg=bad):
                    load_config(self.write(bad))

    def test_environment_beats_file(self):
        path = self.write({"threads": 4})
        with patch.dict(os.environ, {"NEIGHSUM_THREADS": "3"}, clear=True):
            self.assertEqual(load_config(path)["threads"], 3)


class TestApplyEnv(unittest.TestCase):
    def test_explicit_environ(self):
        config = apply_env(default_config(), {"NEIGHSUM_DENSE_LIMIT": "64", "NEIGHSUM_THREADS": " "})
        self.assertEqual(config["denseLimit"], 64)
        self.assertEqual(config["threads"], 1)

    def test_non_integer(self):
        with self.assertRaises(ConfigError):
            apply_env(default_config(), {"NEIGHSUM_THREADS": "many"})


if __name__ == "__main__":
    unittest.main()
