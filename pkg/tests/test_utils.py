"""Unit tests for utility functions."""

import os
import unittest

from src.utils import atomic_write_bytes, atomic_write_text, format_float, parse_int_list
from tests.base import TempDirTestCase


class TestUtilityFunctions(TempDirTestCase):
    """Test cases for utility functions."""

    def test_parse_int_list(self):
        self.assertEqual(parse_int_list("40,80,160"), [40, 80, 160])
        self.assertEqual(parse_int_list(" 7 "), [7])
        for bad in ("", "1,,2", "1,a", "1.5"):
            with self.subTest(text=bad):
                with self.assertRaises(ValueError):
                    parse_int_list(bad)

    def test_format_float(self):
        self.assertEqual(format_float(0.1), "0.1")
        self.assertEqual(format_float(1e-20), "1e-20")
        self.assertEqual(format_float(float("nan")), "")
        self.assertEqual(format_float(None), "")
        self.assertEqual(float(format_float(2.0 / 3.0)), 2.0 / 3.0)

    def test_atomic_write_creates_parents(self):
        path = atomic_write_text(self.tmpdir / "a" / "b" / "out.txt", "hello\n")
        self.assertEqual(path.read_text(), "hello\n")
        atomic_write_bytes(path, b"again")
        self.assertEqual(path.read_bytes(), b"again")
        leftovers = [name for name in os.listdir(path.parent) if name.endswith(".tmp")]
        self.assertEqual(leftovers, [])


if __name__ == "__main__":
    unittest.main()
