"""Tests for the FracWave solver."""
