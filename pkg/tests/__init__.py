"""Tests for approximately stable matching."""
