"""Tests for ontomatch-bench."""
