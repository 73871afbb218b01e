"""Tests for ssc-audit."""
