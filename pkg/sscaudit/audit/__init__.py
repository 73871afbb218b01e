"""Streaming audit."""
