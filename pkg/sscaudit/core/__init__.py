"""Shared data model: rasters, items, conditions, prompt bundles, transcripts."""
