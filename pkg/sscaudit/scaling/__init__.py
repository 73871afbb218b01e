"""Divergence sweeps over the simulated model family."""
