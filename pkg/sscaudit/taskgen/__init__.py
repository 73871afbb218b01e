"""Isomorphic task generators and their oracles."""
