"""Exact trace polynomial arithmetic, identity oracles and positivity certificate checks."""
