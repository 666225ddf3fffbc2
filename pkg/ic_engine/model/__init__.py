"""Instances, adversaries, tuple numbering and exact distributions."""
