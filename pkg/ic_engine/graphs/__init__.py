"""Confusion graphs, exact graph solvers and broadcast-rate brackets."""
