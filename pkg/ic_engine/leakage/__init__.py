"""Guessing success, leakage, bounds, search and Monte Carlo estimation."""
