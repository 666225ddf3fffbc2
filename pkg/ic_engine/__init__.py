"""Index-coding leakage engine package."""
