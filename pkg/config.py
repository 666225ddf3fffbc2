"""Analyzer settings loaded from the environment (and an optional .env file)."""

import os

from dotenv import load_dotenv

# ---------------------------
# Caps + budgets
# ---------------------------
load_dotenv()

# Sequence spaces above this many tuples are evaluated lazily, never materialized.
DISTRIBUTION_CAP = int(os.getenv("ICLEAK_DISTRIBUTION_CAP", str(2**20)))
VERTEX_CAP = int(os.getenv("ICLEAK_VERTEX_CAP", str(2**16)))
TRANSITIVITY_CAP = int(os.getenv("ICLEAK_TRANSITIVITY_CAP", str(2**12)))
# Graphs without tuple structure (test fixtures) get a brute-force automorphism search.
AUTOMORPHISM_CAP = int(os.getenv("ICLEAK_AUTOMORPHISM_CAP", "64"))
LP_CAP = int(os.getenv("ICLEAK_LP_CAP", str(2**10)))
NODE_BUDGET = int(os.getenv("ICLEAK_NODE_BUDGET", str(10**7)))
SEARCH_BUDGET = int(os.getenv("ICLEAK_SEARCH_BUDGET", str(10**7)))
SEARCH_EXTRA_COLORS = int(os.getenv("ICLEAK_SEARCH_EXTRA_COLORS", "2"))
MAIS_CAP = int(os.getenv("ICLEAK_MAIS_CAP", "20"))
# Joint (tuple x codeword) cells evaluated exactly before callers must switch to Monte Carlo.
JOINT_CAP = int(os.getenv("ICLEAK_JOINT_CAP", str(2**22)))
ERROR_SET_LIMIT = int(os.getenv("ICLEAK_ERROR_SET_LIMIT", "20"))

# ---------------------------
# Logging
# ---------------------------
LOG_LEVEL = os.getenv("ICLEAK_LOG_LEVEL", "WARNING").upper()
