"""
Configuration for the slope calculus CLI
"""
import os
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

# Field defaults
DEFAULT_PRIME = 5
DEFAULT_EXTENSION_DEGREE = 1

# Extra twists scanned past the section-count bound
SECTION_COUNT_SLACK = 2

# Reduction loop
DEFAULT_MAX_STEPS = 64

# Property sweeps
SWEEP_CASES = 200
_seed = os.getenv("ALGEBRA_SWEEP_SEED")
SWEEP_SEED: Optional[int] = int(_seed) if _seed not in (None, "") else None

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
