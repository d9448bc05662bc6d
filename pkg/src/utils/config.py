"""Configuration management for the TIP-GNN engine."""

import logging
import os

import numpy as np
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Application configuration read from the environment (and `.env`)."""

    # Output configuration
    OUTPUT_DIR: str = os.getenv('TIPGNN_OUTPUT_DIR', 'out')
    LOG_LEVEL: str = os.getenv('TIPGNN_LOG_LEVEL', 'INFO')

    # Numerics
    DTYPE: str = os.getenv('TIPGNN_DTYPE', 'float64')
    CACHE_CAPACITY: int = int(os.getenv('TIPGNN_CACHE_CAPACITY', '50000'))

    # Run settings
    WORKERS: int = int(os.getenv('TIPGNN_WORKERS', '1'))
    SEED: int = int(os.getenv('TIPGNN_SEED', '0'))

    # Defaults shown by the CLI help
    DEFAULT_SEEDS: tuple = (0, 1, 2, 3, 4)
    CHECKPOINT_VERSION: int = 1

    @classmethod
    def log_level(cls) -> int:
        """Resolve LOG_LEVEL to a logging constant, falling back to INFO."""
        level = logging.getLevelName(cls.LOG_LEVEL.upper())
        return level if isinstance(level, int) else logging.INFO

    @classmethod
    def numpy_dtype(cls) -> np.dtype:
        """Return the configured float dtype (float64 unless set to float32)."""
        if cls.DTYPE.lower() in ('float32', 'f4', '32'):
            return np.dtype(np.float32)
        return np.dtype(np.float64)
