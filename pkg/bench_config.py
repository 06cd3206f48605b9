"""
Configuration for the qbench harness
Reads simulator caps, defaults and log settings from the environment (and a local .env file).
"""

import os
from typing import Dict, Any, Tuple

from dotenv import load_dotenv

load_dotenv()

_HERE = os.path.dirname(os.path.abspath(__file__))


def _env_int(key: str, default: int) -> int:
    raw = os.environ.get(key)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        return default


class BenchConfig:
    """Central configuration for simulation and scoring settings"""

    # Simulator limits
    DEFAULT_QUBIT_CAP = 24
    ENUMERATION_CAP = _env_int('QBENCH_ENUMERATION_CAP', 26)

    # Run defaults
    DEFAULT_SHOTS = _env_int('QBENCH_DEFAULT_SHOTS', 5000)
    DEFAULT_SEED = _env_int('QBENCH_DEFAULT_SEED', 1234)

    # Scoring thresholds
    MSE_PASS_THRESHOLD = 0.1
    CHEMICAL_ACCURACY_HA = 0.0016
    DEFAULT_TTS_CONFIDENCE = 0.99
    DEFAULT_VAR_ALPHA = 0.95
    MMD_SIGMA = 1.0
    HIDDEN_SHIFT_P_ONE = 0.75
    HIDDEN_SHIFT_CIRCUITS = 10
    AR_BASELINE_BATCHES = _env_int('QBENCH_AR_BASELINE_BATCHES', 100)

    # Paths
    DATA_DIR = os.environ.get('QBENCH_DATA_DIR', os.path.join(_HERE, 'data'))
    LOG_DIR = os.environ.get('QBENCH_LOG_DIR', 'logs')
    LOG_TO_FILE = os.environ.get('QBENCH_LOG_TO_FILE', 'true').lower() == 'true'

    @classmethod
    def qubit_cap(cls) -> int:
        """Simulator qubit cap; QBENCH_QUBIT_CAP is re-read on every call"""
        return _env_int('QBENCH_QUBIT_CAP', cls.DEFAULT_QUBIT_CAP)

    @classmethod
    def data_path(cls, name: str) -> str:
        """Absolute path of a bundled data file"""
        return os.path.join(cls.DATA_DIR, name)

    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        """Effective configuration, for logging"""
        return {
            'qubit_cap': cls.qubit_cap(),
            'enumeration_cap': cls.ENUMERATION_CAP,
            'default_shots': cls.DEFAULT_SHOTS,
            'default_seed': cls.DEFAULT_SEED,
            'ar_baseline_batches': cls.AR_BASELINE_BATCHES,
            'data_dir': cls.DATA_DIR,
            'log_dir': cls.LOG_DIR,
        }

    @classmethod
    def validate(cls) -> Tuple[bool, str]:
        """
        Validate configuration values
        Returns: (is_valid, error_message)
        """
        if cls.qubit_cap() < 1:
            return False, "QBENCH_QUBIT_CAP must be a positive integer"
        if cls.ENUMERATION_CAP < 1:
            return False, "QBENCH_ENUMERATION_CAP must be a positive integer"
        if cls.DEFAULT_SHOTS < 1:
            return False, "QBENCH_DEFAULT_SHOTS must be a positive integer"
        if cls.AR_BASELINE_BATCHES < 2:
            return False, "QBENCH_AR_BASELINE_BATCHES must be at least 2"
        if not os.path.isdir(cls.DATA_DIR):
            return False, f"Data directory not found: {cls.DATA_DIR}"
        return True, ""
