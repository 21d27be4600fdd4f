import os

from dotenv import load_dotenv

from algebra.exact_linalg import is_prime
from constants import DEFAULT_SEED, DEFAULT_TRIALS, MAX_PRIME
from logger_config import get_logger, set_level

logger = get_logger(__name__)

# Load environment variables from .env file
load_dotenv()


class Config:
    """Run configuration from environment variables."""

    SEED: int = DEFAULT_SEED
    TRIALS: int = DEFAULT_TRIALS
    PRIME_OVERRIDE: int | None = None
    LOG_LEVEL: str = "INFO"

    @classmethod
    def _read_int(cls, key: str, default: int | None) -> tuple[bool, int | None]:
        raw = os.getenv(key)
        if raw is None or raw.strip() == "":
            return True, default
        try:
            return True, int(raw)
        except ValueError:
            logger.error(f"Invalid {key}: '{raw}' is not a valid integer")
            return False, default

    @classmethod
    def load(cls) -> bool:
        """Load and validate configuration.

        Returns:
            bool: True if every set variable is valid, False otherwise.
        """
        ok, cls.SEED = cls._read_int("HRS_LAB_SEED", DEFAULT_SEED)
        if not ok:
            return False

        ok, cls.TRIALS = cls._read_int("HRS_LAB_TRIALS", DEFAULT_TRIALS)
        if not ok:
            return False
        if cls.TRIALS < 1:
            logger.error(f"Invalid HRS_LAB_TRIALS: {cls.TRIALS} must be positive")
            return False

        ok, cls.PRIME_OVERRIDE = cls._read_int("HRS_LAB_PRIME", None)
        if not ok:
            return False
        if cls.PRIME_OVERRIDE is not None and not (is_prime(cls.PRIME_OVERRIDE) and cls.PRIME_OVERRIDE < MAX_PRIME):
            logger.error(f"Invalid HRS_LAB_PRIME: {cls.PRIME_OVERRIDE} is not a prime below {MAX_PRIME}")
            return False

        cls.LOG_LEVEL = os.getenv("HRS_LAB_LOG_LEVEL", "INFO")
        try:
            set_level(cls.LOG_LEVEL)
        except ValueError as e:
            logger.error(f"Invalid HRS_LAB_LOG_LEVEL: {e}")
            return False

        logger.debug(f"Configuration loaded (seed: {cls.SEED}; trials: {cls.TRIALS}; prime: {cls.PRIME_OVERRIDE})")
        return True

    @classmethod
    def is_valid(cls) -> bool:
        """Check if configuration is valid without logging."""
        return cls.TRIALS >= 1 and (cls.PRIME_OVERRIDE is None or is_prime(cls.PRIME_OVERRIDE))
