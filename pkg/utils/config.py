"""Runtime configuration read from environment variables."""

import os

from utils.errors import PreconditionError


class Config:
    """Accessors for the tunable guards.

    Values are read at call time so tests and shells can override them
    without reloading modules.
    """

    DEFAULT_GUARD_CAP = 512
    DEFAULT_TREE_MAX_LEAVES = 8
    DEFAULT_TREE_MAX_DIM = 3
    DEFAULT_TREE_MAX_DEGREE = 3
    DEFAULT_WORD_LIMIT = 10 ** 6
    DEFAULT_LOG_LEVEL = "WARNING"

    @staticmethod
    def _int_from_env(name: str, default: int) -> int:
        raw = os.environ.get(name)
        if raw is None or raw.strip() == "":
            return default
        try:
            value = int(raw)
        except ValueError:
            raise PreconditionError(f"{name} must be an integer, got {raw!r}")
        if value < 1:
            raise PreconditionError(f"{name} must be positive, got {value}")
        return value

    @staticmethod
    def guard_cap() -> int:
        """Hard ceiling on the truncation degree of inverse series."""
        return Config._int_from_env("KELLER_GUARD_CAP", Config.DEFAULT_GUARD_CAP)

    @staticmethod
    def tree_max_leaves() -> int:
        return Config._int_from_env("KELLER_TREE_MAX_LEAVES", Config.DEFAULT_TREE_MAX_LEAVES)

    @staticmethod
    def tree_max_dim() -> int:
        return Config._int_from_env("KELLER_TREE_MAX_DIM", Config.DEFAULT_TREE_MAX_DIM)

    @staticmethod
    def tree_max_degree() -> int:
        return Config._int_from_env("KELLER_TREE_MAX_DEGREE", Config.DEFAULT_TREE_MAX_DEGREE)

    @staticmethod
    def word_limit() -> int:
        """Largest n**Q for which traces are split by explicit cyclic words."""
        return Config._int_from_env("KELLER_WORD_LIMIT", Config.DEFAULT_WORD_LIMIT)

    @staticmethod
    def log_level() -> str:
        return os.environ.get("KELLER_LOG_LEVEL", Config.DEFAULT_LOG_LEVEL).upper()
