"""Runtime configuration: precision, budgets, cache location, defaults.

Config files are JSON objects with exactly the keys below (unknown keys are
rejected).  Rationals are written as "num/den" strings.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction

CONFIG_KEYS = {"precision_bits", "memory_budget_mb", "cache_dir",
               "default_epsilon", "rng_seed"}

CACHE_DIR_ENV = "GAPSIEVE_CACHE_DIR"


def parse_rational(text: str) -> Fraction:
    """Parse "num/den" (or a plain integer string) into a Fraction."""
    s = str(text).strip()
    if "/" in s:
        num, den = s.split("/", 1)
        den_i = int(den)
        if den_i == 0:
            raise ValueError(f"zero denominator in rational {text!r}")
        return Fraction(int(num), den_i)
    return Fraction(int(s))


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass
class Config:
    precision_bits: int = 128
    memory_budget_mb: int = 1024
    cache_dir: str | None = None
    default_epsilon: Fraction = field(default_factory=lambda: Fraction(1, 100))
    rng_seed: int = 1

    @property
    def memory_budget_bytes(self) -> int:
        return self.memory_budget_mb * (1 << 20)

    def resolved_cache_dir(self) -> str | None:
        env = os.environ.get(CACHE_DIR_ENV)
        return env if env else self.cache_dir


def load_config(path: str) -> Config:
    """Load and validate a JSON config file.

    Raises ValueError with line/column detail on malformed JSON, and on
    unknown keys or invalid values.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(
                f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: top-level JSON value must be an object")
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise ValueError(f"{path}: unknown config keys: {sorted(unknown)}")
    cfg = Config()
    if "precision_bits" in raw:
        cfg.precision_bits = int(raw["precision_bits"])
        if cfg.precision_bits < 2:
            raise ValueError("precision_bits must be >= 2")
    if "memory_budget_mb" in raw:
        cfg.memory_budget_mb = int(raw["memory_budget_mb"])
        if cfg.memory_budget_mb < 1:
            raise ValueError("memory_budget_mb must be >= 1")
    if "cache_dir" in raw:
        if raw["cache_dir"] is not None and not isinstance(raw["cache_dir"], str):
            raise ValueError("cache_dir must be a string or null")
        cfg.cache_dir = raw["cache_dir"]
    if "default_epsilon" in raw:
        eps = parse_rational(raw["default_epsilon"])
        if eps <= 0:
            raise ValueError("default_epsilon must be positive")
        cfg.default_epsilon = eps
    if "rng_seed" in raw:
        cfg.rng_seed = int(raw["rng_seed"])
    return cfg
