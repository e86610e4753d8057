"""
Configuration Helper Functions

Parsing of command-line values and environment overrides, plus the single
place where logging is configured.
"""

import logging
import os
from fractions import Fraction
from typing import Dict, Optional, Tuple

from ..errors import MalformedArgumentError
from .command_config import DEFAULT_SEED


ENV_SEED = "COMBNET_SEED"
ENV_LOG_LEVEL = "COMBNET_LOG_LEVEL"
ENV_OUTPUT_DIR = "COMBNET_OUTPUT_DIR"

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


# ============================================================================
# Value Parsing
# ============================================================================

def parse_rational(text: str) -> Fraction:
    """
    Parse an exact rational.

    Args:
        text: Integer, 'p/q' or a finite decimal such as '1.5'

    Returns:
        Non-negative Fraction
    """
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedArgumentError(f"not a rational number: {text!r}") from exc
    if value < 0:
        raise MalformedArgumentError(f"rates must be non-negative, got {text}")
    return value


def parse_halfplane(text: str) -> Tuple[int, int, int]:
    """'4,2,7' or '4 2 7' -> (4, 2, 7)."""
    tokens = text.replace(",", " ").split()
    if len(tokens) != 3:
        raise MalformedArgumentError(f"half-plane needs three integers m1,m2,E, got {text!r}")
    try:
        m1, m2, E = (int(token) for token in tokens)
    except ValueError as exc:
        raise MalformedArgumentError(f"half-plane coefficients must be integers: {text!r}") from exc
    if m1 < 0 or m2 < 0 or (m1 == 0 and m2 == 0):
        raise MalformedArgumentError(f"half-plane needs non-negative coefficients, not both zero: {text!r}")
    return m1, m2, E


# ============================================================================
# Environment Overrides
# ============================================================================

def env_seed(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise MalformedArgumentError(f"{ENV_SEED} must be an integer, got {raw!r}") from exc


def env_output_dir() -> Optional[str]:
    return os.environ.get(ENV_OUTPUT_DIR) or None


def resolve_output(path: Optional[str], default_name: str) -> str:
    """Output path; bare names land in COMBNET_OUTPUT_DIR when it is set."""
    name = path or default_name
    directory = env_output_dir()
    if directory and not os.path.isabs(name) and os.path.dirname(name) == "":
        os.makedirs(directory, exist_ok=True)
        return os.path.join(directory, name)
    return name


def apply_env_overrides(config: Dict, seed_given: bool = False) -> Dict:
    """Fill the seed from the environment unless the command line set it."""
    updated = dict(config)
    if not seed_given:
        updated["seed"] = env_seed(updated.get("seed", DEFAULT_SEED))
    return updated


# ============================================================================
# Logging
# ============================================================================

def log_level(verbose: bool = False) -> int:
    if verbose:
        return logging.DEBUG
    name = os.environ.get(ENV_LOG_LEVEL, "WARNING").upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.WARNING


def configure_logging(verbose: bool = False) -> None:
    logging.basicConfig(level=log_level(verbose), format=LOG_FORMAT)
