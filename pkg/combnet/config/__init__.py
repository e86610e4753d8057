"""
Configuration package.

Command configuration schema and helpers for parsing values, environment
overrides and logging setup.
"""

from .command_config import (
    DEFAULT_SEED,
    DEFAULT_CONFIG,
    Subcommand,
    Scheme,
    CommandConfig,
    get_default_config,
)

from .config_helpers import (
    ENV_SEED,
    ENV_LOG_LEVEL,
    ENV_OUTPUT_DIR,
    parse_rational,
    parse_halfplane,
    env_seed,
    env_output_dir,
    resolve_output,
    apply_env_overrides,
    log_level,
    configure_logging,
)

__all__ = [
    # Schema
    "DEFAULT_SEED",
    "DEFAULT_CONFIG",
    "Subcommand",
    "Scheme",
    "CommandConfig",
    "get_default_config",

    # Helpers
    "ENV_SEED",
    "ENV_LOG_LEVEL",
    "ENV_OUTPUT_DIR",
    "parse_rational",
    "parse_halfplane",
    "env_seed",
    "env_output_dir",
    "resolve_output",
    "apply_env_overrides",
    "log_level",
    "configure_logging",
]
