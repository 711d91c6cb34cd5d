"""Configuration-driven command-line front end."""
from .config import SCENARIOS, ConfigError, RunConfig, load_config, parse_config
from .main import build_parser, main

__all__ = ["SCENARIOS", "ConfigError", "RunConfig", "load_config", "parse_config", "build_parser", "main"]
