"""Command line harness: configs, verification suites and reports."""
from .config import ConfigError, RunConfig, validate
from .report import SCHEMA_VERSION
