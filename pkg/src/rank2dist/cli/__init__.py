"""Command line front end: manifests, dispatch and golden reports."""

from .main import COMMANDS, catalog_regression, main, run_command
from .manifest import Manifest, Options, parse_manifest, parse_point, serialize

__all__ = [
    "COMMANDS",
    "Manifest",
    "Options",
    "catalog_regression",
    "main",
    "parse_manifest",
    "parse_point",
    "run_command",
    "serialize",
]
