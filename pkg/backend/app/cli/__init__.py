"""
Command-line front end: option parsing, subcommand dispatch and report
rendering.
"""

from app.cli.main import cli
from app.cli.runner import RunResult, run

__all__ = ["cli", "run", "RunResult"]
