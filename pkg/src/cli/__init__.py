"""
Subcommands of the cgolab command line.
"""

from src.cli.commands import (
    COMMANDS,
    cmd_carleman,
    cmd_cgo_build,
    cmd_identity,
    cmd_phase_build,
    cmd_recover,
    cmd_transforms_selftest,
)

__all__ = [
    'COMMANDS',
    'cmd_carleman',
    'cmd_cgo_build',
    'cmd_identity',
    'cmd_phase_build',
    'cmd_recover',
    'cmd_transforms_selftest',
]
