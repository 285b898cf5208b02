"""
Utility functions for cgolab.
"""

from utils.formatters import (
    format_datetime,
    format_duration,
    format_measured,
    format_status,
    pass_badge,
    status_badge,
    truncate_text,
)
from utils.serialization import canonical_json, stable_hash, to_jsonable, write_csv, write_json

__all__ = [
    'format_datetime',
    'format_duration',
    'format_measured',
    'format_status',
    'pass_badge',
    'status_badge',
    'truncate_text',
    'canonical_json',
    'stable_hash',
    'to_jsonable',
    'write_csv',
    'write_json',
]
