"""
UI Components for the cgolab run dashboard.
"""

from components.check_table import render_check_table
from components.run_card import render_run_card, render_run_metrics

__all__ = [
    'render_check_table',
    'render_run_card',
    'render_run_metrics',
]
