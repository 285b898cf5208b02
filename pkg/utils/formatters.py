"""
Formatting utilities for displaying runs and checks in the dashboard.
"""

import math
from datetime import datetime
from typing import Any, Optional, Union


def format_datetime(dt: Optional[Union[datetime, str]], date_only: bool = False) -> str:
    """
    Format a datetime, or a ledger timestamp string, for display.

    Args:
        dt: Datetime object or 'YYYY-MM-DD HH:MM:SS' string
        date_only: If True, show only date

    Returns:
        Formatted datetime string
    """
    if dt is None or dt == "":
        return "N/A"

    if isinstance(dt, str):
        try:
            dt = datetime.strptime(dt, "%Y-%m-%d %H:%M:%S")
        except ValueError:
            return dt

    try:
        if date_only:
            return dt.strftime("%Y-%m-%d")
        return dt.strftime("%Y-%m-%d %H:%M")
    except (AttributeError, ValueError):
        return str(dt)


def format_duration(seconds: Optional[float]) -> str:
    """
    Format a run duration.

    Args:
        seconds: Duration in seconds

    Returns:
        '850 ms', '12.3 s', '4.2 min' or '1.5 hrs'
    """
    if seconds is None:
        return "N/A"

    try:
        seconds = float(seconds)
    except (TypeError, ValueError):
        return "N/A"
    if not math.isfinite(seconds) or seconds < 0:
        return "N/A"

    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    elif seconds < 60:
        return f"{seconds:.1f} s"
    elif seconds < 3600:
        return f"{seconds / 60:.1f} min"
    return f"{seconds / 3600:.1f} hrs"


def format_measured(value: Any) -> str:
    """Measured values and thresholds in compact scientific notation."""
    if value is None:
        return "N/A"
    try:
        value = float(value)
    except (TypeError, ValueError):
        return str(value)
    if math.isnan(value):
        return "N/A"
    if value == 0:
        return "0"
    if 1e-3 <= abs(value) < 1e4:
        return f"{value:.4g}"
    return f"{value:.3e}"


def format_status(status: Optional[str]) -> str:
    """
    Format run status for display.

    Args:
        status: 'completed', 'failed' or 'running'

    Returns:
        Capitalized status
    """
    if not status:
        return "Unknown"
    return status.capitalize()


def status_badge(status: str) -> str:
    """
    Create a colored badge for run status.

    Args:
        status: Run status

    Returns:
        HTML string with colored badge
    """
    status_colors = {
        "completed": "#2ecc71",  # Green
        "failed": "#F44336",     # Red
        "running": "#3498db",    # Blue
    }

    color = status_colors.get(str(status).lower(), "#607D8B")

    return f'<span style="background-color: {color}; color: white; padding: 4px 12px; border-radius: 12px; font-size: 0.85em; font-weight: 500;">{format_status(status)}</span>'


def pass_badge(passed: bool) -> str:
    """Green PASS or red FAIL badge."""
    color = "#2ecc71" if passed else "#F44336"
    label = "PASS" if passed else "FAIL"
    return f'<span style="background-color: {color}; color: white; padding: 2px 10px; border-radius: 10px; font-size: 0.8em; font-weight: 600;">{label}</span>'


def truncate_text(text: Optional[str], max_length: int = 80) -> str:
    """
    Truncate check details for table cells.

    Args:
        text: Text to truncate
        max_length: Maximum length

    Returns:
        Truncated text with ellipsis if needed
    """
    if not text:
        return ""

    if len(text) <= max_length:
        return text

    return text[:max_length - 3] + "..."
