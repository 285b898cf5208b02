"""
Check table component.
"""

import streamlit as st
import pandas as pd

from config.settings import FeatureFlags
from utils.formatters import format_measured, truncate_text


def render_check_table(checks_df: pd.DataFrame, failed_only: bool = False):
    """
    Render the checks of a run as a table.

    Args:
        checks_df: DataFrame from RunQueries.get_checks_for_run
        failed_only: Show only failed checks
    """
    if checks_df.empty:
        st.info("No checks recorded for this run")
        return

    df = checks_df[~checks_df['passed']] if failed_only else checks_df
    if df.empty:
        st.success("All checks passed")
        return

    display = pd.DataFrame({
        'Check': df['name'],
        'Result': df['passed'].map({True: '✅ PASS', False: '❌ FAIL'}),
        'Measured': df['measured'].map(format_measured),
        'Threshold': df['threshold'].map(format_measured),
    })
    if FeatureFlags.is_enabled('ENABLE_CHECK_DETAILS'):
        display['Detail'] = df['detail'].map(lambda d: truncate_text(d, 100))

    st.caption(f"📋 {len(df)} of {len(checks_df)} checks")
    st.dataframe(display, use_container_width=True, hide_index=True)
