"""
Run card component for displaying one ledger entry.
"""

import streamlit as st
from typing import Any, Dict

import pandas as pd

from utils.formatters import (
    format_datetime,
    format_duration,
    status_badge,
)


def render_run_card(run: Dict[str, Any]):
    """
    Render a run card with status, timing and check counts.

    Args:
        run: Dictionary of runs columns
    """
    if not run:
        st.warning("No run data to display")
        return

    with st.container():
        col1, col2 = st.columns([2, 1])

        with col1:
            st.subheader(f"Run {run.get('id', 'N/A')}: {run.get('subcommand', 'unknown')}")

        with col2:
            st.markdown(status_badge(run.get('status', 'unknown')), unsafe_allow_html=True)

        st.caption(f"Config {str(run.get('config_hash') or '')[:12]}")

        col1, col2, col3, col4 = st.columns(4)

        with col1:
            st.metric("Checks", run.get('n_checks', 0))

        with col2:
            st.metric("Failed", run.get('n_failed', 0))

        with col3:
            st.metric("Duration", format_duration(run.get('duration_seconds')))

        with col4:
            st.markdown("**Started**")
            st.write(format_datetime(run.get('started_at')))

        if run.get('output_dir'):
            st.caption(f"Artifacts: {run['output_dir']}/{run.get('subcommand')}")


def render_run_metrics(summary_df: pd.DataFrame):
    """
    Render ledger-wide metrics from the pass-rate summary.

    Args:
        summary_df: DataFrame from RunQueries.get_pass_rate_summary
    """
    if summary_df.empty:
        st.info("No runs recorded yet")
        return

    total_runs = int(summary_df['n_runs'].sum())
    total_passed = int(summary_df['n_passed'].sum())

    col1, col2, col3 = st.columns(3)

    with col1:
        st.metric("Total Runs", total_runs)

    with col2:
        st.metric("Passing Runs", total_passed)

    with col3:
        rate = total_passed / total_runs if total_runs else 0.0
        st.metric("Pass Rate", f"{rate:.0%}")
