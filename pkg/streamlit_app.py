"""
cgolab Run Dashboard - Main Application
A Streamlit dashboard for browsing the cgolab run ledger.

This is a VIEW-ONLY dashboard: it reads runs and checks logged by the
command line and never starts experiments.
"""

import streamlit as st
import pandas as pd
import logging
from datetime import datetime

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

from database.queries import RunQueries
from components.run_card import render_run_card, render_run_metrics
from components.check_table import render_check_table
from utils.formatters import format_datetime, format_duration, format_status
from config.settings import FeatureFlags, LabSettings


st.set_page_config(
    page_title="cgolab Runs",
    page_icon="🧮",
    layout="wide",
    initial_sidebar_state="expanded"
)


def initialize_session_state():
    """Initialize session state variables."""
    if 'selected_run' not in st.session_state:
        st.session_state.selected_run = None
    if 'subcommand_filter' not in st.session_state:
        st.session_state.subcommand_filter = "All"


def render_sidebar():
    """Render sidebar with navigation and filters."""
    with st.sidebar:
        st.title("cgolab")

        pages = {"Runs": "runs"}
        if FeatureFlags.ENABLE_RUN_HISTORY:
            pages["Run Details"] = "run_details"

        selected_page = st.radio(
            "Navigation",
            options=list(pages.keys()),
            label_visibility="collapsed"
        )

        st.divider()

        subcommands = ["All"] + RunQueries.get_subcommands()
        current = st.session_state.subcommand_filter
        st.session_state.subcommand_filter = st.selectbox(
            "Subcommand",
            options=subcommands,
            index=subcommands.index(current) if current in subcommands else 0
        )

        st.divider()
        st.caption(f"Ledger: {LabSettings.get_db_path()}")

        return pages[selected_page]


def _subcommand_filter():
    value = st.session_state.subcommand_filter
    return None if value == "All" else value


def render_runs_table(runs_df: pd.DataFrame):
    """Render runs as a table."""
    display_df = pd.DataFrame({
        'Run': runs_df['id'],
        'Subcommand': runs_df['subcommand'],
        'Status': runs_df['status'].apply(lambda x: format_status(x) if pd.notna(x) else 'Unknown'),
        'Checks': runs_df['n_checks'],
        'Failed': runs_df['n_failed'],
        'Started': runs_df['started_at'].apply(format_datetime),
        'Duration': runs_df['duration_seconds'].apply(format_duration),
        'Config': runs_df['config_hash'].str[:12],
    })

    st.dataframe(display_df, use_container_width=True, hide_index=True)


def render_runs_page():
    """Render the pass-rate summary and the recent runs."""
    st.title("Runs")

    if FeatureFlags.ENABLE_SUMMARY_METRICS:
        summary_df = RunQueries.get_pass_rate_summary()
        render_run_metrics(summary_df)

        if not summary_df.empty:
            with st.expander("Pass rate by subcommand"):
                display = summary_df.copy()
                display['pass_rate'] = display['pass_rate'].map(lambda r: f"{r:.0%}")
                display['last_run'] = display['last_run'].apply(format_datetime)
                st.dataframe(display, use_container_width=True, hide_index=True)

        st.divider()

    limit = st.slider("Runs to show", min_value=10, max_value=500, value=50, step=10)
    runs_df = RunQueries.get_recent_runs(limit=limit, subcommand=_subcommand_filter())

    if runs_df.empty:
        st.warning("No runs found")
        st.info("Run a subcommand, e.g. `python cgolab.py transforms-selftest`, to populate the ledger.")
        return

    st.caption(f"📋 Showing {len(runs_df)} runs")
    render_runs_table(runs_df)


def render_run_details_page():
    """Render one run with its checks."""
    st.title("Run Details")

    runs_df = RunQueries.get_recent_runs(limit=500, subcommand=_subcommand_filter())
    if runs_df.empty:
        st.warning("No runs found")
        return

    run_ids = runs_df['id'].tolist()
    labels = {
        int(row['id']): f"#{row['id']} {row['subcommand']} ({format_status(row['status'])}, {format_datetime(row['started_at'])})"
        for _, row in runs_df.iterrows()
    }
    default = st.session_state.selected_run
    selected = st.selectbox(
        "Run",
        options=run_ids,
        format_func=lambda i: labels.get(int(i), str(i)),
        index=run_ids.index(default) if default in run_ids else 0
    )
    st.session_state.selected_run = selected

    run = RunQueries.get_run(selected)
    render_run_card(run)

    st.divider()

    failed_only = st.checkbox("Failed checks only", value=False)
    render_check_table(RunQueries.get_checks_for_run(selected), failed_only=failed_only)


def main():
    """Main application entry point."""
    initialize_session_state()
    selected_page = render_sidebar()

    if selected_page == "runs":
        render_runs_page()
    elif selected_page == "run_details":
        render_run_details_page()

    st.divider()
    st.caption(f"cgolab Run Dashboard | Last updated: {format_datetime(datetime.now())}")


if __name__ == "__main__":
    main()
