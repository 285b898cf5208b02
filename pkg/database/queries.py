"""
Run-ledger queries for the cgolab dashboard.
All queries are view-only (SELECT statements).
Uses SQLite syntax with ? placeholders.
"""

import logging
import pandas as pd
from pathlib import Path
from typing import Optional, Union
from database.connection import execute_query

logger = logging.getLogger(__name__)

DbPath = Optional[Union[str, Path]]


class RunQueries:
    """Database queries for runs and their checks."""

    @staticmethod
    def get_recent_runs(limit: int = 50, subcommand: Optional[str] = None, db_path: DbPath = None) -> pd.DataFrame:
        """
        Get the most recent runs, newest first.

        Args:
            limit: Maximum number of runs
            subcommand: Restrict to one subcommand
            db_path: Ledger file

        Returns:
            DataFrame with one row per run
        """
        query = """
        SELECT
            id,
            subcommand,
            config_hash,
            started_at,
            completed_at,
            status,
            n_checks,
            n_failed,
            duration_seconds,
            output_dir
        FROM runs
        """
        params = []
        if subcommand:
            query += " WHERE subcommand = ?"
            params.append(subcommand)
        query += " ORDER BY started_at DESC, id DESC LIMIT ?"
        params.append(int(limit))

        try:
            results, columns = execute_query(query, tuple(params), db_path=db_path)
            return pd.DataFrame(results, columns=columns)
        except Exception as e:
            logger.error(f"Error fetching recent runs: {e}")
            return pd.DataFrame()

    @staticmethod
    def get_run(run_id: int, db_path: DbPath = None) -> Optional[dict]:
        """
        Get a single run by id.

        Returns:
            Dictionary of run columns, or None
        """
        query = "SELECT * FROM runs WHERE id = ?"

        try:
            results, columns = execute_query(query, (int(run_id),), db_path=db_path)
            if results:
                return dict(zip(columns, results[0]))
            return None
        except Exception as e:
            logger.error(f"Error fetching run {run_id}: {e}")
            return None

    @staticmethod
    def get_checks_for_run(run_id: int, db_path: DbPath = None) -> pd.DataFrame:
        """
        Get the checks recorded for one run, in recording order.

        Args:
            run_id: Run id
            db_path: Ledger file

        Returns:
            DataFrame with name, passed, measured, threshold, detail
        """
        query = """
        SELECT
            name,
            passed,
            measured,
            threshold,
            detail
        FROM checks
        WHERE run_id = ?
        ORDER BY id
        """

        try:
            results, columns = execute_query(query, (int(run_id),), db_path=db_path)
            df = pd.DataFrame(results, columns=columns)
            if not df.empty:
                df['passed'] = df['passed'].astype(bool)
            return df
        except Exception as e:
            logger.error(f"Error fetching checks for run {run_id}: {e}")
            return pd.DataFrame()

    @staticmethod
    def get_pass_rate_summary(db_path: DbPath = None) -> pd.DataFrame:
        """
        Pass rate per subcommand: runs, runs without failed checks, and their ratio.

        Returns:
            DataFrame with subcommand, n_runs, n_passed, pass_rate, last_run
        """
        query = """
        SELECT
            subcommand,
            COUNT(*) AS n_runs,
            SUM(CASE WHEN status = 'completed' AND n_failed = 0 THEN 1 ELSE 0 END) AS n_passed,
            MAX(started_at) AS last_run
        FROM runs
        GROUP BY subcommand
        ORDER BY subcommand
        """

        try:
            results, columns = execute_query(query, db_path=db_path)
            df = pd.DataFrame(results, columns=columns)
            if not df.empty:
                df['pass_rate'] = df['n_passed'] / df['n_runs']
            return df
        except Exception as e:
            logger.error(f"Error fetching pass-rate summary: {e}")
            return pd.DataFrame()

    @staticmethod
    def get_subcommands(db_path: DbPath = None) -> list:
        """Distinct subcommands present in the ledger."""
        query = "SELECT DISTINCT subcommand FROM runs ORDER BY subcommand"

        try:
            results, _ = execute_query(query, db_path=db_path)
            return [row[0] for row in results]
        except Exception as e:
            logger.error(f"Error fetching subcommands: {e}")
            return []
