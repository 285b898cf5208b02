"""
Connection management for the cgolab run ledger.
Handles SQLite connections - no external database server required.
"""

import streamlit as st
import sqlite3
from typing import Optional, List, Tuple, Union
import logging
from pathlib import Path

from config.settings import LabSettings

logger = logging.getLogger(__name__)

SCHEMA_FILE = Path(__file__).parent / "schema.sql"


def get_db_path(db_path: Optional[Union[str, Path]] = None) -> str:
    """
    Resolve the ledger file path, creating its directory if needed.

    Args:
        db_path: Explicit path; LabSettings.get_db_path() when omitted

    Returns:
        Path to SQLite database file
    """
    path = Path(db_path) if db_path is not None else LabSettings.get_db_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    return str(path)


@st.cache_resource
def get_db_connection(db_path: str):
    """
    Get a SQLite connection for a ledger file.
    Cached as a Streamlit resource, one connection per path.

    Args:
        db_path: Resolved ledger path

    Returns:
        SQLite connection object
    """
    logger.info(f"Connecting to SQLite database at {db_path}")

    conn = sqlite3.connect(db_path, check_same_thread=False)
    conn.row_factory = sqlite3.Row

    conn.execute("PRAGMA foreign_keys = ON")
    _initialize_schema(conn)

    return conn


def _initialize_schema(conn: sqlite3.Connection):
    """
    Initialize the ledger schema if the tables don't exist.

    Args:
        conn: SQLite connection
    """
    cursor = conn.cursor()
    cursor.execute("""
        SELECT name FROM sqlite_master
        WHERE type='table' AND name='runs'
    """)

    if cursor.fetchone() is None:
        logger.info("Initializing run ledger schema...")
        if SCHEMA_FILE.exists():
            with open(SCHEMA_FILE, 'r') as f:
                conn.executescript(f.read())
            conn.commit()
            logger.info("Run ledger schema initialized successfully")
        else:
            logger.warning(f"Schema file not found: {SCHEMA_FILE}")

    cursor.close()


def execute_query(query: str, params: tuple = None, fetch: bool = True,
                  db_path: Optional[Union[str, Path]] = None) -> Optional[Tuple[List, List[str]]]:
    """
    Execute a SQL query with automatic connection management.

    Args:
        query: SQL query string
        params: Query parameters (optional)
        fetch: Whether to fetch results (default: True)
        db_path: Ledger file; the configured default when omitted

    Returns:
        Tuple of (results, column_names) if fetch=True, otherwise None
    """
    conn = get_db_connection(get_db_path(db_path))
    cursor = None

    try:
        cursor = conn.cursor()

        if params:
            cursor.execute(query, params)
        else:
            cursor.execute(query)

        if fetch:
            results = cursor.fetchall()
            column_names = [desc[0] for desc in cursor.description] if cursor.description else []
            conn.commit()
            results = [tuple(row) for row in results]
            return results, column_names
        else:
            conn.commit()
            return None

    except Exception as e:
        conn.rollback()
        logger.error(f"Ledger query failed: {e} (query: {' '.join(query.split())}, params: {params})")
        raise

    finally:
        if cursor:
            cursor.close()


def execute_insert(query: str, params: tuple, db_path: Optional[Union[str, Path]] = None) -> int:
    """
    Execute a single INSERT and return the new row id.

    Args:
        query: INSERT statement with ? placeholders
        params: Query parameters
        db_path: Ledger file

    Returns:
        lastrowid of the inserted row
    """
    conn = get_db_connection(get_db_path(db_path))
    cursor = None

    try:
        cursor = conn.cursor()
        cursor.execute(query, params)
        row_id = cursor.lastrowid
        conn.commit()
        return row_id

    except Exception as e:
        conn.rollback()
        logger.error(f"Database insert error: {e}")
        raise

    finally:
        if cursor:
            cursor.close()


def execute_many(query: str, data: list, db_path: Optional[Union[str, Path]] = None) -> int:
    """
    Execute a query with multiple parameter sets (batch insert/update).

    Args:
        query: SQL query string with parameter placeholders
        data: List of parameter tuples
        db_path: Ledger file

    Returns:
        Number of rows affected
    """
    conn = get_db_connection(get_db_path(db_path))
    cursor = None

    try:
        cursor = conn.cursor()
        cursor.executemany(query, data)
        rows_affected = cursor.rowcount
        conn.commit()
        return rows_affected

    except Exception as e:
        conn.rollback()
        logger.error(f"Database batch operation error: {e}")
        raise

    finally:
        if cursor:
            cursor.close()


def close_connection(db_path: Optional[Union[str, Path]] = None):
    """Close a ledger connection and drop it from the resource cache."""
    try:
        conn = get_db_connection(get_db_path(db_path))
        conn.close()
        get_db_connection.clear()
        logger.info("Database connection closed")
    except Exception as e:
        logger.error(f"Error closing database connection: {e}")
