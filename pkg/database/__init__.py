"""
Database module for the cgolab run ledger.
Uses SQLite for local data storage.
"""

from database.connection import (
    close_connection,
    execute_insert,
    execute_many,
    execute_query,
    get_db_connection,
    get_db_path,
)
from database.queries import RunQueries

__all__ = [
    'close_connection',
    'execute_insert',
    'execute_many',
    'execute_query',
    'get_db_connection',
    'get_db_path',
    'RunQueries',
]
