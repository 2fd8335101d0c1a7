import os
import re
import sqlite3
from contextlib import contextmanager
from functools import lru_cache
from urllib.parse import urlparse

SCRIPT_DIRECTORY = os.path.join(os.path.dirname(__file__), "sql", "sqlite")


@lru_cache(maxsize=None)
def load_script(filename):
    """
    Read a statement from sql/sqlite/ and fold it onto one line
    """
    with open(os.path.join(SCRIPT_DIRECTORY, filename)) as fh:
        return re.sub(r"\s*\n\s*", " ", fh.read()).strip()


class RelationalMixin(object):
    """
    SQLite storage for classes that declare their schema in SQL_CREATE_TABLES
    """

    SQL_CREATE_TABLES = ""

    class DoesNotExist(Exception):
        pass

    def __init__(self, uri):
        parsed = urlparse(uri)
        if parsed.scheme != "sqlite" or parsed.netloc:
            raise NotImplementedError("Unsupported database URI %s, only sqlite:///path/to/database.sqlite is supported" % uri)
        self.database = parsed.path
        self._schema_ready = False

    @classmethod
    def at(cls, path):
        return cls("sqlite://" + os.path.abspath(path))

    @contextmanager
    def sql_connection(self):
        try:
            conn = sqlite3.connect(self.database,
                detect_types=sqlite3.PARSE_DECLTYPES | sqlite3.PARSE_COLNAMES)
        except sqlite3.Error as e:
            raise sqlite3.OperationalError("%s: %s" % (self.database, e)) from e
        conn.row_factory = sqlite3.Row
        try:
            if self.SQL_CREATE_TABLES and not self._schema_ready:
                conn.executescript(load_script(self.SQL_CREATE_TABLES))
                self._schema_ready = True
            yield conn
            conn.commit()
        finally:
            conn.close()

    def sql_execute(self, script, *args):
        with self.sql_connection() as conn:
            return conn.execute(load_script(script), args).lastrowid

    def iterfetch(self, query, *args):
        with self.sql_connection() as conn:
            return tuple(dict(row) for row in conn.execute(query, args))

    def get(self, query, *args):
        with self.sql_connection() as conn:
            row = conn.execute(query, args).fetchone()
        if row is None:
            raise self.DoesNotExist("No matches for %r with parameters %r" % (query, args))
        return tuple(row)
