import logging
from datetime import datetime
from reuploader.relational import RelationalMixin

_formatter = logging.Formatter()


class LogHandler(logging.Handler, RelationalMixin):
    """
    Keep log records of a run next to its checkpointed results
    """
    SQL_CREATE_TABLES = "log_tables.sql"

    def __init__(self, uri, level=logging.NOTSET):
        logging.Handler.__init__(self, level)
        RelationalMixin.__init__(self, uri)

    def emit(self, record):
        try:
            self.sql_execute("log_insert_entry.sql",
                datetime.utcfromtimestamp(record.created), record.name,
                record.levelno, record.levelname.lower(), record.getMessage(),
                record.module, record.funcName, record.lineno,
                _formatter.formatException(record.exc_info) if record.exc_info else "",
                record.process, str(record.thread), record.threadName)
        except Exception:
            self.handleError(record)
