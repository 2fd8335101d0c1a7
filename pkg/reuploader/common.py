import click
import logging
import logging.handlers
import os
from reuploader import const

logger = logging.getLogger("reuploader")


class SizeList(click.ParamType):
    """
    Comma separated training sizes, start:stop:step ranges allowed
    """
    name = "sizes"

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return sorted(set(value))
        sizes = set()
        for chunk in str(value).replace(" ", "").split(","):
            if not chunk:
                continue
            try:
                if ":" in chunk:
                    start, stop, step = (chunk.split(":") + ["1"])[:3]
                    sizes.update(range(int(start), int(stop) + 1, int(step)))
                else:
                    sizes.add(int(chunk))
            except ValueError:
                self.fail("%r is not a training size or start:stop:step range" % chunk, param, ctx)
        if not sizes or min(sizes) < 1:
            self.fail("training sizes must be positive integers, got %r" % value, param, ctx)
        return sorted(sizes)


class EchoHandler(logging.Handler):
    def emit(self, record):
        try:
            click.echo(self.format(record), err=True)
        except Exception:
            self.handleError(record)


def setup_logging(level="info", backend="", verbose=False):
    """
    Echo handler on the package logger, syslog on request
    """
    logger.setLevel(logging.DEBUG if verbose else getattr(logging, level.upper()))
    if not any(isinstance(j, EchoHandler) for j in logger.handlers):
        handler = EchoHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(levelname)s %(message)s"))
        logger.addHandler(handler)
    if backend == "syslog":
        handler = logging.handlers.SysLogHandler(
            address="/dev/log" if os.path.exists("/dev/log") else ("localhost", 514))
        handler.setFormatter(logging.Formatter("reuploader[%(process)d]: %(name)s %(message)s"))
        logger.addHandler(handler)


def attach_sql_log(directory):
    """
    Store log records in the checkpoint database of an output directory
    """
    from reuploader.sqllog import LogHandler
    for handler in logger.handlers:
        if isinstance(handler, LogHandler):
            logger.removeHandler(handler)
    handler = LogHandler.at(os.path.join(directory, const.CHECKPOINT_FILENAME))
    logger.addHandler(handler)
    return handler
