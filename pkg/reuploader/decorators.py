import functools
import inspect
import json
import logging
import numpy as np

logger = logging.getLogger(__name__)


class MyEncoder(json.JSONEncoder):
    def default(self, obj):
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        return json.JSONEncoder.default(self, obj)


def path_context(func):
    """
    Re-raise I/O errors of a reader or writer taking a path argument with the path attached
    """
    signature = inspect.signature(func)

    @functools.wraps(func)
    def wrapped(*args, **kwargs):
        path = signature.bind_partial(*args, **kwargs).arguments.get("path")
        try:
            return func(*args, **kwargs)
        except OSError as e:
            logger.error("Failed to access %s: %s", path, e)
            if e.filename is None:
                raise type(e)(e.errno, e.strerror or str(e), str(path)) from e
            raise
    return wrapped
