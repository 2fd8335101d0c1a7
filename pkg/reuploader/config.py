import configparser
import logging
import os
from collections import OrderedDict
from reuploader import const
from reuploader.errors import ConfigError

logger = logging.getLogger(__name__)

# Options parsed from the flat config file, dashes of CLI flags are written as spaces

SECTION = "reuploader"

EXPERIMENT_KEYS = OrderedDict([
    ("cost", "cost"),
    ("pattern", "pattern"),
    ("method", "method"),
    ("mode", "mode"),
    ("layers", "layers"),
    ("train sizes", "train_sizes"),
    ("test size", "test_size"),
    ("reps", "reps"),
    ("seed", "seed"),
    ("out", "out"),
    ("tune bias", "tune_bias"),
    ("workers", "workers"),
    ("gradient", "gradient"),
    ("max evals", "max_evals"),
    ("preset", "preset"),
])

GLOBAL_KEYS = ("logging backend", "log level")
BOOLEANS = ("tune bias",)
LOGGING_BACKENDS = ("", "sql", "syslog")
LOG_LEVELS = ("debug", "info", "warning", "error")

# Which commands pick up which settings, grid has a single preset
COMMANDS = {
    "run": ("cost", "pattern", "method", "mode", "layers", "train_sizes", "test_size",
        "reps", "seed", "out", "tune_bias", "workers", "gradient", "max_evals"),
    "grid": ("out", "seed", "test_size", "workers", "max_evals"),
    "sweep": ("preset", "out", "seed", "test_size", "workers", "max_evals"),
    "map": ("cost", "pattern", "method", "mode", "layers", "test_size", "seed",
        "tune_bias", "gradient", "max_evals"),
}


def resolve(path=None):
    """
    Explicit path, then $REUPLOADER_CONFIG, then ./reuploader.conf if present
    """
    if path:
        return path
    path = os.getenv(const.CONFIG_ENVIRONMENT)
    if path:
        return path
    if os.path.exists(const.CONFIG_PATH):
        return const.CONFIG_PATH
    return None


def load(path=None):
    """
    Parse the config file into a mapping of setting name to value
    """
    path = resolve(path)
    settings = OrderedDict([("logging backend", ""), ("log level", "info")])
    if not path:
        return settings
    logger.debug("Reading configuration from %s", path)

    cp = configparser.RawConfigParser(delimiters=("=",), comment_prefixes=("#", ";"))
    try:
        with open(path, "r") as fh:
            cp.read_string("[%s]\n" % SECTION + fh.read(), source=path)
    except configparser.Error as e:
        raise ConfigError("Malformed configuration file %s: %s" % (path, e))

    for key, value in cp.items(SECTION):
        if key not in EXPERIMENT_KEYS and key not in GLOBAL_KEYS:
            raise ConfigError("Unknown key %r in %s" % (key, path))
        if key in BOOLEANS:
            try:
                value = cp.getboolean(SECTION, key)
            except ValueError:
                raise ConfigError("Key %r in %s expects yes or no, got %r" % (key, path, value))
        settings[key] = value

    if settings["logging backend"] not in LOGGING_BACKENDS:
        raise ConfigError("Unknown logging backend %r, expected sql or syslog" % settings["logging backend"])
    if settings["log level"].lower() not in LOG_LEVELS:
        raise ConfigError("Unknown log level %r, expected one of %s" % (
            settings["log level"], ", ".join(LOG_LEVELS)))
    return settings


def default_map(settings):
    """
    Turn settings into click's default map, explicit flags still win
    """
    values = dict([(EXPERIMENT_KEYS[key], value)
        for key, value in settings.items() if key in EXPERIMENT_KEYS])
    return dict([(command, dict([(name, values[name]) for name in names if name in values]))
        for command, names in COMMANDS.items()])
