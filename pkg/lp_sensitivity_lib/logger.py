import logging
import os
import time
from logging.handlers import RotatingFileHandler

from .constants import (ENV_DEBUG, ENV_DEBUG_CONSOLE, LOG_BACKUP_COUNT,
                        LOG_MAX_BYTES, LOGFILE, LOGGER_NAME)

# Sampling trials run on worker threads, so the thread name is kept.
LOG_FORMAT = (
    "%(asctime)s | %(levelname)s | %(threadName)s | "
    "%(module)s.%(funcName)s:%(lineno)d | %(message)s"
)


def _env_flag(name):
    return str(os.environ.get(name, "")).strip().lower() in ("1", "true")


def _formatter():
    formatter = logging.Formatter(LOG_FORMAT)
    formatter.converter = time.gmtime
    return formatter


def get_logger(name=LOGGER_NAME, logfile=LOGFILE):
    """Logger writing to a rotating file under the XDG cache directory.

    LP_SENSITIVITY_DEBUG=true lowers the level to DEBUG and
    LP_SENSITIVITY_DEBUG_CONSOLE=true mirrors records to stderr. A logger
    that already has handlers is returned as is.

    Args:
        name (string): logger name
        logfile (string): path of the rotating log file

    Returns:
        logging.Logger
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger

    directory = os.path.dirname(os.path.abspath(logfile))
    if not os.path.isdir(directory):
        os.makedirs(directory)

    formatter = _formatter()
    file_handler = RotatingFileHandler(
        logfile, maxBytes=LOG_MAX_BYTES, backupCount=LOG_BACKUP_COUNT
    )
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)

    if _env_flag(ENV_DEBUG_CONSOLE):
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    logger.setLevel(logging.DEBUG if _env_flag(ENV_DEBUG) else logging.INFO)
    return logger


logger = get_logger()
