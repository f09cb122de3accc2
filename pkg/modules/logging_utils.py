# modules/logging_utils.py
import logging
import functools
import os
from logging.handlers import RotatingFileHandler

import environ

env = environ.Env()

LOG_DIR = env("KNOTFORGE_LOG_DIR", default="logs")
# DEBUG adds a call trace for every function wrapped by log_function_call
LOG_LEVEL = env("KNOTFORGE_LOG_LEVEL", default="INFO").upper()

# Create logs directory if it doesn't exist
os.makedirs(LOG_DIR, exist_ok=True)

# Console stays quiet so CLI output is not interleaved with log lines
console_handler = logging.StreamHandler()
console_handler.setLevel(logging.WARNING)
logging.basicConfig(level=logging.WARNING, handlers=[console_handler])

file_handler = RotatingFileHandler(
    os.path.join(LOG_DIR, 'knotforge.log'),
    maxBytes=10485760,       # 10MB
    backupCount=5
)

formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
file_handler.setFormatter(formatter)

root_logger = logging.getLogger()
root_logger.addHandler(file_handler)

# app_logger and the per-module loggers used by log_function_call
app_logger = logging.getLogger('knotforge')
modules_logger = logging.getLogger('modules')


def set_log_level(level):
    """Level for the file handler and the knotforge loggers; the console stays at WARNING."""
    level = logging.getLevelName(level.upper()) if isinstance(level, str) else level
    if not isinstance(level, int):
        raise ValueError(f"unknown log level {level!r}")
    file_handler.setLevel(level)
    app_logger.setLevel(level)
    modules_logger.setLevel(level)
    return level


set_log_level(LOG_LEVEL)

_MAX_REPR = 200


def _short(value):
    text = repr(value)
    if len(text) > _MAX_REPR:
        return text[:_MAX_REPR] + '...'
    return text


def log_function_call(func):
    # Logger of the module where the decorated function is defined
    logger = logging.getLogger(func.__module__)

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        if not logger.isEnabledFor(logging.DEBUG):
            return func(*args, **kwargs)
        logger.debug(f"Calling function: {func.__name__} with args: {_short(args)} and kwargs: {_short(kwargs)}")
        result = func(*args, **kwargs)
        logger.debug(f"Function {func.__name__} returned: {_short(result)}")
        return result
    return wrapper
