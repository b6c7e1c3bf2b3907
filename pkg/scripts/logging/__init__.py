import logging
import sys
from typing import Optional

from scripts.config import Logging


def setup_logger(name, log_file: Optional[str] = None, level=logging.INFO):
    """
    Function to set up a logger; creates a console handler on the diagnostic stream
    and, when a log file is configured, a file handler as well.

    Args:
        name (str): Name of the logger.
        log_file (str, optional): File to log messages to. No file handler when unset.
        level (int | str): Logging level (default is logging.INFO).

    Returns:
        logging.Logger: Configured logger.
    """

    _logger = logging.getLogger(name)
    _logger.setLevel(level)
    _logger.propagate = False
    if _logger.handlers:
        return _logger

    log_format = logging.Formatter(
        "%(asctime)s - %(levelname)-6s - [%(threadName)5s:%(funcName)5s("
        "): %(lineno)s] "
        "- %(message)s "
    )

    c_handler = logging.StreamHandler(sys.stderr)
    c_handler.setLevel(level)
    c_handler.setFormatter(log_format)
    _logger.addHandler(c_handler)

    if log_file:
        f_handler = logging.FileHandler(log_file)
        f_handler.setLevel(level)
        f_handler.setFormatter(log_format)
        _logger.addHandler(f_handler)

    return _logger


logger = setup_logger("boseq", Logging.LOG_FILE, Logging.LEVEL)
