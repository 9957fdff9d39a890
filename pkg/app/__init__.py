import logging
import sys

from config import DEBUG, LOG_LEVEL


def configure_logging(stream=None):
    """Route library logging to one handler; reports go to stdout, logs never do."""
    logging.basicConfig(
        level=logging.DEBUG if DEBUG else LOG_LEVEL,
        format='%(asctime)s [%(levelname)s] %(name)s: %(message)s',
        stream=stream or sys.stderr,
    )
