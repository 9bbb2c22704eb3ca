import functools
import logging
import time

from typing import Callable


def log_usage(level: int = logging.DEBUG) -> Callable:
    """
    Decorator logging each call of a public operation with its wall time.

    Records are emitted on the logger of the module defining the function,
    in ``key=value`` form so they can be grepped or parsed.

    Args:
        level (int): Logging level of the records. Default to ``DEBUG``
    """

    def _decorator(func: Callable) -> Callable:
        logger = logging.getLogger(func.__module__)

        @functools.wraps(func)
        def _wrapper(*args, **kwargs):
            if not logger.isEnabledFor(level):
                return func(*args, **kwargs)
            start = time.perf_counter()
            out = func(*args, **kwargs)
            logger.log(
                level,
                "op=%s elapsed=%.6fs",
                func.__qualname__,
                time.perf_counter() - start,
            )
            return out

        return _wrapper

    return _decorator


def configure_logging(level: str = "WARNING") -> None:
    """
    Configure the root logger for command line usage.

    Args:
        level (str): Name of the logging level. Default to ``'WARNING'``
    """
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(asctime)s level=%(levelname)s logger=%(name)s %(message)s",
    )
