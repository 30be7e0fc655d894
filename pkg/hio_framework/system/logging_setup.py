import logging

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def verbosity_to_level(verbosity: int) -> int:
    if verbosity <= 0:
        return logging.WARNING
    if verbosity == 1:
        return logging.INFO
    return logging.DEBUG


def configure_logging(verbosity: int = 0):
    logger = logging.getLogger("hio_framework")
    logger.setLevel(verbosity_to_level(verbosity))
    if not any(getattr(h, "_hio_handler", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._hio_handler = True
        logger.addHandler(handler)
    return logger
