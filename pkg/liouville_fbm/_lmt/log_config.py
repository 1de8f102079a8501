import logging
from contextvars import ContextVar

from liouville_fbm._lmt.activity import Activity

_run_id: ContextVar[str] = ContextVar("run_id", default="-")

LOG_FORMAT = "[%(asctime)s] [%(levelname)s] [%(RunId)s] [%(TraceId)s] %(message)s"


def set_run_id(run_id: str) -> None:
    _run_id.set(run_id)


def get_run_id() -> str:
    return _run_id.get()


class TraceContextFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        """Add run and trace context to log records."""
        record.RunId = get_run_id()
        record.TraceId = Activity.get_trace_id()
        record.SpanId = Activity.get_span_id()
        return True


def configure_logger(level: str = "INFO") -> None:
    logger = logging.getLogger()
    logger.setLevel(level)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
    console_handler.addFilter(TraceContextFilter())

    logger.handlers.clear()
    logger.addHandler(console_handler)

    # matplotlib logs font discovery at INFO
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
