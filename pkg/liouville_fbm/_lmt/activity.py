from numbers import Integral, Real
from typing import Any, Dict, Optional

from opentelemetry import trace
from opentelemetry.context import attach, detach, get_current
from opentelemetry.trace import Span, StatusCode, get_current_span

_tracer = trace.get_tracer("liouville_fbm.activity")


def _attribute_value(value: Any):
    # numpy scalars and arrays are not valid span attributes
    if isinstance(value, (bool, str)):
        return value
    if isinstance(value, Integral):
        return int(value)
    if isinstance(value, Real):
        return float(value)
    if isinstance(value, (list, tuple)):
        return [_attribute_value(v) for v in value]
    return str(value)


class Activity:
    """A span around one unit of numerical work, usable as a context manager."""

    def __init__(self, name: str, attributes: Optional[Dict[str, Any]] = None):
        self._context = get_current()
        self._span = _tracer.start_span(name, context=self._context)
        if attributes:
            self.set_properties(attributes)
        self._token = attach(trace.set_span_in_context(self._span, self._context))

    def set_property(self, key: str, value):
        if self._span.is_recording():
            self._span.set_attribute(key, _attribute_value(value))

    def set_properties(self, props: dict):
        if self._span.is_recording():
            for k, v in props.items():
                self._span.set_attribute(k, _attribute_value(v))

    def set_status(self, status_code: StatusCode, description: str = ""):
        self._span.set_status(status_code, description)

    def stop(self):
        self._span.end()
        detach(self._token)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is not None:
            self._span.record_exception(exc_val)
            self.set_status(StatusCode.ERROR, str(exc_val))
        self.stop()

    @staticmethod
    def current() -> Span:
        return get_current_span()

    @staticmethod
    def get_trace_id() -> str:
        span = Activity.current()
        return format(span.get_span_context().trace_id, "032x") if span else ""

    @staticmethod
    def get_span_id() -> str:
        span = Activity.current()
        return format(span.get_span_context().span_id, "016x") if span else ""
