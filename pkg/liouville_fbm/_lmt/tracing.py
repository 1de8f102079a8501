from typing import Optional

from opentelemetry import trace
from opentelemetry.sdk.resources import SERVICE_NAME, Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor

from liouville_fbm._lmt.span_file_exporter import JsonLinesSpanExporter

_provider: Optional[TracerProvider] = None
_exporter: Optional[JsonLinesSpanExporter] = None


def configure_tracing(service_name: str, output_dir: str) -> JsonLinesSpanExporter:
    """
    Route finished spans to ``<output_dir>/spans.jsonl``.

    The global tracer provider can only be installed once per process; later
    calls point the same exporter at the new output directory.
    """
    global _provider, _exporter
    if _provider is None:
        _provider = TracerProvider(resource=Resource.create({SERVICE_NAME: service_name}))
        _exporter = JsonLinesSpanExporter(service_name)
        _provider.add_span_processor(BatchSpanProcessor(_exporter))
        trace.set_tracer_provider(_provider)
    _exporter.retarget(output_dir)
    return _exporter


def flush_tracing() -> None:
    if _provider is not None:
        _provider.force_flush()
