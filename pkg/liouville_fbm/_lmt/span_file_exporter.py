import json
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from opentelemetry.sdk.trace import ReadableSpan
from opentelemetry.sdk.trace.export import SpanExporter, SpanExportResult


def _timestamp(nanos: int) -> str:
    return datetime.fromtimestamp(nanos / 1_000_000_000, tz=timezone.utc).isoformat()


class JsonLinesSpanExporter(SpanExporter):
    """Appends one JSON document per finished span to ``<output_dir>/spans.jsonl``."""

    FILE_NAME = "spans.jsonl"

    def __init__(self, service_name: str, output_dir: Optional[str] = None):
        self._service_name = service_name
        self._path: Optional[Path] = None
        self._lock = threading.Lock()
        if output_dir is not None:
            self.retarget(output_dir)

    @property
    def path(self) -> Optional[Path]:
        return self._path

    def retarget(self, output_dir: str) -> None:
        directory = Path(output_dir)
        directory.mkdir(parents=True, exist_ok=True)
        with self._lock:
            self._path = directory / self.FILE_NAME

    def export(self, spans: Sequence[ReadableSpan]) -> SpanExportResult:
        if self._path is None:
            return SpanExportResult.SUCCESS
        try:
            lines = [json.dumps(self._build_document(span), sort_keys=True) for span in spans]
            with self._lock, open(self._path, "a", encoding="utf-8") as f:
                for line in lines:
                    f.write(line + "\n")
            return SpanExportResult.SUCCESS
        except Exception as ex:
            print(f"[JsonLinesSpanExporter] Export failed: {ex}")
            return SpanExportResult.FAILURE

    def _build_document(self, span: ReadableSpan) -> dict:
        parent_span_id = format(span.parent.span_id, "016x") if span.parent else "0000000000000000"
        return {
            "TraceId": format(span.context.trace_id, "032x"),
            "SpanId": format(span.context.span_id, "016x"),
            "ParentSpanId": parent_span_id,
            "OperationName": span.name,
            "StartTime": _timestamp(span.start_time),
            "EndTime": _timestamp(span.end_time),
            "Duration": (span.end_time - span.start_time) / 1e6,
            "Attributes": dict(span.attributes or {}),
            "Status": str(span.status.status_code),
            "StatusDescription": span.status.description,
            "ServiceName": self._service_name,
        }

    def force_flush(self, timeout_millis: int = 30000) -> bool:
        return True

    def shutdown(self) -> None:
        with self._lock:
            self._path = None
