import json
import logging

import numpy as np
import pytest
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor
from opentelemetry.trace import StatusCode

from liouville_fbm._lmt.activity import Activity, _attribute_value
from liouville_fbm._lmt.log_config import TraceContextFilter, configure_logger, get_run_id, set_run_id
from liouville_fbm._lmt.span_file_exporter import JsonLinesSpanExporter


def _record() -> logging.LogRecord:
    return logging.LogRecord('x', logging.INFO, __file__, 1, 'msg', None, None)


def test_trace_context_filter_adds_run_and_trace_ids():
    set_run_id('heat:7')
    record = _record()
    assert TraceContextFilter().filter(record)
    assert record.RunId == 'heat:7'
    assert len(record.TraceId) == 32
    assert get_run_id() == 'heat:7'


def test_configure_logger_installs_one_handler():
    configure_logger('DEBUG')
    configure_logger('WARNING')
    root = logging.getLogger()
    assert len(root.handlers) == 1
    assert root.level == logging.WARNING
    assert any(isinstance(f, TraceContextFilter) for f in root.handlers[0].filters)


def test_attribute_values_are_span_safe():
    assert _attribute_value(np.float64(0.5)) == 0.5
    assert isinstance(_attribute_value(np.int64(3)), int)
    assert _attribute_value([np.float32(1.0), 'a']) == [1.0, 'a']
    assert _attribute_value({'a': 1}) == "{'a': 1}"


def test_activity_propagates_exceptions():
    with pytest.raises(RuntimeError):
        with Activity('unit.failing', {'beta': 0.3}) as activity:
            activity.set_property('n', np.int64(3))
            raise RuntimeError('boom')


def test_span_exporter_writes_json_lines(tmp_path):
    exporter = JsonLinesSpanExporter('unit-test', str(tmp_path))
    provider = TracerProvider()
    provider.add_span_processor(SimpleSpanProcessor(exporter))
    tracer = provider.get_tracer('unit')
    with tracer.start_as_current_span('outer') as span:
        span.set_attribute('beta', 0.25)
        with tracer.start_as_current_span('inner') as inner:
            inner.set_status(StatusCode.ERROR, 'bad')
    lines = (tmp_path / JsonLinesSpanExporter.FILE_NAME).read_text().splitlines()
    documents = [json.loads(line) for line in lines]
    assert [d['OperationName'] for d in documents] == ['inner', 'outer']
    assert documents[0]['ParentSpanId'] == documents[1]['SpanId']
    assert documents[1]['Attributes'] == {'beta': 0.25}
    assert documents[0]['StatusDescription'] == 'bad'
    assert all(d['ServiceName'] == 'unit-test' for d in documents)


def test_span_exporter_without_target_is_a_no_op():
    exporter = JsonLinesSpanExporter('unit-test')
    assert exporter.path is None
    assert exporter.export([]).name == 'SUCCESS'
