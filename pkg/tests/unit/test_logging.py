"""Tests for the structured logger and its event schemas."""

import json
import logging

from gnnlab.logging_.schemas import EpochLogEvent, RunLogEvent, SeparationLogEvent
from gnnlab.logging_.structured_logger import JSONFormatter, get_logger, log_event
from gnnlab.separation.report import SeparationRow


class _Capture(logging.Handler):
    def __init__(self):
        super().__init__()
        self.records = []

    def emit(self, record):
        self.records.append(record)


class TestStructuredLogger:
    def test_json_formatter(self):
        record = logging.LogRecord("gnnlab.test", logging.INFO, "", 0, "hello %s", ("x",), None)
        record.event_data = {"k": 1}
        doc = json.loads(JSONFormatter().format(record))
        assert doc["message"] == "hello x"
        assert doc["level"] == "INFO"
        assert doc["event"] == {"k": 1}

    def test_get_logger_single_handler(self):
        a = get_logger("gnnlab.test.single")
        b = get_logger("gnnlab.test.single")
        assert a is b
        assert len(a.handlers) == 1

    def test_log_event_attaches_fields(self):
        logger = get_logger("gnnlab.test.events")
        capture = _Capture()
        logger.addHandler(capture)
        try:
            log_event(RunLogEvent.from_run("wl", 0, "out", 1.0), "gnnlab.test.events", "run")
        finally:
            logger.removeHandler(capture)
        assert capture.records[0].event_data["command"] == "wl"
        assert capture.records[0].event_data["exit_code"] == 0

    def test_disabled_level_is_skipped(self):
        logger = get_logger("gnnlab.test.quiet")
        capture = _Capture()
        logger.addHandler(capture)
        try:
            event = EpochLogEvent.from_epoch(1, 0.5, 0.9, 1e-3, 2.0)
            log_event(event, "gnnlab.test.quiet", "epoch", level=logging.DEBUG)
        finally:
            logger.removeHandler(capture)
        assert capture.records == []


class TestSchemas:
    def test_separation_event(self):
        row = SeparationRow(pair_id="p", discriminator="fwl2", separated=True, gap=0.3, seeds=2)
        event = SeparationLogEvent.from_row(row).to_dict()
        assert event["event_type"] == "separation"
        assert event["pair_id"] == "p" and event["separated"] is True

    def test_epoch_event(self):
        event = EpochLogEvent.from_epoch(3, 0.25, 0.8, 1e-3, 12.0).to_dict()
        assert event["epoch"] == 3
        assert event["val_accuracy"] == 0.8
