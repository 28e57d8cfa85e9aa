import logging
import logging.handlers

from lp_sensitivity_lib.constants import LOGGER_NAME
from lp_sensitivity_lib.logger import get_logger, logger


def _close(log):
    for handler in list(log.handlers):
        handler.close()
        log.removeHandler(handler)


def test_package_logger_writes_to_the_cache():
    assert logger.name == LOGGER_NAME
    assert any(
        isinstance(handler, logging.handlers.RotatingFileHandler)
        for handler in logger.handlers
    )


def test_debug_flag_and_file_output(tmp_path, monkeypatch):
    monkeypatch.setenv("LP_SENSITIVITY_DEBUG", "true")
    monkeypatch.delenv("LP_SENSITIVITY_DEBUG_CONSOLE", raising=False)
    logfile = tmp_path / "logs" / "debug.log"
    log = get_logger("lp_sensitivity.test_debug", str(logfile))
    try:
        assert log.level == logging.DEBUG
        assert len(log.handlers) == 1
        log.debug("reduced side=4")
        log.handlers[0].flush()
        text = logfile.read_text()
        assert "DEBUG" in text
        assert "reduced side=4" in text
        assert "MainThread" in text
    finally:
        _close(log)


def test_console_flag_and_single_configuration(tmp_path, monkeypatch):
    monkeypatch.delenv("LP_SENSITIVITY_DEBUG", raising=False)
    monkeypatch.setenv("LP_SENSITIVITY_DEBUG_CONSOLE", "1")
    logfile = str(tmp_path / "console.log")
    log = get_logger("lp_sensitivity.test_console", logfile)
    try:
        assert log.level == logging.INFO
        assert len(log.handlers) == 2
        assert get_logger("lp_sensitivity.test_console", logfile) is log
        assert len(log.handlers) == 2
    finally:
        _close(log)
