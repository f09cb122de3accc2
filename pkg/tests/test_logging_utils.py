import logging

import pytest

from modules import logging_utils
from modules.groups import zero_surgery_presentation
from modules.logging_utils import log_function_call, set_log_level


@pytest.fixture
def debug_level():
    previous = logging_utils.modules_logger.level
    set_log_level("debug")
    yield
    set_log_level(previous)


def test_debug_level_reaches_the_file_handler(debug_level):
    assert logging_utils.file_handler.level == logging.DEBUG
    assert logging.getLogger("modules.groups").isEnabledFor(logging.DEBUG)
    assert logging_utils.app_logger.isEnabledFor(logging.DEBUG)
    assert not logging_utils.console_handler.level < logging.WARNING


def test_calls_are_traced_at_debug(debug_level, caplog, trefoil):
    zero_surgery_presentation(trefoil)
    traces = [r.getMessage() for r in caplog.records
              if r.name == "modules.groups" and "zero_surgery_presentation" in r.getMessage()]
    assert len(traces) == 2
    assert traces[0].startswith("Calling function: zero_surgery_presentation with args: (PDCode")
    assert traces[1].startswith("Function zero_surgery_presentation returned: Presentation(gens=3")


def test_calls_are_not_traced_at_info(caplog, trefoil):
    previous = logging_utils.modules_logger.level
    set_log_level("INFO")
    try:
        zero_surgery_presentation(trefoil)
    finally:
        set_log_level(previous)
    assert not [r for r in caplog.records if r.getMessage().startswith("Calling function")]


def test_long_arguments_are_truncated(caplog):
    @log_function_call
    def echo(value):
        return value

    with caplog.at_level(logging.DEBUG, logger=__name__):
        echo("x" * 1000)
    messages = [r.getMessage() for r in caplog.records if r.name == __name__]
    assert len(messages) == 2
    assert "x" * 150 + "..." in messages[0]
    assert messages[1].endswith("...")
    assert len(messages[1]) < 300


def test_unknown_level():
    with pytest.raises(ValueError):
        set_log_level("LOUD")
