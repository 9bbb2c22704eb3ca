import logging

from contagion.utils.log import log_usage


@log_usage()
def _double(x):
    """Double a value."""
    return 2 * x


def test_log_usage(caplog):
    with caplog.at_level(logging.DEBUG, logger=__name__):
        assert _double(2) == 4
    assert any("op=_double" in r.getMessage() for r in caplog.records)
    assert _double.__doc__ == "Double a value."


def test_log_usage_disabled(caplog):
    with caplog.at_level(logging.WARNING, logger=__name__):
        assert _double(3) == 6
    assert not caplog.records
