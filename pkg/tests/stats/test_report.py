import json
import pytest

from contagion.stats import EvalReport


def _report():
    report = EvalReport("demo", metadata={"seed": 1})
    report.add("I~S", 0.5, n=10)
    report.add("precision", 0.25, n=20, metric="outdegree", fraction=0.1)
    return report


def test_add_and_get():
    report = _report()
    assert report.value("I~S") == 0.5
    assert report.get("precision", metric="outdegree").n == 20
    with pytest.raises(KeyError):
        report.get("precision", metric="influence")
    with pytest.raises(AssertionError):
        report.add("x", 0.1, p_value=1.5)


def test_extend():
    report = EvalReport("all")
    report.extend(_report(), period=0)
    report.extend(_report(), period=1)
    assert len(report.entries) == 4
    assert report.get("I~S", period=1).tags == {"period": 1}
    with pytest.raises(KeyError):
        report.get("I~S")


def test_to_frame():
    frame = _report().to_frame()
    assert list(frame.columns) == [
        "experiment",
        "statistic",
        "value",
        "n",
        "p_value",
        "degenerate",
        "metric",
        "fraction",
    ]
    assert len(frame) == 2
    assert (frame["experiment"] == "demo").all()


def test_write(tmp_path):
    report = _report()
    report.write_csv(tmp_path / "report.csv", config_hash="abc")
    with open(tmp_path / "report.csv") as fp:
        assert fp.readline() == "# config_hash=abc\n"

    report.write_json(tmp_path / "report.json", config_hash="abc")
    with open(tmp_path / "report.json") as fp:
        content = json.load(fp)
    assert content["config_hash"] == "abc"
    assert content["metadata"] == {"seed": 1}
    assert len(content["entries"]) == 2
