import logging

import pytest

from tracealg.verdictPublisher import (
    PROBABILISTIC,
    Verdict,
    VerdictCollector,
    VerdictPublisher,
)


@pytest.fixture
def verdict():
    return Verdict("f = 0", True, PROBABILISTIC, {"points": 3})


def test_verdict_text(verdict):
    assert bool(verdict)
    assert verdict.toText() == "PASS f = 0 [probabilistic] points=3"
    assert Verdict("g = 0", False).toText() == "FAIL g = 0 [exact]"
    assert verdict.toJson() == {"name": "f = 0", "holds": True, "mode": PROBABILISTIC,
        "detail": {"points": 3}}

def test_delivery_in_order(verdict):
    pub = VerdictPublisher("Test")
    seen = []
    pub.sub("t", lambda v: seen.append(("a", v.name)))
    pub.sub("t", lambda v: seen.append(("b", v.name)))
    pub.publish("t", verdict)
    assert seen == [("a", "f = 0"), ("b", "f = 0")]
    assert pub.count("t") == 2
    pub.clear("t")
    assert pub.count("t") == 0

def test_no_subscribers_warns(verdict, caplog):
    caplog.set_level(logging.WARNING)
    VerdictPublisher("Test").publish("empty", verdict)
    assert "with no subscribers" in caplog.text

def test_subscriber_error_is_logged(verdict, caplog):
    pub = VerdictPublisher("Test")
    collector = VerdictCollector()

    def broken(v: Verdict) -> None:
        raise RuntimeError("boom")

    pub.sub("t", broken)
    pub.sub("t", collector)
    with caplog.at_level(logging.ERROR):
        pub.publish("t", verdict)
    assert "subscriber error" in caplog.text
    assert collector.verdicts == [verdict]

def test_unsub_during_delivery(verdict):
    pub = VerdictPublisher("Test")
    calls = []

    def once(v: Verdict) -> None:
        calls.append(v)
        pub.unsub("t", once)

    pub.sub("t", once)
    pub.sub("t", lambda v: calls.append(v))
    pub.publish("t", verdict)
    pub.publish("t", verdict)
    assert len(calls) == 3
    assert pub.count("t") == 1

def test_slow_subscriber_warns(verdict, caplog, mocker):
    mocker.patch("tracealg.verdictPublisher.time.perf_counter", side_effect=[0.0, 1.0])
    pub = VerdictPublisher("Test", warnIfSlowMs=10)
    pub.sub("t", lambda v: None)
    with caplog.at_level(logging.WARNING):
        pub.publish("t", verdict)
    assert "took 1000.00ms" in caplog.text

def test_sub_needs_callable():
    with pytest.raises(TypeError):
        VerdictPublisher("Test").sub("t", "not callable")  # type: ignore[arg-type]

def test_collector(verdict):
    collector = VerdictCollector()
    collector(verdict)
    collector(Verdict("g = 0", False))
    assert not collector.allHold
    assert [v["name"] for v in collector.toJson()] == ["f = 0", "g = 0"]
