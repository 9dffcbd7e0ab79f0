import logging
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

EXACT = "exact"
PROBABILISTIC = "probabilistic"
SAMPLED = "sampled"


@dataclass(frozen=True)
class Verdict:
    """Outcome of one named check."""
    name: str
    holds: bool
    mode: str = EXACT
    detail: dict[str, Any] = field(default_factory=lambda: {})

    def __bool__(self) -> bool:
        return self.holds

    def toJson(self) -> dict[str, Any]:
        return {"name": self.name, "holds": self.holds, "mode": self.mode, "detail": self.detail}

    def toText(self) -> str:
        status = "PASS" if self.holds else "FAIL"
        text = f"{status} {self.name} [{self.mode}]"
        if self.detail:
            text += " " + ", ".join(f"{k}={v}" for k, v in self.detail.items())
        return text


VerdictCallback = Callable[[Verdict], None]


class VerdictPublisher:
    """
    Inline publisher of verdicts, grouped by topic:
      - sub(topic, callback) registers a plain function for a topic
      - publish(topic, verdict) calls each callback for the topic in order, inline
      - unsub(topic, callback) removes a subscriber from a topic
      - clear(topic) clears all subscribers for a topic
      - count(topic) returns the number of subscribers for a topic
      - warns if a callback raises or runs too long
    """

    def __init__(self, name: str, warnIfSlowMs: float | None = None):
        self.name = name
        self.warnIfSlowMs = warnIfSlowMs
        self.subscribers: dict[str, list[VerdictCallback]] = {}

    def sub(self, topic: str, callback: VerdictCallback) -> None:
        if not callable(callback):
            raise TypeError("callback must be callable")
        self.subscribers.setdefault(topic, []).append(callback)

    def unsub(self, topic: str, callback: VerdictCallback) -> None:
        if topic in self.subscribers:
            self.subscribers[topic] = [cb for cb in self.subscribers[topic] if cb is not callback]
            if not self.subscribers[topic]:
                del self.subscribers[topic]

    def clear(self, topic: str) -> None:
        self.subscribers.pop(topic, None)

    def count(self, topic: str) -> int:
        return len(self.subscribers.get(topic, []))

    def publish(self, topic: str, verdict: Verdict) -> None:
        if not self.subscribers.get(topic):
            logging.warning("%s: publish on '%s' with no subscribers (%s)",
                self.name, topic, verdict.name)
            return
        # iterate over a copy so unsub during delivery is safe
        for cb in list(self.subscribers[topic]):
            start = time.perf_counter()
            try:
                cb(verdict)
            except Exception as e:
                logging.exception("%s: subscriber error for topic '%s': %s", self.name, topic, e)
            else:
                elapsedMs = (time.perf_counter() - start) * 1000
                if self.warnIfSlowMs is not None and elapsedMs > self.warnIfSlowMs:
                    logging.warning("%s: subscriber for topic '%s' took %.2fms",
                        self.name, topic, elapsedMs)


class VerdictCollector:
    """Subscriber that keeps every verdict it receives."""

    def __init__(self) -> None:
        self.verdicts: list[Verdict] = []

    def __call__(self, verdict: Verdict) -> None:
        self.verdicts.append(verdict)

    @property
    def allHold(self) -> bool:
        return all(v.holds for v in self.verdicts)

    def toJson(self) -> list[dict[str, Any]]:
        return [v.toJson() for v in self.verdicts]
