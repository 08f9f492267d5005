"""Run counters emitted with every pipeline run."""

from __future__ import annotations


class Counters:
    """Mutable bag of instrumentation counters.

    Pipelines thread one of these through their helpers; the CLI serializes
    it into the run report.  Asymptotic running-time claims are tracked only
    through these counters, never asserted.
    """

    __slots__ = ("data", "events")

    def __init__(self):
        self.data: dict[str, int] = {}
        self.events: list[tuple] = []

    def add(self, key: str, amount: int = 1) -> None:
        self.data[key] = self.data.get(key, 0) + amount

    def event(self, kind: str, *payload) -> None:
        self.events.append((kind, *payload))

    def get(self, key: str) -> int:
        return self.data.get(key, 0)

    def as_dict(self) -> dict:
        return dict(self.data)

    def __repr__(self):
        return f"Counters({self.data!r})"
