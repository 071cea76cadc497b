"""Causal verdicts from aggregated scores."""

import enum
from dataclasses import dataclass


class Direction(str, enum.Enum):
    X_TO_Y = "X->Y"
    Y_TO_X = "Y->X"
    UNDECIDED = "undecided"

    def reverse(self):
        if self is Direction.X_TO_Y:
            return Direction.Y_TO_X
        if self is Direction.Y_TO_X:
            return Direction.X_TO_Y
        return self

    @classmethod
    def parse(cls, text):
        key = str(text).strip().replace("→", "->").upper()
        for d in cls:
            if d.value.upper() == key:
                return d
        raise ValueError(f"unknown direction {text!r}")


@dataclass(frozen=True)
class CausalDecision:
    direction: Direction
    score: float

    @property
    def confidence(self):
        return max(self.score, 1.0 - self.score)


def decide(score):
    """X->Y when ``score > 0.5``, Y->X when below, undecided at exactly 0.5."""
    s = float(score)
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"score must lie in [0, 1], got {score!r}")
    if s > 0.5:
        return CausalDecision(Direction.X_TO_Y, s)
    if s < 0.5:
        return CausalDecision(Direction.Y_TO_X, s)
    return CausalDecision(Direction.UNDECIDED, s)
