"""Container for one bivariate dataset."""

from dataclasses import dataclass, field

import numpy as np

from .decision import Direction


@dataclass
class Pair:
    """Two paired numeric columns with optional ground truth.

    ``truth`` refers to the columns as stored: ``Direction.X_TO_Y`` means the
    first column causes the second.
    """

    x: np.ndarray
    y: np.ndarray
    truth: Direction | None = None
    weight: float = 1.0
    name: str = ""
    meta: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.x.ndim != 1 or self.x.shape != self.y.shape:
            raise ValueError("pair columns must be one-dimensional and of equal length")
        if not (self.weight > 0):
            raise ValueError(f"pair weight must be positive, got {self.weight}")
        if self.truth is not None:
            self.truth = Direction(self.truth)

    def __len__(self):
        return self.x.size

    def swapped(self):
        truth = None if self.truth is None else self.truth.reverse()
        return Pair(self.y, self.x, truth, self.weight, self.name, dict(self.meta))
