"""
Support-function samples and reconstructed boundaries.
"""
from dataclasses import dataclass, field

import numpy as np

from app.core.exceptions import DomainError


@dataclass(frozen=True)
class SupportSample:
    """Support value and a boundary point at one angle."""

    alpha: float
    lam: float
    point: complex

    @property
    def x(self) -> float:
        return float(self.point.real)

    @property
    def y(self) -> float:
        return float(self.point.imag)


@dataclass(frozen=True, eq=False)
class BoundaryPolyline:
    """Ordered boundary points in the complex plane."""

    points: np.ndarray = field(repr=False)
    closed: bool = True

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=complex).reshape(-1)
        if points.size == 0:
            raise DomainError("Boundary polyline needs at least one point")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return int(self.points.size)

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        """Segment start and end points, including the closing edge."""
        if self.closed and self.points.size > 1:
            return self.points, np.roll(self.points, -1)
        if self.points.size == 1:
            return self.points, self.points
        return self.points[:-1], self.points[1:]
