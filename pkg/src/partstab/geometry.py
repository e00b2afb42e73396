"""Interface geometry: constant-curvature arcs, closed interfaces, ellipse families.

A two-phase interface in a convex planar domain is a line segment or a
circular arc meeting the domain boundary orthogonally.  The domain enters
only through the boundary curvatures sigma1, sigma2 at the two contact
points; no global boundary representation is kept.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np


class ConvexityWarning(UserWarning):
    """Arc subtends an angle kappa*L >= pi, impossible in a convex domain."""


@dataclass(frozen=True)
class ArcInterface:
    """A planar constant-curvature interface with orthogonal boundary contact.

    kappa >= 0 by orientation convention, so the squared norm of the second
    fundamental form is kappa**2.  kappa == 0 is a line segment.
    """

    kappa: float
    length: float
    sigma1: float
    sigma2: float
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("kappa", "length", "sigma1", "sigma2", "gamma"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.kappa < 0 or self.sigma1 < 0 or self.sigma2 < 0:
            raise ValueError("curvatures kappa, sigma1, sigma2 must be nonnegative")

    @property
    def curvature_sq(self) -> float:
        """|B|^2 = kappa^2 for arcs, 0 for segments."""
        return self.kappa ** 2

    @property
    def radius(self) -> float:
        return math.inf if self.kappa == 0 else 1.0 / self.kappa


@dataclass(frozen=True)
class ClosedInterface:
    """A boundaryless interface: a circle (dim=2) or a sphere S^{N-1} in R^N."""

    dim: int
    radius: float

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"ambient dimension must be >= 2, got {self.dim}")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")


@dataclass(frozen=True)
class EllipseSpec:
    """Ellipse x^2/a^2 + y^2/b^2 = 1 with 0 < b <= a."""

    a: float
    b: float

    def __post_init__(self):
        if not (0 < self.b <= self.a) or not math.isfinite(self.a):
            raise ValueError(f"need 0 < b <= a, got a={self.a}, b={self.b}")


def make_arc(kappa: float, length: float, sigma1: float, sigma2: float,
             gamma: float = 1.0) -> ArcInterface:
    """Validate and build an ArcInterface.

    Emits a ConvexityWarning (non-fatal) when kappa*length >= pi: the arc
    then subtends an angle that cannot occur in a convex domain, although
    the spectral systems remain well defined.
    """
    arc = ArcInterface(kappa, length, sigma1, sigma2, gamma)
    if arc.kappa * arc.length >= math.pi:
        warnings.warn(
            f"kappa*L = {arc.kappa * arc.length:.6g} >= pi: "
            "arc not realizable in a convex domain",
            ConvexityWarning, stacklevel=2)
    return arc


def ellipse_arc_radius(spec: EllipseSpec, x0: float) -> float:
    """Radius of the circular arc crossing the ellipse orthogonally at (x0, +-y0).

    R^2 = (a^2/x0 - x0)^2 + y0^2 with y0^2 = b^2 (1 - x0^2/a^2);
    strictly decreasing in x0, tending to 0 as x0 -> a.
    """
    a, b = spec.a, spec.b
    if not (0 < x0 < a):
        raise ValueError(f"x0 must lie in (0, a)=(0, {a}), got {x0}")
    y0_sq = b * b * (1.0 - x0 * x0 / (a * a))
    return math.sqrt((a * a / x0 - x0) ** 2 + y0_sq)


def ellipse_partition_family(spec: EllipseSpec, n_samples: int) -> list[tuple[float, float]]:
    """Sample the (x0, R) family of orthogonal arcs on a uniform x0 grid in (0, a).

    The returned radii are asserted strictly decreasing in x0.
    """
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    x0s = np.linspace(0.0, spec.a, n_samples + 2)[1:-1]
    rs = [ellipse_arc_radius(spec, float(x0)) for x0 in x0s]
    diffs = np.diff(rs)
    if not np.all(diffs < 0):
        raise AssertionError("ellipse arc radii are not strictly decreasing in x0")
    return list(zip(map(float, x0s), rs))
