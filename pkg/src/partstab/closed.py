"""Spectra and classification for boundaryless interfaces (circles, spheres).

Circles in the plane carry the periodic eigenfunctions sin(n kappa s),
cos(n kappa s) with mu_n = (n^2 - 1) kappa^2; spheres S^{N-1} of radius R
carry the Laplace-Beltrami eigenvalues l(l+N-2)/R^2, so
mu_l = [l(l+N-2) - (N-1)] / R^2.  The index-1 modes are rigid translations:
they are reported but excluded from the stability verdict.
"""

from __future__ import annotations

from .geometry import ClosedInterface
from .spectrum import STABLE, SpectralMode, StabilityVerdict


def circle_spectrum(radius: float, n_max: int) -> list[tuple[int, float, bool]]:
    """(n, mu_n, is_translation) for n = 1..n_max; each mode is doubly degenerate."""
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    kappa_sq = 1.0 / (radius * radius)
    return [(n, (n * n - 1) * kappa_sq, n == 1) for n in range(1, n_max + 1)]


def sphere_spectrum(dim: int, radius: float, l_max: int) -> list[tuple[int, float, bool]]:
    """(l, mu_l, is_translation) for l = 1..l_max on S^{N-1} in R^N.

    l = 0 is omitted: the constant spherical harmonic violates the volume
    constraint.  l = 1 has mu = 0 and is flagged as translation.
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")
    r_sq = radius * radius
    return [(l, (l * (l + dim - 2) - (dim - 1)) / r_sq, l == 1)
            for l in range(1, l_max + 1)]


def classify_closed(interface: ClosedInterface) -> StabilityVerdict:
    """Closed interfaces are stable; mu1 is the smallest non-translation eigenvalue."""
    if interface.dim == 2:
        spec = circle_spectrum(interface.radius, 2)
        tag = "Circle"
    else:
        spec = sphere_spectrum(interface.dim, interface.radius, 2)
        tag = "Sphere"
    idx, mu1, _ = next(row for row in spec if not row[2])
    witness = SpectralMode(tag, float(idx), mu1, (0.0, 0.0, 1.0))
    return StabilityVerdict(STABLE, mu1, "closed-interface", witness)
