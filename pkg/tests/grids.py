"""Shared evaluation grids."""
import math

RADII = (0.75, 1.5, 2.25, 3.0, 4.0)
ANGLES = tuple(math.pi / 8 + k * math.pi / 4 for k in range(8))


def dual_grid():
    """40 points with |z| <= 4 and distance at least 0.2 from [0, inf)."""
    pts = [r * complex(math.cos(a), math.sin(a)) for r in RADII for a in ANGLES]
    assert len(pts) == 40
    return pts


def dist_to_cut(z):
    return abs(z) if z.real <= 0 else abs(z.imag)
