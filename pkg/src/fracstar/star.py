"""Mittag-Leffler star geometry: the plane minus the rays beyond each singular point."""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["StarDomain", "in_star"]


@dataclass(frozen=True)
class StarDomain:
    singularities: tuple

    def __post_init__(self):
        pts = tuple(complex(w) for w in self.singularities)
        if not pts:
            raise ValueError("a star needs at least one singular point")
        if any(w == 0 for w in pts):
            raise ValueError("singular points must be nonzero")
        object.__setattr__(self, "singularities", pts)

    def __contains__(self, t):
        return in_star(t, self)


def in_star(t, star, angular_tol=1e-9):
    """Membership of t in the star; singular points themselves are excluded."""
    t = complex(t)
    if t == 0:
        return True
    pts = star.singularities if isinstance(star, StarDomain) else tuple(map(complex, star))
    # atan2 rather than cmath.phase, which raises when the angle underflows
    arg_t = math.atan2(t.imag, t.real)
    for w in pts:
        gap = abs((arg_t - math.atan2(w.imag, w.real) + math.pi) % (2.0 * math.pi) - math.pi)
        if gap <= angular_tol and abs(t) >= abs(w) * (1.0 - angular_tol):
            return False
    return True
