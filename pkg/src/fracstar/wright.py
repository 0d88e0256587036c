"""Two independent evaluators of phi_delta(z) = sum n!/Gamma(delta n + 1) z^n.

``phi_series`` sums the entire series with an a-priori truncation index;
``phi_integral`` integrates the Mellin-Barnes representation

    phi_delta(z) = 1/(2i) * int Gamma(1-s) / (sin(pi s) Gamma(1 - delta s)) (-z)^(-s) ds

along a contour through Re s = 1/2.  ``limit_kernel`` is the delta = 1 member
of the same family and reproduces 1/(1-z).  The weighted variant
``mellin_barnes_sum`` handles coefficients (n + shift)^(-power), which is what
continues e.g. the logarithm series far outside its disk.

The power (-z)^(-s) always uses the principal logarithm, so the branch cut in
z is exactly [0, inf).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .errors import BranchError, DomainError, PoleError, SlowConvergence, TailError
from .gamma import (
    EPS_POLE,
    decay_constant,
    gamma,
    gamma_ratio_decay_bound,
    log_gamma,
    log_sinpi,
    recip_gamma,
    sinpi,
)

__all__ = [
    "WrightParams",
    "ContourConfig",
    "QuadratureInfo",
    "integrand",
    "phi_series",
    "phi_integral",
    "phi",
    "limit_kernel",
    "phi_limit_gap",
    "mellin_barnes_sum",
    "lambda_series_sum",
    "truncation_index",
    "on_cut",
    "SERIES_DISPATCH_LIMIT",
]

#: largest a-priori truncation index for which ``phi`` prefers the series
SERIES_DISPATCH_LIMIT = 2000
_EPS = np.finfo(float).eps
_GL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)
# bend angles (degrees) tried for each half of the contour; 0 is the vertical line
_BEND_ANGLES = (0.0, 15.0, 30.0, 45.0, 60.0, 75.0)
_SCAN = np.concatenate([np.linspace(0.0, 64.0, 513), np.geomspace(64.0, 4.0e4, 400)[1:]])


@dataclass(frozen=True)
class WrightParams:
    delta: float

    def __post_init__(self):
        if not 1.0 < self.delta < 2.0:
            raise DomainError(f"delta must lie in (1, 2), got {self.delta!r}")

    @property
    def delta_cap(self):
        """Wright parameter Delta = delta - 2, in (-1, 0)."""
        return self.delta - 2.0


@dataclass(frozen=True)
class ContourConfig:
    """Quadrature settings for the vertical (or bent) Mellin-Barnes contour.

    ``height=None`` lets the truncation height be chosen from the decay rate
    of the integrand; an explicit value forces a vertical contour of that
    height.  ``nodes`` is the initial Gauss-Legendre node count per half
    contour; panels are doubled until two passes agree to ``tol / 4``.
    """

    abscissa: float = 0.5
    height: float | None = None
    nodes: int = 128
    tol: float = 1e-8
    max_panels: int = 8192

    def __post_init__(self):
        if not 0.0 < self.abscissa < 1.0:
            raise ValueError("abscissa must lie in (0, 1)")
        if self.nodes < 64 or self.nodes % 2:
            raise ValueError("nodes must be even and at least 64")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.height is not None and self.height <= 0:
            raise ValueError("height must be positive")


@dataclass(frozen=True)
class QuadratureInfo:
    heights: tuple
    bend_angles: tuple
    nodes: int
    rounding_estimate: float
    method: str = "integral"


def _delta_of(p):
    return p.delta if isinstance(p, WrightParams) else float(p)


def on_cut(z, angular_tol=1e-12):
    """True when z lies on [0, inf) up to a relative angular tolerance."""
    z = complex(z)
    return z == 0 or (z.real > 0 and abs(z.imag) <= angular_tol * abs(z))


def _check_off_cut(z):
    if on_cut(z):
        raise BranchError(f"z={z!r} lies on the cut [0, inf) of Log(-z)")


def integrand(params, s, z):
    """Gamma(1-s) / (sin(pi s) Gamma(1 - delta s)) * (-z)^(-s)."""
    delta = _delta_of(params)
    s, z = complex(s), complex(z)
    _check_off_cut(z)
    if abs(s - round(s.real)) < EPS_POLE:
        raise PoleError(f"s={s!r} is too close to an integer")
    if s.imag < 0 or (s.imag == 0 and z.imag < 0):
        return integrand(params, s.conjugate(), z.conjugate()).conjugate()
    log_mz = np.log(-z)
    if (1 - s).real > 0 and (1 - delta * s).real > 0:
        logf = log_gamma(1 - s) - log_gamma(1 - delta * s) - log_sinpi(s) - s * log_mz
        return complex(np.exp(logf))
    return complex(gamma(1 - s) * recip_gamma(1 - delta * s) / sinpi(s) * np.exp(-s * log_mz))


# --------------------------------------------------------------------- series

def _log_terms(delta, log_absz, n, power, shift):
    n = np.asarray(n, dtype=float)
    if delta == 1.0:
        lam = np.zeros_like(n)
    else:
        lam = (log_gamma(n + 1.0 + 0j) - log_gamma(delta * n + 1.0 + 0j)).real
    out = n * log_absz + lam
    if power:
        out = out - power * np.log(n + shift)
    return out


def _scan_terms(delta, absz, tol, n_cap, power=0.0, shift=0.0, start=0):
    """Truncation index and peak log-magnitude of the terms.

    The log-magnitudes are concave in n, so once consecutive ratios drop
    below one they keep decreasing and the tail is dominated by a geometric
    series.  Returns (N, peak_log, err_weight) or None when N > n_cap.
    """
    if absz == 0:
        return start, (0.0 if start == 0 else -math.inf), 0.0
    log_absz = math.log(absz)
    log_tol = math.log(tol)
    peak = -math.inf
    err_weight = 0.0
    lo = start
    block = 1024
    while lo <= n_cap + 1:
        n = np.arange(lo, lo + block + 1)
        L = _log_terms(delta, log_absz, n, power, shift)
        peak = max(peak, float(np.max(L[:-1])))
        diff = np.diff(L)
        with np.errstate(over="ignore", invalid="ignore"):
            # geometric tail bound beyond index k: exp(L[k+1]) / (1 - exp(diff[k+1]))
            rho = np.exp(diff[1:])
            tail = np.where(rho < 1.0, np.exp(L[1:-1]) / np.maximum(1.0 - rho, 1e-300), np.inf)
            ok = np.flatnonzero((diff[:-1] < 0) & (tail < 0.25 * tol) & (L[:-2] < log_tol))
            stop = int(ok[0]) if ok.size else None
            upto = block if stop is None else stop + 1
            mags = np.exp(L[:upto])
            err_weight += float(np.sum(mags * (1.0 + np.abs(L[:upto]) + n[:upto])))
        if stop is not None:
            N = lo + stop
            return (N, peak, err_weight) if N <= n_cap else None
        lo += block
    return None


def truncation_index(delta, abs_z, tol, n_cap=10**6, power=0.0, shift=0.0, start=0):
    """A-priori number of terms after which the tail of the series is below tol.

    Returns ``None`` when the index would exceed ``n_cap``.
    """
    res = _scan_terms(_delta_of(delta), float(abs_z), tol, n_cap, power, shift, start)
    return None if res is None else res[0]


@lru_cache(maxsize=64)
def _mp_log_lambdas(delta, n_terms, dps):
    with mpmath.workdps(dps):
        d = mpmath.mpf(delta)
        return tuple(mpmath.loggamma(n + 1) - mpmath.loggamma(d * n + 1) for n in range(n_terms))


def _series_mp(delta, z, N, dps, power, shift, start):
    n_terms = 1 << max(6, int(N).bit_length())
    dps_bucket = 10 * math.ceil(dps / 10)
    logs = _mp_log_lambdas(float(delta), n_terms, dps_bucket)
    with mpmath.workdps(dps_bucket):
        zz = mpmath.mpc(z.real, z.imag)
        h = mpmath.mpf(shift)
        p = mpmath.mpf(power)
        total = mpmath.mpc(0)
        zn = zz ** start
        for n in range(start, N + 1):
            term = mpmath.exp(logs[n]) * zn
            if power:
                term = term * (n + h) ** (-p)
            total += term
            zn *= zz
        return complex(total)


def multiplied_series_mp(coeffs, delta, z, dps):
    """sum a_n n!/Gamma(delta n + 1) z^n in multiprecision for given double a_n."""
    coeffs = np.asarray(coeffs, dtype=complex)
    n_terms = 1 << max(6, len(coeffs).bit_length())
    dps_bucket = 10 * math.ceil(max(dps, 20.0) / 10)
    logs = _mp_log_lambdas(float(delta), n_terms, dps_bucket)
    with mpmath.workdps(dps_bucket):
        zz = mpmath.mpc(z.real, z.imag)
        total = mpmath.mpc(0)
        zn = mpmath.mpc(1)
        for n, a in enumerate(coeffs):
            if a != 0:
                total += mpmath.mpc(a.real, a.imag) * mpmath.exp(logs[n]) * zn
            zn *= zz
        return complex(total)


def _series_double(delta, z, N, power, shift, start):
    n = np.arange(start, N + 1, dtype=float)
    if delta == 1.0:
        log_c = np.zeros_like(n)
    else:
        log_c = (log_gamma(n + 1.0 + 0j) - log_gamma(delta * n + 1.0 + 0j)).real
    if power:
        log_c = log_c - power * np.log(n + shift)
    if z == 0:
        return 1.0 + 0j if start == 0 else 0j
    terms = np.exp(log_c + n * np.log(complex(z)))
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def lambda_series_sum(delta, z, tol=1e-12, n_max=10_000, power=0.0, shift=0.0, start=0,
                      full_output=False):
    """sum_{n >= start} (n + shift)^(-power) n!/Gamma(delta n + 1) z^n by direct summation.

    Terms are summed in double precision when the estimated rounding error
    is below tol/4; otherwise (large alternating terms) the sum is carried
    out in multiprecision with enough digits to absorb the cancellation.
    """
    delta = _delta_of(delta)
    z = complex(z)
    if delta == 1.0:
        if abs(z) >= 1:
            raise DomainError("delta = 1 is admitted only inside the unit disk")
    elif not 1.0 < delta < 2.0:
        raise DomainError(f"delta must lie in (1, 2), got {delta!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    scan = _scan_terms(delta, abs(z), tol, n_max, power, shift, start)
    if scan is None:
        raise SlowConvergence(
            f"series for delta={delta}, |z|={abs(z):.3g} needs more than {n_max} terms")
    N, peak, err_weight = scan
    rounding = 4.0 * _EPS * err_weight
    if rounding <= 0.25 * tol:
        value = _series_double(delta, z, N, power, shift, start)
        method = "series"
    else:
        digits = (peak - math.log(tol)) / math.log(10.0) + 10.0
        value = _series_mp(delta, z, N, max(digits, 20.0), power, shift, start)
        method = "series-mp"
        rounding = 0.0
    if full_output:
        return value, {"terms": N + 1, "rounding_estimate": rounding, "method": method}
    return value


def phi_series(params, z, tol=1e-12, n_max=10_000):
    """phi_delta(z) from the entire power series.

    Raises SlowConvergence when more than ``n_max`` terms are needed, which
    happens for delta near 1 and |z| > 1; use :func:`phi_integral` there.
    """
    return lambda_series_sum(params, z, tol, n_max)


# ------------------------------------------------------------------ contours

def _log_f(delta, s, log_mz, power, shift):
    out = log_gamma(1.0 - s) - log_gamma(1.0 - delta * s) - log_sinpi(s) - s * log_mz
    if power:
        out = out - power * np.log(shift - s)
    return out


def _half_path(c, sign, kappa, y):
    s = c - kappa * y + 1j * sign * y
    ds = complex(-kappa, sign)
    if sign < 0:
        ds = complex(kappa, 1.0)  # traversed upward: from y = Y down to 0
    return s, ds


def _choose_half(delta, c, sign, log_mz, power, shift, tol, forced_height):
    """Pick bend angle and truncation height for one half of the contour."""
    if forced_height is not None:
        return 0.0, float(forced_height), None
    budget = tol / 50.0
    dy = np.diff(_SCAN, append=_SCAN[-1])
    best = []
    for angle in _BEND_ANGLES:
        kappa = math.tan(math.radians(angle))
        s, ds = _half_path(c, sign, kappa, _SCAN)
        with np.errstate(all="ignore"):
            m = _log_f(delta, s, log_mz, power, shift).real + math.log(abs(ds))
            m = np.where(np.isnan(m), np.inf, m)
            mag = np.exp(m)
        if np.any(mag[-3:] * _SCAN[-1] >= budget):
            continue
        # crude tail integral beyond each scan point, from the samples themselves
        tail = np.cumsum((mag * dy)[::-1])[::-1]
        idx = int(np.argmax(tail < budget))
        height = float(_SCAN[min(idx + 1, len(_SCAN) - 1)])
        peak = float(np.max(m[: idx + 1]))
        best.append((angle, height, peak))
    if not best:
        raise TailError("no contour truncation meets the tolerance for this z")
    low = min(b[2] for b in best)
    admissible = [b for b in best if b[2] <= low + math.log(10.0)]
    if admissible[0][0] == 0.0 and admissible[0][1] <= 100.0:
        return admissible[0]
    return min(admissible, key=lambda b: b[1])


def _vertical_height(delta, z, c, tol):
    """Truncation height from the exponential decay rate of the integrand.

    Y = (log(1/tol) + 5) / (pi (3 - delta) / 2 - |arg(-z)|), then extended
    until the calibrated Stirling majorant of the tail is below tol / 10.
    """
    rate = math.pi * (3.0 - delta) / 2.0 - abs(np.angle(-z))
    if rate <= 0:
        return None
    height = (math.log(1.0 / tol) + 5.0) / rate
    if delta > 1.0 and c == 0.5:
        cb = decay_constant(delta)
        p = (delta - 1.0) / 2.0
        for _ in range(60):
            y = max(height, 1.0)
            if rate - p / y > 0:
                bound = (2.0 * abs(z) ** -c * gamma_ratio_decay_bound(delta, y, cb)
                         * math.exp(-(math.pi - abs(np.angle(-z))) * y) / (rate - p / y))
                if bound < 0.1 * tol:
                    break
            height *= 1.25
    return height


def _gl_integrate(fun, height, nodes, tol, max_panels):
    panels = max(1, nodes // _GL_ORDER)
    prev = None
    while True:
        edges = np.linspace(0.0, height, panels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        y = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
        w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
        vals = fun(y)
        total = complex(np.sum(w * vals))
        absint = float(np.sum(w * np.abs(vals)))
        if prev is not None and abs(total - prev) <= 0.25 * tol:
            return total, absint, panels * _GL_ORDER
        if panels >= max_panels:
            raise TailError("quadrature did not settle within the panel budget")
        prev = total
        panels *= 2


def mellin_barnes_sum(delta, z, config=None, power=0.0, shift=0.0, start=0, full_output=False):
    """Mellin-Barnes evaluation of sum_{n>=start} (n+shift)^(-power) lambda_n(delta) z^n.

    With the default weight this is phi_delta(z).  The contour crosses the
    real axis at start-adjusted abscissa, between the poles at s = -start,
    -start-1, ... (which produce the series) and those at s >= 1-start.
    Each half of the contour is either the vertical line or a ray bent into
    the left half-plane, where the Gamma ratio decays faster than any
    exponential; the bend is chosen per half from a scan of the integrand.
    """
    delta = _delta_of(delta)
    if not 1.0 <= delta < 2.0:
        raise DomainError(f"delta must lie in [1, 2), got {delta!r}")
    config = config or ContourConfig()
    z = complex(z)
    _check_off_cut(z)
    if z.imag < 0:
        res = mellin_barnes_sum(delta, z.conjugate(), config, power, shift, start, True)
        return (res[0].conjugate(), res[1]) if full_output else res[0].conjugate()
    a = config.abscissa
    if power and a >= shift + start:
        a = 0.5 * (shift + start)
    c = a - start
    log_mz = complex(np.log(-z))
    tol = config.tol

    halves = []
    for sign in (1, -1):
        if z.imag == 0 and sign < 0:
            break
        angle, height, _ = _choose_half(delta, c, sign, log_mz, power, shift, tol, config.height)
        if angle == 0.0 and config.height is None:
            vh = _vertical_height(delta, z, c, tol)
            if vh is not None:
                height = max(height, vh)
        kappa = math.tan(math.radians(angle))

        def fun(y, sign=sign, kappa=kappa):
            s, ds = _half_path(c, sign, kappa, y)
            with np.errstate(under="ignore"):
                return np.exp(_log_f(delta, s, log_mz, power, shift)) * ds

        total, absint, nodes = _gl_integrate(fun, height, config.nodes, tol / 2, config.max_panels)
        halves.append((total, absint, nodes, height, angle))

    if len(halves) == 1:
        total, absint, nodes, height, angle = halves[0]
        # real z: the lower half is the mirror image, I = 2i Im(upper)
        value = complex(total.imag, 0.0)
        halves = [halves[0], halves[0]]
    else:
        value = (halves[0][0] + halves[1][0]) / 2j
    absint = sum(h[1] for h in halves) / 2.0
    rounding = 8.0 * _EPS * absint
    if not np.isfinite(value) or rounding > tol * max(1.0, abs(value)):
        raise TailError("cancellation along the contour exceeds the tolerance")
    info = QuadratureInfo(
        heights=tuple(h[3] for h in halves),
        bend_angles=tuple(h[4] for h in halves),
        nodes=sum(h[2] for h in halves),
        rounding_estimate=rounding,
    )
    return (value, info) if full_output else value


def phi_integral(params, z, config=None, full_output=False):
    """phi_delta(z) by quadrature of the Mellin-Barnes integral; z off [0, inf)."""
    delta = _delta_of(params)
    if not 1.0 < delta < 2.0:
        raise DomainError(f"delta must lie in (1, 2), got {delta!r}")
    return mellin_barnes_sum(delta, z, config, full_output=full_output)


def limit_kernel(z, config=None, full_output=False):
    """1/(2i) int (-z)^(-s) / sin(pi s) ds along Re s = 1/2; equals 1/(1 - z)."""
    return mellin_barnes_sum(1.0, z, config, full_output=full_output)


def phi(params, z, tol=1e-10, config=None, method="auto", full_output=False):
    """phi_delta(z) with evaluator dispatch.

    ``auto`` uses the series when its a-priori truncation index is at most
    :data:`SERIES_DISPATCH_LIMIT`, the contour integral otherwise.
    """
    delta = _delta_of(params)
    z = complex(z)
    if method == "auto":
        N = truncation_index(delta, abs(z), tol, n_cap=SERIES_DISPATCH_LIMIT)
        method = "series" if N is not None or on_cut(z) else "integral"
    if method == "series":
        v, meta = lambda_series_sum(delta, z, tol, full_output=True)
        return (v, meta) if full_output else v
    if method == "integral":
        cfg = config or ContourConfig()
        v, info = phi_integral(delta, z, cfg, full_output=True)
        meta = {"terms": info.nodes, "rounding_estimate": info.rounding_estimate,
                "method": "integral"}
        return (v, meta) if full_output else v
    raise ValueError(f"unknown method {method!r}")


def phi_limit_gap(delta, z, config=None, tol=1e-12):
    """|phi_delta(z) - 1/(1 - z)| for z off [1, inf)."""
    delta = _delta_of(delta)
    z = complex(z)
    if z.real >= 1 and on_cut(z):
        raise DomainError("the reference 1/(1-z) is singular or cut on [1, inf)")
    if delta == 1.0:
        value = lambda_series_sum(1.0, z, tol)
    else:
        value = phi(delta, z, tol, config)
    return abs(value - 1.0 / (1.0 - z))
