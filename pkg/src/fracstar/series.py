"""Power series data model, the fractional multiplier transform and truncated summation."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, Optional

import numpy as np

from .errors import DomainError, InsufficientData
from .gamma import log_gamma

__all__ = [
    "CoefficientRule",
    "PowerSeries",
    "EvaluationReport",
    "lambda_multiplier",
    "lambda_multipliers",
    "log_lambda",
    "apply_multipliers",
    "evaluate",
    "sum_terms",
    "radius_estimate",
    "RADIUS_INFINITE",
]

#: sentinel returned by :func:`radius_estimate` for entire functions
RADIUS_INFINITE = math.inf
_RADIUS_CAP = 1e6
_EPS = np.finfo(float).eps


def _check_delta(delta):
    if not 1.0 <= delta < 2.0:
        raise DomainError(f"delta must lie in [1, 2), got {delta!r}")


def _to_complex(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex values are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _pair(c):
    c = complex(c)
    return [c.real, c.imag]


@dataclass(frozen=True)
class CoefficientRule:
    """Closed-form coefficients ``a_n = amplitude * ratio**n * (n + shift)**(-power)``.

    Coefficients with ``n < start`` are zero.  The rule lets the Mellin-Barnes
    route continue the series where direct summation is hopeless
    (delta close to 1, |t| beyond the radius of convergence).
    """

    amplitude: complex = 1.0
    ratio: complex = 1.0
    shift: float = 0.0
    power: float = 0.0
    start: int = 0

    def __post_init__(self):
        if self.start < 0:
            raise ValueError("start must be non-negative")
        if self.ratio == 0:
            raise ValueError("ratio must be nonzero")
        if self.power != 0 and not self.start + self.shift > 0:
            raise ValueError("n + shift must stay positive for n >= start when power != 0")

    def coefficients(self, n_terms):
        n = np.arange(n_terms, dtype=float)
        with np.errstate(divide="ignore"):
            weight = np.where(n >= self.start, np.abs(n + self.shift) ** (-self.power), 0.0)
        weight[: self.start] = 0.0
        return complex(self.amplitude) * complex(self.ratio) ** np.arange(n_terms) * weight

    @property
    def singularity(self):
        return 1.0 / complex(self.ratio)

    def to_dict(self):
        return {
            "amplitude": _pair(self.amplitude),
            "ratio": _pair(self.ratio),
            "shift": self.shift,
            "power": self.power,
            "start": self.start,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            amplitude=_to_complex(d.get("amplitude", 1.0)),
            ratio=_to_complex(d.get("ratio", 1.0)),
            shift=float(d.get("shift", 0.0)),
            power=float(d.get("power", 0.0)),
            start=int(d.get("start", 0)),
        )


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Taylor data a_0..a_N of a function holomorphic near 0.

    ``coeffs`` has shape (N+1,) for scalar series or (N+1, d) for vector
    valued ones.  ``exact`` marks a polynomial (all later coefficients are
    zero); otherwise the data is a truncation of an infinite series.
    """

    coeffs: np.ndarray
    singularities: tuple = ()
    exact: bool = False
    rule: Optional[CoefficientRule] = None

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim not in (1, 2) or c.shape[0] == 0:
            raise ValueError("coeffs must be a non-empty sequence")
        object.__setattr__(self, "coeffs", c)
        sing = tuple(complex(w) for w in self.singularities)
        if any(w == 0 for w in sing):
            raise ValueError("a singularity at 0 contradicts holomorphy at the origin")
        object.__setattr__(self, "singularities", sing)

    def __len__(self):
        return self.coeffs.shape[0]

    @classmethod
    def from_rule(cls, rule, n_terms, singularities=None):
        if singularities is None:
            singularities = (rule.singularity,)
        return cls(rule.coefficients(n_terms), tuple(singularities), rule=rule)

    def to_dict(self):
        if self.coeffs.ndim != 1:
            raise ValueError("only scalar series are serialisable")
        d = {
            "coeffs": [_pair(c) for c in self.coeffs],
            "singularities": [_pair(w) for w in self.singularities],
        }
        if self.exact:
            d["exact"] = True
        if self.rule is not None:
            d["rule"] = self.rule.to_dict()
        return d

    @classmethod
    def from_dict(cls, d, n_terms=4096):
        """Parse the JSON object form.

        ``coeffs`` may be omitted when a ``rule`` is present, in which case
        ``n_terms`` coefficients are generated from the rule.  When both are
        present they must agree.
        """
        rule = CoefficientRule.from_dict(d["rule"]) if d.get("rule") else None
        if "coeffs" in d:
            coeffs = np.array([_to_complex(c) for c in d["coeffs"]], dtype=complex)
            if rule is not None:
                expected = rule.coefficients(len(coeffs))
                scale = np.maximum(1.0, np.abs(expected))
                if np.any(np.abs(coeffs - expected) > 1e-12 * scale):
                    raise ValueError("coeffs disagree with the declared rule")
        elif rule is not None:
            coeffs = rule.coefficients(n_terms)
        else:
            raise ValueError("series needs 'coeffs' or 'rule'")
        sing = d.get("singularities")
        if sing is None:
            sing = [rule.singularity] if rule is not None else []
        return cls(
            coeffs,
            tuple(_to_complex(w) for w in sing),
            exact=bool(d.get("exact", False)),
            rule=rule,
        )


@dataclass(frozen=True)
class EvaluationReport:
    value: object
    terms_used: int
    tail_estimate: float
    converged: bool
    #: eps times the sum of term magnitudes; large values flag cancellation
    rounding_estimate: float = 0.0
    method: str = "series"


def log_lambda(n, delta):
    """log of n!/Gamma(delta n + 1), vectorised over n."""
    _check_delta(delta)
    n = np.asarray(n, dtype=float)
    if delta == 1.0:
        return np.zeros_like(n)
    return (log_gamma(n + 1.0 + 0j) - log_gamma(delta * n + 1.0 + 0j)).real


def lambda_multiplier(n, delta):
    """Fractional multiplier n!/Gamma(delta n + 1) computed through log-Gamma."""
    _check_delta(delta)
    if n < 0 or int(n) != n:
        raise DomainError("n must be a non-negative integer")
    if n == 0 or delta == 1.0:
        return 1.0
    return math.exp(float(log_lambda(n, delta)))


def lambda_multipliers(n_terms, delta):
    """Array of lambda_0 .. lambda_{n_terms-1}."""
    _check_delta(delta)
    if delta == 1.0:
        return np.ones(n_terms)
    out = np.exp(log_lambda(np.arange(n_terms), delta))
    out[0] = 1.0
    return out


def apply_multipliers(series, delta):
    """Multiply coefficient n by lambda_n(delta).

    For delta > 1 the result is entire, so the singularity list is dropped.
    """
    lam = lambda_multipliers(len(series), delta)
    if delta == 1.0:
        return replace(series, coeffs=series.coeffs.copy())
    c = series.coeffs * (lam if series.coeffs.ndim == 1 else lam[:, None])
    return PowerSeries(c, (), exact=series.exact, rule=None)


def _magnitudes(chunk):
    return np.abs(chunk) if chunk.ndim == 1 else np.max(np.abs(chunk), axis=1)


def sum_terms(chunks: Iterable[np.ndarray], tol, n_max, exact=False):
    """Sum a stream of series terms with the three-small-terms stopping rule.

    ``chunks`` yields consecutive blocks of terms (shape (m,) or (m, d)).  A
    stream that ends before ``n_max`` terms is treated as exhausted; with
    ``exact=True`` this means the remaining terms vanish, so the stream is
    summed to its end without the early-stopping rule.
    """
    if tol <= 0 or n_max < 1:
        raise ValueError("tol must be positive and n_max >= 1")
    kept = []
    partial = None
    streak = 0
    used = 0
    stopped = False
    diverged = False
    recent = deque(maxlen=8)
    for chunk in chunks:
        chunk = np.asarray(chunk, dtype=complex)
        room = n_max - used
        if room <= 0:
            break
        chunk = chunk[:room]
        mags = _magnitudes(chunk)
        bad = np.flatnonzero(~np.isfinite(mags))
        if bad.size:
            # overflowing terms: the series diverges at this point
            chunk, mags = chunk[: bad[0]], mags[: bad[0]]
            diverged = True
            if not len(chunk):
                break
        if partial is None:
            partial = np.zeros(chunk.shape[1:], dtype=complex)
        run = partial + np.cumsum(chunk, axis=0)
        scale = np.maximum(1.0, _magnitudes(run.reshape(len(chunk), -1)))
        small = mags < tol * scale
        stop_at = None
        for i, flag in enumerate(small):
            streak = streak + 1 if flag else 0
            recent.append(mags[i])
            if streak >= 3 and used + i >= 2 and not exact:
                # three small terms, and the extrapolated tail must agree
                window = np.array(recent)
                nz = np.flatnonzero(window)
                if nz.size == 0 or nz[-1] <= len(window) - 4 or \
                        _ratio_tail(window, nz) <= tol * scale[i]:
                    stop_at = i
                    break
        if stop_at is not None:
            kept.append(chunk[: stop_at + 1])
            used += stop_at + 1
            stopped = True
            break
        kept.append(chunk)
        used += len(chunk)
        partial = run[-1]
        if diverged:
            break
    if not kept:
        raise ValueError("empty term stream")
    terms = np.concatenate(kept, axis=0)
    flat = terms.reshape(len(terms), -1)
    try:
        value = np.array([complex(math.fsum(col.real), math.fsum(col.imag)) for col in flat.T])
    except OverflowError:
        # finite terms whose sum leaves the double range
        value = np.sum(flat, axis=0)
        diverged = True
    value = complex(value[0]) if terms.ndim == 1 else value
    mags = _magnitudes(terms)
    rounding = float(_EPS * np.sum(mags)) * 2.0
    size = max(1.0, float(np.max(np.abs(value))))

    if diverged:
        return EvaluationReport(value, used, math.inf, False, rounding)
    if exact and not stopped and used < n_max:
        return EvaluationReport(value, used, 0.0, True, rounding)
    nz = np.flatnonzero(mags)
    if nz.size == 0 or (stopped and nz[-1] <= len(mags) - 4):
        # the stream hit three exact zeros: taken as a terminating series
        tail = 0.0
    else:
        tail = _ratio_tail(mags, nz)
    converged = stopped and tail <= tol * size
    return EvaluationReport(value, used, tail, converged, rounding)


def _ratio_tail(mags, nz):
    if nz.size < 2:
        return float(mags[nz[-1]]) if nz.size else 0.0
    last, prev = mags[nz[-1]], mags[nz[-2]]
    # parity gaps: the ratio spans nz[-1] - nz[-2] steps
    rho = (last / prev) ** (1.0 / (nz[-1] - nz[-2]))
    if rho >= 1.0:
        return math.inf
    return float(last * rho / (1.0 - rho))


def evaluate(series, t, tol=1e-10, n_max=10_000):
    """Truncated evaluation of sum a_n t^n with compensated summation."""
    t = complex(t)
    c = series.coeffs
    if t == 0:
        return EvaluationReport(c[0].copy() if c.ndim == 2 else complex(c[0]), 1, 0.0, True)

    def chunks(size=512):
        power = 1.0 + 0j
        for lo in range(0, len(c), size):
            block = c[lo: lo + size]
            with np.errstate(over="ignore", invalid="ignore"):
                p = power * np.cumprod(np.concatenate(([1.0 + 0j], np.full(len(block) - 1, t))))
                power = p[-1] * t
                yield block * (p if block.ndim == 1 else p[:, None])

    return sum_terms(chunks(), tol, n_max, exact=series.exact)


def radius_estimate(series):
    """Cauchy-Hadamard radius from a regression on the trailing coefficients.

    Fits log|a_n| = c0 + c1 n + c2 log n + c3 n log n over the last half of
    the nonzero coefficients.  A clearly negative n log n term (factorial-type
    decay) or a radius above 1e6 yields :data:`RADIUS_INFINITE`; a clearly
    positive one yields 0.
    """
    mags = _magnitudes(series.coeffs)
    n_all = np.arange(len(mags))
    half = len(mags) // 2
    n = n_all[half:][mags[half:] > 0]
    n = n[n >= 1]
    if len(n) < 8:
        raise InsufficientData("radius_estimate needs at least 8 nonzero trailing coefficients")
    y = np.log(mags[n])
    nf = n.astype(float)
    basis = np.column_stack([np.ones_like(nf), nf, np.log(nf), nf * np.log(nf)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    if coef[3] < -0.05:
        return RADIUS_INFINITE
    if coef[3] > 0.05:
        return 0.0
    # refit without the n log n column once it is judged negligible
    coef, *_ = np.linalg.lstsq(basis[:, :3], y, rcond=None)
    radius = math.exp(-coef[1])
    return RADIUS_INFINITE if radius > _RADIUS_CAP else radius
