"""Cauchy problems du/dt = Au and their fractional counterparts, solved by series.

Two operator families are supported: finite matrices acting on a vector u0,
and the derivative A = d/dx on the weighted Taylor scale, observed through
the functional "value at x = 0".  For the latter (A^n u0)(0) = n! c_n, so
the classical solution observed at 0 is sum c_n t^n, i.e. u0 translated by t.

Three solution series are available:

* classical  u(t)            = sum t^n / n!              A^n u0
* fractional u_delta(t)      = sum t^(delta n) / G(delta n + 1) A^n u0,  t >= 0
* rescaled   u_delta(t^(1/delta)) = sum t^n / G(delta n + 1) A^n u0

The rescaled series is entire and tends to the continuation of u on its
Mittag-Leffler star as delta -> 1+.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np

from . import wright
from .errors import DomainError, SlowConvergence, StarViolation, TailError, TruncationError
from .gamma import log_gamma
from .scale import ScaleElement, ScaleOperatorModel, derivative
from .series import (
    EvaluationReport,
    PowerSeries,
    apply_multipliers,
    evaluate,
    radius_estimate,
    sum_terms,
)
from .star import StarDomain, in_star

__all__ = [
    "FiniteOperator",
    "CauchyProblem",
    "SweepRow",
    "SweepResult",
    "power_sequence",
    "solve_classical",
    "solve_fractional",
    "solve_rescaled",
    "continuation_sweep",
    "observed_series",
    "existence_time",
    "is_monotone_decreasing",
]

_CHUNK = 64
_EPS = np.finfo(float).eps
# relative log-Gamma error of the multipliers, in units of eps, at n ~ 1e4
_LAMBDA_ERROR_GAIN = 1e3


@dataclass(frozen=True, eq=False)
class FiniteOperator:
    matrix: np.ndarray
    u0: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.matrix, dtype=complex))
        u = np.atleast_1d(np.asarray(self.u0, dtype=complex))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        if u.shape != (a.shape[0],):
            raise ValueError("u0 dimension does not match the matrix")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(u))):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "u0", u)

    @property
    def dim(self):
        return self.u0.size


@dataclass(frozen=True, eq=False)
class CauchyProblem:
    """du/dt = Au, u(0) = u0, together with its order-delta counterpart.

    For scale problems ``operator`` is a :class:`ScaleOperatorModel` and
    ``initial`` the element u0; for matrices the initial vector lives on the
    :class:`FiniteOperator`.  ``singularities`` are the known singular
    points of the observed solution t -> u(t), defining its star.
    """

    operator: Union[FiniteOperator, ScaleOperatorModel]
    initial: Optional[ScaleElement] = None
    delta: float = 1.5
    singularities: tuple = ()

    def __post_init__(self):
        if not 1.0 < self.delta <= 2.0:
            raise DomainError(f"delta must lie in (1, 2], got {self.delta!r}")
        if isinstance(self.operator, ScaleOperatorModel) and self.initial is None:
            raise ValueError("scale problems need an initial element")
        object.__setattr__(self, "singularities", tuple(complex(w) for w in self.singularities))

    @property
    def is_scale(self):
        return isinstance(self.operator, ScaleOperatorModel)

    @property
    def star(self):
        return StarDomain(self.singularities) if self.singularities else None


@dataclass(frozen=True)
class SweepRow:
    delta: float
    value: object
    error: Optional[float]
    converged: bool
    method: str


@dataclass(frozen=True)
class SweepResult:
    t: complex
    rows: tuple
    reference: object = None

    @property
    def errors(self):
        return [r.error for r in self.rows]

    @property
    def monotone_decreasing(self):
        if self.reference is None:
            return None
        return is_monotone_decreasing(self.errors)


def is_monotone_decreasing(values):
    vals = list(values)
    if any(v is None or not math.isfinite(v) for v in vals):
        return False
    return all(b < a for a, b in zip(vals, vals[1:]))


def power_sequence(op, u0=None, N=0):
    """A^k u0 for k = 0..N.

    Matrices give an array of shape (N+1, d).  For the derivative model the
    result is a list of :class:`ScaleElement`, element k holding the Taylor
    coefficients c_{n+k} (n+k)!/n!.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    if isinstance(op, FiniteOperator):
        v = op.u0 if u0 is None else np.asarray(u0, dtype=complex)
        out = np.empty((N + 1, v.size), dtype=complex)
        out[0] = v
        for k in range(1, N + 1):
            out[k] = op.matrix @ out[k - 1]
        return out
    if isinstance(op, ScaleOperatorModel):
        if u0 is None:
            raise ValueError("the derivative model needs an initial element")
        if len(u0) < N + 1:
            raise TruncationError(
                f"u0 has {len(u0)} Taylor coefficients, A^{N} u0 needs {N + 1}")
        seq = [u0]
        for _ in range(N):
            seq.append(derivative(seq[-1]))
        return seq
    raise TypeError(f"unsupported operator {type(op).__name__}")


def observed_series(problem):
    """Taylor data in t of the observed classical solution (scale problems)."""
    el = problem.initial
    rule = el.rule
    return PowerSeries(el.taylor, problem.singularities, rule=rule)


def existence_time(problem):
    """Empirical radius T of the classical solution; inf for bounded operators."""
    if not problem.is_scale:
        return math.inf
    return radius_estimate(observed_series(problem))


def _log_ratio(delta, n):
    # log Gamma(delta (n-1) + 1) - log Gamma(delta n + 1)
    n = np.asarray(n, dtype=float)
    return (log_gamma(delta * (n - 1.0) + 1.0 + 0j) - log_gamma(delta * n + 1.0 + 0j)).real


def _matrix_chunks(op, factors):
    """Terms T_n = factor_n * A T_{n-1}, T_0 = u0; ``factors`` yields arrays."""
    current = op.u0.copy()
    first = True
    for fac in factors:
        block = np.empty((len(fac), op.dim), dtype=complex)
        for i, f in enumerate(fac):
            if first:
                block[i] = current
                first = False
                continue
            current = f * (op.matrix @ current)
            block[i] = current
        yield block


def _factor_stream(kind, t, delta):
    n0 = 0
    while True:
        n = np.arange(n0, n0 + _CHUNK, dtype=float)
        nn = np.maximum(n, 1.0)
        if kind == "classical" or (kind == "rescaled" and delta == 1.0):
            fac = t / nn
        elif kind == "rescaled":
            fac = t * np.exp(_log_ratio(delta, nn))
        else:  # fractional, t real > 0
            fac = np.exp(delta * math.log(t) + _log_ratio(delta, nn))
        yield fac.astype(complex)
        n0 += _CHUNK


def _finite_solve(problem, kind, t, tol, n_max):
    op = problem.operator
    if t == 0:
        return EvaluationReport(op.u0.copy(), 1, 0.0, True)
    return sum_terms(_matrix_chunks(op, _factor_stream(kind, t, problem.delta)), tol, n_max)


def solve_classical(problem, t, tol=1e-10, n_max=10_000):
    """u(t) = sum t^n/n! A^n u0; for scale problems the value at x = 0."""
    t = complex(t)
    if problem.is_scale:
        return evaluate(observed_series(problem), t, tol, n_max)
    return _finite_solve(problem, "classical", t, tol, n_max)


def solve_fractional(problem, t, tol=1e-10, n_max=10_000):
    """u_delta(t) = sum t^(delta n)/Gamma(delta n + 1) A^n u0 for real t >= 0."""
    if isinstance(t, complex):
        if t.imag != 0:
            raise DomainError("the fractional series is evaluated for real t >= 0 only")
        t = t.real
    t = float(t)
    if t < 0:
        raise DomainError("the fractional series is evaluated for real t >= 0 only")
    if problem.is_scale:
        if t == 0:
            return EvaluationReport(complex(problem.initial.taylor[0]), 1, 0.0, True)
        return _scale_rescaled(problem, t ** problem.delta, tol, n_max, None)
    return _finite_solve(problem, "fractional", t, tol, n_max)


def solve_rescaled(problem, t, tol=1e-10, n_max=10_000, config=None):
    """u_delta(t^(1/delta)) = sum t^n/Gamma(delta n + 1) A^n u0, entire in t.

    Scale problems whose initial data follow a :class:`CoefficientRule`
    switch to the Mellin-Barnes integral when direct summation would need
    more than a couple of thousand terms.
    """
    t = complex(t)
    if problem.is_scale:
        return _scale_rescaled(problem, t, tol, n_max, config)
    return _finite_solve(problem, "rescaled", t, tol, n_max)


def _scale_rescaled(problem, t, tol, n_max, config):
    delta = problem.delta
    series = observed_series(problem)
    rule = series.rule
    if t == 0:
        return EvaluationReport(complex(series.coeffs[0]), 1, 0.0, True)
    if delta >= 2.0:
        return _evaluate_order_two(series, t, tol, n_max)
    if rule is None:
        return _evaluate_multiplied(series, delta, t, tol, n_max)
    z = complex(rule.ratio) * t
    amp = complex(rule.amplitude)
    kw = dict(power=rule.power, shift=rule.shift, start=rule.start)
    N = wright.truncation_index(delta, abs(z), tol, wright.SERIES_DISPATCH_LIMIT, **kw)
    if N is not None or wright.on_cut(z):
        try:
            v, meta = wright.lambda_series_sum(delta, z, tol, n_max, full_output=True, **kw)
        except SlowConvergence:
            return _evaluate_multiplied(series, delta, t, tol, n_max)
        return EvaluationReport(amp * v, meta["terms"], 0.0, True,
                                abs(amp) * meta["rounding_estimate"], meta["method"])
    cfg = config or wright.ContourConfig()
    try:
        v, info = wright.mellin_barnes_sum(delta, z, cfg, full_output=True, **kw)
    except TailError:
        return _evaluate_multiplied(series, delta, t, tol, n_max)
    return EvaluationReport(amp * v, info.nodes, cfg.tol, True,
                            abs(amp) * info.rounding_estimate, "integral")


def _evaluate_multiplied(series, delta, t, tol, n_max):
    """Multiplied Taylor data without a closed-form rule.

    Alternating terms far above the result lose digits twice: once in the
    sum and once through the log-Gamma error in each multiplier.  When the
    rounding estimate says so, the same terms are re-summed in multiprecision.
    """
    rep = evaluate(apply_multipliers(series, delta), t, tol, n_max)
    if series.coeffs.ndim != 1 or not math.isfinite(rep.tail_estimate):
        return rep
    size = max(1.0, abs(rep.value))
    if rep.rounding_estimate * _LAMBDA_ERROR_GAIN <= 0.25 * tol * size:
        return rep
    peak = math.log(max(rep.rounding_estimate / _EPS, 1.0))
    digits = (peak - math.log(tol)) / math.log(10.0) + 10.0
    value = wright.multiplied_series_mp(series.coeffs[: rep.terms_used], delta, t, digits)
    return EvaluationReport(value, rep.terms_used, rep.tail_estimate, rep.converged
                            or rep.tail_estimate <= tol * max(1.0, abs(value)), 0.0, "series-mp")


def _evaluate_order_two(series, t, tol, n_max):
    # delta = 2 is outside the multiplier range [1, 2); form the coefficients directly
    n = np.arange(len(series), dtype=float)
    lam = np.exp((log_gamma(n + 1.0 + 0j) - log_gamma(2.0 * n + 1.0 + 0j)).real)
    return evaluate(PowerSeries(series.coeffs * lam, exact=series.exact), t, tol, n_max)


def continuation_sweep(problem, t, deltas: Sequence[float], reference=None, tol=1e-10,
                       config=None, angular_tol=1e-9):
    """Rescaled fractional solutions at t along a delta schedule decreasing to 1.

    With a reference value, each row carries |value - reference| (max norm
    for vectors); t must then lie in the star of the observed solution.
    """
    t = complex(t)
    deltas = [float(d) for d in deltas]
    if not deltas or any(not 1.0 < d < 2.0 for d in deltas):
        raise DomainError("deltas must lie in (1, 2)")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise DomainError("deltas must be strictly decreasing")
    if reference is not None and problem.star is not None:
        if not in_star(t, problem.star, angular_tol):
            raise StarViolation(f"t={t!r} lies outside the Mittag-Leffler star")
    rows = []
    for d in deltas:
        rep = solve_rescaled(replace(problem, delta=d), t, tol, config=config)
        err = None
        if reference is not None:
            diff = np.asarray(rep.value) - np.asarray(reference)
            err = float(np.max(np.abs(diff)))
        rows.append(SweepRow(d, rep.value, err, rep.converged, rep.method))
    return SweepResult(t, tuple(rows), reference)
