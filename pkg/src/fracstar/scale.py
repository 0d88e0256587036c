"""A concrete scale of Banach spaces: weighted l1 Taylor norms with A = d/dx.

An element is stored through its Taylor coefficients c_0..c_M at 0 and

    ||u||_omega = sum_n |c_n| (1 - omega)^n,   omega in [0, 1).

The norms decrease in omega, so X_omega' sits inside X_omega'' for
omega' < omega'', and the derivative obeys
||A u||_omega'' <= ||u||_omega' / (omega'' - omega'), i.e. C = 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundViolation, DomainError

__all__ = ["ScaleElement", "ScaleOperatorModel", "NormBoundReport", "norm_at",
           "derivative", "norm_bound_check"]


@dataclass(frozen=True, eq=False)
class ScaleElement:
    taylor: np.ndarray
    rule: object = None

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.taylor, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("taylor must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("taylor coefficients must be finite")
        object.__setattr__(self, "taylor", c)

    def __len__(self):
        return self.taylor.size

    @classmethod
    def from_rule(cls, rule, n_terms):
        return cls(rule.coefficients(n_terms), rule)


@dataclass(frozen=True)
class ScaleOperatorModel:
    """A = d/dx on the weighted Taylor scale."""

    kind: str = "derivative"
    norm_constant: float = 1.0

    def __post_init__(self):
        if self.kind != "derivative":
            raise ValueError(f"unsupported scale operator {self.kind!r}")


@dataclass(frozen=True)
class NormBoundReport:
    holds: bool
    checked: int
    worst_ratio: float
    omega1: float
    omega2: float


def _check_omega(omega):
    if not 0.0 <= omega < 1.0:
        raise DomainError(f"omega must lie in [0, 1), got {omega!r}")


def norm_at(element, omega):
    _check_omega(omega)
    c = element.taylor if isinstance(element, ScaleElement) else np.asarray(element, complex)
    weights = (1.0 - omega) ** np.arange(c.size)
    return float(np.sum(np.abs(c) * weights))


def derivative(element):
    c = element.taylor
    if c.size == 1:
        return ScaleElement(np.zeros(1, dtype=complex))
    return ScaleElement(c[1:] * np.arange(1, c.size))


def norm_bound_check(element, omega1, omega2, trials=0, rng=None, max_len=100,
                     constant=1.0, raise_on_failure=True):
    """Check ||A e||_omega2 <= C ||e||_omega1 / (omega2 - omega1).

    Runs on ``element`` and on ``trials`` random elements with at most
    ``max_len`` complex Gaussian coefficients.
    """
    _check_omega(omega1)
    _check_omega(omega2)
    if not omega1 < omega2:
        raise DomainError("need omega1 < omega2")
    rng = np.random.default_rng(rng)
    factor = constant / (omega2 - omega1)
    candidates = [element]
    for _ in range(trials):
        m = int(rng.integers(1, max_len + 1))
        c = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        candidates.append(ScaleElement(c))
    worst = 0.0
    for e in candidates:
        lhs = norm_at(derivative(e), omega2)
        rhs = factor * norm_at(e, omega1)
        if lhs == 0:
            continue
        ratio = lhs / rhs if rhs > 0 else np.inf
        worst = max(worst, ratio)
        # allow for rounding in the two sums
        if lhs > rhs * (1.0 + 1e-12):
            if raise_on_failure:
                raise BoundViolation(
                    f"||Ae||={lhs:.6g} exceeds bound {rhs:.6g}", witness=e)
            return NormBoundReport(False, len(candidates), worst, omega1, omega2)
    return NormBoundReport(True, len(candidates), worst, omega1, omega2)
