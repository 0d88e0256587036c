"""JSON forms of power series and Cauchy problems.

Series::

    {"coeffs": [[re, im], ...], "singularities": [[re, im], ...],
     "rule": {"amplitude": .., "ratio": .., "shift": .., "power": .., "start": ..}}

Problems::

    {"kind": "matrix" | "derivative", "matrix": [[...]], "u0": [...],
     "taylor": [...], "rule": {...}, "delta": x, "singularities": [...]}

Complex entries may be plain numbers or [re, im] pairs.  ``rule`` is
optional in both; for derivative problems it may replace ``taylor``.
"""
from __future__ import annotations

import json

import numpy as np

from .evolution import CauchyProblem, FiniteOperator
from .scale import ScaleElement, ScaleOperatorModel
from .series import CoefficientRule, PowerSeries, _pair, _to_complex

__all__ = ["load_series", "load_problem", "problem_from_dict", "problem_to_dict",
           "series_from_dict", "series_to_dict"]

DEFAULT_TERMS = 4096


def series_from_dict(d, n_terms=DEFAULT_TERMS):
    return PowerSeries.from_dict(d, n_terms)


def series_to_dict(series):
    return series.to_dict()


def _complex_array(values):
    return np.array([_to_complex(v) for v in values], dtype=complex)


def problem_from_dict(d, n_terms=DEFAULT_TERMS):
    kind = d.get("kind")
    delta = float(d.get("delta", 1.5))
    sing = d.get("singularities")
    if kind == "matrix":
        matrix = np.array([[_to_complex(v) for v in row] for row in d["matrix"]], dtype=complex)
        op = FiniteOperator(matrix, _complex_array(d["u0"]))
        return CauchyProblem(op, None, delta, tuple(_to_complex(w) for w in sing or ()))
    if kind == "derivative":
        rule = CoefficientRule.from_dict(d["rule"]) if d.get("rule") else None
        if "taylor" in d:
            element = ScaleElement(_complex_array(d["taylor"]), rule)
        elif rule is not None:
            element = ScaleElement.from_rule(rule, n_terms)
        else:
            raise ValueError("derivative problems need 'taylor' or 'rule'")
        if sing is None:
            sing = [rule.singularity] if rule is not None else []
        return CauchyProblem(ScaleOperatorModel(), element, delta,
                             tuple(_to_complex(w) for w in sing))
    raise ValueError(f"unknown problem kind {kind!r}")


def problem_to_dict(problem):
    d = {"delta": problem.delta, "singularities": [_pair(w) for w in problem.singularities]}
    if problem.is_scale:
        d["kind"] = "derivative"
        d["taylor"] = [_pair(c) for c in problem.initial.taylor]
        if problem.initial.rule is not None:
            d["rule"] = problem.initial.rule.to_dict()
    else:
        d["kind"] = "matrix"
        d["matrix"] = [[_pair(v) for v in row] for row in problem.operator.matrix]
        d["u0"] = [_pair(v) for v in problem.operator.u0]
    return d


def load_series(path):
    with open(path) as fh:
        return series_from_dict(json.load(fh))


def load_problem(path):
    with open(path) as fh:
        return problem_from_dict(json.load(fh))
