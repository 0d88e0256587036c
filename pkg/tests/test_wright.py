import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracstar.errors import BranchError, DomainError, PoleError, SlowConvergence
from fracstar.gamma import decay_constant, gamma, gamma_ratio_decay_bound
from fracstar.wright import (
    ContourConfig,
    WrightParams,
    integrand,
    lambda_series_sum,
    limit_kernel,
    phi,
    phi_integral,
    phi_limit_gap,
    phi_series,
)
from grids import dist_to_cut, dual_grid

# sum_n n!/Gamma(delta n + 1) z^n, mpmath nsum at 40 digits
PHI_REF = {
    (1.5, -2): 0.25990948204804927317,
    (1.5, -1): 0.49286589079497056311,
    (1.5, 2j): 0.092003647462103054607 + 0.81405049158251384479j,
    (1.5, 0.3): 1.2590631386929524586,
}


def residue_kernel(z, terms=4000):
    """Sum of residues of (-z)^(-s)/sin(pi s), closing right (|z|>1) or left (|z|<1)."""
    z = mpmath.mpc(z)
    if abs(z) < 1:
        return complex(mpmath.nsum(lambda n: z ** n, [0, mpmath.inf]))
    return complex(-mpmath.nsum(lambda n: z ** (-n), [1, mpmath.inf]))


def test_params_and_config_validation():
    p = WrightParams(1.5)
    assert p.delta_cap == pytest.approx(-0.5)
    assert -1 < WrightParams(1.01).delta_cap < 0
    for bad in (1.0, 2.0):
        with pytest.raises(DomainError):
            WrightParams(bad)
    with pytest.raises(ValueError):
        ContourConfig(abscissa=1.0)
    with pytest.raises(ValueError):
        ContourConfig(nodes=63)
    with pytest.raises(ValueError):
        ContourConfig(nodes=32)


@pytest.mark.parametrize("delta", [1.1, 1.5, 1.9])
def test_integrand_reduces_at_half(delta):
    v = integrand(WrightParams(delta), 0.5, -1)
    assert v == pytest.approx(math.sqrt(math.pi) / gamma(1 - delta / 2), rel=1e-13)


def test_integrand_conjugate_symmetry():
    rng = np.random.default_rng(5)
    params = WrightParams(1.37)
    for _ in range(100):
        s = complex(rng.uniform(0.05, 0.95), rng.uniform(-20, 20))
        z = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        assert integrand(params, s.conjugate(), z.conjugate()) == integrand(params, s, z).conjugate()


def test_integrand_decay_bound():
    y = 4.0
    v = integrand(WrightParams(1.5), complex(0.5, y), -1)
    bound = gamma_ratio_decay_bound(1.5, y, decay_constant(1.5)) / math.cosh(math.pi * y)
    assert abs(v) <= bound


def test_integrand_errors():
    p = WrightParams(1.5)
    with pytest.raises(BranchError):
        integrand(p, 0.5, 2.0)
    with pytest.raises(BranchError):
        integrand(p, 0.5, 0.0)
    with pytest.raises(PoleError):
        integrand(p, 1.0, -1)


def test_phi_series_examples():
    assert phi_series(WrightParams(1.5), 0) == 1
    assert phi_series(1.0, 0.5) == pytest.approx(2.0, abs=1e-12)
    for (d, z), ref in PHI_REF.items():
        assert abs(phi_series(d, z) - ref) < 1e-11


def test_phi_series_slow_convergence():
    with pytest.raises(SlowConvergence):
        phi_series(1.01, -50, n_max=500)
    with pytest.raises(DomainError):
        phi_series(1.0, 2.0)


def test_mp_path_handles_cancellation():
    # large |z| on the negative axis: terms grow huge before cancelling
    v, meta = lambda_series_sum(1.5, -30.0, 1e-12, full_output=True)
    with mpmath.workdps(80):
        ref = mpmath.fsum(mpmath.factorial(n) / mpmath.gamma(mpmath.mpf(1.5) * n + 1)
                          * mpmath.mpf(-30) ** n for n in range(3000))
    assert meta["method"] == "series-mp"
    assert abs(v - complex(ref)) < 1e-10


@pytest.mark.parametrize("z", [-1, 2j, -2])
def test_phi_integral_matches_series_oracle(z):
    assert abs(phi_integral(WrightParams(1.5), z) - PHI_REF[(1.5, z)]) < 1e-8


def test_phi_integral_conjugate_pair():
    cfg = ContourConfig()
    for z in (-1 + 2j, 0.5 + 0.3j, -3 - 0.1j):
        a = phi_integral(1.3, z, cfg)
        b = phi_integral(1.3, z.conjugate(), cfg)
        assert abs(a - b.conjugate()) <= cfg.tol


def test_phi_integral_rejects_cut():
    with pytest.raises(BranchError):
        phi_integral(1.5, 3.0)
    with pytest.raises(DomainError):
        phi_integral(1.0, -1.0)


def test_limit_kernel_closed_form():
    cfg = ContourConfig(tol=1e-10)
    for z in (-1, 2j, -4, -1 + 1j, -0.01, 3 - 1j, -0.3j):
        assert abs(limit_kernel(z, cfg) - 1 / (1 - z)) < 1e-9
    assert limit_kernel(-1) == pytest.approx(0.5, abs=1e-8)
    assert limit_kernel(2j) == pytest.approx(0.2 + 0.4j, abs=1e-8)
    assert limit_kernel(-1e-6) == pytest.approx(1 / (1 + 1e-6), abs=1e-8)
    with pytest.raises(BranchError):
        limit_kernel(0.5)


@pytest.mark.parametrize("z", [-4, 2j, -1 + 1j, -0.01, 0.5j])
def test_limit_kernel_residue_oracle(z):
    assert abs(limit_kernel(z) - residue_kernel(z)) < 1e-8


@pytest.mark.parametrize("delta", [1.2, 1.5, 1.8])
def test_dual_evaluator_agreement(delta):
    grid = dual_grid()
    assert all(abs(z) <= 4 and dist_to_cut(z) >= 0.2 for z in grid)
    cfg = ContourConfig(tol=1e-8)
    for z in grid:
        s = phi(delta, z, 1e-12, method="series")
        q = phi(delta, z, config=cfg, method="integral")
        assert abs(s - q) <= 1e-7, z


@pytest.mark.parametrize("delta", [1.2, 1.8])
def test_nodes_doubling(delta):
    base = ContourConfig(tol=1e-8)
    double = ContourConfig(tol=1e-8, nodes=2 * base.nodes)
    for z in dual_grid()[::3]:
        assert abs(phi_integral(delta, z, base) - phi_integral(delta, z, double)) <= 10 * base.tol


@settings(max_examples=40, deadline=None)
@given(st.floats(-4, 4), st.floats(0.2, 4), st.sampled_from([1.2, 1.5, 1.8]))
def test_real_coefficient_symmetry(x, y, delta):
    z = complex(x, y)
    assert phi_series(delta, z.conjugate()) == pytest.approx(phi_series(delta, z).conjugate(),
                                                             abs=1e-11)


@pytest.mark.parametrize("delta", [1.05, 1.3, 1.6, 1.95])
def test_positive_near_zero_on_negative_axis(delta):
    for x in np.linspace(-0.999, 0, 41):
        assert phi_series(delta, x).real > 0


def test_auto_dispatch():
    v, meta = phi(1.5, -1, full_output=True)
    assert meta["method"] == "series"
    v, meta = phi(1.02, -6 + 1j, full_output=True)
    assert meta["method"] == "integral"
    with pytest.raises(ValueError):
        phi(1.5, -1, method="bogus")


def test_limit_gap_examples():
    assert phi_limit_gap(1.0, 0.5) < 1e-12
    gaps = [phi_limit_gap(d, -2) for d in (1.2, 1.1, 1.05)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert phi_limit_gap(1.5, 0.3) == pytest.approx(abs(PHI_REF[(1.5, 0.3)] - 1 / 0.7),
                                                   rel=1e-9)
    with pytest.raises(DomainError):
        phi_limit_gap(1.5, 2.0)


@pytest.mark.parametrize("z", [-2, -0.5, 0.5, 2j, -1 + 1j, 0.4 + 0.6j, -3.5 - 0.5j])
def test_limit_gap_monotone_in_delta(z):
    gaps = [phi_limit_gap(d, z) for d in (1.2, 1.1, 1.05, 1.025)]
    assert all(b < a for a, b in zip(gaps, gaps[1:])), gaps
