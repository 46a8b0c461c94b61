import math

import numpy as np
import pytest
from scipy import special

from suppression.errors import DivergentIntegral, UsageError
from suppression.quadrature import Convergence, classify_convergence
from suppression.regulator import RegulatorParams, UnitWeight
from suppression.weighted_measure import (
    SampledFunction,
    compact_bump,
    embedding_diagnostics,
    gaussian_bump,
    total_mass,
    weighted_distance,
    weighted_inner_product,
    weighted_lp_norm,
)

FLAT = UnitWeight(dim=1)


def random_bumps(rng, n):
    return [gaussian_bump(rng.uniform(0.3, 3.0), rng.uniform(-2, 2), rng.uniform(0, 3)) for _ in range(n)]


# -- sampled functions ---------------------------------------------------------

def test_from_samples_interpolates_and_truncates():
    k = np.linspace(0, 4, 41)
    f = SampledFunction.from_samples(k, np.exp(-k), description="decay")
    assert f(1.05) == pytest.approx(math.exp(-1.05), rel=1e-4)
    assert f(4.5) == 0.0
    assert f.support == 4.0


def test_from_samples_declared_tail():
    k = np.array([0.0, 1.0, 2.0])
    f = SampledFunction.from_samples(k, [1.0, 0.5, 0.25], tail_exponent=-2.0)
    assert f(4.0) == pytest.approx(0.25 / 4)
    assert f.growth == -2.0 and math.isinf(f.support)


@pytest.mark.parametrize("nodes, values", [
    ([0.0, 0.0, 1.0], [1, 2, 3]),
    ([-1.0, 1.0], [1, 2]),
    ([0.0, 1.0], [1.0, math.inf]),
    ([0.0], [1.0]),
])
def test_from_samples_validation(nodes, values):
    with pytest.raises(UsageError):
        SampledFunction.from_samples(nodes, values)


# -- total mass ----------------------------------------------------------------

def test_total_mass_examples():
    with pytest.raises(DivergentIntegral):
        total_mass(RegulatorParams(beta=1.0, dim=4))
    assert total_mass(RegulatorParams(beta=1.0)).value == pytest.approx(math.pi, rel=1e-10)


@pytest.mark.parametrize("d, beta", [(1, 0.6), (2, 1.5), (3, 2.0), (2, 0.75), (3, 1.5)])
def test_total_mass_verdict_matches_classifier(d, beta):
    p = RegulatorParams(beta=beta, dim=d)
    verdict = classify_convergence(d, 0.0, p)
    if verdict.status is Convergence.DIVERGENT:
        with pytest.raises(DivergentIntegral):
            total_mass(p)
    else:
        assert total_mass(p).value > 0


# -- norms ---------------------------------------------------------------------

def test_zero_function_norm():
    zero = SampledFunction.from_callable(lambda k: 0.0, description="zero")
    assert weighted_lp_norm(zero, 2, RegulatorParams()) == 0.0


def test_gaussian_norm_flat_weight():
    f = gaussian_bump(1.0)
    assert weighted_lp_norm(f, 2, FLAT) == pytest.approx(math.sqrt(math.sqrt(math.pi)), rel=1e-10)
    assert weighted_lp_norm(f, 2, FLAT) == pytest.approx(1.33133, abs=1e-5)


@pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
def test_homogeneity(p):
    params = RegulatorParams(beta=1.2, eta=0.05)
    f = gaussian_bump(0.8, 1.0, 0.5)
    assert weighted_lp_norm(3 * f, p, params) == pytest.approx(3 * weighted_lp_norm(f, p, params), rel=1e-9)


def test_p_below_one_rejected():
    with pytest.raises(UsageError):
        weighted_lp_norm(gaussian_bump(), 0.5, RegulatorParams())


def test_declared_growth_triggers_refusal():
    f = SampledFunction.from_callable(lambda k: k, growth=1.0, description="k")
    with pytest.raises(DivergentIntegral):
        weighted_lp_norm(f, 2, RegulatorParams(beta=1.0))
    # 2*beta = 6 > d + p*growth = 3
    assert weighted_lp_norm(f, 2, RegulatorParams(beta=3.0)) > 0


def test_inner_product_consistency_and_symmetry():
    params = RegulatorParams(beta=1.5)
    f, g = gaussian_bump(1.0, 2.0, 0.3), gaussian_bump(0.5, -1.0, 1.2)
    assert weighted_inner_product(f, f, params) == pytest.approx(weighted_lp_norm(f, 2, params) ** 2, rel=1e-9)
    assert weighted_inner_product(f, g, params) == pytest.approx(weighted_inner_product(g, f, params), rel=1e-12)
    assert weighted_distance(f, g, params) == pytest.approx(weighted_distance(g, f, params), rel=1e-12)
    assert weighted_distance(f, f, params) == 0.0


def test_inner_product_bilinear():
    params = RegulatorParams(beta=2.0)
    f, g, h = gaussian_bump(1.0), gaussian_bump(0.4, 1.0, 1.0), compact_bump(2.0)
    lhs = weighted_inner_product(2 * f + g, h, params)
    rhs = 2 * weighted_inner_product(f, h, params) + weighted_inner_product(g, h, params)
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_cauchy_schwarz_random_pairs():
    rng = np.random.default_rng(11)
    params = RegulatorParams(beta=1.0, eta=0.1)
    for _ in range(100):
        f, g = random_bumps(rng, 2)
        lhs = abs(weighted_inner_product(f, g, params))
        assert lhs <= weighted_lp_norm(f, 2, params) * weighted_lp_norm(g, 2, params) * (1 + 1e-9)


def test_triangle_inequality_random_triples():
    rng = np.random.default_rng(12)
    params = RegulatorParams(beta=2.0)
    for _ in range(25):
        f, g, h = random_bumps(rng, 3)
        assert weighted_distance(f, h, params) <= (
            weighted_distance(f, g, params) + weighted_distance(g, h, params) + 1e-12)


def test_norm_monotone_in_lambda():
    rng = np.random.default_rng(5)
    for f in random_bumps(rng, 15):
        lo = weighted_lp_norm(f, 2, RegulatorParams(beta=1.0, lam=0.5))
        hi = weighted_lp_norm(f, 2, RegulatorParams(beta=1.0, lam=2.0))
        assert lo <= hi


def test_weighted_below_unweighted():
    rng = np.random.default_rng(6)
    params = RegulatorParams(beta=1.3, eta=0.05)
    for f in random_bumps(rng, 15):
        assert weighted_lp_norm(f, 2, params) <= weighted_lp_norm(f, 2, FLAT) * (1 + 1e-12)


# -- embedding diagnostics -----------------------------------------------------

def test_gaussian_tail_masses_match_erfc():
    diag = embedding_diagnostics(gaussian_bump(1.0), RegulatorParams(beta=1.0), [2, 4, 8])
    masses = [diag.tail_mass[K] for K in (2.0, 4.0, 8.0)]
    for K, m in zip((2, 4, 8), masses):
        # int_{|k|>K} e^{-k^2} dk = sqrt(pi) erfc(K)
        assert m == pytest.approx(math.sqrt(math.pi) * special.erfc(K), rel=1e-7)
    assert masses[0] > 10 * masses[1] > 100 * masses[2]
    assert diag.ratio <= 1.0
    assert diag.norm_l2 == pytest.approx(math.pi ** 0.25, rel=1e-10)


def test_compact_support_has_zero_tail():
    diag = embedding_diagnostics(compact_bump(1.5), RegulatorParams(), [1.5, 3.0])
    assert diag.tail_mass == {1.5: 0.0, 3.0: 0.0}
    assert 0 < diag.ratio <= 1


def test_divergent_unweighted_norm_still_reports_weighted():
    f = SampledFunction.from_callable(lambda k: 1.0 / math.sqrt(1 + k), growth=-0.5, description="slow")
    diag = embedding_diagnostics(f, RegulatorParams(beta=1.0), [1.0])
    assert diag.l2_divergent and math.isinf(diag.norm_l2)
    assert diag.norm_weighted > 0 and diag.ratio == 0.0


def test_bad_cutoffs():
    with pytest.raises(UsageError):
        embedding_diagnostics(gaussian_bump(), RegulatorParams(), [4.0, 2.0])
    with pytest.raises(UsageError):
        embedding_diagnostics(gaussian_bump(), RegulatorParams(), [])
