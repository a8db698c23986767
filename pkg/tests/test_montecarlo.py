import math

import numpy as np
import pytest

from lrcontour import (ChainResult, ChainSpec, FieldProfile, ModelParams,
                       ResourceLimitError, boundary_field, coupling,
                       exact_expectation, run_chain)

PARAMS = ModelParams(2.0)


def gibbs_probabilities(L, beta, params, boundary_sign, profile=None):
    """Exact Gibbs weights per state bitmask, from public pieces only.

    Bit j of the mask set means the spin at site -L + j is minus; the
    energy is -1/2 sigma.K sigma - sigma.(bnd B + h), matching the chain.
    """
    n = 2 * L + 1
    sites = list(range(-L, L + 1))
    kmat = np.array([[coupling(abs(x - y), params) for y in sites]
                     for x in sites])
    bvals, _errs = boundary_field(L, params)
    f = boundary_sign * bvals
    if profile is not None:
        f = f + np.array([profile.field_at(x) for x in sites])
    energies = np.empty(1 << n)
    for mask in range(1 << n):
        sigma = np.array([1.0 - 2.0 * ((mask >> j) & 1) for j in range(n)])
        energies[mask] = -0.5 * sigma @ kmat @ sigma - sigma @ f
    w = np.exp(-beta * (energies - energies.min()))
    return w / w.sum()


def test_exact_expectation_free_at_beta_zero():
    assert exact_expectation(2, 0.0, PARAMS) == pytest.approx(0.0, abs=1e-12)


def test_exact_expectation_boundary_antisymmetry():
    for beta in (0.3, 1.0):
        up = exact_expectation(2, beta, PARAMS, boundary_sign=1)
        down = exact_expectation(2, beta, PARAMS, boundary_sign=-1)
        assert up == pytest.approx(-down, abs=1e-12)
        assert up > 0.0


def test_exact_expectation_grows_with_beta():
    vals = [exact_expectation(2, b, PARAMS) for b in (0.25, 0.5, 1.0, 2.0)]
    assert vals == sorted(vals)
    assert vals[-1] > 0.9


def test_exact_expectation_with_field():
    # a plus-favouring field raises <sigma_0> above the field-free value
    profile = FieldProfile(0.5, 1.0)
    with_field = exact_expectation(2, 0.5, PARAMS, profile=profile)
    free = exact_expectation(2, 0.5, PARAMS)
    assert with_field > free


def test_exact_expectation_validation_and_cap():
    with pytest.raises(ValueError):
        exact_expectation(2, 1.0, PARAMS, boundary_sign=0)
    with pytest.raises(ValueError):
        exact_expectation(2, -1.0, PARAMS)
    with pytest.raises(ResourceLimitError):
        exact_expectation(11, 1.0, PARAMS)


def test_chain_spec_validation_and_defaults():
    spec = ChainSpec(2, 1.0, PARAMS, steps=1000)
    assert spec.n_sites == 5
    assert spec.resolved_burn_in() == 100
    assert spec.resolved_thin() == 5
    explicit = ChainSpec(2, 1.0, PARAMS, steps=1000, burn_in=7, thin=2)
    assert explicit.resolved_burn_in() == 7
    assert explicit.resolved_thin() == 2
    for bad in [dict(L=0), dict(beta=-0.1), dict(boundary_sign=2),
                dict(steps=0)]:
        kwargs = dict(L=2, beta=1.0, params=PARAMS)
        kwargs.update(bad)
        with pytest.raises(ValueError):
            ChainSpec(**kwargs)


def test_chain_matches_exact_summation():
    spec = ChainSpec(2, 1.0, PARAMS, steps=400000, seed=1)
    result = run_chain(spec)
    target = exact_expectation(2, 1.0, PARAMS)
    assert result.stderr_sigma0 > 0.0
    assert abs(result.mean_sigma0 - target) <= 3.0 * result.stderr_sigma0
    assert 0.0 < result.acceptance_rate < 1.0
    expected_samples = (spec.steps - spec.resolved_burn_in()) \
        // spec.resolved_thin()
    assert result.samples == expected_samples


def test_chain_matches_exact_with_field():
    profile = FieldProfile(0.5, 1.0)
    spec = ChainSpec(2, 0.7, PARAMS, profile=profile, steps=400000, seed=3)
    result = run_chain(spec)
    target = exact_expectation(2, 0.7, PARAMS, profile=profile)
    assert abs(result.mean_sigma0 - target) <= 3.0 * result.stderr_sigma0


def test_chain_beta_zero_accepts_everything():
    spec = ChainSpec(1, 0.0, PARAMS, steps=200000, seed=5)
    result = run_chain(spec)
    assert result.acceptance_rate == 1.0
    assert abs(result.mean_sigma0) <= 4.0 * result.stderr_sigma0


def test_chain_is_deterministic_per_seed():
    spec = ChainSpec(1, 0.8, PARAMS, steps=50000, seed=11)
    a = run_chain(spec)
    b = run_chain(spec)
    assert a == b


def test_chain_state_frequencies_match_gibbs():
    """Total-variation distance between visit frequencies and the exact
    Gibbs law on the 8-state window."""
    beta = 0.8
    spec = ChainSpec(1, beta, PARAMS, steps=600000, seed=7,
                     collect_states=True)
    result = run_chain(spec)
    probs = gibbs_probabilities(1, beta, PARAMS, 1)
    total = sum(result.state_counts.values())
    tv = 0.5 * sum(abs(result.state_counts.get(mask, 0) / total - p)
                   for mask, p in enumerate(probs))
    assert tv < 0.02, tv


def test_chain_needs_at_least_one_sample():
    with pytest.raises(ValueError):
        run_chain(ChainSpec(1, 1.0, PARAMS, steps=5, burn_in=5))


def test_chain_result_payload():
    payload = ChainResult(0.5, 0.01, 0.4, 0.3, 100).as_payload()
    assert set(payload) == {"mean_sigma0", "stderr_sigma0",
                            "mean_magnetization", "acceptance_rate",
                            "samples"}
