import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperturan.errors import InputError
from hyperturan.hypercore import complete
from hyperturan.randmodel import (
    SampleSpec,
    bernoulli_filter,
    colex_rank,
    coupled_sample,
    edge_uniforms,
    empirical_concentration,
    sample_gnp,
)


def test_extreme_probabilities():
    assert sample_gnp(SampleSpec(8, 3, 0.0, 5)).num_edges == 0
    assert sample_gnp(SampleSpec(8, 3, 1.0, 5)) == complete(8, 3)


def test_same_seed_same_graph_and_different_seed_differs():
    a = sample_gnp(SampleSpec(12, 3, 0.3, 1))
    b = sample_gnp(SampleSpec(12, 3, 0.3, 1))
    c = sample_gnp(SampleSpec(12, 3, 0.3, 2))
    assert a == b
    assert a != c


def test_mean_edge_count_over_seeds():
    counts = [sample_gnp(SampleSpec(20, 3, 0.1, s)).num_edges for s in range(200)]
    assert abs(np.mean(counts) - 114) <= 0.05 * 114


def test_concentration_report():
    rep = empirical_concentration(SampleSpec(15, 3, 0.2, 0), 500)
    sigma = math.sqrt(455 * 0.2 * 0.8 / 500)
    assert abs(rep.mean - 91) <= 3 * sigma
    assert rep.expected == pytest.approx(91)
    for p in (0.0, 1.0):
        assert empirical_concentration(SampleSpec(6, 3, p, 0), 5).variance == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 10), st.sampled_from([2, 3]), st.floats(0, 1), st.floats(0, 1), st.integers(0, 2 ** 64 - 1))
def test_coupling_is_monotone(n, r, p, q, seed):
    lo, hi = sorted((p, q))
    G_lo, G_hi = coupled_sample(SampleSpec(n, r, lo, seed), hi)
    assert set(G_lo.edges) <= set(G_hi.edges)


def test_coupling_edge_cases():
    G_lo, G_hi = coupled_sample(SampleSpec(9, 3, 0.4, 3), 0.4)
    assert G_lo == G_hi
    G_lo, _ = coupled_sample(SampleSpec(9, 3, 0.0, 3), 0.7)
    assert G_lo.num_edges == 0
    with pytest.raises(InputError):
        coupled_sample(SampleSpec(9, 3, 0.5, 3), 0.4)


def test_filter_agrees_with_sampler():
    G = sample_gnp(SampleSpec(10, 3, 0.35, 9))
    assert bernoulli_filter(complete(10, 3).edges, 10, 0.35, 9) == list(G.edges)


def test_colex_rank_is_a_bijection():
    ranks = sorted(colex_rank(e) for e in complete(9, 3).edges)
    assert ranks == list(range(math.comb(9, 3)))


def test_uniforms_in_unit_interval():
    u = edge_uniforms(123, np.arange(10000))
    assert u.min() >= 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 0.02


@pytest.mark.parametrize("kw", [dict(n=5, r=3, p=1.5), dict(n=2, r=3, p=0.5), dict(n=5, r=3, p=0.5, seed=-1)])
def test_invalid_specs(kw):
    with pytest.raises(InputError):
        SampleSpec(**kw)
