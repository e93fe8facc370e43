import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graph_cubature import GraphError, graph_spectrum, validate_partition
from graph_cubature.generators import (
    CommunitySpec,
    count_low_eigenvalues,
    coupling_threshold,
    gen_community,
    gen_complete,
    gen_cycle,
    gen_grid,
    gen_path,
    gen_random_connected,
)

# Recorded from a LAPACK eigvalsh run: at w_inter = 1e-3 the N-th eigenvalue is
# at most 8e-4 and the (N+1)-th at least 0.83 for N in {2, 3, 4}.
RHO = 0.05


def test_deterministic_digests():
    g, _ = gen_community(CommunitySpec(3, 4, 0.7, 1.0, 0.01, 1, seed=42))
    assert g.digest() == "9fa2e703453e21c248d16abbfca7330ab34da627de72b9a64ed1b2fbd0f2ee56"
    assert gen_random_connected(6, 0.5, seed=1).digest() == (
        "b75eff0cc2c6a1241459978123ad8892bc827c9c2780a551e93320cae19c777f"
    )


def test_barbell_construction(barbell):
    g, p = barbell
    assert p.clusters == ((0, 1, 2), (3, 4, 5))
    intra = [e for e in g.edges if e[2] == 1.0]
    bridge = [e for e in g.edges if e[2] != 1.0]
    assert len(intra) == 6 and len(bridge) == 1
    assert bridge[0][2] == 0.01 and bridge[0][0] < 3 <= bridge[0][1]


def test_simple_families():
    assert len(gen_path(5).edges) == 4
    assert len(gen_cycle(5).edges) == 5
    assert len(gen_complete(5).edges) == 10
    assert len(gen_grid(3, 4).edges) == 3 * 3 + 2 * 4
    with pytest.raises(GraphError):
        gen_cycle(2)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_low_eigenvalues_weak_coupling(N):
    g, _ = gen_community(CommunitySpec(N, 5, 0.7, 1.0, 1e-3, 1, seed=N))
    assert count_low_eigenvalues(graph_spectrum(g), RHO) >= N


@pytest.mark.parametrize("N", [2, 3, 4])
def test_uncoupled_zero_multiplicity(N):
    g, _ = gen_community(CommunitySpec(N, 5, 0.7, 1.0, 0.0, 1, seed=N))
    assert graph_spectrum(g).zero_multiplicity == N


def test_coupling_threshold_monotone_probe():
    spec = CommunitySpec(3, 5, 0.8, 1.0, 0.0, 1, seed=2)
    thr, samples = coupling_threshold(spec, RHO)
    assert 0 < thr < 1
    g, _ = gen_community(CommunitySpec(3, 5, 0.8, 1.0, thr, 1, seed=2))
    assert count_low_eigenvalues(graph_spectrum(g), RHO) >= 3
    assert all(c >= 3 for w, c in samples if w <= thr)


@pytest.mark.parametrize(
    "kwargs",
    [dict(communities=0, size=3), dict(communities=2, size=1), dict(communities=2, size=3, p_intra=1.5),
     dict(communities=2, size=3, w_inter=-1), dict(communities=2, size=2, bridges=5)],
)
def test_spec_validation(kwargs):
    with pytest.raises(GraphError):
        CommunitySpec(**kwargs)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(2, 8), st.floats(0, 1), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_partition_always_valid(N, m, p_intra, bridges, seed):
    bridges = min(bridges, m * m)
    g, p = gen_community(CommunitySpec(N, m, p_intra, 1.0, 0.01, bridges, seed=seed))
    assert validate_partition(g, p.clusters) == p
    assert g.is_connected()
    labels = p.labels(g.n)
    cross = [e for e in g.edges if labels[e[0]] != labels[e[1]]]
    ring_pairs = N if N > 2 else (1 if N == 2 else 0)
    assert len(cross) == bridges * ring_pairs
