import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graph_cubature import Graph, PartitionError, cluster_spectral, validate_partition
from graph_cubature.generators import CommunitySpec, gen_community, gen_path


def kinds(exc):
    return {v.kind for v in exc.value.violations}


class TestValidate:
    def test_p4_pairs(self):
        p = validate_partition(gen_path(4), [[2, 3], [1, 0]])
        assert p.clusters == ((0, 1), (2, 3))
        np.testing.assert_array_equal(p.sizes, [2, 2])
        np.testing.assert_array_equal(p.labels(4), [0, 0, 1, 1])

    def test_disconnected(self):
        with pytest.raises(PartitionError) as exc:
            validate_partition(gen_path(4), [[0, 2], [1, 3]])
        assert kinds(exc) == {"disconnected"}
        assert len(exc.value.violations) == 2

    def test_overlap(self):
        with pytest.raises(PartitionError) as exc:
            validate_partition(gen_path(4), [[0, 1], [1, 2, 3]])
        assert "overlap" in kinds(exc)
        assert exc.value.violations[0].vertex == 1

    def test_gap_and_singleton(self):
        with pytest.raises(PartitionError) as exc:
            validate_partition(gen_path(4), [[0, 1], [2]])
        assert kinds(exc) == {"gap", "singleton"}

    def test_out_of_range(self):
        with pytest.raises(PartitionError) as exc:
            validate_partition(gen_path(3), [[0, 1, 2, 7]])
        assert "out_of_range" in kinds(exc)

    def test_non_integer(self):
        with pytest.raises(PartitionError) as exc:
            validate_partition(gen_path(3), [[0, 1, "2"]])
        assert "out_of_range" in kinds(exc)

    def test_empty(self):
        with pytest.raises(PartitionError) as exc:
            validate_partition(gen_path(2), [])
        assert "empty" in kinds(exc)

    def test_json_round_trip(self):
        g = gen_path(6)
        p = validate_partition(g, [[0, 1, 2], [3, 4, 5]])
        assert validate_partition(g, p.to_json()["clusters"]) == p


class TestClusterSpectral:
    @pytest.mark.parametrize("w", [0.3, 1.0, 7.5])
    def test_pair(self, w):
        g = Graph(4, ((0, 1, w), (1, 2, 1.0), (2, 3, 1.0)))
        cs = cluster_spectral(g, validate_partition(g, [[0, 1], [2, 3]]))
        assert cs[0].lambda1 == pytest.approx(2 * w, rel=1e-13)

    def test_triangle(self, barbell):
        g, p = barbell
        for c in cluster_spectral(g, p):
            assert c.lambda1 == pytest.approx(3.0, rel=1e-13)

    def test_path_cluster(self):
        g = gen_path(6)
        cs = cluster_spectral(g, validate_partition(g, [[0, 1, 2], [3, 4, 5]]))
        assert [c.lambda1 for c in cs] == pytest.approx([1.0, 1.0], rel=1e-12)

    def test_phi0(self, barbell):
        g, p = barbell
        cs = cluster_spectral(g, p)
        np.testing.assert_allclose(cs[1].phi0, [0, 0, 0] + [3**-0.5] * 3)

    def test_threaded_matches_serial(self, monkeypatch):
        g, p = gen_community(CommunitySpec(6, 5, 0.7, 1.0, 0.01, 2, seed=3))
        monkeypatch.setenv("GRAPH_CUBATURE_THREADS", "1")
        serial = [c.lambda1 for c in cluster_spectral(g, p)]
        monkeypatch.setenv("GRAPH_CUBATURE_THREADS", "4")
        threaded = [c.lambda1 for c in cluster_spectral(g, p)]
        assert serial == threaded

    @settings(max_examples=25, deadline=None)
    @given(st.integers(2, 5), st.integers(2, 6), st.integers(0, 10**6))
    def test_ignores_inter_cluster_edges(self, N, m, seed):
        spec = CommunitySpec(N, m, 0.8, 1.0, 0.05, 1, seed=seed)
        g, p = gen_community(spec)
        inner = Graph(g.n, tuple(e for e in g.edges if p.labels(g.n)[e[0]] == p.labels(g.n)[e[1]]))
        a = [c.lambda1 for c in cluster_spectral(g, p)]
        b = [c.lambda1 for c in cluster_spectral(inner, p)]
        assert a == b
