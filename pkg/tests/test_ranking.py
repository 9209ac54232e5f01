import random

import numpy as np
import pytest

from oracles import pagerank_oracle, star_matrix
from summarank.embedding import LocalProvider
from summarank.errors import ConfigError
from summarank.ranking import (
    PageRankConfig,
    SummarySimilarityMatrix,
    build_ssm,
    pagerank,
    rank_candidates,
    select_best,
)


def _ssm_from_weights(weights):
    return SummarySimilarityMatrix(np.array(star_matrix(weights)))


class TestPageRankConfig:
    def test_defaults(self):
        cfg = PageRankConfig()
        assert cfg.damping == 0.85 and cfg.tolerance == 1e-8 and cfg.max_iterations == 200

    @pytest.mark.parametrize("damping", [0.0, 1.0, -0.1, 1.5])
    def test_invalid_damping(self, damping):
        with pytest.raises(ConfigError):
            PageRankConfig(damping=damping)


class TestSummarySimilarityMatrix:
    def test_star_accepted(self):
        ssm = _ssm_from_weights([0.9, 0.5, 0.3, 0.1])
        assert ssm.n_candidates == 4
        np.testing.assert_allclose(ssm.weights, [0.9, 0.5, 0.3, 0.1])

    def test_rejects_candidate_edges(self):
        entries = np.array(star_matrix([0.5, 0.5]))
        entries[1, 2] = entries[2, 1] = 0.3
        with pytest.raises(ValueError):
            SummarySimilarityMatrix(entries)

    def test_rejects_asymmetry(self):
        entries = np.array(star_matrix([0.5, 0.5]))
        entries[0, 1] = 0.9
        with pytest.raises(ValueError):
            SummarySimilarityMatrix(entries)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            _ssm_from_weights([1.5])


class TestBuildSsm:
    def test_definition(self):
        ref = np.array([1.0, 0.0])
        cands = [
            np.array([1.0, 0.0]),
            np.array([1.0, 1.0]) / np.sqrt(2),
            np.array([0.0, 1.0]),
        ]
        ssm = build_ssm(ref, cands)
        np.testing.assert_allclose(
            ssm.weights, [1.0, 1.0 / np.sqrt(2), 0.0], atol=1e-12
        )
        assert np.all(ssm.entries[1:, 1:] == 0.0)

    def test_negative_cosine_clamped(self):
        ssm = build_ssm(np.array([1.0, 0.0]), [np.array([-1.0, 0.2])])
        assert ssm.weights[0] == 0.0

    def test_single_candidate_perfect_match(self):
        ssm = build_ssm(np.array([2.0, 0.0]), [np.array([1.0, 0.0])])
        np.testing.assert_allclose(ssm.entries, [[0.0, 1.0], [1.0, 0.0]])

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            build_ssm(np.zeros(2), [np.zeros(3)])


class TestPageRank:
    def test_equal_weights_give_equal_scores(self):
        scores, _, converged = pagerank(_ssm_from_weights([0.4] * 4))
        assert converged
        assert np.ptp(scores[1:]) < 1e-9

    def test_ordering_matches_weights(self):
        scores, _, _ = pagerank(_ssm_from_weights([0.9, 0.5, 0.3, 0.1]))
        assert scores[1] > scores[2] > scores[3] > scores[4]

    def test_matches_oracle(self):
        weights = [0.9, 0.5, 0.3, 0.1]
        scores, _, _ = pagerank(_ssm_from_weights(weights))
        expected = pagerank_oracle(star_matrix(weights))
        np.testing.assert_allclose(scores, expected, atol=1e-7)

    def test_all_zero_star_is_uniform(self):
        scores, iterations, converged = pagerank(_ssm_from_weights([0.0] * 4))
        np.testing.assert_allclose(scores, [0.2] * 5, atol=1e-12)
        assert converged and iterations == 1

    def test_scores_sum_to_one(self):
        rng = random.Random(3)
        for _ in range(25):
            n = rng.randint(1, 8)
            weights = [rng.random() for _ in range(n)]
            scores, _, _ = pagerank(_ssm_from_weights(weights))
            assert abs(scores.sum() - 1.0) < 1e-9

    def test_scale_invariance_of_ordering(self):
        """Scaling all weights by a positive factor keeps scores identical
        (the transition matrix is row-normalized)."""
        weights = [0.8, 0.2, 0.5]
        scores_a, _, _ = pagerank(_ssm_from_weights(weights))
        scores_b, _, _ = pagerank(_ssm_from_weights([w * 0.5 for w in weights]))
        np.testing.assert_allclose(scores_a, scores_b, atol=1e-12)

    def test_non_convergence_flag(self):
        cfg = PageRankConfig(max_iterations=2)
        _, iterations, converged = pagerank(_ssm_from_weights([0.9, 0.1]), cfg)
        assert not converged and iterations == 2

    def test_convergence_iterations_on_five_node_star(self):
        """The bipartite star contracts by the damping factor per sweep, so
        the L1-tolerance stop needs ~115 sweeps at 1e-8; max_iterations=200
        leaves ample slack."""
        rng = random.Random(11)
        for _ in range(20):
            weights = [rng.uniform(0.05, 1.0) for _ in range(4)]
            _, iterations, converged = pagerank(_ssm_from_weights(weights))
            assert converged and iterations <= 120


class TestSelectBest:
    def test_unique_max(self):
        result = select_best([0.4, 0.2, 0.2, 0.1, 0.1], ["a", "b", "c", "d"])
        assert result.best_index == 1 and result.best_model_id == "a"
        assert result.ordering == (1, 2, 3, 4)

    def test_all_tied_breaks_to_lowest_index(self):
        result = select_best([0.2, 0.2, 0.2, 0.2, 0.2], ["a", "b", "c", "d"])
        assert result.best_index == 1

    def test_argmax(self):
        result = select_best([0.1, 0.05, 0.5, 0.2, 0.15], ["a", "b", "c", "d"])
        assert result.best_index == 2 and result.best_model_id == "b"

    def test_no_candidates_rejected(self):
        with pytest.raises(ValueError):
            select_best([1.0], [])


class TestRankCandidates:
    def test_exact_copy_wins(self, local_provider):
        ref = "ঢাকাই মসলিন ছিল পৃথিবীর সবচেয়ে দামি কাপড়"
        result = rank_candidates(
            ref,
            [ref, "আজ শহরে বৃষ্টি", "নদীর পানি বেড়েছে", "বই মেলা চলছে"],
            local_provider,
        )
        assert result.best_index == 1
        assert result.similarities[0] == pytest.approx(1.0)

    def test_single_candidate(self, local_provider):
        result = rank_candidates("ক খ গ", ["ঘ ঙ চ"], local_provider)
        assert result.best_index == 1

    def test_permutation_consistency(self, local_provider):
        ref = "নদীর পানি বেড়ে গ্রাম তলিয়ে গেছে"
        cands = ["নদীর পানি বেড়ে গেছে", "শহরে বই মেলা", "ধানের ফলন ভালো"]
        forward = rank_candidates(ref, cands, local_provider, model_ids=["a", "b", "c"])
        reversed_ = rank_candidates(
            ref, cands[::-1], local_provider, model_ids=["c", "b", "a"]
        )
        assert forward.best_model_id == reversed_.best_model_id
        assert sorted(forward.scores) == pytest.approx(sorted(reversed_.scores))

    def test_empty_candidate_gets_zero_similarity(self, local_provider):
        result = rank_candidates(
            "ক খ গ", ["ক খ গ", "!!!"], local_provider, model_ids=["a", "b"]
        )
        assert result.similarities[1] == 0.0
        assert result.best_index == 1

    def test_empty_reference_rejected(self, local_provider):
        with pytest.raises(ValueError):
            rank_candidates("।।।", ["ক খ"], local_provider)


class TestStarGraphEquivalence:
    def test_random_stars_match_weight_ordering_and_oracle(self):
        """PageRank ordering on a star equals descending-weight ordering and
        the scores match the independent dense oracle."""
        rng = random.Random(1234)
        for _ in range(100):
            n = rng.randint(1, 8)
            weights = [rng.random() for _ in range(n)]
            scores, _, _ = pagerank(_ssm_from_weights(weights))
            expected = pagerank_oracle(star_matrix(weights))
            np.testing.assert_allclose(scores, expected, atol=1e-7)
            by_score = sorted(range(1, n + 1), key=lambda i: (-scores[i], i))
            by_weight = sorted(range(1, n + 1), key=lambda i: (-weights[i - 1], i))
            assert by_score == by_weight
