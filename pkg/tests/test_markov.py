import itertools

import numpy as np
import pytest

from semlock import corpus, model
from semlock.errors import EmptyCorpus, UnknownToken
from semlock.markov import (
    MarkovModel,
    rank_space,
    sequence_probability,
    sequences_from_records,
    train_markov,
)


class TestTrain:
    def test_hand_counts_unsmoothed(self):
        m = train_markov([["a", "b"], ["a", "a"]], ["a", "b"], delta=0.0)
        assert m.start[0] == 1.0 and m.start[1] == 0.0
        assert m.transitions[0].tolist() == [0.5, 0.5]
        # 'b' never occurred as a context: uniform fallback
        assert m.transitions[1].tolist() == [0.5, 0.5]
        assert m.length_prior == {2: 1.0}

    def test_smoothing_floor(self):
        m = train_markov([["a", "a"]], ["a", "b", "c"], delta=1.0)
        assert np.all(m.start > 0)
        assert np.all(m.transitions > 0)

    def test_degenerate_single_token_sequence(self):
        m = train_markov([["a"]], ["a", "b"], delta=0.0)
        assert m.start.tolist() == [1.0, 0.0]
        assert m.transitions[0].tolist() == [0.5, 0.5]
        assert m.length_prior == {1: 1.0}

    def test_row_stochastic(self):
        records = corpus.synthesize_corpus(5, corpus.biased_profile(500))
        alphabet = [mv.token for mv in model.move_alphabet(model.default_grid().icons)]
        for delta in (0.0, 0.01, 1.0):
            m = train_markov(sequences_from_records(records), alphabet, delta=delta)
            assert np.max(np.abs(m.transitions.sum(axis=1) - 1.0)) <= 1e-12
            assert abs(float(m.start.sum()) - 1.0) <= 1e-12
            assert abs(sum(m.length_prior.values()) - 1.0) <= 1e-12
            assert np.all(m.start >= 0) and np.all(m.transitions >= 0)

    def test_errors(self):
        with pytest.raises(EmptyCorpus):
            train_markov([], ["a"])
        with pytest.raises(EmptyCorpus):
            train_markov([[]], ["a"])
        with pytest.raises(UnknownToken):
            train_markov([["z"]], ["a", "b"])


class TestSequenceProbability:
    def test_hand_case(self):
        m = train_markov([["a", "b"], ["a", "a"]], ["a", "b"], delta=0.0)
        assert sequence_probability(m, ["a", "b"]) == pytest.approx(0.5)

    def test_uniform_symmetry(self):
        a = 4
        tokens = ["t0", "t1", "t2", "t3"]
        m = MarkovModel(
            alphabet=tuple(tokens),
            start=np.full(a, 1 / a),
            transitions=np.full((a, a), 1 / a),
            delta=0.0,
            length_prior={3: 1.0},
        )
        for seq in (["t0", "t1", "t2"], ["t3", "t3", "t3"]):
            assert sequence_probability(m, seq) == pytest.approx(1.0 / a ** 3)

    def test_exhaustive_sum_equals_prior(self):
        # over all A^k sequences of length k, probabilities sum to prior(k)
        tokens = [f"t{i}" for i in range(8)]
        rng = np.random.default_rng(3)
        corpus_seqs = [[tokens[i] for i in rng.integers(0, 8, size=rng.integers(1, 4))]
                       for _ in range(200)]
        m = train_markov(corpus_seqs, tokens, delta=0.01)
        for k in (1, 2):
            total = sum(sequence_probability(m, list(seq))
                        for seq in itertools.product(tokens, repeat=k))
            assert total == pytest.approx(m.length_prior.get(k, 0.0), abs=1e-9)

    def test_unseen_length_is_zero(self):
        m = train_markov([["a", "b"]], ["a", "b"], delta=0.0)
        assert sequence_probability(m, ["a", "b", "a"]) == 0.0

    def test_unknown_token(self):
        m = train_markov([["a", "b"]], ["a", "b"], delta=0.0)
        with pytest.raises(UnknownToken):
            sequence_probability(m, ["a", "z"])


class TestRankSpace:
    def test_uniform_model_equal_entries(self, grid):
        alphabet = [mv.token for mv in model.move_alphabet(grid.icons)]
        a = len(alphabet)
        m = MarkovModel(
            alphabet=tuple(alphabet),
            start=np.full(a, 1 / a),
            transitions=np.full((a, a), 1 / a),
            delta=0.0,
            length_prior={2: 1.0},
        )
        space = model.enumerate_space_for(list(grid.icons), 2)
        dist = rank_space(m, space)
        assert len(dist) == 14400
        assert np.allclose(dist.probs, 1 / 14400)
        assert dist.total == pytest.approx(1.0, abs=1e-6)

    def test_total_is_prior_mass(self, grid):
        records = corpus.synthesize_corpus(8, corpus.biased_profile(300))
        alphabet = [mv.token for mv in model.move_alphabet(grid.icons)]
        m = train_markov(sequences_from_records(records), alphabet, delta=0.01)
        space = model.enumerate_space_for(list(grid.icons), 2)
        dist = rank_space(m, space)
        assert dist.total == pytest.approx(m.length_prior[2], abs=1e-6)

    def test_dominant_password_ranks_first(self, grid, reference_password):
        favorite = [reference_password.tokens] * 90
        rng_records = corpus.synthesize_corpus(12, corpus.uniform_profile(10))
        seqs = favorite + sequences_from_records(rng_records)
        alphabet = [mv.token for mv in model.move_alphabet(grid.icons)]
        m = train_markov(seqs, alphabet, delta=0.01)
        dist = rank_space(m, model.enumerate_space_for(list(grid.icons), 2))
        assert dist.items[0] == reference_password.canonical

    def test_attempts_to_twenty_percent_matches_rank_scan(self, grid):
        """Seeded corpus: mu at alpha=0.2 equals a linear scan of the
        ranked list, and is identical across runs."""
        from semlock.guesswork import mu_alpha

        alphabet = [mv.token for mv in model.move_alphabet(grid.icons)]
        space = model.enumerate_space_for(list(grid.icons), 2)

        def attempts_to_20pct():
            records = corpus.synthesize_corpus(42, corpus.biased_profile(2000))
            m = train_markov(sequences_from_records(records), alphabet, delta=0.01)
            return rank_space(m, space)

        dist = attempts_to_20pct()
        got = mu_alpha(dist, 0.2)
        running = 0.0
        scan = None
        for i, p in enumerate(dist.probs, start=1):
            running += float(p)
            if running >= 0.2:
                scan = i
                break
        assert got == scan
        assert mu_alpha(attempts_to_20pct(), 0.2) == got

    def test_duplicate_space_rejected(self, grid):
        m = train_markov([["cup>person:R"]],
                         [mv.token for mv in model.move_alphabet(grid.icons)], delta=0.0)
        space = model.enumerate_space_for(list(grid.icons), 1)
        with pytest.raises(ValueError):
            rank_space(m, space + space[:1])


class TestSerialization:
    def test_json_roundtrip(self, tmp_path, grid):
        records = corpus.synthesize_corpus(4, corpus.uniform_profile(100))
        alphabet = [mv.token for mv in model.move_alphabet(grid.icons)]
        m = train_markov(sequences_from_records(records), alphabet, delta=0.01)
        path = tmp_path / "model.json"
        m.save(path)
        loaded = MarkovModel.load(path)
        assert loaded.alphabet == m.alphabet
        assert np.array_equal(loaded.start, m.start)
        assert np.array_equal(loaded.transitions, m.transitions)
        assert loaded.length_prior == m.length_prior
