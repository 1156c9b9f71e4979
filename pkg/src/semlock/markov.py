"""First-order Markov models of password choice.

A password is a token sequence (one token per move).  The model holds a
start distribution, a row-stochastic transition matrix with additive
smoothing, and an empirical length prior, so probabilities over the
mixed-length space sum to exactly the prior mass of each length.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyCorpus, SpaceTooLarge, UnknownToken
from .guesswork import RankedDistribution
from .model import DEFAULT_SPACE_CAP, SemanticPassword

DEFAULT_SMOOTHING = 0.01


@dataclass
class MarkovModel:
    alphabet: tuple[str, ...]
    start: np.ndarray
    transitions: np.ndarray
    delta: float
    length_prior: dict[int, float]
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self._index = {tok: i for i, tok in enumerate(self.alphabet)}

    def token_index(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise UnknownToken(f"token {token!r} not in model alphabet") from None

    def to_json_dict(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "start": self.start.tolist(),
            "transitions": self.transitions.tolist(),
            "delta": self.delta,
            "length_prior": {str(k): v for k, v in sorted(self.length_prior.items())},
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "MarkovModel":
        return cls(
            alphabet=tuple(obj["alphabet"]),
            start=np.array(obj["start"], dtype=np.float64),
            transitions=np.array(obj["transitions"], dtype=np.float64),
            delta=float(obj["delta"]),
            length_prior={int(k): float(v) for k, v in obj["length_prior"].items()},
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True)

    @classmethod
    def load(cls, path) -> "MarkovModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def train_markov(corpus: Sequence[Sequence[str]], alphabet: Sequence[str],
                 delta: float = DEFAULT_SMOOTHING) -> MarkovModel:
    """Count-based training with additive smoothing delta.

    start(t)   = (count_first(t) + delta) / (N + delta * A)
    trans(u,v) = (count(u,v) + delta) / (count(u,*) + delta * A)

    With delta = 0, transition rows for contexts never seen fall back to
    uniform so rows always sum to one.
    """
    if delta < 0:
        raise ValueError("smoothing delta must be >= 0")
    sequences = [list(seq) for seq in corpus]
    if not sequences:
        raise EmptyCorpus("cannot train on an empty corpus")
    alphabet = tuple(alphabet)
    index = {tok: i for i, tok in enumerate(alphabet)}
    a = len(alphabet)
    start_counts = np.zeros(a, dtype=np.float64)
    trans_counts = np.zeros((a, a), dtype=np.float64)
    lengths = Counter()
    for seq in sequences:
        if not seq:
            raise EmptyCorpus("corpus contains an empty sequence")
        try:
            idx = [index[tok] for tok in seq]
        except KeyError as exc:
            raise UnknownToken(f"token {exc.args[0]!r} not in alphabet") from None
        start_counts[idx[0]] += 1
        for u, v in zip(idx, idx[1:]):
            trans_counts[u][v] += 1
        lengths[len(seq)] += 1

    n = len(sequences)
    start = (start_counts + delta) / (n + delta * a)

    transitions = np.empty((a, a), dtype=np.float64)
    row_sums = trans_counts.sum(axis=1)
    for u in range(a):
        if row_sums[u] == 0 and delta == 0:
            transitions[u] = 1.0 / a
        else:
            transitions[u] = (trans_counts[u] + delta) / (row_sums[u] + delta * a)

    length_prior = {k: c / n for k, c in sorted(lengths.items())}
    return MarkovModel(alphabet=alphabet, start=start, transitions=transitions,
                       delta=delta, length_prior=length_prior)


def sequence_probability(model: MarkovModel, tokens: Sequence[str]) -> float:
    """length_prior(k) * start(t1) * product of transition factors."""
    if len(tokens) < 1:
        raise ValueError("token sequence must be nonempty")
    prob = model.length_prior.get(len(tokens), 0.0)
    if prob == 0.0:
        # Still validate the tokens so typos surface.
        for tok in tokens:
            model.token_index(tok)
        return 0.0
    prev = model.token_index(tokens[0])
    prob *= float(model.start[prev])
    for tok in tokens[1:]:
        cur = model.token_index(tok)
        prob *= float(model.transitions[prev][cur])
        prev = cur
    return prob


def password_tokens(password: SemanticPassword) -> list[str]:
    return password.tokens


def rank_space(model: MarkovModel, space: Sequence[SemanticPassword],
               cap: int = DEFAULT_SPACE_CAP) -> RankedDistribution:
    """Score every password in an enumerated space and rank descending."""
    if len(space) > cap:
        raise SpaceTooLarge(f"space of {len(space)} exceeds cap {cap}")
    pairs = []
    seen = set()
    for password in space:
        canonical = password.canonical
        if canonical in seen:
            raise ValueError(f"space contains duplicate password {canonical!r}")
        seen.add(canonical)
        pairs.append((canonical, sequence_probability(model, password.tokens)))
    return RankedDistribution.from_pairs(pairs)


def sequences_from_records(records: Iterable) -> list[list[str]]:
    """Token sequences from password records (one token per move)."""
    return [rec.password.tokens for rec in records]


def pattern_sequences(records: Iterable) -> list[list[str]]:
    """Token sequences from 3x3 pattern records (one token per node)."""
    return [[str(n) for n in rec.nodes] for rec in records]
