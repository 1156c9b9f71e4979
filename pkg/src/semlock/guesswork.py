"""Partial guessing entropy (alpha-guesswork) over ranked distributions.

For a distribution with probabilities p1 >= p2 >= ... the metrics are:

  lambda_beta = p1 + ... + p_beta        success rate of beta guesses
  mu_alpha    = min { j : lambda_j >= alpha }
  G_alpha     = (1 - lambda) * mu + sum_{i<=mu} p_i * i,  lambda = lambda_mu
  G~_alpha    = log2(2 * G_alpha / lambda - 1) - log2(2 - lambda)

The bit conversion is normalized so a uniform N-item distribution scores
log2 N at every alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AlphaUnreachable

#: Relative slack when testing lambda_j >= alpha, so exact-boundary cases
#: (e.g. alpha = 0.2 on a uniform space) are not thrown off by float
#: rounding in the cumulative sums.
MU_REL_EPS = 1e-12

_TOTAL_SLACK = 1e-9


@dataclass(frozen=True)
class RankedDistribution:
    """Descending-probability password distribution with cached cumsums.

    Ties in probability are ordered by item id ascending, which makes
    every metric bit-for-bit reproducible.
    """

    items: tuple[str, ...]
    probs: np.ndarray
    cum: np.ndarray

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, float]]) -> "RankedDistribution":
        entries = sorted(pairs, key=lambda e: (-e[1], e[0]))
        items = tuple(e[0] for e in entries)
        probs = np.array([e[1] for e in entries], dtype=np.float64)
        if len(probs) == 0:
            raise ValueError("distribution needs at least one entry")
        if np.any(probs < 0):
            raise ValueError("probabilities must be nonnegative")
        total = float(probs.sum())
        if total > 1.0 + _TOTAL_SLACK:
            raise ValueError(f"probabilities sum to {total}, more than 1")
        return cls(items=items, probs=probs, cum=np.cumsum(probs))

    @classmethod
    def from_probs(cls, probs: Sequence[float]) -> "RankedDistribution":
        width = len(str(max(len(probs) - 1, 0)))
        return cls.from_pairs((f"{i:0{width}d}", float(p)) for i, p in enumerate(probs))

    @classmethod
    def uniform(cls, n: int) -> "RankedDistribution":
        if n < 1:
            raise ValueError("need at least one item")
        return cls.from_probs([1.0 / n] * n)

    def __len__(self) -> int:
        return len(self.items)

    @property
    def total(self) -> float:
        return float(self.cum[-1])


@dataclass(frozen=True)
class GuessworkReport:
    alpha: float
    mu: int
    lam: float
    g: float
    g_tilde_bits: float

    def to_json_dict(self) -> dict:
        return {"alpha": self.alpha, "mu": self.mu, "lambda": self.lam,
                "G": self.g, "G_tilde_bits": self.g_tilde_bits}


def lambda_beta(dist: RankedDistribution, beta: int) -> float:
    """Probability mass covered by the beta most probable items."""
    if beta < 1:
        raise ValueError("beta must be >= 1")
    return float(dist.cum[min(beta, len(dist)) - 1])


def mu_alpha(dist: RankedDistribution, alpha: float) -> int:
    """Minimum guesses whose cumulative mass reaches alpha."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must be in (0, 1]")
    threshold = alpha * (1.0 - MU_REL_EPS)
    if dist.total < threshold:
        raise AlphaUnreachable(
            f"distribution covers {dist.total:.6g} < alpha {alpha:.6g}"
        )
    return int(np.searchsorted(dist.cum, threshold, side="left")) + 1


def g_alpha(dist: RankedDistribution, alpha: float) -> float:
    """Expected guesses per account for an attacker who stops at alpha."""
    mu = mu_alpha(dist, alpha)
    lam = float(dist.cum[mu - 1])
    ranks = np.arange(1, mu + 1, dtype=np.float64)
    return (1.0 - lam) * mu + float(np.dot(dist.probs[:mu], ranks))


def g_tilde_alpha(dist: RankedDistribution, alpha: float) -> float:
    """G_alpha expressed as effective key length in bits."""
    mu = mu_alpha(dist, alpha)
    lam = float(dist.cum[mu - 1])
    g = (1.0 - lam) * mu + float(np.dot(dist.probs[:mu], np.arange(1, mu + 1, dtype=np.float64)))
    return math.log2(2.0 * g / lam - 1.0) - math.log2(2.0 - lam)


def guesswork_report(dist: RankedDistribution, alpha: float) -> GuessworkReport:
    mu = mu_alpha(dist, alpha)
    lam = float(dist.cum[mu - 1])
    ranks = np.arange(1, mu + 1, dtype=np.float64)
    g = (1.0 - lam) * mu + float(np.dot(dist.probs[:mu], ranks))
    g_tilde = math.log2(2.0 * g / lam - 1.0) - math.log2(2.0 - lam)
    return GuessworkReport(alpha=alpha, mu=mu, lam=lam, g=g, g_tilde_bits=g_tilde)


def guessing_curve(dist: RankedDistribution, max_attempts: int) -> list[tuple[int, float]]:
    """(attempts, cumulative success percent) for 1..max_attempts."""
    if not 1 <= max_attempts <= len(dist):
        raise ValueError(f"max_attempts must be in 1..{len(dist)}")
    return [(i, 100.0 * float(dist.cum[i - 1])) for i in range(1, max_attempts + 1)]


def curve_to_csv(curve: Sequence[tuple[int, float]]) -> str:
    lines = ["attempts,success_pct"]
    lines.extend(f"{attempts},{pct!r}" for attempts, pct in curve)
    return "\n".join(lines) + "\n"


def reports_to_csv(reports: Sequence[GuessworkReport]) -> str:
    lines = ["alpha,mu,lambda,G,G_tilde_bits"]
    lines.extend(
        f"{r.alpha!r},{r.mu},{r.lam!r},{r.g!r},{r.g_tilde_bits!r}" for r in reports
    )
    return "\n".join(lines) + "\n"
