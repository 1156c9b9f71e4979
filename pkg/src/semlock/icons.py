"""Icon-pair analytics: co-occurrence counting, least-related subset
selection, and chi-square uniformity testing.

"Least related" means the size-k subset minimizing the sum of pairwise
co-occurrence counts inside the subset (optionally the maximum pair count
instead).  Exact search is branch-and-bound over icons in sorted-id
order, which also yields the documented lexicographic tie-break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .corpus import PairObservation
from .errors import DegenerateInput, KTooLarge, SubsetTooLarge, UnknownIcon

#: Exact search refuses to run when C(m, k) exceeds this.
SUBSET_ENUMERATION_CAP = 10_000_000

_GAMMA_MAX_ITER = 10_000
_GAMMA_EPS = 1e-15


@dataclass(frozen=True)
class CooccurrenceMatrix:
    """Symmetric pairing counts with a zero diagonal."""

    icons: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = len(self.icons)
        if len(self.counts) != m or any(len(row) != m for row in self.counts):
            raise ValueError("counts must be a square matrix over the icon list")
        for i in range(m):
            if self.counts[i][i] != 0:
                raise ValueError("diagonal must be zero")
            for j in range(i):
                if self.counts[i][j] != self.counts[j][i]:
                    raise ValueError("counts must be symmetric")
                if self.counts[i][j] < 0:
                    raise ValueError("counts must be nonnegative")

    @property
    def total(self) -> int:
        """Number of observations behind the matrix."""
        return sum(sum(row) for row in self.counts) // 2

    def count(self, a: str, b: str) -> int:
        ia, ib = self.icons.index(a), self.icons.index(b)
        return self.counts[ia][ib]


def count_pairs(observations: Iterable[PairObservation],
                icons: Sequence[str]) -> CooccurrenceMatrix:
    """Order-insensitive pair counts over an icon list."""
    index = {icon: i for i, icon in enumerate(icons)}
    m = len(icons)
    counts = [[0] * m for _ in range(m)]
    for obs in observations:
        try:
            i, j = index[obs.first], index[obs.second]
        except KeyError as exc:
            raise UnknownIcon(f"observation icon {exc.args[0]!r} not in icon list") from exc
        counts[i][j] += 1
        counts[j][i] += 1
    return CooccurrenceMatrix(tuple(icons), tuple(tuple(row) for row in counts))


def _subset_sum(counts: np.ndarray, subset: Sequence[int]) -> int:
    return int(sum(counts[i][j] for i, j in combinations(subset, 2)))


def _subset_max(counts: np.ndarray, subset: Sequence[int]) -> int:
    return int(max((counts[i][j] for i, j in combinations(subset, 2)), default=0))


def select_least_related(matrix: CooccurrenceMatrix, k: int,
                         mode: str = "exact",
                         objective: str = "sum") -> tuple[tuple[str, ...], int]:
    """Pick the k least intrinsically related icons.

    Returns (sorted icon ids, objective value).  Ties go to the
    lexicographically smallest sorted id list.  `objective` is "sum"
    (total internal pair count) or "max" (largest internal pair count).
    """
    m = len(matrix.icons)
    if not 1 <= k <= m:
        raise KTooLarge(f"cannot pick {k} of {m} icons")
    if mode not in ("exact", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    if objective not in ("sum", "max"):
        raise ValueError(f"unknown objective {objective!r}")

    order = sorted(range(m), key=lambda i: matrix.icons[i])
    ids = [matrix.icons[i] for i in order]
    counts = np.array(matrix.counts, dtype=np.int64)[np.ix_(order, order)]

    if k == 1:
        return (ids[0],), 0

    if mode == "greedy":
        subset = _greedy_subset(counts, k, objective)
    else:
        if math.comb(m, k) > SUBSET_ENUMERATION_CAP:
            raise SubsetTooLarge(
                f"C({m},{k}) = {math.comb(m, k)} subsets exceed cap {SUBSET_ENUMERATION_CAP}"
            )
        upper = _subset_objective(counts, _greedy_subset(counts, k, objective), objective)
        subset = _branch_and_bound(counts, k, objective, upper)

    value = _subset_objective(counts, subset, objective)
    return tuple(sorted(ids[i] for i in subset)), value


def _subset_objective(counts, subset, objective) -> int:
    return _subset_sum(counts, subset) if objective == "sum" else _subset_max(counts, subset)


def _greedy_subset(counts: np.ndarray, k: int, objective: str) -> list[int]:
    """Seed with the globally least-co-occurring pair, then grow by the
    icon adding the least internal weight; all ties break on sorted order,
    which is id order here."""
    m = counts.shape[0]
    best_pair = None
    for i in range(m):
        for j in range(i + 1, m):
            if best_pair is None or counts[i][j] < counts[best_pair[0]][best_pair[1]]:
                best_pair = (i, j)
    subset = list(best_pair)
    while len(subset) < k:
        best_icon = None
        best_added = None
        for c in range(m):
            if c in subset:
                continue
            if objective == "sum":
                added = int(counts[c][subset].sum())
            else:
                added = int(counts[c][subset].max())
            if best_added is None or added < best_added:
                best_added = added
                best_icon = c
        subset.append(best_icon)
    return sorted(subset)


def _branch_and_bound(counts: np.ndarray, k: int, objective: str, upper: int) -> list[int]:
    """Exact minimum over all C(m, k) subsets.

    Icons are explored in ascending index (= sorted id) order, so the
    first subset recorded at the optimum is the lexicographic winner.
    The greedy value seeds the bound; equal-bound subtrees stay open
    until an incumbent exists, preserving the tie-break.
    """
    m = counts.shape[0]
    best_obj = upper
    best: list[int] | None = None

    def dfs(start: int, chosen: list[int], internal: int, add_cost: np.ndarray) -> None:
        nonlocal best_obj, best
        s = len(chosen)
        if s == k:
            if internal < best_obj or (internal == best_obj and best is None):
                best_obj = internal
                best = list(chosen)
            return
        need = k - s
        if m - start < need:
            return
        remaining = add_cost[start:]
        if objective == "sum":
            cheapest = np.partition(remaining, need - 1)[:need]
            bound = internal + int(cheapest.sum())
        else:
            bound = max(internal, int(np.partition(remaining, need - 1)[need - 1]))
        if bound > best_obj or (bound >= best_obj and best is not None):
            return
        for i in range(start, m - need + 1):
            chosen.append(i)
            if objective == "sum":
                dfs(i + 1, chosen, internal + int(add_cost[i]), add_cost + counts[i])
            else:
                dfs(i + 1, chosen, max(internal, int(add_cost[i])), np.maximum(add_cost, counts[i]))
            chosen.pop()

    dfs(0, [], 0, np.zeros(m, dtype=np.int64))
    # The greedy upper bound is attained by a real subset, so the search
    # always records an incumbent at or below it.
    assert best is not None
    return best


# --- chi-square uniformity --------------------------------------------------

@dataclass(frozen=True)
class UniformityReport:
    categories: tuple[str, ...]
    observed: tuple[float, ...]
    expected: float
    statistic: float
    df: int
    p_value: float

    def to_json_dict(self) -> dict:
        return {
            "categories": list(self.categories),
            "observed": list(self.observed),
            "expected": self.expected,
            "statistic": self.statistic,
            "df": self.df,
            "p_value": self.p_value,
        }

    def to_csv(self) -> str:
        lines = ["category,observed,expected"]
        for cat, obs in zip(self.categories, self.observed):
            lines.append(f"{cat},{obs:g},{self.expected:g}")
        lines.append(f"# statistic={self.statistic!r} df={self.df} p={self.p_value!r}")
        return "\n".join(lines) + "\n"


def chi_square_uniformity(observed: Sequence[float],
                          labels: Sequence[str] | None = None) -> UniformityReport:
    """Pearson goodness-of-fit against the uniform expectation."""
    m = len(observed)
    if m < 2:
        raise DegenerateInput("need at least 2 categories")
    if any(o < 0 for o in observed):
        raise ValueError("observed counts must be nonnegative")
    total = float(sum(observed))
    if total <= 0:
        raise DegenerateInput("need at least one observation")
    if labels is None:
        labels = [str(i) for i in range(m)]
    expected = total / m
    statistic = float(sum((o - expected) ** 2 / expected for o in observed))
    df = m - 1
    return UniformityReport(
        categories=tuple(str(c) for c in labels),
        observed=tuple(float(o) for o in observed),
        expected=expected,
        statistic=statistic,
        df=df,
        p_value=chi2_sf(statistic, df),
    )


def chi2_sf(statistic: float, df: int) -> float:
    """Upper tail of the chi-square distribution.

    Evaluates the regularized upper incomplete gamma Q(df/2, stat/2) by
    power series for small statistics and by continued fraction
    otherwise; both converge past 1e-10 relative error.
    """
    if df < 1:
        raise ValueError("df must be >= 1")
    if statistic < 0:
        raise ValueError("statistic must be >= 0")
    if statistic == 0:
        return 1.0
    s = df / 2.0
    x = statistic / 2.0
    if statistic < df + 1:
        return min(max(1.0 - _lower_reg_gamma_series(s, x), 0.0), 1.0)
    return min(max(_upper_reg_gamma_cf(s, x), 0.0), 1.0)


def _lower_reg_gamma_series(s: float, x: float) -> float:
    # P(s, x) = x^s e^-x / Gamma(s) * sum_n x^n / (s (s+1) ... (s+n))
    ap = s
    term = 1.0 / s
    total = term
    for _ in range(_GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            return total * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise ArithmeticError(f"gamma series failed to converge for s={s}, x={x}")


def _upper_reg_gamma_cf(s: float, x: float) -> float:
    # Q(s, x) via the modified Lentz continued fraction.
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, _GAMMA_MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            return h * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise ArithmeticError(f"gamma continued fraction failed to converge for s={s}, x={x}")
