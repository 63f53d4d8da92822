"""Rank statistics and score aggregation.

Implements the Goodman-Kruskal gamma association measure by direct pair
counting, min-max feature normalization with optional direction flipping,
the unweighted score aggregation that produces the basicness ranking, the
acquisition-sequence target series, and greedy backward feature
elimination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateColumnError, UndefinedGammaError

#: Canonical feature column order used by every consumer of the matrix.
FEATURE_COLUMNS = (
    "word-concreteness",
    "translation-concreteness",
    "ngram-frequency",
    "ngram-pct-adj",
    "penntb-pct-adj",
    "compound-count",
    "compound-frequency",
    "affix-presence",
    "borrowing",
    "cognate",
    "derivation",
    "suffix-derivation",
    "inheritance",
    "word-length",
)

#: Columns whose raw values point away from basicness; they are flipped
#: after scaling so that larger always means more basic.
DEFAULT_NEGATED = frozenset(
    {
        "word-concreteness",
        "translation-concreteness",
        "word-length",
        "compound-frequency",
        "borrowing",
    }
)

#: Monotone per-column transforms applied before scaling.  Rank-based
#: statistics are unaffected; only the aggregate mean is.
DEFAULT_TRANSFORMS = {"ngram-frequency": "log1p"}

#: Acquisition stages for the eleven basic terms.  Secondary terms share
#: one tied stage after all of these.
BK_STAGES = {
    "white": 1,
    "black": 1,
    "red": 2,
    "green": 3,
    "yellow": 3,
    "blue": 4,
    "brown": 5,
    "purple": 6,
    "pink": 6,
    "orange": 6,
    "grey": 6,
    "gray": 6,
}

SECONDARY_STAGE = 7


@dataclass(frozen=True)
class GammaResult:
    """Outcome of a gamma computation: the statistic and the pair tallies."""

    gamma: float
    concordant: int
    discordant: int
    tied_skipped: int


def gamma(x, y) -> GammaResult:
    """Goodman-Kruskal gamma between two equal-length ordinal series.

    Every unordered index pair is classified as concordant (both series
    rank the pair the same way), discordant (opposite ways), or tied in
    either series.  Tied pairs are skipped; gamma is
    (concordant - discordant) / (concordant + discordant).

    Raises UndefinedGammaError when every pair is tied.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.ndim != 1 or ya.ndim != 1 or xa.shape != ya.shape:
        raise ValueError("series must be one-dimensional and equally long")
    n = xa.shape[0]
    if n < 2:
        raise ValueError("need at least two observations")
    if np.isnan(xa).any() or np.isnan(ya).any():
        raise ValueError("series must not contain NaN")

    iu = np.triu_indices(n, k=1)
    sx = np.sign(xa[:, None] - xa[None, :])[iu]
    sy = np.sign(ya[:, None] - ya[None, :])[iu]
    prod = sx * sy
    concordant = int((prod > 0).sum())
    discordant = int((prod < 0).sum())
    tied = int((prod == 0).sum())
    if concordant + discordant == 0:
        raise UndefinedGammaError("all index pairs are tied in x or y")
    g = (concordant - discordant) / (concordant + discordant)
    return GammaResult(g, concordant, discordant, tied)


def normalize_feature(values, direction: str = "positive") -> list[float]:
    """Min-max scale a column to [0, 1]; 'negated' flips the result.

    Raises DegenerateColumnError for constant columns.
    """
    if direction not in ("positive", "negated"):
        raise ValueError(f"unknown direction {direction!r}")
    vals = [float(v) for v in values]
    if len(vals) < 2:
        raise ValueError("need at least two values")
    lo, hi = min(vals), max(vals)
    if lo == hi:
        raise DegenerateColumnError("column is constant; cannot scale")
    scaled = [(v - lo) / (hi - lo) for v in vals]
    if direction == "negated":
        scaled = [1.0 - s for s in scaled]
    return scaled


def _transform(values, name: str | None):
    if name is None:
        return list(values)
    if name == "log1p":
        return [math.log1p(v) for v in values]
    raise ValueError(f"unknown transform {name!r}")


@dataclass
class AggregateRanking:
    """Colors ordered by aggregate basicness score (top rescaled to 1.0)."""

    colors: list[str]
    scores: list[float]  # aligned to .colors, non-increasing
    features_used: tuple[str, ...]
    negated_used: frozenset[str]
    scores_by_color: dict[str, float] = field(default_factory=dict)

    def top(self, k: int) -> list[str]:
        return self.colors[:k]


def aggregate(
    matrix,
    negated=DEFAULT_NEGATED,
    subset=None,
    transforms=DEFAULT_TRANSFORMS,
) -> AggregateRanking:
    """Unweighted mean of normalized columns, rescaled so the top is 1.0.

    Constant columns contribute a flat 0.5 to every color; this shifts
    every mean equally and leaves the ordering untouched.  Ties in the
    final ordering are broken by the matrix row (seed list) order.
    """
    columns = tuple(subset) if subset is not None else tuple(matrix.columns)
    if not columns:
        raise ValueError("feature subset must not be empty")
    negated = frozenset(negated)
    n = len(matrix.colors)
    sums = [0.0] * n
    for col in columns:
        vals = _transform(matrix.column(col), transforms.get(col))
        direction = "negated" if col in negated else "positive"
        try:
            scaled = normalize_feature(vals, direction)
        except DegenerateColumnError:
            scaled = [0.5] * n
        for i, s in enumerate(scaled):
            sums[i] += s
    means = [s / len(columns) for s in sums]
    top = max(means)
    if top <= 0:
        raise ValueError("aggregate scores are not positive; cannot rescale")
    rescaled = [m / top for m in means]
    order = sorted(range(n), key=lambda i: (-rescaled[i], i))
    return AggregateRanking(
        colors=[matrix.colors[i] for i in order],
        scores=[rescaled[i] for i in order],
        features_used=columns,
        negated_used=negated,
        scores_by_color={matrix.colors[i]: rescaled[i] for i in range(n)},
    )


def bootstrap_then_full_aggregate(
    matrix,
    negated=DEFAULT_NEGATED,
    transforms=DEFAULT_TRANSFORMS,
    affix_fn=None,
    affix_column: str = "affix-presence",
):
    """Two-pass aggregation around the affix-presence feature.

    Pass one averages every column except affix-presence; its top ten
    colors parameterize the affix feature.  When ``affix_fn`` is given it
    is called with that top-ten list and must return a value per color,
    which replaces the affix column.  Pass two averages all columns.
    Returns (bootstrap_ranking, final_ranking, matrix) where the matrix
    carries the possibly recomputed affix column.
    """
    if affix_column not in matrix.columns:
        raise ValueError(f"matrix lacks the {affix_column!r} column")
    others = tuple(c for c in matrix.columns if c != affix_column)
    boot = aggregate(matrix, negated, others, transforms)
    if affix_fn is not None:
        new_values = affix_fn(boot.top(10))
        matrix = matrix.with_column(affix_column, [new_values[c] for c in matrix.colors])
    final = aggregate(matrix, negated, tuple(matrix.columns), transforms)
    return boot, final, matrix


def sequence_target(colors, is_basic, stages) -> list[float]:
    """Ordinal target encoding the diachronic acquisition sequence.

    Basic colors take their stage, secondary colors share one tied stage
    after them; values are negated so that earlier acquisition sorts
    higher, matching the direction of basicness-style scores.
    """
    out = []
    for c in colors:
        if is_basic[c]:
            stage = stages.get(c)
            if stage is None:
                raise ValueError(f"basic color {c!r} has no acquisition stage")
            out.append(-float(stage))
        else:
            out.append(-float(SECONDARY_STAGE))
    return out


def rfe(matrix, target, negated=DEFAULT_NEGATED, transforms=DEFAULT_TRANSFORMS):
    """Greedy backward feature elimination against a gamma objective.

    At each step the single feature whose removal most increases
    gamma(aggregate score, target) is dropped; elimination stops when no
    removal strictly improves gamma or one feature remains.  Returns the
    trajectory as a list of {removed, gamma, features} dicts (the first
    entry is the full set) and the surviving feature tuple.
    """
    current = tuple(matrix.columns)
    if len(current) < 2:
        raise ValueError("need at least two features")

    def score(subset):
        ranking = aggregate(matrix, negated, subset, transforms)
        series = [ranking.scores_by_color[c] for c in matrix.colors]
        return gamma(series, target).gamma

    g = score(current)
    trajectory = [{"removed": None, "gamma": g, "features": list(current)}]
    while len(current) > 1:
        # Strict improvement required; scanning feature names in sorted
        # order makes the argmax tie-break lexicographic.
        best_feature = None
        best_gamma = g
        for f in sorted(current):
            candidate = tuple(c for c in current if c != f)
            cg = score(candidate)
            if cg > best_gamma:
                best_feature = f
                best_gamma = cg
        if best_feature is None:
            break
        current = tuple(c for c in current if c != best_feature)
        g = best_gamma
        trajectory.append({"removed": best_feature, "gamma": g, "features": list(current)})
    return trajectory, current
