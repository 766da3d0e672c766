"""Cohort-level statistics: CCDF, quadrants, ternary shares, binned curves,
and ordinary least squares with a fixed ladder of nested models.

All regression rows are complete cases over the union of every ladder
column, so R-squared comparisons across nested models are apples to apples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import t as t_dist

from .errors import (
    DegenerateX,
    EmptyInput,
    InsufficientData,
    RankDeficient,
    TooFewRows,
    ZeroImpact,
)
from .topics import TopicType

# p-value cutoff for calling the quadratic term significantly negative.
CURVE_ALPHA = 0.05


# ---------------------------------------------------------------------------
# distributions


def ccdf(values: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Empirical complementary CDF on the strictly-greater convention.

    Returns sorted unique values x and P(X > x); the final probability is
    always 0.
    """
    if len(values) == 0:
        raise EmptyInput("no values for ccdf")
    arr = np.sort(np.asarray(values, dtype=float))
    xs, counts = np.unique(arr, return_counts=True)
    greater = arr.size - np.cumsum(counts)
    return xs, greater / arr.size


# ---------------------------------------------------------------------------
# quadrants and ternary shares


def quadrant_of(delta_primary: float, delta_secondary: float) -> int:
    """Quadrant of the (mentee - mentor) impact deltas; ties go to the
    non-exceeding side."""
    if delta_primary > 0 and delta_secondary > 0:
        return 1
    if delta_primary <= 0 and delta_secondary > 0:
        return 2
    if delta_primary <= 0 and delta_secondary <= 0:
        return 3
    return 4


def quadrant_counts(deltas: Sequence[tuple[float, float]]) -> dict[int, int]:
    counts = {1: 0, 2: 0, 3: 0, 4: 0}
    for dp, ds in deltas:
        counts[quadrant_of(dp, ds)] += 1
    return counts


def ternary_shares(by_type: Mapping[TopicType, float]) -> tuple[float, float, float]:
    """Normalized (primary, secondary, new) impact shares for one mentee."""
    p = by_type.get(TopicType.PRIMARY, 0.0)
    s = by_type.get(TopicType.SECONDARY, 0.0)
    n = by_type.get(TopicType.NEW, 0.0)
    total = p + s + n
    if total == 0:
        raise ZeroImpact("no allocated impact to normalize")
    return p / total, s / total, n / total


# ---------------------------------------------------------------------------
# binned curve


@dataclass(frozen=True)
class BinnedCurve:
    mean_x: tuple[float, ...]
    mean_y: tuple[float, ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class QuadraticFit:
    intercept: float
    slope: float
    curvature: float
    p_curvature: float
    peak_x: float
    inverted_u: bool
    n: int


def equal_count_bins(x: Sequence[float], y: Sequence[float], n_bins: int = 20) -> BinnedCurve:
    """Bin y by x into n_bins groups of (near) equal size along sorted x."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.size != ya.size:
        raise EmptyInput("x and y lengths differ")
    if xa.size < n_bins:
        raise InsufficientData(f"{xa.size} points for {n_bins} bins")
    order = np.argsort(xa, kind="stable")
    chunks = np.array_split(order, n_bins)
    mean_x = tuple(float(xa[c].mean()) for c in chunks)
    mean_y = tuple(float(ya[c].mean()) for c in chunks)
    counts = tuple(int(c.size) for c in chunks)
    return BinnedCurve(mean_x=mean_x, mean_y=mean_y, counts=counts)


def fit_quadratic(x: Sequence[float], y: Sequence[float]) -> QuadraticFit:
    """Quadratic OLS on the raw scatter; the curve is summarized by the
    vertex location and whether the curvature is significantly negative."""
    xa = np.asarray(x, dtype=float)
    if np.unique(xa).size < 3:
        raise DegenerateX("need at least 3 distinct x values for a quadratic")
    res = fit_ols({"x": xa, "x_sq": xa * xa}, y)
    c0, b, a = res.beta
    p_a = res.p[2]
    peak = -b / (2.0 * a) if a != 0 else math.nan
    return QuadraticFit(
        intercept=c0,
        slope=b,
        curvature=a,
        p_curvature=p_a,
        peak_x=peak,
        inverted_u=a < 0 and p_a < CURVE_ALPHA,
        n=int(xa.size),
    )


# ---------------------------------------------------------------------------
# ordinary least squares


@dataclass(frozen=True)
class OlsResult:
    names: tuple[str, ...]
    beta: tuple[float, ...]
    se: tuple[float, ...]
    t: tuple[float, ...]
    p: tuple[float, ...]
    r2: float
    adj_r2: float
    n: int
    df: int

    def coef(self, name: str) -> tuple[float, float, float, float]:
        """(beta, se, t, p) for one named regressor."""
        i = self.names.index(name)
        return self.beta[i], self.se[i], self.t[i], self.p[i]


def _independent_columns(x: np.ndarray, names: Sequence[str]) -> list[str]:
    """Names of columns that do not extend the span of their predecessors."""
    redundant = []
    kept = np.empty((x.shape[0], 0))
    rank = 0
    for j, name in enumerate(names):
        candidate = np.column_stack([kept, x[:, j]])
        cand_rank = int(np.linalg.matrix_rank(candidate))
        if cand_rank > rank:
            kept = candidate
            rank = cand_rank
        else:
            redundant.append(name)
    return redundant


def fit_ols(
    columns: Mapping[str, Sequence[float]],
    y: Sequence[float],
    intercept: bool = True,
) -> OlsResult:
    """Classical OLS with analytic standard errors and two-sided t tests.

    Raises TooFewRows when there are not enough rows for one residual
    degree of freedom, RankDeficient (naming the offending columns) when
    the design matrix is singular, and DegenerateX when the outcome has no
    variance to explain.
    """
    names = list(columns)
    ya = np.asarray(y, dtype=float)
    n = ya.size
    cols = [np.asarray(columns[name], dtype=float) for name in names]
    for name, col in zip(names, cols):
        if col.size != n:
            raise EmptyInput(f"column {name} length {col.size} != {n}")
    if intercept:
        design = np.column_stack([np.ones(n)] + cols)
        names = ["intercept"] + names
    else:
        design = np.column_stack(cols)
    k = design.shape[1]
    if n < k + 1:
        raise TooFewRows(f"{n} rows for {k} parameters")
    if np.linalg.matrix_rank(design) < k:
        raise RankDeficient(tuple(_independent_columns(design, names)))

    beta, _, _, _ = np.linalg.lstsq(design, ya, rcond=None)
    resid = ya - design @ beta
    rss = float(resid @ resid)
    df = n - k
    if intercept:
        tss = float(np.sum((ya - ya.mean()) ** 2))
    else:
        tss = float(ya @ ya)
    if tss == 0:
        raise DegenerateX("outcome has zero variance")
    sigma2 = rss / df
    cov = sigma2 * np.linalg.inv(design.T @ design)
    se = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(se > 0, beta / se, np.inf * np.sign(beta))
    p_vals = 2.0 * t_dist.sf(np.abs(t_stats), df)
    r2 = 1.0 - rss / tss
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / df if intercept else math.nan
    return OlsResult(
        names=tuple(names),
        beta=tuple(float(b) for b in beta),
        se=tuple(float(s) for s in se),
        t=tuple(float(t) for t in t_stats),
        p=tuple(float(p) for p in p_vals),
        r2=r2,
        adj_r2=adj_r2,
        n=n,
        df=df,
    )


# ---------------------------------------------------------------------------
# model ladder

MODEL_LADDER: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("m1_distance", ("ave_distance", "ave_distance_sq")),
    ("m2_career", ("ave_distance", "ave_distance_sq", "career_len_mte", "mte_work_count_first_5y")),
    (
        "m3_mentor",
        (
            "ave_distance",
            "ave_distance_sq",
            "career_len_mte",
            "mte_work_count_first_5y",
            "topic_num_mto",
            "mto_citation_impact",
        ),
    ),
    (
        "m4_collab",
        (
            "ave_distance",
            "ave_distance_sq",
            "career_len_mte",
            "mte_work_count_first_5y",
            "topic_num_mto",
            "mto_citation_impact",
            "colla_work_count",
        ),
    ),
    (
        "m5_collab_split",
        (
            "ave_distance",
            "ave_distance_sq",
            "career_len_mte",
            "mte_work_count_first_5y",
            "topic_num_mto",
            "mto_citation_impact",
            "colla_work_count_first_5y",
            "colla_work_count_later",
        ),
    ),
    (
        "m6_full",
        (
            "ave_distance",
            "ave_distance_sq",
            "career_len_mte",
            "mte_work_count_first_5y",
            "topic_num_mto",
            "mto_citation_impact",
            "colla_work_count_first_5y",
            "colla_work_count_later",
            "common_collaborators_count",
        ),
    ),
)


@dataclass(frozen=True)
class LadderResult:
    models: tuple[tuple[str, OlsResult], ...]
    n_rows: int
    n_dropped: int

    def r2_sequence(self) -> tuple[float, ...]:
        return tuple(res.r2 for _, res in self.models)


def fit_model_ladder(
    table: Mapping[str, Sequence[float]],
    outcome: str = "mentee_total_impact",
    log1p_outcome: bool = False,
) -> LadderResult:
    """Fit the whole model ladder on one shared complete-case row set.

    Rows with a non-finite value in the outcome or in any column used by
    any ladder model are dropped once, up front.
    """
    needed: list[str] = [outcome]
    for _, cols in MODEL_LADDER:
        for c in cols:
            if c not in needed:
                needed.append(c)
    arrays = {}
    for c in needed:
        if c not in table:
            raise EmptyInput(f"missing column {c}")
        arrays[c] = np.asarray(table[c], dtype=float)
    n_total = arrays[outcome].size
    mask = np.ones(n_total, dtype=bool)
    for c in needed:
        mask &= np.isfinite(arrays[c])
    n_rows = int(mask.sum())
    y = arrays[outcome][mask]
    if log1p_outcome:
        y = np.log1p(y)
    models = []
    for name, cols in MODEL_LADDER:
        res = fit_ols({c: arrays[c][mask] for c in cols}, y)
        models.append((name, res))
    return LadderResult(models=tuple(models), n_rows=n_rows, n_dropped=n_total - n_rows)
