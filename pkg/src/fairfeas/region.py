"""Exhaustive enumeration of discretized feasible (FPR, FNR, PPV) triples.

On an integer grid with resolution N, a triple (alpha, beta, v) is
feasible for prevalence index p exactly when the cross-multiplied
identity alpha * d = n holds, where

    m = p * (N - v),  n = m * (N - beta),  d = v * (N - p).

This is the integer form of the relation tying FPR to (p, PPV, FNR):
alpha/N = (p/N * (1 - v/N) * (1 - beta/N)) / (v/N * (1 - p/N)).
Enumeration loops (beta, v) and accepts alpha = n/d when the division
is exact and in range, O(N^2) per prevalence. Joint counting across two
prevalences uses a 3-D summed-area table over one set's occupancy grid,
giving O(1) box queries per triple of the other set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import BadPrevalence, MismatchedSets, OverlappingBins


@dataclass(frozen=True)
class Discretization:
    """Index grid: metric value = idx / n. Ranges are inclusive.

    beta and v default to [0, 0.99 n] to avoid the degenerate
    perfect-prediction edge; alpha defaults to the full [0, n].
    """

    n: int = 100
    alpha_range: Optional[tuple[int, int]] = None
    beta_range: Optional[tuple[int, int]] = None
    v_range: Optional[tuple[int, int]] = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        defaults = {
            "alpha_range": (0, self.n),
            "beta_range": (0, int(0.99 * self.n)),
            "v_range": (0, int(0.99 * self.n)),
        }
        for name, default in defaults.items():
            rng = getattr(self, name)
            if rng is None:
                object.__setattr__(self, name, default)
                rng = default
            lo, hi = rng
            if not (0 <= lo <= hi <= self.n):
                raise ValueError(f"{name}={rng} must satisfy 0 <= lo <= hi <= n")


@dataclass(frozen=True)
class FeasibleTriple:
    alpha_idx: int
    beta_idx: int
    v_idx: int


@dataclass
class FeasibleTripleSet:
    """All feasible (alpha, beta, v) index triples for one prevalence index."""

    p_idx: int
    disc: Discretization
    triples: np.ndarray  # (M, 3) int array, columns (alpha, beta, v)
    _prefix: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.triples)

    def as_triples(self) -> list[FeasibleTriple]:
        return [FeasibleTriple(int(a), int(b), int(v)) for a, b, v in self.triples]

    def occupancy(self) -> np.ndarray:
        """Boolean grid over (alpha, beta, v) indices."""
        n = self.disc.n
        occ = np.zeros((n + 1, n + 1, n + 1), dtype=bool)
        if len(self.triples):
            occ[self.triples[:, 0], self.triples[:, 1], self.triples[:, 2]] = True
        return occ

    def prefix_table(self) -> np.ndarray:
        """Summed-area table P with P[i, j, k] = #triples in [0,i) x [0,j) x [0,k)."""
        if self._prefix is None:
            n = self.disc.n
            table = np.zeros((n + 2, n + 2, n + 2), dtype=np.int64)
            table[1:, 1:, 1:] = self.occupancy().astype(np.int64)
            for axis in range(3):
                np.cumsum(table, axis=axis, out=table)
            self._prefix = table
        return self._prefix

    def count_box(self, alpha: tuple[int, int], beta: tuple[int, int], v: tuple[int, int]) -> int:
        """Number of triples within the inclusive index box."""
        return int(
            _box_counts(
                self.prefix_table(),
                np.array([alpha[0]]), np.array([alpha[1]]),
                np.array([beta[0]]), np.array([beta[1]]),
                np.array([v[0]]), np.array([v[1]]),
                self.disc.n,
            )[0]
        )


@dataclass(frozen=True)
class JointCountQuery:
    """Pair-count query: shared tolerance applied to |d_alpha|, |d_beta|, |d_v|."""

    p1_idx: int
    p2_idx: int
    eps_max_idx: int

    def __post_init__(self):
        if self.eps_max_idx < 0:
            raise ValueError("eps_max_idx must be >= 0")


@dataclass
class PrevalenceHeatmap:
    """Joint feasible-pair counts over a grid of prevalence index pairs."""

    p_indices: list[int]
    n: int
    counts: np.ndarray  # (len(p_indices), len(p_indices)) int64, symmetric
    total: int


def enumerate_triples(p_idx: int, disc: Discretization) -> FeasibleTripleSet:
    """All triples within the discretization ranges feasible at p_idx.

    For v_idx = 0 the divisor d vanishes and a triple is feasible only
    when n = 0 as well (any alpha then satisfies the identity).
    """
    n_res = disc.n
    if not 1 <= p_idx <= n_res - 1:
        raise BadPrevalence(f"p_idx={p_idx} must lie in [1, {n_res - 1}]")
    a_lo, a_hi = disc.alpha_range
    b_lo, b_hi = disc.beta_range
    v_lo, v_hi = disc.v_range
    betas = np.arange(b_lo, b_hi + 1, dtype=np.int64)
    found = []
    for v in range(v_lo, v_hi + 1):
        num = p_idx * (n_res - v) * (n_res - betas)  # n = m * (N - beta)
        d = v * (n_res - p_idx)
        if d == 0:
            ok = betas[num == 0]
            for b in ok:
                for a in range(a_lo, a_hi + 1):
                    found.append((a, int(b), v))
            continue
        alphas, rem = np.divmod(num, d)
        mask = (rem == 0) & (alphas >= a_lo) & (alphas <= a_hi)
        for b, a in zip(betas[mask], alphas[mask]):
            found.append((int(a), int(b), v))
    arr = np.array(sorted(found), dtype=np.int64).reshape(-1, 3)
    return FeasibleTripleSet(p_idx=p_idx, disc=disc, triples=arr)


def _box_counts(prefix, a_lo, a_hi, b_lo, b_hi, v_lo, v_hi, n):
    """Vectorized inclusive box queries against a summed-area table."""
    a0 = np.clip(a_lo, 0, n + 1)
    b0 = np.clip(b_lo, 0, n + 1)
    v0 = np.clip(v_lo, 0, n + 1)
    a1 = np.clip(a_hi + 1, 0, n + 1)
    b1 = np.clip(b_hi + 1, 0, n + 1)
    v1 = np.clip(v_hi + 1, 0, n + 1)
    return (
        prefix[a1, b1, v1] - prefix[a0, b1, v1] - prefix[a1, b0, v1] - prefix[a1, b1, v0]
        + prefix[a0, b0, v1] + prefix[a0, b1, v0] + prefix[a1, b0, v0]
        - prefix[a0, b0, v0]
    )


def count_joint(
    q: JointCountQuery,
    sets: tuple[FeasibleTripleSet, FeasibleTripleSet],
    disc: Discretization,
) -> int:
    """Number of cross-set triple pairs within eps_max_idx on every metric."""
    s1, s2 = sets
    if s1.p_idx != q.p1_idx or s2.p_idx != q.p2_idx:
        raise MismatchedSets(
            f"sets have p_idx ({s1.p_idx}, {s2.p_idx}), query wants "
            f"({q.p1_idx}, {q.p2_idx})"
        )
    if len(s1) == 0 or len(s2) == 0:
        return 0
    t = s1.triples
    e = q.eps_max_idx
    counts = _box_counts(
        s2.prefix_table(),
        t[:, 0] - e, t[:, 0] + e,
        t[:, 1] - e, t[:, 1] + e,
        t[:, 2] - e, t[:, 2] + e,
        disc.n,
    )
    return int(counts.sum())


def _restrict_v(s: FeasibleTripleSet, window: tuple[int, int]) -> FeasibleTripleSet:
    lo, hi = window
    mask = (s.triples[:, 2] >= lo) & (s.triples[:, 2] <= hi)
    return FeasibleTripleSet(p_idx=s.p_idx, disc=s.disc, triples=s.triples[mask])


def prevalence_grid(disc: Discretization, p_grid_step: float) -> list[int]:
    """Prevalence indices in [1, n-1] at the requested real-valued step."""
    step_idx = max(1, round(p_grid_step * disc.n))
    return list(range(step_idx, disc.n, step_idx))


def heatmap(
    disc: Discretization,
    eps_max: float,
    p_grid_step: float = 0.01,
    ppv_window: Optional[tuple[int, int]] = None,
    strict_eps: bool = False,
) -> PrevalenceHeatmap:
    """Joint feasible-pair counts for every prevalence pair on the grid.

    strict_eps counts |difference| < eps rather than <= eps; exposed for
    encoding-sensitivity scans.
    """
    if not 0.0 <= eps_max <= 1.0:
        raise ValueError(f"eps_max must lie in [0, 1], got {eps_max}")
    grid = prevalence_grid(disc, p_grid_step)
    eps_idx = round(eps_max * disc.n)
    if strict_eps:
        eps_idx = max(0, eps_idx - 1)
    sets = {}
    for p in grid:
        s = enumerate_triples(p, disc)
        sets[p] = _restrict_v(s, ppv_window) if ppv_window is not None else s
    counts = np.zeros((len(grid), len(grid)), dtype=np.int64)
    for j, p2 in enumerate(grid):
        for i in range(j, len(grid)):
            p1 = grid[i]
            q = JointCountQuery(p1_idx=p1, p2_idx=p2, eps_max_idx=eps_idx)
            c = count_joint(q, (sets[p1], sets[p2]), disc)
            counts[i, j] = c
            counts[j, i] = c
        sets[p2]._prefix = None  # free the table once its column is done
    return PrevalenceHeatmap(
        p_indices=grid, n=disc.n, counts=counts, total=int(counts.sum())
    )


DEFAULT_PPV_BINS = ((0, 24), (25, 49), (50, 74), (75, 99))


def ppv_binned_counts(
    disc: Discretization,
    eps_max: float,
    bins: Sequence[tuple[int, int]] = DEFAULT_PPV_BINS,
    p_grid_step: float = 0.01,
    strict_eps: bool = False,
) -> list[int]:
    """Heatmap totals with the PPV index restricted to each bin in turn."""
    v_lo, v_hi = disc.v_range
    covered = []
    for lo, hi in bins:
        if lo > hi or lo < v_lo or hi > v_hi:
            raise OverlappingBins(f"bin ({lo}, {hi}) outside v_range {disc.v_range}")
        covered.append((lo, hi))
    covered.sort()
    for (_, hi_prev), (lo_next, _) in zip(covered, covered[1:]):
        if lo_next <= hi_prev:
            raise OverlappingBins("bins must be disjoint")
    return [
        heatmap(disc, eps_max, p_grid_step, ppv_window=b, strict_eps=strict_eps).total
        for b in bins
    ]


def heatmap_to_csv(hm: PrevalenceHeatmap, path) -> None:
    """Matrix CSV: header row/column hold prevalence indices."""
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["p1_idx\\p2_idx"] + hm.p_indices)
        for i, p1 in enumerate(hm.p_indices):
            w.writerow([p1] + [int(c) for c in hm.counts[i]])
