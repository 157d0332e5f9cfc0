"""Exact top-k selection under a PPV cap and disparity-ratio constraints.

The per-item problem (pick k rows maximizing true positives subject to
a list-PPV cap and per-group FPR/FNR/PPV ratio bounds against a
reference group) depends on rows only through each group's selected
positive count t_j and selected negative count f_j. Searching over
those integer allocations with an admissible true-positive bound is
therefore exact, with no LP relaxation or external solver.

All ratio constraints are checked in exact rational arithmetic
(fractions.Fraction), so "optimal" and "feasible" are never artifacts
of floating-point rounding.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import Infeasible, TooManyGroups
from .metrics import MetricPoint

MAX_GROUPS = 8

#: Ratio constraints are enforced on these selection-restricted metrics.
CONSTRAINED_METRICS = ("fpr", "fnr", "ppv")


def _to_fraction(x) -> Optional[Fraction]:
    """Exact rational for a bound; None encodes an infinite upper bound."""
    if x == math.inf:
        return None
    return Fraction(str(x))


@dataclass(frozen=True)
class GroupSupply:
    """Available positives and negatives for one group."""

    group_key: str
    positives: int
    negatives: int

    def __post_init__(self):
        if self.positives < 0 or self.negatives < 0:
            raise ValueError("counts must be non-negative")
        if self.positives + self.negatives == 0:
            raise ValueError(f"group {self.group_key!r} is empty")

    @property
    def n(self) -> int:
        return self.positives + self.negatives


@dataclass(frozen=True)
class SelectionInstance:
    groups: tuple[GroupSupply, ...]
    k: int
    ppv_cap: float = 0.7
    lb: float = 0.8
    ub: float = 1.2
    reference_group: Optional[str] = None

    def __post_init__(self):
        if not self.groups:
            raise ValueError("at least one group is required")
        if len(self.groups) > MAX_GROUPS:
            raise TooManyGroups(f"{len(self.groups)} groups exceeds {MAX_GROUPS}")
        if self.k < 1 or self.k > sum(g.n for g in self.groups):
            raise ValueError(f"k={self.k} outside [1, total items]")
        if not 0.0 < self.ppv_cap <= 1.0:
            raise ValueError("ppv_cap must lie in (0, 1]")
        if not self.lb <= 1.0 <= self.ub:
            raise ValueError("bounds must satisfy lb <= 1 <= ub")
        keys = [g.group_key for g in self.groups]
        if len(set(keys)) != len(keys):
            raise ValueError("group keys must be unique")
        if self.reference_group is None:
            # default reference: the largest group (ties: first listed)
            biggest = max(self.groups, key=lambda g: g.n)
            object.__setattr__(self, "reference_group", biggest.group_key)
        elif self.reference_group not in keys:
            raise ValueError(f"unknown reference group {self.reference_group!r}")


@dataclass(frozen=True)
class GroupAllocation:
    """Selected positives t_j and negatives f_j per group key."""

    t: dict[str, int]
    f: dict[str, int]

    def size(self) -> int:
        return sum(self.t.values()) + sum(self.f.values())


@dataclass(frozen=True)
class SelectionResult:
    status: str  # "optimal" | "infeasible"
    allocation: Optional[GroupAllocation]
    tp_total: int
    list_ppv: Optional[float]
    recall: Optional[float]
    per_group: dict[str, MetricPoint]
    disparities: dict[str, dict[str, Optional[float]]]


@dataclass(frozen=True)
class KScanRow:
    k_pct: int
    k_abs: int
    unconstrained_tp: Optional[int]
    constrained_tp: Optional[int]
    optimal: bool


@dataclass(frozen=True)
class KScanReport:
    rows: tuple[KScanRow, ...]
    summary: str


def unconstrained_max_tp(inst: SelectionInstance) -> int:
    """Max true positives with only the size and PPV-cap constraints.

    The optimum fills the list with positives up to min(supply,
    floor(cap * k)) and pads with negatives; raises Infeasible when the
    negative supply cannot absorb the padding.
    """
    total_p = sum(g.positives for g in inst.groups)
    total_n = sum(g.negatives for g in inst.groups)
    cap_t = _floor_frac(_to_fraction(inst.ppv_cap) * inst.k)
    best = min(total_p, cap_t)
    if inst.k - best > total_n:
        raise Infeasible(
            f"k={inst.k} cannot be met: at most {best} positives allowed "
            f"and only {total_n} negatives available"
        )
    return best


def _floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _num_interval(
    ref: Optional[Fraction], den: int, lb: Fraction, ub: Optional[Fraction]
) -> tuple[int, int]:
    """Integer range for a numerator x with lb*ref <= x/den <= ub*ref.

    ref is the reference metric value; None (undefined) or den == 0
    (group metric undefined) leaves the numerator unconstrained per the
    zero-denominator policy.
    """
    if ref is None or den == 0:
        return 0, den if den > 0 else 10**18
    lo = _ceil_frac(lb * ref * den)
    hi = den if ub is None else _floor_frac(ub * ref * den)
    return lo, hi


def solve_exact(inst: SelectionInstance) -> SelectionResult:
    """Maximize selected true positives under all constraints, exactly.

    Enumerates the reference group's allocation first (fixing every
    ratio interval), then searches the remaining groups depth-first
    with an admissible bound; the last group is resolved in closed
    form. The returned allocation is re-verified by check_allocation.
    """
    lb = _to_fraction(inst.lb)
    ub = _to_fraction(inst.ub)
    cap_t = _floor_frac(_to_fraction(inst.ppv_cap) * inst.k)
    k = inst.k
    ref = next(g for g in inst.groups if g.group_key == inst.reference_group)
    others = [g for g in inst.groups if g.group_key != inst.reference_group]
    # capacity of groups after position i in the search order
    suffix_cap = [0] * (len(others) + 1)
    for i in range(len(others) - 1, -1, -1):
        suffix_cap[i] = suffix_cap[i + 1] + others[i].n

    best_t = -1
    best_alloc: Optional[list[tuple[str, int, int]]] = None

    def descend(i, used, cur_t, alloc, bounds):
        nonlocal best_t, best_alloc
        rem = k - used
        if rem < 0 or rem > suffix_cap[i]:
            return
        if i == len(others):
            if rem == 0 and cur_t > best_t:
                best_t = cur_t
                best_alloc = list(alloc)
            return
        g = others[i]
        t_lo, t_hi, f_lo, f_hi, p_lo, p_hi = bounds[i]
        # admissible bound: remaining groups contribute at most their
        # FNR-interval tops, never more than the budget or the cap
        optimistic = cur_t + min(
            sum(b[1] for b in bounds[i:]), rem, cap_t - cur_t
        )
        if optimistic <= best_t:
            return
        if i == len(others) - 1:
            # closed form: t + f = rem exactly
            if rem == 0:
                if t_lo <= 0 and f_lo <= 0:
                    descend(i + 1, used, cur_t, alloc + [(g.group_key, 0, 0)], bounds)
                return
            lo = max(t_lo, rem - min(f_hi, g.negatives), 0)
            hi = min(t_hi, rem - f_lo, g.positives, rem, cap_t - cur_t)
            if p_hi is not None:  # PPV wedge at fixed list size rem
                lo = max(lo, _ceil_frac(p_lo * rem))
                hi = min(hi, _floor_frac(p_hi * rem))
            if lo <= hi:
                descend(i + 1, k, cur_t + hi, alloc + [(g.group_key, hi, rem - hi)], bounds)
            return
        for t in range(min(t_hi, g.positives, rem, cap_t - cur_t), max(t_lo, 0) - 1, -1):
            f_top = min(f_hi, g.negatives, rem - t)
            for f in range(max(f_lo, 0), f_top + 1):
                if p_hi is not None and t + f > 0:
                    s = t + f
                    if not (p_lo * s <= t <= p_hi * s):
                        continue
                descend(i + 1, used + t + f, cur_t + t, alloc + [(g.group_key, t, f)], bounds)

    others_p = sum(g.positives for g in others)
    for t_ref in range(min(ref.positives, k, cap_t), -1, -1):
        # anything reachable from here on is bounded by this; t_ref descends
        if min(t_ref + others_p, cap_t) <= best_t:
            break
        for f_ref in range(0, min(ref.negatives, k - t_ref) + 1):
            fpr_ref = Fraction(f_ref, ref.negatives) if ref.negatives else None
            fnr_ref = Fraction(ref.positives - t_ref, ref.positives) if ref.positives else None
            ppv_ref = Fraction(t_ref, t_ref + f_ref) if t_ref + f_ref else None
            bounds = []
            ok = True
            for g in others:
                f_lo, f_hi = _num_interval(fpr_ref, g.negatives, lb, ub)
                fn_lo, fn_hi = _num_interval(fnr_ref, g.positives, lb, ub)
                t_lo, t_hi = g.positives - fn_hi, g.positives - fn_lo
                if ppv_ref is None:
                    p_lo = p_hi = None
                else:
                    p_lo = lb * ppv_ref
                    p_hi = Fraction(1) if ub is None else min(ub * ppv_ref, Fraction(1))
                if max(t_lo, 0) > min(t_hi, g.positives) or max(f_lo, 0) > min(
                    f_hi, g.negatives
                ):
                    ok = False
                    break
                bounds.append((t_lo, t_hi, f_lo, f_hi, p_lo, p_hi))
            if not ok:
                continue
            descend(0, t_ref + f_ref, t_ref, [(ref.group_key, t_ref, f_ref)], bounds)

    if best_alloc is None:
        return SelectionResult(
            status="infeasible",
            allocation=None,
            tp_total=0,
            list_ppv=None,
            recall=None,
            per_group={},
            disparities={},
        )
    allocation = GroupAllocation(
        t={key: t for key, t, _ in best_alloc},
        f={key: f for key, _, f in best_alloc},
    )
    result = _build_result(inst, allocation)
    check_allocation(inst, allocation)
    return result


def _selection_metrics(g: GroupSupply, t: int, f: int) -> MetricPoint:
    return MetricPoint(
        fpr=f / g.negatives if g.negatives else None,
        fnr=(g.positives - t) / g.positives if g.positives else None,
        ppv=t / (t + f) if t + f else None,
        acc=(t + g.negatives - f) / g.n,
        prevalence=g.positives / g.n,
    )


def _build_result(inst: SelectionInstance, alloc: GroupAllocation) -> SelectionResult:
    per_group = {
        g.group_key: _selection_metrics(g, alloc.t[g.group_key], alloc.f[g.group_key])
        for g in inst.groups
    }
    ref_point = per_group[inst.reference_group]
    disparities: dict[str, dict[str, Optional[float]]] = {}
    for g in inst.groups:
        if g.group_key == inst.reference_group:
            continue
        row = {}
        for metric in CONSTRAINED_METRICS:
            rv = getattr(ref_point, metric)
            gv = getattr(per_group[g.group_key], metric)
            row[metric] = None if rv in (None, 0.0) or gv is None else gv / rv
        disparities[g.group_key] = row
    tp = sum(alloc.t.values())
    total_p = sum(g.positives for g in inst.groups)
    return SelectionResult(
        status="optimal",
        allocation=alloc,
        tp_total=tp,
        list_ppv=tp / inst.k,
        recall=tp / total_p if total_p else None,
        per_group=per_group,
        disparities=disparities,
    )


def check_allocation(inst: SelectionInstance, alloc: GroupAllocation) -> None:
    """Re-verify every constraint with exact rationals; raises on violation."""
    lb = _to_fraction(inst.lb)
    ub = _to_fraction(inst.ub)
    if alloc.size() != inst.k:
        raise AssertionError(f"allocation size {alloc.size()} != k {inst.k}")
    tp = sum(alloc.t.values())
    if Fraction(tp, inst.k) > _to_fraction(inst.ppv_cap):
        raise AssertionError("PPV cap violated")
    by_key = {g.group_key: g for g in inst.groups}
    ref = by_key[inst.reference_group]

    def rational_metrics(g):
        t, f = alloc.t[g.group_key], alloc.f[g.group_key]
        if not (0 <= t <= g.positives and 0 <= f <= g.negatives):
            raise AssertionError(f"allocation outside supply for {g.group_key}")
        return {
            "fpr": Fraction(f, g.negatives) if g.negatives else None,
            "fnr": Fraction(g.positives - t, g.positives) if g.positives else None,
            "ppv": Fraction(t, t + f) if t + f else None,
        }

    ref_m = rational_metrics(ref)
    for g in inst.groups:
        if g.group_key == inst.reference_group:
            continue
        g_m = rational_metrics(g)
        for metric in CONSTRAINED_METRICS:
            rv, gv = ref_m[metric], g_m[metric]
            if rv is None or gv is None:
                continue  # undefined on either side: constraint skipped
            if gv < lb * rv or (ub is not None and gv > ub * rv):
                raise AssertionError(f"{metric} disparity violated for {g.group_key}")


def k_scan(
    groups: Sequence[GroupSupply],
    cap: float = 0.7,
    bounds: tuple[float, float] = (0.8, 1.2),
    k_grid: Sequence[int] = tuple(range(5, 101, 5)),
    delta_tp: int = 0,
    reference_group: Optional[str] = None,
    max_workers: int = 1,
) -> KScanReport:
    """Sweep k over percentage grid points and flag the zero-cost ones.

    A grid point is optimal when the disparity constraints cost at most
    delta_tp true positives versus the cap-only optimum (default:
    exactly zero). The summary is "All", "None", or the longest
    contiguous optimal run "[a,b]" in percent (ties toward smaller a).
    Grid points are independent; max_workers > 1 solves them in a
    thread pool.
    """
    groups = tuple(groups)
    n = sum(g.n for g in groups)

    def solve_point(pct: int) -> KScanRow:
        k = max(1, math.floor(pct / 100.0 * n + 0.5))
        inst = SelectionInstance(
            groups=groups,
            k=k,
            ppv_cap=cap,
            lb=bounds[0],
            ub=bounds[1],
            reference_group=reference_group,
        )
        try:
            ideal = unconstrained_max_tp(inst)
        except Infeasible:
            return KScanRow(pct, k, None, None, False)
        res = solve_exact(inst)
        got = res.tp_total if res.status == "optimal" else None
        return KScanRow(pct, k, ideal, got, got is not None and ideal - got <= delta_tp)

    if max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(solve_point, k_grid))
    else:
        rows = [solve_point(pct) for pct in k_grid]
    return KScanReport(rows=tuple(rows), summary=_summarize(rows))


def _summarize(rows: Sequence[KScanRow]) -> str:
    flags = [r.optimal for r in rows]
    if all(flags):
        return "All"
    if not any(flags):
        return "None"
    best_start = best_end = None
    i = 0
    while i < len(flags):
        if flags[i]:
            j = i
            while j + 1 < len(flags) and flags[j + 1]:
                j += 1
            if best_start is None or j - i > best_end - best_start:
                best_start, best_end = i, j
            i = j + 1
        else:
            i += 1
    return f"[{rows[best_start].k_pct},{rows[best_end].k_pct}]"


def report_to_json(report: KScanReport) -> str:
    return json.dumps(
        {
            "rows": [
                {
                    "k_pct": r.k_pct,
                    "k_abs": r.k_abs,
                    "unconstrained_tp": r.unconstrained_tp,
                    "constrained_tp": r.constrained_tp,
                    "optimal": r.optimal,
                }
                for r in report.rows
            ],
            "summary": report.summary,
        },
        indent=2,
    )


def report_to_csv(
    groups: Sequence[GroupSupply], report: KScanReport, path
) -> None:
    """One row per group: distribution %, prevalence %, max diff %, k range."""
    total = sum(g.n for g in groups)
    prevs = [100.0 * g.positives / g.n for g in groups]
    diff = max(prevs) - min(prevs) if len(groups) > 1 else 0.0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "Group",
                "Group Distribution %",
                "Group Prevalence %",
                "Maximum Prevalence Difference %",
                "Optimal k Range",
            ]
        )
        for g, prev in zip(groups, prevs):
            w.writerow(
                [
                    g.group_key,
                    f"{100.0 * g.n / total:.2f}",
                    f"{prev:.2f}",
                    f"{diff:.2f}",
                    report.summary,
                ]
            )
