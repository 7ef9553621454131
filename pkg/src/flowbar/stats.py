"""Paired-difference statistics over task metrics.

The Wilcoxon signed-rank test is exact (full sign-assignment distribution,
computed by dynamic programming over doubled ranks) up to a configurable n,
and a tie-corrected, continuity-corrected normal approximation beyond. The
pairing step matches each control session with a random other participant's
treatment session on the same topic, and the whole analysis repeats that
random pairing several times, reporting mean differences and mean p-values.
"""

from __future__ import annotations

import json
import logging
import random
import statistics
from dataclasses import dataclass

from .metrics import METRIC_SPECS, TaskMetrics, compute_metrics
from .sessions import TaskSession

logger = logging.getLogger(__name__)

EXACT_THRESHOLD = 25
DEFAULT_N_REPEATS = 5

STAR_THRESHOLDS = ((0.01, "***"), (0.05, "**"), (0.10, "*"))


@dataclass(frozen=True)
class WilcoxonResult:
    w: float  # min(W+, W-)
    p_value: float  # two-sided
    n: int  # differences remaining after zero handling
    w_plus: float
    w_minus: float
    method: str  # "exact" | "normal" | "degenerate"

    @property
    def degenerate(self) -> bool:
        return self.method == "degenerate"


def _average_ranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _exact_p(doubled_ranks: list[int], w2: int) -> float:
    """P(2*W+ <= w2) * 2 under the sign-flip null, by subset-sum counting."""
    ways = [0] * (sum(doubled_ranks) + 1)
    ways[0] = 1
    for r in doubled_ranks:
        for s in range(len(ways) - 1, r - 1, -1):
            ways[s] += ways[s - r]
    below = sum(ways[: w2 + 1])
    return min(1.0, 2.0 * below / (2 ** len(doubled_ranks)))


def wilcoxon_signed_rank(
    differences: list[float],
    zero_method: str = "discard",
    exact_threshold: int = EXACT_THRESHOLD,
) -> WilcoxonResult:
    """Two-sided Wilcoxon signed-rank test of the paired differences.

    zero_method "discard" drops zero differences before ranking (the
    classical treatment); "pratt" ranks them alongside the rest but keeps
    them out of both rank sums. All differences zero yields the degenerate
    p = 1.0.
    """
    if not differences:
        raise ValueError("need at least one difference")
    if zero_method not in ("discard", "pratt"):
        raise ValueError(f"unknown zero_method {zero_method!r}")

    if zero_method == "discard":
        kept = [d for d in differences if d != 0]
        ranked_values = [abs(d) for d in kept]
    else:
        kept = list(differences)
        ranked_values = [abs(d) for d in kept]

    if not any(d != 0 for d in kept):
        return WilcoxonResult(w=0.0, p_value=1.0, n=0, w_plus=0.0, w_minus=0.0, method="degenerate")

    ranks = _average_ranks(ranked_values)
    nonzero = [(d, r) for d, r in zip(kept, ranks) if d != 0]
    n = len(nonzero)
    # Doubling makes average ranks (multiples of 0.5) exact integers.
    doubled = [round(2 * r) for _, r in nonzero]
    w2_plus = sum(dr for (d, _), dr in zip(nonzero, doubled) if d > 0)
    w2_minus = sum(dr for (d, _), dr in zip(nonzero, doubled) if d < 0)
    w_plus, w_minus = w2_plus / 2, w2_minus / 2
    w = min(w_plus, w_minus)

    if n <= exact_threshold:
        p = _exact_p(doubled, min(w2_plus, w2_minus))
        method = "exact"
    else:
        mu = sum(dr for dr in doubled) / 2 / 2  # sum of ranks / 2
        var = sum((dr / 2) ** 2 for dr in doubled) / 4  # tie-corrected by construction
        z = (w - mu + 0.5) / var**0.5
        p = min(1.0, 2 * statistics.NormalDist().cdf(z))
        method = "normal"
    return WilcoxonResult(w=w, p_value=p, n=n, w_plus=w_plus, w_minus=w_minus, method=method)


def _random_matching(
    offs: list[TaskSession], ons: list[TaskSession], rng: random.Random
) -> list[tuple[TaskSession, TaskSession]]:
    """Uniform random matching without replacement, never pairing a
    participant with themself. Retries shuffles, then falls back to greedy."""
    if not offs or not ons:
        return []
    m = min(len(offs), len(ons))
    for _ in range(1000):
        off_order = rng.sample(offs, len(offs))[:m]
        on_order = rng.sample(ons, len(ons))[:m]
        if all(a.participant_id != b.participant_id for a, b in zip(off_order, on_order)):
            return list(zip(off_order, on_order))
    pairs = []
    remaining = rng.sample(ons, len(ons))
    for off in rng.sample(offs, len(offs)):
        pick = next((on for on in remaining if on.participant_id != off.participant_id), None)
        if pick is not None:
            pairs.append((off, pick))
            remaining = [on for on in remaining if on is not pick]
    return pairs


def pair_observations(
    sessions: list[TaskSession],
    seed: int,
    prefer_same_order: bool = True,
    strict_order: bool = False,
) -> list[tuple[TaskSession, TaskSession]]:
    """Random (off, on) pairs within each topic, across participants.

    Matching is without replacement; leftovers are dropped. Pairs sharing
    the same task order are preferred (required with strict_order). A topic
    missing either condition is skipped with a warning.
    """
    rng = random.Random(seed)
    pairs: list[tuple[TaskSession, TaskSession]] = []
    topics = sorted({s.topic for s in sessions})
    for topic in topics:
        offs = [s for s in sessions if s.topic == topic and s.condition == "cfb_off"]
        ons = [s for s in sessions if s.topic == topic and s.condition == "cfb_on"]
        if not offs or not ons:
            logger.warning("topic %r lacks sessions in one condition; skipped", topic)
            continue
        if prefer_same_order or strict_order:
            leftovers_off, leftovers_on = [], []
            for order in ("first", "second"):
                got = _random_matching(
                    [s for s in offs if s.task_order == order],
                    [s for s in ons if s.task_order == order],
                    rng,
                )
                pairs.extend(got)
                used_off = {id(a) for a, _ in got}
                used_on = {id(b) for _, b in got}
                leftovers_off += [s for s in offs if s.task_order == order and id(s) not in used_off]
                leftovers_on += [s for s in ons if s.task_order == order and id(s) not in used_on]
            if not strict_order:
                pairs.extend(_random_matching(leftovers_off, leftovers_on, rng))
        else:
            pairs.extend(_random_matching(offs, ons, rng))
    return pairs


@dataclass(frozen=True)
class MetricRow:
    group: str
    key: str
    label: str
    mean_difference: float | None  # mean over repeats of mean (On - Off)
    mean_p_value: float | None
    stars: str
    n_pairs: tuple[int, ...]  # usable pairs per repeat

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "key": self.key,
            "label": self.label,
            "mean_difference": self.mean_difference,
            "mean_p_value": self.mean_p_value,
            "stars": self.stars,
            "n_pairs": list(self.n_pairs),
        }


@dataclass(frozen=True)
class AnalysisReport:
    n_repeats: int
    base_seed: int
    n_sessions: int
    topics: tuple[str, ...]
    rows: tuple[MetricRow, ...]

    def to_dict(self) -> dict:
        return {
            "n_repeats": self.n_repeats,
            "base_seed": self.base_seed,
            "n_sessions": self.n_sessions,
            "topics": list(self.topics),
            "metrics": [row.to_dict() for row in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def to_text(self) -> str:
        """Aligned table: group, metric, mean pairwise difference, mean p."""
        header = f"{'group':<12}{'metric':<52}{'mean diff (on-off)':>20}{'mean p':>10}  sig"
        lines = [header, "-" * len(header)]
        for row in self.rows:
            diff = f"{row.mean_difference:.4f}" if row.mean_difference is not None else "n/a"
            p = f"{row.mean_p_value:.4f}" if row.mean_p_value is not None else "n/a"
            lines.append(f"{row.group:<12}{row.label:<52}{diff:>20}{p:>10}  {row.stars}")
        return "\n".join(lines) + "\n"


def stars_for(p: float | None) -> str:
    if p is None:
        return ""
    for threshold, mark in STAR_THRESHOLDS:
        if p < threshold:
            return mark
    return ""


def analyze(
    sessions: list[TaskSession],
    n_repeats: int = DEFAULT_N_REPEATS,
    base_seed: int = 0,
    zero_method: str = "discard",
    exact_threshold: int = EXACT_THRESHOLD,
    prefer_same_order: bool = True,
    strict_order: bool = False,
) -> AnalysisReport:
    """Repeat random pairing n_repeats times and test each metric per repeat.

    A pair where either side lacks a metric is excluded for that metric
    only. Reported are the mean of per-repeat mean differences and the mean
    p-value, with significance stars on the mean p.
    """
    if not sessions:
        raise ValueError("no sessions to analyze")
    metrics_by_id: dict[int, TaskMetrics] = {id(s): compute_metrics(s) for s in sessions}

    per_metric_diffs: dict[str, list[float]] = {spec.key: [] for spec in METRIC_SPECS}
    per_metric_ps: dict[str, list[float]] = {spec.key: [] for spec in METRIC_SPECS}
    per_metric_npairs: dict[str, list[int]] = {spec.key: [] for spec in METRIC_SPECS}

    for repeat in range(n_repeats):
        pairs = pair_observations(
            sessions, seed=base_seed + repeat, prefer_same_order=prefer_same_order, strict_order=strict_order
        )
        for spec in METRIC_SPECS:
            diffs = []
            for off, on in pairs:
                off_v = getattr(metrics_by_id[id(off)], spec.key)
                on_v = getattr(metrics_by_id[id(on)], spec.key)
                if off_v is not None and on_v is not None:
                    diffs.append(on_v - off_v)
            per_metric_npairs[spec.key].append(len(diffs))
            if diffs:
                per_metric_diffs[spec.key].append(sum(diffs) / len(diffs))
                per_metric_ps[spec.key].append(
                    wilcoxon_signed_rank(diffs, zero_method=zero_method, exact_threshold=exact_threshold).p_value
                )

    rows = []
    for spec in METRIC_SPECS:
        diffs = per_metric_diffs[spec.key]
        ps = per_metric_ps[spec.key]
        mean_diff = sum(diffs) / len(diffs) if diffs else None
        mean_p = sum(ps) / len(ps) if ps else None
        rows.append(
            MetricRow(
                group=spec.group,
                key=spec.key,
                label=spec.label,
                mean_difference=mean_diff,
                mean_p_value=mean_p,
                stars=stars_for(mean_p),
                n_pairs=tuple(per_metric_npairs[spec.key]),
            )
        )
    return AnalysisReport(
        n_repeats=n_repeats,
        base_seed=base_seed,
        n_sessions=len(sessions),
        topics=tuple(sorted({s.topic for s in sessions})),
        rows=tuple(rows),
    )
