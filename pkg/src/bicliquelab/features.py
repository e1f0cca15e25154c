"""Per-graph feature extraction, hardness labels and the order parameter.

Nine numeric features summarize a graph for the hardness classifier; the
order parameter pi = size_max / |V| (and its log2) positions an instance
on the easy/hard spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from decimal import ROUND_HALF_EVEN, Decimal
from enum import Enum
from fractions import Fraction

from .bigraph import (
    BipartiteGraph,
    GramMatrix,
    GramSide,
    adjacency_matrix,
    gram,
    gram_t,
)
from .solver import (
    SearchBudget,
    find_max_weight_of_size,
    size_max_via_gram,
    weight_upper_bound,
)

# Entries below this value do not witness a 2x2 (or larger) all-ones block,
# so the pair-frequency features count entries >= this threshold.
PAIR_ENTRY_THRESHOLD = 2

# Default candidate budget for the EASY/HARD labeling run.
DEFAULT_LABEL_BUDGET = 1_000_000

FEATURE_NAMES = ("u", "v", "e", "comb", "social", "wmax", "zmax", "fw2", "fs2")

NEG_INF = float("-inf")


class Label(Enum):
    EASY = "EASY"
    HARD = "HARD"
    UNLABELED = "UNLABELED"


@dataclass(frozen=True)
class FeatureVector:
    u_card: int
    v_card: int
    e_card: int
    comb_estimate: int
    social_degree: Fraction
    weight_max: int
    size_max: int
    freq_weight2: int
    freq_size2: int
    label: Label = Label.UNLABELED

    def __post_init__(self) -> None:
        if self.size_max > self.v_card:
            raise ValueError("size_max cannot exceed v_card")
        if self.weight_max > self.u_card:
            raise ValueError("weight_max cannot exceed u_card")

    def values(self) -> tuple[float, ...]:
        """Numeric view in FEATURE_NAMES order, for the classifier."""
        return (
            float(self.u_card),
            float(self.v_card),
            float(self.e_card),
            float(self.comb_estimate),
            float(self.social_degree),
            float(self.weight_max),
            float(self.size_max),
            float(self.freq_weight2),
            float(self.freq_size2),
        )

    def with_label(self, label: Label) -> "FeatureVector":
        return replace(self, label=label)


@dataclass(frozen=True)
class OrderParameter:
    pi: Fraction
    pi_log2: float


def comb_estimate(gram_u: GramMatrix) -> int:
    """Product of the three largest off-diagonal gram entries.

    A coarse proxy for how many candidate combinations the search may
    touch. With fewer than three off-diagonal entries the available ones
    are multiplied; a one-actor graph scores 0.
    """
    if gram_u.side is not GramSide.U:
        raise ValueError("comb_estimate expects the U-side gram matrix")
    entries = gram_u.lower_triangular_entries()
    if not entries:
        return 0
    top = sorted(entries, reverse=True)[:3]
    return math.prod(top)


def social_degree(u_card: int, v_card: int, w: int) -> Fraction:
    """(|U| * |V|) / w, kept exact as a rational."""
    if w <= 0:
        raise ValueError("w must be positive")
    return Fraction(u_card * v_card, w)


def count_weight2(gram_u: GramMatrix, threshold: int = PAIR_ENTRY_THRESHOLD) -> int:
    """Number of actor pairs sharing at least `threshold` targets."""
    if gram_u.side is not GramSide.U:
        raise ValueError("count_weight2 expects the U-side gram matrix")
    return sum(1 for e in gram_u.lower_triangular_entries() if e >= threshold)


def count_size2(gram_v: GramMatrix, threshold: int = PAIR_ENTRY_THRESHOLD) -> int:
    """Number of target pairs shared by at least `threshold` actors."""
    if gram_v.side is not GramSide.V:
        raise ValueError("count_size2 expects the V-side gram matrix")
    return sum(1 for e in gram_v.lower_triangular_entries() if e >= threshold)


def extract_features(graph: BipartiteGraph, w: int | None = None) -> FeatureVector:
    """Compute the nine-feature vector; label starts UNLABELED.

    w is the observation count behind the graph; it defaults to |E| when
    the graph did not come from an observation log.
    """
    matrix = adjacency_matrix(graph)
    gram_u = gram(matrix)
    gram_v = gram_t(matrix)
    e_card = graph.edge_count
    if w is None:
        w = e_card
    return FeatureVector(
        u_card=graph.u_count,
        v_card=graph.v_count,
        e_card=e_card,
        comb_estimate=comb_estimate(gram_u),
        social_degree=social_degree(graph.u_count, graph.v_count, w),
        weight_max=weight_upper_bound(gram_v, 2),
        size_max=size_max_via_gram(gram_u),
        freq_weight2=count_weight2(gram_u),
        freq_size2=count_size2(gram_v),
    )


def order_parameter(fv: FeatureVector) -> OrderParameter:
    """pi = size_max / |V| in [0, 1]; pi_log2 is -inf exactly at pi = 0."""
    pi = Fraction(fv.size_max, fv.v_card)
    pi_log2 = NEG_INF if pi == 0 else math.log2(pi)
    return OrderParameter(pi, pi_log2)


def label_instance(
    graph: BipartiteGraph,
    budget: SearchBudget = SearchBudget(DEFAULT_LABEL_BUDGET),
) -> Label:
    """EASY iff the size-maximal search finishes within the budget.

    The search target is z_max from the gram criterion, so the run always
    has a witness to find; only running out of budget makes it HARD. With
    z_max < 2 there is nothing to search and the graph is EASY at zero
    cost. An unlimited budget is accepted but labels everything EASY.
    """
    z_max = size_max_via_gram(gram(adjacency_matrix(graph)))
    if z_max < 2:
        return Label.EASY
    report = find_max_weight_of_size(graph, z_max, budget)
    return Label.HARD if report.budget_exhausted else Label.EASY


def format_fraction(value: Fraction, digits: int = 6) -> str:
    """Exact decimal rendering with a fixed number of fractional digits.

    Rounds half to even, like the decimal module; used wherever rationals
    enter CSV output so files stay byte-stable.
    """
    quantum = Decimal(1).scaleb(-digits)
    dec = (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
        quantum, rounding=ROUND_HALF_EVEN
    )
    return format(dec, "f")


def write_features_csv(rows: list[FeatureVector], path: str) -> None:
    """Write feature vectors as CSV with the fixed nine-column header."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(features_csv_text(rows))


def features_csv_text(rows: list[FeatureVector]) -> str:
    lines = [",".join(FEATURE_NAMES + ("label",))]
    for fv in rows:
        lines.append(
            ",".join(
                (
                    str(fv.u_card),
                    str(fv.v_card),
                    str(fv.e_card),
                    str(fv.comb_estimate),
                    format_fraction(fv.social_degree),
                    str(fv.weight_max),
                    str(fv.size_max),
                    str(fv.freq_weight2),
                    str(fv.freq_size2),
                    fv.label.value,
                )
            )
        )
    return "\n".join(lines) + "\n"


def read_features_csv(text: str) -> list[FeatureVector]:
    """Parse feature CSV text back into vectors; # comment lines skipped."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("feature CSV has no header")
    header = tuple(lines[0].split(","))
    if header != FEATURE_NAMES + ("label",):
        raise ValueError(f"unexpected feature CSV header: {lines[0]!r}")
    out = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != 10:
            raise ValueError(f"bad feature CSV row: {ln!r}")
        out.append(
            FeatureVector(
                u_card=int(cells[0]),
                v_card=int(cells[1]),
                e_card=int(cells[2]),
                comb_estimate=int(cells[3]),
                social_degree=Fraction(cells[4]),
                weight_max=int(cells[5]),
                size_max=int(cells[6]),
                freq_weight2=int(cells[7]),
                freq_size2=int(cells[8]),
                label=Label(cells[9]),
            )
        )
    return out
