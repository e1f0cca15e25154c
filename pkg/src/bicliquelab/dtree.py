"""Gain-ratio decision trees over the nine graph features.

A deliberately small C4.5-style learner: numeric features only, binary
threshold splits (left branch takes <=), candidate thresholds at midpoints
of consecutive distinct values, split chosen by gain ratio. The positive
class throughout is HARD. Following the hardness-classifier convention,
the false positive rate is the fraction of HARD instances mistaken for
EASY, and the false negative rate the reverse.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import Sequence

from .features import FEATURE_NAMES, FeatureVector, Label


@dataclass(frozen=True)
class TrainParams:
    min_leaf: int = 2
    max_depth: int = 25
    min_gain_ratio: float = 0.0

    def __post_init__(self) -> None:
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if self.min_gain_ratio < 0:
            raise ValueError("min_gain_ratio must be >= 0")


@dataclass(frozen=True)
class LeafNode:
    easy_count: int
    hard_count: int

    @property
    def prediction(self) -> Label:
        # ties go to EASY, matching the fpr orientation's conservative side
        return Label.HARD if self.hard_count > self.easy_count else Label.EASY

    @property
    def hard_probability(self) -> float:
        """Laplace-smoothed fraction of HARD at this leaf."""
        return (self.hard_count + 1) / (self.easy_count + self.hard_count + 2)


@dataclass(frozen=True)
class SplitNode:
    feature: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = SplitNode | LeafNode


@dataclass(frozen=True)
class DecisionTree:
    root: TreeNode
    params: TrainParams

    def depth(self) -> int:
        def walk(node: TreeNode) -> int:
            if isinstance(node, LeafNode):
                return 0
            return 1 + max(walk(node.left), walk(node.right))

        return walk(self.root)


@dataclass(frozen=True)
class Condition:
    feature: int
    op: str  # "<=" or ">"
    threshold: float

    def matches(self, values: Sequence[float]) -> bool:
        v = values[self.feature]
        return v <= self.threshold if self.op == "<=" else v > self.threshold


@dataclass(frozen=True)
class Rule:
    conditions: tuple[Condition, ...]
    prediction: Label
    support: int
    confidence: float

    def matches(self, values: Sequence[float]) -> bool:
        return all(c.matches(values) for c in self.conditions)


@dataclass(frozen=True)
class EvalReport:
    """Metrics of one tree on one labeled dataset.

    fpr: HARD instances predicted EASY, over all HARD.
    fnr: EASY instances predicted HARD, over all EASY.
    roc_points are conventional (false-positive-rate, true-positive-rate)
    pairs with HARD as the positive class; pr_points are (recall,
    precision). With a single-class dataset the curves are undefined and
    single_class is set instead.
    """

    fpr: float
    fnr: float
    accuracy: float
    roc_points: tuple[tuple[float, float], ...] | None
    pr_points: tuple[tuple[float, float], ...] | None
    auc: float | None
    single_class: bool = False


def _entropy(easy: int, hard: int) -> float:
    n = easy + hard
    if n == 0 or easy == 0 or hard == 0:
        return 0.0
    pe, ph = easy / n, hard / n
    return -(pe * math.log2(pe) + ph * math.log2(ph))


def _as_training_data(dataset: Sequence[FeatureVector]):
    if not dataset:
        raise ValueError("cannot train on an empty dataset")
    xs, ys = [], []
    for fv in dataset:
        if fv.label is Label.UNLABELED:
            raise ValueError("training data contains UNLABELED vectors")
        xs.append(fv.values())
        ys.append(1 if fv.label is Label.HARD else 0)
    return xs, ys


def _best_split(xs, ys, indices, params: TrainParams):
    """Highest gain-ratio (feature, threshold) at this node, or None.

    Ties break toward the lowest feature index, then the lowest threshold;
    iterating features and thresholds in ascending order with a strict
    improvement test gives exactly that.
    """
    n = len(indices)
    hard_total = sum(ys[i] for i in indices)
    node_entropy = _entropy(n - hard_total, hard_total)
    best = None
    best_ratio = 0.0
    for f in range(len(FEATURE_NAMES)):
        ordered = sorted(indices, key=lambda i: xs[i][f])
        hard_prefix = 0
        for pos in range(n - 1):
            hard_prefix += ys[ordered[pos]]
            a = xs[ordered[pos]][f]
            b = xs[ordered[pos + 1]][f]
            if a == b:
                continue
            threshold = (a + b) / 2
            if threshold >= b:  # midpoint collapsed onto b in float
                threshold = a
            nl = pos + 1
            nr = n - nl
            if nl < params.min_leaf or nr < params.min_leaf:
                continue
            left_entropy = _entropy(nl - hard_prefix, hard_prefix)
            right_entropy = _entropy(nr - (hard_total - hard_prefix), hard_total - hard_prefix)
            gain = node_entropy - (nl / n) * left_entropy - (nr / n) * right_entropy
            pl, pr = nl / n, nr / n
            split_info = -(pl * math.log2(pl) + pr * math.log2(pr))
            ratio = gain / split_info
            if ratio > best_ratio:
                best_ratio = ratio
                best = (f, threshold, ratio)
    if best is None or best[2] <= 0 or best[2] < params.min_gain_ratio:
        return None
    return best


def train_c45(dataset: Sequence[FeatureVector], params: TrainParams = TrainParams()) -> DecisionTree:
    """Grow a tree top-down, greedily maximizing gain ratio at each node."""
    xs, ys = _as_training_data(dataset)

    def build(indices: list[int], depth: int) -> TreeNode:
        hard = sum(ys[i] for i in indices)
        easy = len(indices) - hard
        if hard == 0 or easy == 0 or depth >= params.max_depth:
            return LeafNode(easy, hard)
        choice = _best_split(xs, ys, indices, params)
        if choice is None:
            return LeafNode(easy, hard)
        f, threshold, _ = choice
        left = [i for i in indices if xs[i][f] <= threshold]
        right = [i for i in indices if xs[i][f] > threshold]
        return SplitNode(
            f,
            threshold,
            build(left, depth + 1),
            build(right, depth + 1),
        )

    return DecisionTree(build(list(range(len(xs))), 0), params)


def _leaf_for(tree: DecisionTree, values: Sequence[float]) -> LeafNode:
    node = tree.root
    while isinstance(node, SplitNode):
        node = node.left if values[node.feature] <= node.threshold else node.right
    return node


def predict(tree: DecisionTree, fv: FeatureVector) -> tuple[Label, float]:
    """Predicted class and Laplace-smoothed HARD probability.

    A value equal to a split threshold goes left, down the <= branch.
    """
    leaf = _leaf_for(tree, fv.values())
    return leaf.prediction, leaf.hard_probability


def extract_rules(tree: DecisionTree) -> list[Rule]:
    """One rule per leaf: the conjunction of conditions along its path.

    The rule set covers the whole feature space and rules are mutually
    exclusive, so every vector matches exactly one. Support and confidence
    come from the training counts stored at the leaf.
    """
    rules: list[Rule] = []

    def walk(node: TreeNode, conds: tuple[Condition, ...]) -> None:
        if isinstance(node, LeafNode):
            support = node.easy_count + node.hard_count
            predicted = node.prediction
            hits = node.hard_count if predicted is Label.HARD else node.easy_count
            confidence = hits / support if support else 0.0
            rules.append(Rule(conds, predicted, support, confidence))
            return
        walk(node.left, conds + (Condition(node.feature, "<=", node.threshold),))
        walk(node.right, conds + (Condition(node.feature, ">", node.threshold),))

    walk(tree.root, ())
    return rules


def roc_curve(scores: Sequence[float], labels: Sequence[Label]) -> tuple[tuple[float, float], ...]:
    """ROC points from raw scores, sweeping the threshold high to low.

    At threshold t everything with score >= t is called HARD. The implicit
    +inf threshold contributes (0, 0); the lowest score yields (1, 1).
    Needs both classes present.
    """
    pos = sum(1 for lab in labels if lab is Label.HARD)
    neg = len(labels) - pos
    if pos == 0 or neg == 0:
        raise ValueError("ROC needs both classes present")
    points = [(0.0, 0.0)]
    for threshold in sorted(set(scores), reverse=True):
        tp = fp = 0
        for s, lab in zip(scores, labels):
            if s >= threshold:
                if lab is Label.HARD:
                    tp += 1
                else:
                    fp += 1
        points.append((fp / neg, tp / pos))
    return tuple(points)


def pr_curve(scores: Sequence[float], labels: Sequence[Label]) -> tuple[tuple[float, float], ...]:
    """(recall, precision) points over the same descending threshold sweep."""
    pos = sum(1 for lab in labels if lab is Label.HARD)
    if pos == 0:
        raise ValueError("PR curve needs at least one HARD instance")
    points = []
    for threshold in sorted(set(scores), reverse=True):
        tp = fp = 0
        for s, lab in zip(scores, labels):
            if s >= threshold:
                if lab is Label.HARD:
                    tp += 1
                else:
                    fp += 1
        points.append((tp / pos, tp / (tp + fp)))
    return tuple(points)


def auc_trapezoid(roc_points: Sequence[tuple[float, float]]) -> float:
    """Area under a piecewise-linear ROC curve."""
    area = 0.0
    for (x0, y0), (x1, y1) in zip(roc_points, roc_points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2
    return area


def evaluate(tree: DecisionTree, dataset: Sequence[FeatureVector]) -> EvalReport:
    """Score a tree on labeled data; see EvalReport for the conventions."""
    if not dataset:
        raise ValueError("cannot evaluate on an empty dataset")
    scores: list[float] = []
    labels: list[Label] = []
    hard_as_easy = easy_as_hard = correct = 0
    for fv in dataset:
        if fv.label is Label.UNLABELED:
            raise ValueError("evaluation data contains UNLABELED vectors")
        predicted, p_hard = predict(tree, fv)
        scores.append(p_hard)
        labels.append(fv.label)
        if predicted is fv.label:
            correct += 1
        elif fv.label is Label.HARD:
            hard_as_easy += 1
        else:
            easy_as_hard += 1
    hard_total = sum(1 for lab in labels if lab is Label.HARD)
    easy_total = len(labels) - hard_total
    fpr = hard_as_easy / hard_total if hard_total else 0.0
    fnr = easy_as_hard / easy_total if easy_total else 0.0
    accuracy = correct / len(labels)
    if hard_total == 0 or easy_total == 0:
        return EvalReport(fpr, fnr, accuracy, None, None, None, single_class=True)
    roc = roc_curve(scores, labels)
    return EvalReport(
        fpr,
        fnr,
        accuracy,
        roc,
        pr_curve(scores, labels),
        auc_trapezoid(roc),
    )


def split_dataset(
    dataset: Sequence[FeatureVector], train_fraction: float, seed: int
) -> tuple[list[FeatureVector], list[FeatureVector]]:
    """Stratified train/holdout split with seeded shuffling."""
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must be in (0, 1)")
    rng = random.Random(seed)
    train: list[FeatureVector] = []
    holdout: list[FeatureVector] = []
    for label in (Label.EASY, Label.HARD):
        group = [fv for fv in dataset if fv.label is label]
        rng.shuffle(group)
        cut = round(len(group) * train_fraction)
        train.extend(group[:cut])
        holdout.extend(group[cut:])
    return train, holdout


def kfold_cv(
    dataset: Sequence[FeatureVector],
    k: int = 10,
    params: TrainParams = TrainParams(),
    seed: int = 0,
) -> tuple[list[EvalReport], DecisionTree]:
    """Stratified k-fold cross-validation with seeded shuffling.

    Returns the per-fold reports and the best fold's tree: highest fold
    accuracy, ties broken by lowest fpr, then by fold order.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > len(dataset):
        raise ValueError("k cannot exceed the dataset size")
    rng = random.Random(seed)
    folds: list[list[FeatureVector]] = [[] for _ in range(k)]
    position = 0
    # deal each shuffled class block round-robin, continuing the fold
    # cursor across classes so no fold can end up empty
    for label in (Label.EASY, Label.HARD):
        group = [fv for fv in dataset if fv.label is label]
        rng.shuffle(group)
        for fv in group:
            folds[position % k].append(fv)
            position += 1
    reports: list[EvalReport] = []
    best: tuple[float, float, int, DecisionTree] | None = None
    for fold_index in range(k):
        held = folds[fold_index]
        rest = [fv for j in range(k) if j != fold_index for fv in folds[j]]
        tree = train_c45(rest, params)
        report = evaluate(tree, held)
        reports.append(report)
        key = (-report.accuracy, report.fpr, fold_index)
        if best is None or key < (-best[0], best[1], best[2]):
            best = (report.accuracy, report.fpr, fold_index, tree)
    assert best is not None
    return reports, best[3]


def tree_to_text(tree: DecisionTree) -> str:
    """Human-readable rendering, one node per line, children indented.

    Under a split line the first child is the <= branch, the second the >
    branch.
    """
    lines: list[str] = []

    def walk(node: TreeNode, depth: int) -> None:
        pad = "  " * depth
        if isinstance(node, LeafNode):
            lines.append(
                f"{pad}leaf: {node.prediction.value} "
                f"({node.easy_count}, {node.hard_count})"
            )
            return
        lines.append(f"{pad}{FEATURE_NAMES[node.feature]} <= {node.threshold}")
        walk(node.left, depth + 1)
        walk(node.right, depth + 1)

    walk(tree.root, 0)
    return "\n".join(lines) + "\n"


def tree_to_json(tree: DecisionTree) -> str:
    """Round-trippable structured form; features stored by name."""

    def encode(node: TreeNode):
        if isinstance(node, LeafNode):
            return {"leaf": {"easy": node.easy_count, "hard": node.hard_count}}
        return {
            "feature": FEATURE_NAMES[node.feature],
            "threshold": node.threshold,
            "left": encode(node.left),
            "right": encode(node.right),
        }

    doc = {
        "params": {
            "min_leaf": tree.params.min_leaf,
            "max_depth": tree.params.max_depth,
            "min_gain_ratio": tree.params.min_gain_ratio,
        },
        "root": encode(tree.root),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def tree_from_json(text: str) -> DecisionTree:
    doc = json.loads(text)

    def decode(node) -> TreeNode:
        if "leaf" in node:
            return LeafNode(node["leaf"]["easy"], node["leaf"]["hard"])
        return SplitNode(
            FEATURE_NAMES.index(node["feature"]),
            float(node["threshold"]),
            decode(node["left"]),
            decode(node["right"]),
        )

    params = TrainParams(**doc["params"])
    return DecisionTree(decode(doc["root"]), params)


def eval_csv_text(points: Sequence[tuple[float, float]], columns: tuple[str, str]) -> str:
    """Two-column CSV used for both ROC and PR point exports."""
    lines = [",".join(columns)]
    lines.extend(f"{x!r},{y!r}" for x, y in points)
    return "\n".join(lines) + "\n"
