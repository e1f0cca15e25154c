"""Acceptance gate: every advertised behavioral guarantee, end to end.

Each test covers one guarantee and prints a single line
``ACCEPTANCE <name>: PASS (<detail>)`` on success (visible with -s), or a
FAIL line before the assertion error when it does not hold.
"""

import json
import math
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from bicliquelab.bigraph import adjacency_matrix, gram
from bicliquelab.cli import main
from bicliquelab.dtree import (
    TrainParams,
    auc_trapezoid,
    extract_rules,
    kfold_cv,
    pr_curve,
    predict,
    roc_curve,
    split_dataset,
    train_c45,
)
from bicliquelab.features import FEATURE_NAMES, Label, extract_features
from bicliquelab.phaselab import (
    EnsembleConfig,
    PowerLawGenerator,
    gen_uniform,
    generate_instance,
    run_sweep,
)
from bicliquelab.solver import (
    BlacklistMode,
    SearchBudget,
    brute_force_oracle,
    decide,
    find_max_weight_of_size,
    size_max_via_gram,
)
from helpers import neighbor_sets, planted_dataset


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {name}: FAIL")
        raise


def passed(name, detail):
    print(f"\nACCEPTANCE {name}: PASS ({detail})")


@pytest.fixture(scope="module")
def small_ensemble():
    """500 seeded uniform graphs, sides 2..10, p cycling 0.1..0.9."""
    graphs = []
    for i in range(500):
        u = 2 + (i * 7) % 9
        v = 2 + (i * 3) % 9
        p = 0.1 * (1 + i % 9)
        graphs.append(gen_uniform(u, v, p, i))
    return graphs


@pytest.fixture(scope="module")
def phase_config():
    return EnsembleConfig(
        generator=PowerLawGenerator(60, 120, 100, 2.0),
        instance_count=2000,
        seed=20240817,
        z_values=(4,),
        budget=SearchBudget(1_000_000),
    )


def test_oracle_equivalence(small_ensemble):
    with criterion("oracle-equivalence"):
        start = time.perf_counter()
        queries = 0
        for g in small_ensemble:
            for t in range(2, 7):
                for z in range(2, 7):
                    expected, _ = brute_force_oracle(g, t, z)
                    report, verdict = decide(g, t, z)
                    assert verdict is expected
                    assert not report.budget_exhausted
                    queries += 1
        elapsed = time.perf_counter() - start
        assert elapsed < 120
    passed(
        "oracle-equivalence",
        f"{len(small_ensemble)} graphs, {queries} decide queries, "
        f"100% agreement, {elapsed:.1f}s",
    )


def test_gram_correctness(small_ensemble):
    with criterion("gram-correctness"):
        for g in small_ensemble:
            gm = gram(adjacency_matrix(g))
            sets = neighbor_sets(g)
            for k in range(g.u_count):
                for l in range(g.u_count):
                    assert gm.entry(k, l) == len(sets[k] & sets[l])
            z_max = size_max_via_gram(gm)
            _, witness = brute_force_oracle(g, 2, 2)
            if witness is None:
                assert z_max == 0
            else:
                assert witness.size == z_max
    passed(
        "gram-correctness",
        f"{len(small_ensemble)} graphs, every entry and every z_max exact",
    )


def test_polynomial_shortcut_consistency(small_ensemble):
    with criterion("polynomial-shortcut-consistency"):
        checks = 0
        for g in small_ensemble:
            z_max = size_max_via_gram(gram(adjacency_matrix(g)))
            for z in range(2, 7):
                _, verdict = decide(g, 2, z)
                assert verdict is (z_max >= z)
                checks += 1
    passed(
        "polynomial-shortcut-consistency",
        f"decide(G,2,z) matched the gram criterion on {checks} queries",
    )


def test_pruning_soundness(small_ensemble):
    with criterion("pruning-soundness"):
        runs = 0
        for g in small_ensemble:
            for t in (2, 4):
                for z in range(2, 7):
                    on, v_on = decide(g, t, z)
                    off, v_off = decide(g, t, z, blacklist_mode=BlacklistMode.OFF)
                    assert v_on is v_off
                    assert on.combinations_explored <= off.combinations_explored
                    runs += 1
    passed(
        "pruning-soundness",
        f"{runs} on/off pairs: identical verdicts, pruned cost never higher",
    )


def test_sweep_byte_determinism(tmp_path):
    with criterion("sweep-byte-determinism"):
        doc = {
            "generator": {"kind": "uniform", "u_n": 8, "v_n": 8, "edge_prob": 0.5},
            "instance_count": 200,
            "seed": 7,
            "z_values": [3],
            "budget": {"max_combinations": 500},
        }
        cfg = tmp_path / "config.json"
        cfg.write_text(json.dumps(doc), encoding="utf-8")
        outputs = []
        for run, jobs in enumerate(("1", "1", "8", "8")):
            out = tmp_path / f"sweep_{run}.csv"
            assert main(["sweep", "--config", str(cfg), "--out", str(out),
                         "--jobs", jobs]) == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2] == outputs[3]
    passed(
        "sweep-byte-determinism",
        "200-instance config, jobs 1/1/8/8: four byte-identical CSVs",
    )


def test_phase_shape(phase_config):
    with criterion("phase-shape"):
        start = time.perf_counter()
        result = run_sweep(phase_config, jobs=8)
        elapsed = time.perf_counter() - start
        assert elapsed < 1800

        rows = result.rows
        assert rows
        assert all(not r.underflow or r.n >= 0 for r in rows)
        finite = [r for r in rows if not r.underflow]
        peak = max(finite, key=lambda r: r.cost_p50)
        # (a) the costliest bin sits inside the transition window
        assert -5 < peak.bin_low and peak.bin_high < -0.25
        # (b) the high-pi side is cheap: at most 20% of the peak median
        for r in finite:
            if r.bin_low >= -0.25:
                assert r.cost_p50 <= 0.2 * peak.cost_p50
        # (c) bins entirely below log2(z / v_pool) cannot be solvable
        floor_log = math.log2(4 / 120)
        forced = [r for r in rows if r.underflow or r.bin_high <= floor_log]
        for r in forced:
            assert r.p_solvable == 0
    passed(
        "phase-shape",
        f"{phase_config.instance_count} instances in {elapsed:.0f}s; peak median "
        f"{peak.cost_p50} in [{peak.bin_low}, {peak.bin_high}); "
        f"{len(forced)} forced-insoluble bins",
    )


def test_distance_sweep_profile(phase_config):
    with criterion("distance-sweep-profile"):
        at_zero = []
        at_far = []
        contributing = 0
        for index in range(phase_config.instance_count):
            graph, w = generate_instance(phase_config, index)
            z_max = extract_features(graph, w).size_max
            if z_max < 2:
                continue
            contributing += 1
            budget = phase_config.budget
            zero = find_max_weight_of_size(graph, z_max, budget, guarantee_check=True)
            at_zero.append(zero.combinations_explored)
            far = find_max_weight_of_size(graph, 2, budget, guarantee_check=True)
            at_far.append(far.combinations_explored)
            if z_max + 1 <= graph.v_count:
                negative = find_max_weight_of_size(
                    graph, z_max + 1, budget, guarantee_check=True
                )
                assert negative.combinations_explored == 0
                assert not negative.found
        mean_zero = sum(at_zero) / len(at_zero)
        mean_far = sum(at_far) / len(at_far)
        assert mean_zero > mean_far
    passed(
        "distance-sweep-profile",
        f"{contributing} instances: mean cost {mean_zero:.1f} at d=0 vs "
        f"{mean_far:.1f} at the largest feasible d; d=-1 always free",
    )


def test_classifier_rule_recovery():
    with criterion("classifier-rule-recovery"):
        data, _ = planted_dataset(2000, seed=20240817, flip=0.05)

        def truth(fv):
            return Label.HARD if fv.size_max > 3 and fv.v_card > 57 else Label.EASY

        train, holdout = split_dataset(data, 0.7, seed=20240817)
        # min_leaf 8 keeps the 5% label noise from growing junk leaves
        tree = train_c45(train, TrainParams(min_leaf=8))

        correct = 0
        scores, truths = [], []
        for fv in holdout:
            predicted, p_hard = predict(tree, fv)
            actual = truth(fv)
            correct += predicted is actual
            scores.append(p_hard)
            truths.append(actual)
        accuracy = correct / len(holdout)
        auc = auc_trapezoid(roc_curve(scores, truths))
        assert accuracy >= 0.95
        assert auc >= 0.95

        split_features = {
            FEATURE_NAMES[c.feature]
            for rule in extract_rules(tree)
            for c in rule.conditions
        }
        assert "zmax" in split_features
        assert "v" in split_features

        reports, best = kfold_cv(data, k=10, params=TrainParams(min_leaf=8))
        assert len(reports) == 10
        assert best is not None
    passed(
        "classifier-rule-recovery",
        f"holdout accuracy {accuracy:.3f}, AUC {auc:.3f} against the planted "
        f"rule; splits include zmax and v; 10-fold CV completed",
    )


def test_roc_pr_exactness():
    with criterion("roc-pr-exactness"):
        scores = (0.9, 0.8, 0.7, 0.6, 0.5)
        labels = (Label.HARD, Label.HARD, Label.EASY, Label.HARD, Label.EASY)
        roc = roc_curve(scores, labels)
        assert roc == (
            (0.0, 0.0),
            (0.0, 1 / 3),
            (0.0, 2 / 3),
            (0.5, 2 / 3),
            (0.5, 1.0),
            (1.0, 1.0),
        )
        assert auc_trapezoid(roc) == pytest.approx(5 / 6)
        assert pr_curve(scores, labels) == (
            (1 / 3, 1.0),
            (2 / 3, 1.0),
            (2 / 3, 2 / 3),
            (1.0, 3 / 4),
            (1.0, 3 / 5),
        )

        perfect = roc_curve(
            (0.9, 0.8, 0.3, 0.1),
            (Label.HARD, Label.HARD, Label.EASY, Label.EASY),
        )
        assert auc_trapezoid(perfect) == 1.0
        flat = roc_curve(
            (0.6, 0.6, 0.6, 0.6),
            (Label.HARD, Label.HARD, Label.EASY, Label.EASY),
        )
        assert auc_trapezoid(flat) == 0.5
    passed(
        "roc-pr-exactness",
        "6-point hand fixture exact; AUC 1.0 perfect and 0.5 uninformative",
    )
