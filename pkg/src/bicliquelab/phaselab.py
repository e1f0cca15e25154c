"""Seeded ensembles and phase-transition sweeps.

Randomness contract (stable across runs, worker counts and platforms, and
intended to be portable to reimplementations):

* Generator: numpy's Philox bit generator (Philox 4x64 with 10 rounds).
* Instance substream: key = (ensemble_seed XOR instance_index) mod 2**64,
  counter starting at zero.
* Zero-edge retries: attempt k re-uses the same key with the counter
  advanced by k * 2**128 (numpy's jumped(k)).
* Doubles: numpy Generator.random, i.e. next_uint64 >> 11 times 2**-53.
* Uniform graphs: one double per (u, v) cell in row-major order; the edge
  exists iff the double is < edge_prob.
* Power-law logs: per observation two doubles, actor then target. The
  actor index is floor(d * u_pool); the target rank is the right-bisect of
  d in the normalized cumulative weights of rank**(-exponent) for ranks
  1..v_pool (float64 running sum in rank order).

Sweep aggregation is order independent: costs are pooled per bin and
sorted before percentile extraction, so the output does not depend on the
worker count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Callable, Iterable

import numpy as np
from numpy.random import Generator, Philox

from .bigraph import BipartiteGraph, _graph_from_records
from .features import NEG_INF, extract_features, format_fraction, order_parameter
from .solver import SearchBudget, find_max_weight_of_size

DEFAULT_BIN_WIDTH = 0.25
_MAX_ZERO_EDGE_RETRIES = 64
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class UniformGenerator:
    """Independent edges: u_n x v_n cells, each present with edge_prob."""

    u_n: int
    v_n: int
    edge_prob: float

    def __post_init__(self) -> None:
        if self.u_n < 1 or self.v_n < 1:
            raise ValueError("generator sides must be >= 1")
        if not 0 < self.edge_prob < 1:
            raise ValueError("edge_prob must lie strictly between 0 and 1")


@dataclass(frozen=True)
class PowerLawGenerator:
    """Observation-log model: uniform actors, power-law target popularity."""

    u_pool: int
    v_pool: int
    w_observations: int
    exponent: float

    def __post_init__(self) -> None:
        if self.u_pool < 1 or self.v_pool < 1:
            raise ValueError("generator pools must be >= 1")
        if self.w_observations < 1:
            raise ValueError("w_observations must be >= 1")
        if self.exponent <= 1:
            raise ValueError("exponent must be > 1")


@dataclass(frozen=True)
class EnsembleConfig:
    generator: UniformGenerator | PowerLawGenerator
    instance_count: int
    seed: int
    z_values: tuple[int, ...]
    budget: SearchBudget

    def __post_init__(self) -> None:
        if self.instance_count < 1:
            raise ValueError("instance_count must be >= 1")
        if not 0 <= self.seed <= _SEED_MASK:
            raise ValueError("seed must fit in 64 bits")
        if not self.z_values:
            raise ValueError("z_values must be nonempty")
        if any(z < 2 for z in self.z_values):
            raise ValueError("every z must be >= 2")


def config_to_json(config: EnsembleConfig) -> str:
    """Canonical JSON mirror of the config, field for field."""
    gen = config.generator
    if isinstance(gen, UniformGenerator):
        gen_doc = {
            "kind": "uniform",
            "u_n": gen.u_n,
            "v_n": gen.v_n,
            "edge_prob": gen.edge_prob,
        }
    else:
        gen_doc = {
            "kind": "powerlaw",
            "u_pool": gen.u_pool,
            "v_pool": gen.v_pool,
            "w_observations": gen.w_observations,
            "exponent": gen.exponent,
        }
    doc = {
        "generator": gen_doc,
        "instance_count": config.instance_count,
        "seed": config.seed,
        "z_values": list(config.z_values),
        "budget": {"max_combinations": config.budget.max_combinations},
    }
    return json.dumps(doc, sort_keys=True, separators=(", ", ": "))


def config_from_json(text: str) -> EnsembleConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"config is not valid JSON: {exc}") from exc
    try:
        gen_doc = dict(doc["generator"])
        kind = gen_doc.pop("kind")
        if kind == "uniform":
            generator: UniformGenerator | PowerLawGenerator = UniformGenerator(**gen_doc)
        elif kind == "powerlaw":
            generator = PowerLawGenerator(**gen_doc)
        else:
            raise ValueError(f"unknown generator kind {kind!r}")
        budget_doc = doc.get("budget") or {}
        return EnsembleConfig(
            generator=generator,
            instance_count=int(doc["instance_count"]),
            seed=int(doc["seed"]),
            z_values=tuple(int(z) for z in doc["z_values"]),
            budget=SearchBudget(budget_doc.get("max_combinations")),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"config is missing or mistypes a field: {exc}") from exc


def _stream(seed: int, retry: int = 0) -> Generator:
    bg = Philox(key=seed & _SEED_MASK)
    if retry:
        bg = bg.jumped(retry)
    return Generator(bg)


def gen_uniform(u_n: int, v_n: int, edge_prob: float, seed: int) -> BipartiteGraph:
    """Sample one uniform bipartite graph from the documented stream.

    A zero-edge sample is regenerated from the next retry substream, a
    bounded number of times.
    """
    params = UniformGenerator(u_n, v_n, edge_prob)
    for retry in range(_MAX_ZERO_EDGE_RETRIES):
        cells = _stream(seed, retry).random((params.u_n, params.v_n))
        rows = []
        for i in range(params.u_n):
            mask = 0
            row = cells[i]
            for j in range(params.v_n):
                if row[j] < params.edge_prob:
                    mask |= 1 << j
            rows.append(mask)
        if any(rows):
            return BipartiteGraph(
                params.u_n,
                params.v_n,
                tuple(rows),
                tuple(f"u{i}" for i in range(params.u_n)),
                tuple(f"v{j}" for j in range(params.v_n)),
            )
    raise RuntimeError(
        f"no edges after {_MAX_ZERO_EDGE_RETRIES} attempts; "
        f"edge_prob {edge_prob} is too small for a {u_n}x{v_n} graph"
    )


def _power_law_cdf(v_pool: int, exponent: float) -> np.ndarray:
    weights = np.arange(1, v_pool + 1, dtype=np.float64) ** (-float(exponent))
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    return cdf


def powerlaw_records(
    u_pool: int, v_pool: int, w_observations: int, exponent: float, seed: int
) -> tuple[tuple[str, str], ...]:
    """The w (actor, target) label pairs behind one power-law instance."""
    params = PowerLawGenerator(u_pool, v_pool, w_observations, exponent)
    cdf = _power_law_cdf(params.v_pool, params.exponent)
    doubles = _stream(seed).random((params.w_observations, 2))
    records = []
    for k in range(params.w_observations):
        actor = min(int(doubles[k, 0] * params.u_pool), params.u_pool - 1)
        rank = int(np.searchsorted(cdf, doubles[k, 1], side="right"))
        records.append((f"u{actor}", f"v{rank + 1}"))
    return tuple(records)


def gen_powerlaw(
    u_pool: int, v_pool: int, w_observations: int, exponent: float, seed: int
) -> tuple[BipartiteGraph, int]:
    """Sample an observation log and build its graph.

    Actors are uniform over the pool; target popularity follows a discrete
    power law over ranks 1..v_pool. Vertices never observed are dropped,
    exactly as when ingesting a log from text, so the graph sides can be
    smaller than the pools. Returns (graph, w).
    """
    records = powerlaw_records(u_pool, v_pool, w_observations, exponent, seed)
    return _graph_from_records(records), len(records)


def instance_seed(config_seed: int, index: int) -> int:
    return (config_seed ^ index) & _SEED_MASK


def generate_instance(config: EnsembleConfig, index: int) -> tuple[BipartiteGraph, int | None]:
    """Materialize instance `index` of the ensemble; returns (graph, w).

    w is None for uniform graphs (the feature extractor falls back to |E|).
    Regeneration with the same config and index is bit-identical.
    """
    if not 0 <= index < config.instance_count:
        raise ValueError("instance index out of range")
    seed = instance_seed(config.seed, index)
    gen = config.generator
    if isinstance(gen, UniformGenerator):
        return gen_uniform(gen.u_n, gen.v_n, gen.edge_prob, seed), None
    graph, w = gen_powerlaw(
        gen.u_pool, gen.v_pool, gen.w_observations, gen.exponent, seed
    )
    return graph, w


@dataclass(frozen=True)
class SweepBin:
    """Aggregates for one (z, pi_log2 bin). Underflow marks pi = 0."""

    z: int
    bin_low: float
    bin_high: float
    underflow: bool
    n: int
    n_unknown: int
    cost_p25: int
    cost_p50: int
    cost_p90: int
    p_solvable: Fraction


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepBin, ...]
    bin_width: float
    config: EnsembleConfig | None = None


@dataclass(frozen=True)
class DistanceRow:
    d: int
    n: int
    mean_cost: float

    @property
    def solvable(self) -> bool:
        """Regime flag: at d >= 0 a witness is guaranteed to exist."""
        return self.d >= 0


@dataclass(frozen=True)
class DistanceSweepResult:
    rows: tuple[DistanceRow, ...]
    d_values: tuple[int, ...]
    n_skipped: int
    config: EnsembleConfig | None = None


def nearest_rank(sorted_values: list[int], percent: int) -> int:
    """Nearest-rank percentile of an ascending nonempty list."""
    if not sorted_values:
        raise ValueError("percentile of an empty sample")
    rank = (percent * len(sorted_values) + 99) // 100
    return sorted_values[max(rank, 1) - 1]


def _sweep_instance(config: EnsembleConfig, index: int) -> tuple[float, list[tuple[int, int, str]]]:
    """Worker: one instance's pi_log2 and per-z (z, cost, status) runs."""
    graph, w = generate_instance(config, index)
    fv = extract_features(graph, w)
    pi_log2 = order_parameter(fv).pi_log2
    runs = []
    for z in config.z_values:
        report = find_max_weight_of_size(graph, z, config.budget)
        if report.budget_exhausted:
            status = "unknown"
        elif report.found:
            status = "solvable"
        else:
            status = "insoluble"
        runs.append((z, report.combinations_explored, status))
    return pi_log2, runs


def _map_instances(worker: Callable, count: int, jobs: int) -> Iterable:
    """Apply worker to 0..count-1, optionally across processes, in order."""
    if jobs <= 1:
        yield from map(worker, range(count))
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, count // (jobs * 8))
        yield from pool.map(worker, range(count), chunksize=chunk)


def _bin_index(pi_log2: float, width: float) -> int:
    return math.floor(pi_log2 / width)


def run_sweep(
    config: EnsembleConfig,
    bin_width: float = DEFAULT_BIN_WIDTH,
    jobs: int = 1,
    progress: Callable[[int], None] | None = None,
) -> SweepResult:
    """Solve every (instance, z) pair and aggregate into pi_log2 bins.

    Bin k covers [k * width, (k + 1) * width); instances with pi = 0 land
    in a dedicated underflow bin. Budget-exhausted runs keep their cost,
    count toward n and n_unknown, and never count as solvable.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    # bucket key: (z, bin index) with None marking the underflow bin
    costs: dict[tuple[int, int | None], list[int]] = {}
    solvable: dict[tuple[int, int | None], int] = {}
    unknown: dict[tuple[int, int | None], int] = {}
    done = 0
    worker = partial(_sweep_instance, config)
    for pi_log2, runs in _map_instances(worker, config.instance_count, jobs):
        bin_key = None if pi_log2 == NEG_INF else _bin_index(pi_log2, bin_width)
        for z, cost, status in runs:
            key = (z, bin_key)
            costs.setdefault(key, []).append(cost)
            solvable[key] = solvable.get(key, 0) + (status == "solvable")
            unknown[key] = unknown.get(key, 0) + (status == "unknown")
        done += 1
        if progress is not None:
            progress(done)
    rows = []
    for z, bin_key in sorted(costs, key=lambda k: (k[0], -math.inf if k[1] is None else k[1])):
        pool = sorted(costs[(z, bin_key)])
        n = len(pool)
        if bin_key is None:
            low = high = NEG_INF
        else:
            low = bin_key * bin_width
            high = (bin_key + 1) * bin_width
        rows.append(
            SweepBin(
                z=z,
                bin_low=low,
                bin_high=high,
                underflow=bin_key is None,
                n=n,
                n_unknown=unknown[(z, bin_key)],
                cost_p25=nearest_rank(pool, 25),
                cost_p50=nearest_rank(pool, 50),
                cost_p90=nearest_rank(pool, 90),
                p_solvable=Fraction(solvable[(z, bin_key)], n),
            )
        )
    return SweepResult(tuple(rows), bin_width, config)


def _distance_instance(
    config: EnsembleConfig, d_values: tuple[int, ...], index: int
) -> list[tuple[int, int]] | None:
    """Worker: per feasible d, (d, cost). None marks a skipped instance."""
    graph, w = generate_instance(config, index)
    fv = extract_features(graph, w)
    z_max = fv.size_max
    if z_max < 2:
        return None
    out = []
    for d in d_values:
        z = z_max - d
        if 2 <= z <= graph.v_count:
            report = find_max_weight_of_size(graph, z, config.budget, guarantee_check=True)
            out.append((d, report.combinations_explored))
    return out


def run_distance_sweep(
    config: EnsembleConfig, d_values: Iterable[int], jobs: int = 1
) -> DistanceSweepResult:
    """Cost profile against the distance d = z_max - z.

    Each instance contributes one run per requested d whose z = z_max - d
    lands in [2, |V|], with the gram guarantee check enabled: requests
    above z_max (d < 0) are answered NoSolution at zero cost. Instances
    with z_max < 2 are skipped and counted.
    """
    ds = tuple(dict.fromkeys(int(d) for d in d_values))
    if not ds:
        raise ValueError("d_values must be nonempty")
    totals: dict[int, int] = {}
    counts: dict[int, int] = {}
    skipped = 0
    worker = partial(_distance_instance, config, ds)
    for result in _map_instances(worker, config.instance_count, jobs):
        if result is None:
            skipped += 1
            continue
        for d, cost in result:
            totals[d] = totals.get(d, 0) + cost
            counts[d] = counts.get(d, 0) + 1
    rows = tuple(
        DistanceRow(d, counts[d], totals[d] / counts[d]) for d in sorted(counts)
    )
    return DistanceSweepResult(rows, ds, skipped, config)


SWEEP_COLUMNS = (
    "z",
    "bin_low",
    "bin_high",
    "n",
    "n_unknown",
    "cost_p25",
    "cost_p50",
    "cost_p90",
    "p_solvable",
)

DISTANCE_COLUMNS = ("d", "n", "mean_cost")


def sweep_csv_text(result: SweepResult) -> str:
    """Render the sweep CSV; a config provenance comment leads when known."""
    lines = []
    if result.config is not None:
        lines.append(f"# config: {config_to_json(result.config)}")
        lines.append(f"# bin_width: {result.bin_width!r}")
    lines.append(",".join(SWEEP_COLUMNS))
    for row in result.rows:
        lines.append(
            ",".join(
                (
                    str(row.z),
                    repr(row.bin_low),
                    repr(row.bin_high),
                    str(row.n),
                    str(row.n_unknown),
                    str(row.cost_p25),
                    str(row.cost_p50),
                    str(row.cost_p90),
                    format_fraction(row.p_solvable),
                )
            )
        )
    return "\n".join(lines) + "\n"


def write_sweep_csv(result: SweepResult, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(sweep_csv_text(result))


def read_sweep_csv(text: str) -> list[SweepBin]:
    """Parse sweep CSV text; comment lines are skipped."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines or tuple(lines[0].split(",")) != SWEEP_COLUMNS:
        raise ValueError("unexpected sweep CSV header")
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(SWEEP_COLUMNS):
            raise ValueError(f"bad sweep CSV row: {ln!r}")
        low = float(cells[1])
        rows.append(
            SweepBin(
                z=int(cells[0]),
                bin_low=low,
                bin_high=float(cells[2]),
                underflow=low == NEG_INF,
                n=int(cells[3]),
                n_unknown=int(cells[4]),
                cost_p25=int(cells[5]),
                cost_p50=int(cells[6]),
                cost_p90=int(cells[7]),
                p_solvable=Fraction(cells[8]),
            )
        )
    return rows


def distance_csv_text(result: DistanceSweepResult) -> str:
    lines = []
    if result.config is not None:
        lines.append(f"# config: {config_to_json(result.config)}")
        lines.append(f"# d_values: {','.join(str(d) for d in result.d_values)}")
    lines.append(",".join(DISTANCE_COLUMNS))
    for row in result.rows:
        lines.append(f"{row.d},{row.n},{row.mean_cost!r}")
    return "\n".join(lines) + "\n"


def write_distance_csv(result: DistanceSweepResult, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(distance_csv_text(result))


def read_distance_csv(text: str) -> list[DistanceRow]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines or tuple(lines[0].split(",")) != DISTANCE_COLUMNS:
        raise ValueError("unexpected distance CSV header")
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != 3:
            raise ValueError(f"bad distance CSV row: {ln!r}")
        rows.append(DistanceRow(int(cells[0]), int(cells[1]), float(cells[2])))
    return rows
