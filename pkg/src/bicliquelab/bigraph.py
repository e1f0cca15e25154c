"""Bipartite graphs with bit-row adjacency.

Vertices live on two sides, U (actors) and V (targets), and carry dense
integer indices assigned in first-appearance order when a graph is read
from text. Adjacency is stored as one Python int per u-vertex whose bits
mark its v-neighbors, so membership tests and neighborhood intersections
are single bitwise operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, reduce
from typing import Iterable, Iterator


class GraphParseError(ValueError):
    """Raised for malformed or empty graph input text."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


@dataclass(frozen=True)
class BipartiteGraph:
    """Immutable bipartite graph.

    u_rows[i] is the bitmask over V of vertex u_i's neighbors. Isolated
    vertices (all-zero rows or untouched columns) are retained: they count
    toward u_count and v_count. Labels are optional; generated graphs get
    synthetic ones on serialization.
    """

    u_count: int
    v_count: int
    u_rows: tuple[int, ...]
    u_labels: tuple[str, ...] | None = None
    v_labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.u_count < 1 or self.v_count < 1:
            raise ValueError("graph needs at least one vertex on each side")
        if len(self.u_rows) != self.u_count:
            raise ValueError("u_rows length does not match u_count")
        limit = 1 << self.v_count
        for row in self.u_rows:
            if row < 0 or row >= limit:
                raise ValueError("adjacency row references v-index out of range")
        if self.u_labels is not None and len(set(self.u_labels)) != self.u_count:
            raise ValueError("u_labels must be unique and match u_count")
        if self.v_labels is not None and len(set(self.v_labels)) != self.v_count:
            raise ValueError("v_labels must be unique and match v_count")

    @classmethod
    def from_edges(
        cls,
        u_count: int,
        v_count: int,
        edges: Iterable[tuple[int, int]],
        u_labels: tuple[str, ...] | None = None,
        v_labels: tuple[str, ...] | None = None,
    ) -> "BipartiteGraph":
        """Build a graph from (u_index, v_index) pairs; duplicates collapse."""
        rows = [0] * u_count
        for i, j in edges:
            if not (0 <= i < u_count and 0 <= j < v_count):
                raise ValueError(f"edge ({i}, {j}) out of range")
            rows[i] |= 1 << j
        return cls(u_count, v_count, tuple(rows), u_labels, v_labels)

    @cached_property
    def v_rows(self) -> tuple[int, ...]:
        """Mirrored bit rows over U, one per v-vertex, built on first use."""
        cols = [0] * self.v_count
        for i, row in enumerate(self.u_rows):
            bit = 1 << i
            for j in _bits(row):
                cols[j] |= bit
        return tuple(cols)

    @cached_property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.u_rows)

    def neighbors_of_u(self, i: int) -> frozenset[int]:
        if not 0 <= i < self.u_count:
            raise ValueError(f"u-index {i} out of range")
        return frozenset(_bits(self.u_rows[i]))

    def neighbors_of_v(self, j: int) -> frozenset[int]:
        if not 0 <= j < self.v_count:
            raise ValueError(f"v-index {j} out of range")
        return frozenset(_bits(self.v_rows[j]))

    def edges(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self.u_rows):
            for j in _bits(row):
                yield (i, j)

    def u_label(self, i: int) -> str:
        return self.u_labels[i] if self.u_labels is not None else f"u{i}"

    def v_label(self, j: int) -> str:
        return self.v_labels[j] if self.v_labels is not None else f"v{j}"


@dataclass(frozen=True)
class ObservationLog:
    """Raw actor/target sightings; repeats are kept, so w >= |E|."""

    records: tuple[tuple[str, str], ...]

    @property
    def w(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class AdjacencyMatrix:
    """0/1 matrix Q with rows indexed by U and columns by V."""

    rows: int
    cols: int
    row_masks: tuple[int, ...]

    def entry(self, i: int, j: int) -> int:
        return (self.row_masks[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(row >> j) & 1 for j in range(self.cols)] for row in self.row_masks]

    def column_masks(self) -> tuple[int, ...]:
        cols = [0] * self.cols
        for i, row in enumerate(self.row_masks):
            bit = 1 << i
            for j in _bits(row):
                cols[j] |= bit
        return tuple(cols)


class GramSide(Enum):
    U = "U"
    V = "V"


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric matrix of pairwise neighborhood intersection sizes.

    For the U side this is Q x Q^T: entry (k, l) with k != l is the number
    of targets u_k and u_l share, i.e. the size of the largest biclique
    whose actor set is exactly {u_k, u_l}; the diagonal holds degrees. The
    V side mirrors this with weights of size-2 bicliques.
    """

    order: int
    entries: tuple[tuple[int, ...], ...]
    side: GramSide

    def entry(self, k: int, l: int) -> int:
        return self.entries[k][l]

    def max_off_diagonal(self) -> int:
        """Largest off-diagonal entry; 0 for a 1x1 matrix."""
        best = 0
        for k in range(self.order):
            row = self.entries[k]
            for l in range(k):
                if row[l] > best:
                    best = row[l]
        return best

    def lower_triangular_entries(self) -> list[int]:
        """Strictly-lower-triangular entries, row by row."""
        out = []
        for k in range(self.order):
            out.extend(self.entries[k][:k])
        return out


def adjacency_matrix(graph: BipartiteGraph) -> AdjacencyMatrix:
    return AdjacencyMatrix(graph.u_count, graph.v_count, graph.u_rows)


def _gram_from_masks(masks: tuple[int, ...], side: GramSide) -> GramMatrix:
    n = len(masks)
    entries = tuple(
        tuple((masks[k] & masks[l]).bit_count() for l in range(n)) for k in range(n)
    )
    return GramMatrix(n, entries, side)


def gram(matrix: AdjacencyMatrix) -> GramMatrix:
    """U-side gram matrix Q x Q^T via row-intersection popcounts."""
    return _gram_from_masks(matrix.row_masks, GramSide.U)


def gram_t(matrix: AdjacencyMatrix) -> GramMatrix:
    """V-side gram matrix Q^T x Q via column-intersection popcounts."""
    return _gram_from_masks(matrix.column_masks(), GramSide.V)


def _parse_pairs(text: str) -> list[tuple[str, str]]:
    pairs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphParseError(
                f"line {line_no}: expected two whitespace-separated labels, "
                f"got {len(tokens)}"
            )
        pairs.append((tokens[0], tokens[1]))
    return pairs


def _graph_from_records(records: Iterable[tuple[str, str]]) -> BipartiteGraph:
    u_index: dict[str, int] = {}
    v_index: dict[str, int] = {}
    edges = []
    for u_lab, v_lab in records:
        i = u_index.setdefault(u_lab, len(u_index))
        j = v_index.setdefault(v_lab, len(v_index))
        edges.append((i, j))
    if not edges:
        raise GraphParseError("no edges: an empty graph cannot be built")
    return BipartiteGraph.from_edges(
        len(u_index),
        len(v_index),
        edges,
        tuple(u_index),
        tuple(v_index),
    )


def from_edge_list(text: str) -> BipartiteGraph:
    """Parse "<u-label> <v-label>" lines into a graph.

    Lines starting with # and blank lines are skipped. Indices are assigned
    in first-appearance order per side; duplicate pairs collapse to one edge.
    """
    return _graph_from_records(_parse_pairs(text))


def parse_observation_log(text: str) -> ObservationLog:
    return ObservationLog(tuple(_parse_pairs(text)))


def from_observation_log(text: str) -> tuple[BipartiteGraph, int]:
    """Parse sighting lines; returns the graph and the raw record count w.

    Same line format as from_edge_list, but repeated pairs are meaningful:
    they still collapse to one edge, while w counts every record.
    """
    log = parse_observation_log(text)
    return _graph_from_records(log.records), log.w


def to_edge_list(graph: BipartiteGraph) -> str:
    """Serialize as edge-list text, lines sorted lexicographically.

    Labels are emitted verbatim (synthetic u{i}/v{j} names when absent).
    Isolated vertices cannot be expressed in this format and are lost on
    re-ingestion.
    """
    lines = sorted(f"{graph.u_label(i)} {graph.v_label(j)}" for i, j in graph.edges())
    return "\n".join(lines) + "\n"


def adjacent_to(graph: BipartiteGraph, v_subset: Iterable[int]) -> frozenset[int]:
    """All u-vertices adjacent to every vertex of v_subset.

    Antitone: growing v_subset can only shrink the result. For a singleton
    this is exactly the neighborhood of that v-vertex.
    """
    subset = tuple(v_subset)
    if not subset:
        raise ValueError("v_subset must be nonempty")
    for j in subset:
        if not 0 <= j < graph.v_count:
            raise ValueError(f"v-index {j} out of range")
    rows = graph.v_rows
    mask = reduce(lambda acc, j: acc & rows[j], subset, (1 << graph.u_count) - 1)
    return frozenset(_bits(mask))


@dataclass(frozen=True)
class Biclique:
    """A complete bipartite subgraph, given by its two vertex sets."""

    u_set: tuple[int, ...]
    v_set: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.u_set or not self.v_set:
            raise ValueError("biclique sides must be nonempty")
        if tuple(sorted(set(self.u_set))) != self.u_set:
            raise ValueError("u_set must be sorted and duplicate-free")
        if tuple(sorted(set(self.v_set))) != self.v_set:
            raise ValueError("v_set must be sorted and duplicate-free")

    @property
    def weight(self) -> int:
        return len(self.u_set)

    @property
    def size(self) -> int:
        return len(self.v_set)


def spans_biclique(
    graph: BipartiteGraph, u_set: Iterable[int], v_set: Iterable[int]
) -> bool:
    """True iff every listed u-v pair is an edge of the graph."""
    v_mask = _mask_of(v_set)
    return all(graph.u_rows[i] & v_mask == v_mask for i in u_set)
