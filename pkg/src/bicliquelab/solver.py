"""Backtracking biclique search with blacklist pruning.

The search asks: does the graph contain a biclique with exactly z targets
(size z) and at least two actors (weight >= 2)? Candidate target sets are
enumerated in lexicographic order, round by round from size 2 up to z.
A candidate whose common actor neighborhood has fewer than two members is
blacklisted; any later candidate containing a blacklisted set is skipped
without evaluating its neighborhood. The cost metric is the number of
candidates whose neighborhood was actually evaluated, which is hardware
independent and reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .bigraph import (
    Biclique,
    BipartiteGraph,
    GramMatrix,
    GramSide,
    adjacency_matrix,
    gram,
    gram_t,
    _bits,
)


class BlacklistMode(Enum):
    """How failed candidates prune later ones.

    SUBSET: skip any candidate containing a blacklisted set (the default;
    sound because the common neighborhood is antitone in the target set).
    LITERAL: skip only exact blacklist members. Since a candidate set is
    enumerated once per search, this never fires; it exists to mirror the
    wording of the original pseudocode.
    OFF: no pruning at all (test hook).
    """

    SUBSET = "subset"
    LITERAL = "literal"
    OFF = "off"


@dataclass(frozen=True)
class SearchBudget:
    """Cap on evaluated candidates; None means unlimited."""

    max_combinations: int | None = None

    def __post_init__(self) -> None:
        if self.max_combinations is not None and self.max_combinations < 1:
            raise ValueError("budget must be positive when bounded")

    @property
    def bounded(self) -> bool:
        return self.max_combinations is not None


UNLIMITED = SearchBudget(None)


@dataclass(frozen=True)
class SolveReport:
    """Outcome and exact cost accounting of one search.

    combinations_explored counts candidates whose common neighborhood was
    evaluated; blacklist_skips counts candidates pruned via the blacklist.
    max_r_reached is the largest candidate size any round started with, or
    0 if the search never started. A report with budget_exhausted True
    always carries outcome NoSolution and must be read as "unknown".
    """

    biclique: Biclique | None
    combinations_explored: int
    blacklist_skips: int
    max_r_reached: int
    budget_exhausted: bool

    @property
    def found(self) -> bool:
        return self.biclique is not None


_EMPTY = SolveReport(None, 0, 0, 0, False)


def size_max_via_gram(gram_u: GramMatrix) -> int:
    """Size of a size-maximal biclique with weight >= 2, from the U-side gram.

    The off-diagonal entry (k, l) is the largest target set shared by u_k
    and u_l, so the maximum over them is the largest size any weight-2
    (hence any weight >= 2) biclique can reach. 0 when |U| = 1.
    """
    if gram_u.side is not GramSide.U:
        raise ValueError("size_max_via_gram expects the U-side gram matrix")
    return gram_u.max_off_diagonal()


def weight_upper_bound(gram_v: GramMatrix, z: int) -> int:
    """Best possible weight of any biclique of size >= 2, from the V-side gram.

    The bound is the weight of the weight-maximal size-2 biclique; adding
    targets can only shrink the actor set, so no size-z biclique (z >= 2)
    can exceed it.
    """
    if gram_v.side is not GramSide.V:
        raise ValueError("weight_upper_bound expects the V-side gram matrix")
    if z < 2:
        raise ValueError("z must be >= 2")
    return gram_v.max_off_diagonal()


class _Engine:
    """One search run. Shared by the find/decide entry points."""

    def __init__(self, graph: BipartiteGraph, budget: SearchBudget, mode: BlacklistMode):
        self.graph = graph
        self.rows = graph.v_rows
        self.n = graph.v_count
        self.full_u = (1 << graph.u_count) - 1
        self.limit = (
            budget.max_combinations if budget.max_combinations is not None else math.inf
        )
        self.prune = mode is BlacklistMode.SUBSET
        self.explored = 0
        self.skips = 0
        self.max_r = 0
        self.exhausted = False
        # blacklisted pairs, keyed by larger element: bad_pairs[x] has bit y
        # set iff {y, x} is blacklisted (y < x)
        self.bad_pairs = [0] * self.n
        # blacklisted sets of size >= 3, keyed by largest element, stored as
        # masks of the remaining elements
        self.bad_tails: dict[int, list[int]] = {}
        # choose(a, b) table for bulk skip accounting
        self.choose = [[math.comb(a, b) for b in range(self.n + 1)] for a in range(self.n + 1)]

    def blacklist(self, cmask: int, x: int, r: int) -> None:
        if r == 2:
            self.bad_pairs[x] |= cmask
        else:
            self.bad_tails.setdefault(x, []).append(cmask)

    def pruned_by(self, cmask: int, x: int) -> bool:
        """Does the prefix (cmask) plus x complete a blacklisted set?

        Enumeration is ascending, so any blacklisted set inside the final
        candidate completes exactly when its largest element is appended;
        checking at that moment both suffices and avoids double counting.
        """
        if self.bad_pairs[x] & cmask:
            return True
        tails = self.bad_tails.get(x)
        if tails:
            for tail in tails:
                if tail & cmask == tail:
                    return True
        return False

    def run_round(self, r: int, accept) -> bool:
        """Enumerate size-r candidates; accept() may stop the whole search.

        Returns True when the search should stop (accept hit or budget
        exhausted). accept(umask, vmask, weight) is called only for
        evaluated candidates with weight >= 2 at the final round.
        """
        self.max_r = r
        return self._extend(0, r, self.full_u, 0, r, accept)

    def _extend(self, start: int, remaining: int, umask: int, cmask: int, r: int, accept) -> bool:
        n = self.n
        rows = self.rows
        prune = self.prune
        if remaining == 1:
            for x in range(start, n):
                if prune and self.pruned_by(cmask, x):
                    self.skips += 1
                    continue
                if self.explored >= self.limit:
                    self.exhausted = True
                    return True
                self.explored += 1
                candidate = umask & rows[x]
                weight = candidate.bit_count()
                if weight < 2:
                    self.blacklist(cmask, x, r)
                elif accept is not None and accept(candidate, cmask | (1 << x), weight):
                    return True
            return False
        tail_choose = self.choose
        for x in range(start, n - remaining + 1):
            if prune and self.pruned_by(cmask, x):
                self.skips += tail_choose[n - x - 1][remaining - 1]
                continue
            if self._extend(x + 1, remaining - 1, umask & rows[x], cmask | (1 << x), r, accept):
                return True
        return False

    def report(self, biclique: Biclique | None) -> SolveReport:
        return SolveReport(
            biclique,
            self.explored,
            self.skips,
            self.max_r,
            self.exhausted,
        )


def _mask_biclique(umask: int, vmask: int) -> Biclique:
    return Biclique(tuple(_bits(umask)), tuple(_bits(vmask)))


def _check_z(graph: BipartiteGraph, z: int) -> SolveReport | None:
    """Apply the z preconditions; a report means an immediate answer."""
    if z < 2:
        raise ValueError("z must be >= 2")
    if z > graph.v_count:
        return _EMPTY
    return None


def _guarantee_blocks(graph: BipartiteGraph, z: int) -> bool:
    """Gram-based guarantee: no size-z biclique exists when z > z_max."""
    return z > size_max_via_gram(gram(adjacency_matrix(graph)))


def find_biclique(
    graph: BipartiteGraph,
    z: int,
    budget: SearchBudget = UNLIMITED,
    *,
    blacklist_mode: BlacklistMode = BlacklistMode.SUBSET,
    guarantee_check: bool = False,
) -> SolveReport:
    """First biclique of size exactly z with weight >= 2, if any.

    Rounds run r = 2..z; the found witness pairs the first acceptable
    candidate target set with its full common actor neighborhood, which is
    weight-maximal for that target set. With guarantee_check, requests
    beyond the gram-certified maximum size are answered NoSolution at zero
    cost before any enumeration.
    """
    early = _check_z(graph, z)
    if early is not None:
        return early
    if guarantee_check and _guarantee_blocks(graph, z):
        return _EMPTY
    engine = _Engine(graph, budget, blacklist_mode)
    hit: list[Biclique] = []

    def accept(umask: int, vmask: int, weight: int) -> bool:
        hit.append(_mask_biclique(umask, vmask))
        return True

    for r in range(2, z + 1):
        if engine.run_round(r, accept if r == z else None):
            break
    if engine.exhausted:
        return engine.report(None)
    return engine.report(hit[0] if hit else None)


def find_max_weight_of_size(
    graph: BipartiteGraph,
    z: int,
    budget: SearchBudget = UNLIMITED,
    *,
    blacklist_mode: BlacklistMode = BlacklistMode.SUBSET,
    guarantee_check: bool = False,
) -> SolveReport:
    """Weight-maximal biclique of size exactly z.

    Same traversal as find_biclique, but the final round keeps scanning and
    tracks the best weight seen, stopping early once it matches the V-side
    gram upper bound. Ties keep the lexicographically smallest target set
    (the first one reached).
    """
    early = _check_z(graph, z)
    if early is not None:
        return early
    if guarantee_check and _guarantee_blocks(graph, z):
        return _EMPTY
    bound = weight_upper_bound(gram_t(adjacency_matrix(graph)), z)
    engine = _Engine(graph, budget, blacklist_mode)
    best: list[tuple[int, int, int]] = []

    def accept(umask: int, vmask: int, weight: int) -> bool:
        if not best or weight > best[0][0]:
            best[:] = [(weight, umask, vmask)]
            if weight == bound:
                return True
        return False

    for r in range(2, z + 1):
        if engine.run_round(r, accept if r == z else None):
            break
    if engine.exhausted:
        return engine.report(None)
    if best:
        _, umask, vmask = best[0]
        return engine.report(_mask_biclique(umask, vmask))
    return engine.report(None)


def decide(
    graph: BipartiteGraph,
    t: int,
    z: int,
    budget: SearchBudget = UNLIMITED,
    *,
    blacklist_mode: BlacklistMode = BlacklistMode.SUBSET,
    guarantee_check: bool = False,
) -> tuple[SolveReport, bool | None]:
    """Decision problem: is there a biclique with weight >= t and size >= z?

    The traversal is find_biclique's (blacklisting still triggers below
    weight 2), only the acceptance test at the final round demands weight
    >= t. A size-(> z) biclique restricts to size z, so searching size
    exactly z is complete. Verdict None means the budget ran out first.
    """
    if t < 2:
        raise ValueError("t must be >= 2")
    early = _check_z(graph, z)
    if early is not None:
        return early, False
    if guarantee_check and _guarantee_blocks(graph, z):
        return _EMPTY, False
    engine = _Engine(graph, budget, blacklist_mode)
    hit: list[Biclique] = []

    def accept(umask: int, vmask: int, weight: int) -> bool:
        if weight >= t:
            hit.append(_mask_biclique(umask, vmask))
            return True
        return False

    for r in range(2, z + 1):
        if engine.run_round(r, accept if r == z else None):
            break
    if engine.exhausted:
        return engine.report(None), None
    if hit:
        return engine.report(hit[0]), True
    return engine.report(None), False


def brute_force_oracle(
    graph: BipartiteGraph, t: int, z: int, cap: int = 20
) -> tuple[bool, Biclique | None]:
    """Exhaustive reference answer, independent of the search machinery.

    Enumerates every nonempty target subset, recomputing each common
    neighborhood from scratch: no blacklist, no gram shortcuts, no
    restriction to size exactly z. Also returns the size-maximal (ties:
    weight-maximal) biclique among those with weight >= 2, or None.
    Refuses graphs with more than cap target vertices.
    """
    if graph.v_count > cap:
        raise ValueError(
            f"brute force refused: |V| = {graph.v_count} exceeds cap {cap}"
        )
    rows = graph.v_rows
    full = (1 << graph.u_count) - 1
    verdict = False
    best: tuple[int, int, tuple[int, ...], int] | None = None
    for size in range(1, graph.v_count + 1):
        for subset in combinations(range(graph.v_count), size):
            mask = full
            for j in subset:
                mask &= rows[j]
            weight = mask.bit_count()
            if weight >= t and size >= z:
                verdict = True
            if weight >= 2:
                if best is None or (size, weight) > (best[0], best[1]):
                    best = (size, weight, subset, mask)
    if best is None:
        return verdict, None
    _, _, subset, mask = best
    return verdict, Biclique(tuple(_bits(mask)), subset)
