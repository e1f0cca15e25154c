import random

import numpy as np
import pytest

from bicliquelab.bigraph import (
    Biclique,
    BipartiteGraph,
    GramSide,
    GraphParseError,
    adjacency_matrix,
    adjacent_to,
    from_edge_list,
    from_observation_log,
    gram,
    gram_t,
    parse_observation_log,
    spans_biclique,
    to_edge_list,
)
from helpers import random_graph, neighbor_sets


def gram_oracle(graph):
    """Pairwise neighbor-set intersections, built without bit tricks."""
    sets = neighbor_sets(graph)
    return [[len(a & b) for b in sets] for a in sets]


def matmul_oracle(graph):
    q = np.array(adjacency_matrix(graph).to_lists())
    return q @ q.T, q.T @ q


class TestParsing:
    def test_basic_edge_list(self):
        g = from_edge_list("alice db1\nbob db1\nalice db2\n")
        assert (g.u_count, g.v_count, g.edge_count) == (2, 2, 3)
        assert g.u_labels == ("alice", "bob")
        assert g.v_labels == ("db1", "db2")

    def test_first_appearance_indexing(self):
        g = from_edge_list("z t\na t\nz s\n")
        # z appeared before a, so it gets index 0 regardless of sort order
        assert g.u_labels == ("z", "a")
        assert g.neighbors_of_u(0) == {0, 1}

    def test_comments_and_blank_lines(self):
        g = from_edge_list("# header\n\na x\n   \n# more\nb x\n")
        assert (g.u_count, g.v_count, g.edge_count) == (2, 1, 2)

    def test_crlf(self):
        g = from_edge_list("a x\r\nb y\r\n")
        assert g.edge_count == 2

    def test_duplicate_edges_collapse(self):
        g = from_edge_list("a x\na x\nb x\na x\n")
        assert g.edge_count == 2

    def test_malformed_line_reports_number(self):
        with pytest.raises(GraphParseError, match="line 3"):
            from_edge_list("a x\nb y\nc\n")
        with pytest.raises(GraphParseError, match="line 1"):
            from_edge_list("a x y\n")

    def test_empty_input_rejected(self):
        with pytest.raises(GraphParseError):
            from_edge_list("# nothing\n\n")

    def test_duplicate_count_fixture(self):
        # 147 distinct pairs plus 3 repeats, shuffled
        rng = random.Random(7)
        pairs = [(f"a{i}", f"t{j}") for i in range(21) for j in range(7)]
        assert len(pairs) == 147
        lines = [f"{a} {b}" for a, b in pairs] + [
            f"{a} {b}" for a, b in (pairs[5], pairs[50], pairs[100])
        ]
        rng.shuffle(lines)
        g = from_edge_list("\n".join(lines))
        assert g.edge_count == len(set(pairs)) == 147

    def test_observation_log_keeps_w(self):
        text = "a x\na x\nb x\na y\n"
        log = parse_observation_log(text)
        assert log.w == 4
        g, w = from_observation_log(text)
        assert w == 4
        assert g.edge_count == 3

    def test_from_edges_range_check(self):
        with pytest.raises(ValueError):
            BipartiteGraph.from_edges(2, 2, [(0, 2)])
        with pytest.raises(ValueError):
            BipartiteGraph.from_edges(2, 2, [(-1, 0)])


class TestGraph:
    def test_counts_require_vertices(self):
        with pytest.raises(ValueError):
            BipartiteGraph(0, 1, ())

    def test_isolated_vertices_are_kept(self):
        g = BipartiteGraph.from_edges(3, 4, [(0, 0)])
        assert g.u_count == 3 and g.v_count == 4
        assert g.u_rows[2] == 0
        assert g.neighbors_of_v(3) == frozenset()

    def test_v_rows_mirror(self):
        rng = random.Random(3)
        for _ in range(30):
            g = random_graph(rng, rng.randint(1, 8), rng.randint(1, 8), 0.4)
            for j in range(g.v_count):
                expected = {i for i in range(g.u_count) if j in g.neighbors_of_u(i)}
                assert g.neighbors_of_v(j) == expected


class TestGram:
    def test_two_by_three_example(self):
        g = BipartiteGraph.from_edges(2, 3, [(0, 0), (0, 1), (1, 1), (1, 2)])
        m = adjacency_matrix(g)
        assert gram(m).entries == ((2, 1), (1, 2))
        assert gram_t(m).entries == ((1, 1, 0), (1, 2, 1), (0, 1, 1))

    def test_sides_are_tagged(self):
        g = BipartiteGraph.from_edges(2, 3, [(0, 0), (1, 2)])
        m = adjacency_matrix(g)
        assert gram(m).side is GramSide.U
        assert gram_t(m).side is GramSide.V

    def test_matches_intersection_oracle_exhaustively(self):
        # every graph on up to 3x3 vertices, via edge bitmask enumeration
        for u_n, v_n in [(1, 1), (2, 2), (2, 3), (3, 3)]:
            cells = u_n * v_n
            for mask in range(1 << cells):
                edges = [(k // v_n, k % v_n) for k in range(cells) if mask >> k & 1]
                if not edges:
                    continue
                g = BipartiteGraph.from_edges(u_n, v_n, edges)
                assert [list(r) for r in gram(adjacency_matrix(g)).entries] == gram_oracle(g)

    def test_matches_matmul_oracle_random(self):
        rng = random.Random(11)
        for _ in range(60):
            g = random_graph(rng, rng.randint(1, 12), rng.randint(1, 12), rng.choice([0.2, 0.5, 0.8]))
            m = adjacency_matrix(g)
            qqt, qtq = matmul_oracle(g)
            assert (np.array(gram(m).entries) == qqt).all()
            assert (np.array(gram_t(m).entries) == qtq).all()

    def test_symmetry_diagonal_and_bounds(self):
        rng = random.Random(13)
        for _ in range(40):
            g = random_graph(rng, rng.randint(2, 10), rng.randint(2, 10), 0.5)
            gm = gram(adjacency_matrix(g))
            for k in range(gm.order):
                assert gm.entry(k, k) == len(g.neighbors_of_u(k))
                for l in range(gm.order):
                    assert gm.entry(k, l) == gm.entry(l, k)
                    if k != l:
                        assert 0 <= gm.entry(k, l) <= min(gm.entry(k, k), gm.entry(l, l))

    def test_zero_row_graph(self):
        g = BipartiteGraph.from_edges(2, 2, [(0, 0), (0, 1)])
        gm = gram(adjacency_matrix(g))
        assert gm.entries[1] == (0, 0)


class TestAdjacentTo:
    def test_fixture(self):
        g = from_edge_list("u1 v1\nu1 v2\nu2 v1\nu2 v2\nu3 v1\n")
        assert adjacent_to(g, [0, 1]) == {0, 1}
        assert adjacent_to(g, [0]) == {0, 1, 2}

    def test_singleton_equals_neighborhood(self):
        rng = random.Random(17)
        for _ in range(30):
            g = random_graph(rng, rng.randint(1, 9), rng.randint(1, 9), 0.4)
            for j in range(g.v_count):
                assert adjacent_to(g, [j]) == g.neighbors_of_v(j)

    def test_antitone(self):
        rng = random.Random(19)
        for _ in range(40):
            g = random_graph(rng, rng.randint(2, 9), rng.randint(2, 9), 0.5)
            subset = rng.sample(range(g.v_count), rng.randint(1, g.v_count - 1))
            extra = rng.choice([j for j in range(g.v_count) if j not in subset])
            assert adjacent_to(g, subset + [extra]) <= adjacent_to(g, subset)

    def test_out_of_range(self):
        g = from_edge_list("a x\n")
        with pytest.raises(ValueError):
            adjacent_to(g, [1])
        with pytest.raises(ValueError):
            adjacent_to(g, [])


class TestSerialization:
    def test_sorted_and_stable(self):
        g = from_edge_list("b y\na x\nb x\n")
        assert to_edge_list(g) == "a x\nb x\nb y\n"

    def test_round_trip_is_isomorphic(self):
        rng = random.Random(23)
        for _ in range(25):
            g = random_graph(rng, rng.randint(1, 8), rng.randint(1, 8), 0.5)
            text = to_edge_list(g)
            h = from_edge_list(text)
            # same labeled edge set, modulo index renumbering
            assert to_edge_list(h) == text

    def test_observation_log_round_trip(self):
        text = "s3 t9\ns1 t9\ns3 t9\ns1 t2\n"
        g, w = from_observation_log(text)
        assert w == 4
        h = from_edge_list(to_edge_list(g))
        edges = {(h.u_label(i), h.v_label(j)) for i, j in h.edges()}
        assert edges == {("s3", "t9"), ("s1", "t9"), ("s1", "t2")}


class TestBiclique:
    def test_validation(self):
        with pytest.raises(ValueError):
            Biclique((), (0,))
        with pytest.raises(ValueError):
            Biclique((1, 0), (0,))
        with pytest.raises(ValueError):
            Biclique((0, 0), (1,))

    def test_spans(self):
        g = from_edge_list("a x\na y\nb x\nb y\nc x\n")
        assert spans_biclique(g, [0, 1], [0, 1])
        assert not spans_biclique(g, [0, 2], [0, 1])
