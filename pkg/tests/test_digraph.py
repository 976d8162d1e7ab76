import numpy as np
import pytest

from semiwalk.digraph import (Digraph, EPresentation, EWord,
                              FiniteTrapDetected, ParseError,
                              TruncationUnsound, UnreachableVertex,
                              ball_spread, ball_spread_at, cayley_ball,
                              check_spread_inequalities, crossing_counts,
                              directed_path, finite_sccs, has_trap,
                              load_edge_list, out_tree, parse_edge_list,
                              verify_spread_growth, walk_distance_samples,
                              walk_distances)
from semiwalk.rewriting import RewriteSystem
from semiwalk.seeding import mix64
from semiwalk.sequences import InvalidParameter, parse_sequence


@pytest.fixture(scope="module")
def eball24():
    return cayley_ball(EPresentation(), 24)


# -- construction and parsing -------------------------------------------------

def test_parse_edge_list():
    G = parse_edge_list("# comment\n0 1\n\n1 0  # trailing\n")
    assert G.n_vertices == 2
    assert G.out == [[1], [0]]
    assert not G.truncated


@pytest.mark.parametrize("text", ["0", "0 1 2", "a b", "0 -1"])
def test_parse_edge_list_rejects(text):
    with pytest.raises(ParseError):
        parse_edge_list(text)


def test_parse_edge_list_reports_line_number():
    with pytest.raises(ParseError, match="line 3"):
        parse_edge_list("0 1\n1 0\nbroken\n")


def test_unreachable_vertex_detected():
    with pytest.raises(UnreachableVertex):
        parse_edge_list("0 1\n2 0\n")


def test_load_edge_list(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("0 1\n1 0\n")
    assert load_edge_list(p).n_vertices == 2


def test_digraph_validation():
    with pytest.raises(InvalidParameter):
        Digraph([[1], [0]], root=5)
    with pytest.raises(InvalidParameter):
        Digraph([[2], []])  # edge target out of range


def test_distances_on_path():
    G = directed_path(4)
    assert G.distances().tolist() == [0, 1, 2, 3, 4]
    assert G.trunc_flags().tolist() == [0, 0, 0, 0, 1]
    assert G.radius == 4


def test_adjacency_matrix_padding():
    G = parse_edge_list("0 1\n1 0\n")
    adj = G.adjacency_matrix(3)
    assert adj.shape == (2, 3)
    assert adj[0].tolist() == [1, 0, 0]  # short rows pad with self-loops
    with pytest.raises(InvalidParameter):
        out_tree(3, 2).adjacency_matrix(2)  # degree 3 > 2


# -- the absorbing presentation and its ball -----------------------------------

def test_e_presentation_append_rules():
    eng = EPresentation()
    w = eng.identity()
    assert eng.word_label(w) == "1"
    w = eng.append_generator(w, "x")
    w = eng.append_generator(w, "x")
    assert w == EWord(2, False)
    w = eng.append_generator(w, "y")  # xxy = y
    assert w == EWord(0, True)
    w = eng.append_generator(w, "x")
    assert eng.word_label(w) == "yx"
    with pytest.raises(InvalidParameter):
        eng.append_generator(w, "z")


def test_e_ball_radius3_frozen_oracle():
    ball = cayley_ball(EPresentation(), 3)
    assert ball.n_vertices == 7
    labels = dict(zip(ball.labels, ball.distances().tolist()))
    assert labels == {"1": 0, "x": 1, "y": 1, "xx": 2, "yx": 2,
                      "xxx": 3, "yxx": 3}
    # only the two radius-3 vertices are cut
    trunc = {ball.labels[v] for v in ball.truncated}
    assert trunc == {"xxx", "yxx"}


def test_e_ball_is_trap_free(eball24):
    assert not has_trap(eball24)


def test_cayley_ball_on_rewrite_system():
    ball = cayley_ball(RewriteSystem(parse_sequence("identity"), "strict"), 4)
    assert ball.labels[ball.root] == "1"
    assert ball.n_vertices > 8
    assert ball_spread(ball, 1).value == 1


# -- spread -------------------------------------------------------------------

def test_ball_spread_exact_on_e_ball(eball24):
    for n in range(0, 13):
        res = ball_spread(eball24, n)
        assert res.value == n
        assert not res.exact


def test_ball_spread_at_vertex(eball24):
    dist = eball24.distances()
    y = eball24.labels.index("y")
    assert dist[y] == 1
    # from y the walk can only reach yx^m: F(y, n) = 1 + n
    for n in range(0, 5):
        assert ball_spread_at(eball24, y, n) == 1 + n


def test_ball_spread_respects_soundness(eball24):
    with pytest.raises(TruncationUnsound):
        ball_spread(eball24, 25)
    with pytest.raises(TruncationUnsound):
        ball_spread_at(eball24, eball24.labels.index("yxx"), 23)


def test_ball_spread_exact_on_complete_graph():
    cyc = parse_edge_list("0 1\n1 0\n")
    r5 = ball_spread(cyc, 5)
    r50 = ball_spread(cyc, 50)
    assert r5.value == r50.value == 1
    assert r5.exact and r50.exact


def test_ball_spread_on_tree_and_path():
    tree = out_tree(2, 10)
    for n in (0, 1, 3, 5):
        assert ball_spread(tree, n).value == n
    path = directed_path(10)
    assert ball_spread(path, 3).value == 3
    assert ball_spread_at(path, 4, 3) == 7


def test_ball_spread_validation(eball24):
    with pytest.raises(InvalidParameter):
        ball_spread(eball24, -1)
    with pytest.raises(InvalidParameter):
        ball_spread_at(eball24, 10**6, 1)


# -- SCCs and traps -------------------------------------------------------------

def test_finite_sccs_and_trap():
    G = parse_edge_list("0 1\n1 0\n1 2\n2 2\n")
    sccs = finite_sccs(G)
    comps = {tuple(sorted(c.vertices)): c for c in sccs}
    assert set(comps) == {(0, 1), (2,)}
    assert not comps[(0, 1)].closed
    assert comps[(2,)].closed
    assert has_trap(G)


def test_truncated_frontier_is_indeterminate():
    path = directed_path(3)
    sccs = finite_sccs(path)
    end = [c for c in sccs if c.vertices == (3,)][0]
    assert end.indeterminate
    assert not has_trap(path)


def test_two_cycle_is_a_trap():
    assert has_trap(parse_edge_list("0 1\n1 0\n"))


# -- growth and inequality checks ------------------------------------------------

def test_verify_spread_growth(eball24):
    rep = verify_spread_growth(eball24)
    assert rep.ok
    kinds = {c.kind for c in rep.checks}
    assert kinds == {"ball-growth", "log-lower"}
    assert all(c.lhs >= c.rhs for c in rep.checks)


def test_verify_spread_growth_on_tree():
    assert verify_spread_growth(out_tree(2, 12)).ok


def test_verify_spread_growth_needs_trap_free():
    with pytest.raises(FiniteTrapDetected):
        verify_spread_growth(parse_edge_list("0 1\n1 0\n"))


def test_check_spread_inequalities(eball24):
    rep = check_spread_inequalities(eball24, range(0, 13))
    assert rep.ok
    kinds = {c.kind for c in rep.checks}
    assert kinds == {"min-le-root", "root-le-n", "vertex-band"}


# -- walks on digraphs ------------------------------------------------------------

def test_crossing_counts_validation(eball24):
    with pytest.raises(InvalidParameter):
        crossing_counts(eball24, 1, 100, [1])
    with pytest.raises(InvalidParameter):
        crossing_counts(eball24, 2, 1, [1])
    with pytest.raises(FiniteTrapDetected):
        crossing_counts(parse_edge_list("0 1\n1 0\n"), 2, 100, [1])


def test_crossing_counts_deterministic_and_guaranteed(warm):
    ball = cayley_ball(EPresentation(), 64)
    seeds = [mix64(0, i) for i in range(3)]
    r1 = crossing_counts(ball, 2, 2000, seeds)
    r2 = crossing_counts(ball, 2, 2000, seeds)
    assert r1.crossings == r2.crossings
    assert r1.t_min == 2
    assert r1.exceedances is None
    # dist >= 1 after step 2 while the threshold is still 1, so every
    # seed crosses at least once
    assert min(r1.crossings) >= 1


def test_crossing_counts_envelope_shape(warm):
    ball = cayley_ball(EPresentation(), 64)
    with pytest.raises(InvalidParameter):
        crossing_counts(ball, 2, 100, [1], upper_envelope=np.zeros(5))


def test_walk_hits_truncation_on_short_path(warm):
    path = directed_path(5)
    with pytest.raises(TruncationUnsound):
        walk_distances(path, 2, 20, 0, (20,))
    with pytest.raises(TruncationUnsound):
        crossing_counts(path, 2, 20, [0])


def test_walk_distances_and_samples_agree(warm):
    ball = cayley_ball(EPresentation(), 40)
    grid = (5, 20, 100)
    samples = walk_distance_samples(ball, 2, 100, grid, 6, master_seed=3)
    assert samples.shape == (6, 3)
    for i in range(6):
        row = walk_distances(ball, 2, 100, mix64(3, i), grid)
        assert np.array_equal(samples[i], row)
    # distances are 1 + trailing x-run <= 1 + steps, never 0 after step 1
    assert samples.min() >= 1
    assert samples[:, 0].max() <= 6


def test_walk_distance_samples_validation(warm):
    ball = cayley_ball(EPresentation(), 40)
    with pytest.raises(InvalidParameter):
        walk_distance_samples(ball, 2, 100, (5,), 0, 1)
    with pytest.raises(InvalidParameter):
        walk_distance_samples(ball, 2, 100, (200,), 2, 1)
    with pytest.raises(FiniteTrapDetected):
        walk_distance_samples(parse_edge_list("0 1\n1 0\n"), 2, 10, (5,), 2, 1)


def test_out_tree_and_path_validation():
    with pytest.raises(InvalidParameter):
        out_tree(0, 3)
    with pytest.raises(InvalidParameter):
        directed_path(0)
