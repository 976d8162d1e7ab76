"""Rooted digraphs: Cayley balls, ball-spread, traps, and walk crossings.

The spread function F(v, n) is the largest root-distance reachable from v in
at most n hops; F(n) minimizes that over the vertices.  Graphs built here
are either loaded complete from an edge list or BFS-truncated balls of an
infinite Cayley graph, in which case frontier vertices carry no out-edges
and every query proves it never depended on the missing part
(TruncationUnsound otherwise).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .seeding import mix64
from .sequences import InvalidParameter

GENERATORS = ("x", "y")


class ParseError(ValueError):
    """Malformed edge-list input."""


class UnreachableVertex(ValueError):
    """The edge list mentions vertices the root cannot reach."""


class TruncationUnsound(RuntimeError):
    """The query's answer could depend on vertices beyond the truncation."""


class FiniteTrapDetected(RuntimeError):
    """The graph has a closed component no walk can leave."""


class Digraph:
    """Rooted directed graph with ordered (possibly parallel) out-edges."""

    def __init__(self, out_edges: Sequence[Sequence[int]], root: int = 0,
                 labels: Sequence[str] | None = None,
                 truncated: Iterable[int] = (), radius: int | None = None):
        self.out = [list(edges) for edges in out_edges]
        n = len(self.out)
        for v, edges in enumerate(self.out):
            for w in edges:
                if not 0 <= w < n:
                    raise InvalidParameter(f"edge {v}->{w} leaves the vertex range")
        if not 0 <= root < n:
            raise InvalidParameter(f"root {root} out of range")
        self.root = root
        self.labels = list(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise InvalidParameter("labels must cover every vertex")
        self.truncated = frozenset(int(v) for v in truncated)
        self.radius = radius
        self._dist = self._bfs_all()
        unreachable = np.flatnonzero(self._dist < 0)
        if unreachable.size:
            raise UnreachableVertex(
                f"{unreachable.size} vertices unreachable from the root, "
                f"first: {int(unreachable[0])}")

    def _bfs_all(self) -> np.ndarray:
        dist = np.full(len(self.out), -1, dtype=np.int64)
        dist[self.root] = 0
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            dv = dist[v]
            for w in self.out[v]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
        return dist

    @property
    def n_vertices(self) -> int:
        return len(self.out)

    @property
    def max_out_degree(self) -> int:
        return max((len(e) for e in self.out), default=0)

    def distances(self) -> np.ndarray:
        """Root distances (int64, read-only view)."""
        return self._dist

    def trunc_flags(self) -> np.ndarray:
        flags = np.zeros(self.n_vertices, dtype=np.uint8)
        for v in self.truncated:
            flags[v] = 1
        return flags

    def adjacency_matrix(self, d: int) -> np.ndarray:
        """int64[V, d] for the uniform d-choice walk.

        Vertices with fewer than d out-edges are padded with self-loops;
        a vertex with more than d raises.
        """
        adj = np.empty((self.n_vertices, d), dtype=np.int64)
        for v, edges in enumerate(self.out):
            if len(edges) > d:
                raise InvalidParameter(
                    f"vertex {v} has out-degree {len(edges)} > d = {d}")
            for i in range(d):
                adj[v, i] = edges[i] if i < len(edges) else v
        return adj


def parse_edge_list(text: str) -> Digraph:
    """Digraph from 'src dst' lines ('#' comments allowed); root is vertex 0."""
    edges: list[tuple[int, int]] = []
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'src dst', got {raw!r}")
        try:
            s, t = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer vertex in {raw!r}") from None
        if s < 0 or t < 0:
            raise ParseError(f"line {lineno}: negative vertex id in {raw!r}")
        edges.append((s, t))
        max_id = max(max_id, s, t)
    if max_id < 0:
        raise ParseError("edge list is empty")
    out: list[list[int]] = [[] for _ in range(max_id + 1)]
    for s, t in edges:
        out[s].append(t)
    return Digraph(out)


def load_edge_list(path) -> Digraph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def cayley_ball(system, radius: int) -> Digraph:
    """BFS ball of the right-multiplication Cayley graph up to `radius`.

    `system` supplies identity() / append_generator(state, g) / word_label;
    vertices are elements at distance <= radius, and the distance-`radius`
    frontier is marked truncated with its out-edges left empty.
    """
    if radius < 0:
        raise InvalidParameter(f"radius must be >= 0, got {radius}")
    start = system.identity()
    ids = {start: 0}
    out: list[list[int]] = [[]]
    labels = [system.word_label(start)]
    depth = [0]
    queue = deque([start])
    while queue:
        state = queue.popleft()
        v = ids[state]
        if depth[v] == radius:
            continue
        for g in GENERATORS:
            nxt = system.append_generator(state, g)
            w = ids.get(nxt)
            if w is None:
                w = ids[nxt] = len(out)
                out.append([])
                labels.append(system.word_label(nxt))
                depth.append(depth[v] + 1)
                queue.append(nxt)
            out[v].append(w)
    truncated = [v for v in range(len(out)) if depth[v] == radius]
    return Digraph(out, root=0, labels=labels, truncated=truncated, radius=radius)


@dataclass(frozen=True)
class EWord:
    """Normal form x^xs or y x^xs in <x, y | xy = y, yy = y>."""
    xs: int = 0
    has_y: bool = False


class EPresentation:
    """Cayley engine for <x, y | xy = y, yy = y>.

    Appending x extends the trailing x-run; appending y collapses everything
    back to y.  Element length is xs + has_y, the walk's distance from the
    root, so the n-step reduced length is distributed like 1 + (current run
    of x's at the end of n coin flips) capped at n.
    """

    def identity(self) -> EWord:
        return EWord()

    def append_generator(self, w: EWord, g: str) -> EWord:
        if g == "x":
            return EWord(w.xs + 1, w.has_y)
        if g == "y":
            return EWord(0, True)
        raise InvalidParameter(f"unknown generator {g!r}")

    def word_label(self, w: EWord) -> str:
        if not w.has_y and w.xs == 0:
            return "1"
        return ("y" if w.has_y else "") + "x" * w.xs


def out_tree(branching: int, depth: int) -> Digraph:
    """Rooted out-tree, a truncated stand-in for the infinite regular tree.

    Leaves at `depth` are marked truncated so trap detection knows their
    missing children are a cut, not a dead end.
    """
    if branching < 1 or depth < 0:
        raise InvalidParameter("need branching >= 1 and depth >= 0")
    out: list[list[int]] = [[]]
    level = [0]
    for _ in range(depth):
        nxt_level = []
        for v in level:
            for _ in range(branching):
                w = len(out)
                out.append([])
                out[v].append(w)
                nxt_level.append(w)
        level = nxt_level
    return Digraph(out, truncated=level, radius=depth)


def directed_path(length: int) -> Digraph:
    """0 -> 1 -> ... -> length, truncated at the end (stand-in for a ray)."""
    if length < 1:
        raise InvalidParameter("need length >= 1")
    out = [[v + 1] for v in range(length)] + [[]]
    return Digraph(out, truncated=[length], radius=length)


def _spread_from(G: Digraph, v: int, n: int, abort_at: int | None) -> int:
    """F(v, n) by depth-limited BFS.

    With abort_at set, returns as soon as the running max reaches it (the
    true F(v, n) is then >= abort_at, enough for a min-scan to discard v).
    """
    dist = G.distances()
    if G.truncated and G.radius is not None and dist[v] + n > G.radius:
        raise TruncationUnsound(
            f"F({v}, {n}) could depend on vertices beyond radius {G.radius}")
    best = int(dist[v])
    if abort_at is not None and best >= abort_at:
        return best
    seen = {v}
    frontier = [v]
    for _ in range(n):
        nxt = []
        for u in frontier:
            if u in G.truncated:
                raise TruncationUnsound(f"ball around {v} touched the cut frontier")
            for w in G.out[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if dist[w] > best:
                        best = int(dist[w])
                        if abort_at is not None and best >= abort_at:
                            return best
        frontier = nxt
        if not frontier:
            break
    return best


def ball_spread_at(G: Digraph, v: int, n: int) -> int:
    """F(v, n): max root-distance over the out-ball of radius n around v."""
    if n < 0:
        raise InvalidParameter(f"n must be >= 0, got {n}")
    if not 0 <= v < G.n_vertices:
        raise InvalidParameter(f"vertex {v} out of range")
    return _spread_from(G, v, n, None)


@dataclass(frozen=True)
class SpreadResult:
    n: int
    value: int
    exact: bool  # False when minimized over the sound vertices of a cut ball


def ball_spread(G: Digraph, n: int) -> SpreadResult:
    """F(n) = min over (sound) vertices of F(v, n).

    On a truncated graph only vertices with dist + n <= radius are sound, so
    the value is an over-approximation of the infinite graph's F(n) and is
    flagged exact=False.  Vertices are scanned in increasing root distance;
    since F(v, n) >= dist(v) the scan stops once dist reaches the best value.
    """
    if n < 0:
        raise InvalidParameter(f"n must be >= 0, got {n}")
    dist = G.distances()
    if G.truncated:
        if G.radius is None:
            raise TruncationUnsound("truncated graph without a radius")
        sound = np.flatnonzero(dist <= G.radius - n)
        if sound.size == 0:
            raise TruncationUnsound(f"no vertex is sound for F({n})")
    else:
        sound = np.arange(G.n_vertices)
    order = sound[np.argsort(dist[sound], kind="stable")]
    best = None
    for v in order:
        if best is not None and dist[v] >= best:
            break  # F(v, n) >= dist(v) can no longer improve the min
        fv = _spread_from(G, int(v), n, best)
        if best is None or fv < best:
            best = fv
    return SpreadResult(n=n, value=int(best), exact=not G.truncated)


@dataclass(frozen=True)
class SCCInfo:
    vertices: tuple[int, ...]
    closed: bool         # no edge leaves the component
    indeterminate: bool  # touches the truncation cut, so 'closed' is unproven


def finite_sccs(G: Digraph) -> list[SCCInfo]:
    """All strongly connected components (iterative Tarjan), flagged as
    trap candidates: closed components are absorbing; components containing
    truncated vertices are indeterminate because their missing out-edges
    could leave."""
    n = G.n_vertices
    index = [-1] * n
    low = [0] * n
    onstack = bytearray(n)
    stack: list[int] = []
    counter = 0
    comps: list[list[int]] = []
    for start in range(n):
        if index[start] != -1:
            continue
        work: list[list[int]] = [[start, 0]]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                onstack[v] = 1
            descended = False
            edges = G.out[v]
            for i in range(pi, len(edges)):
                w = edges[i]
                if index[w] == -1:
                    work[-1][1] = i + 1
                    work.append([w, 0])
                    descended = True
                    break
                if onstack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if descended:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
    infos = []
    for comp in comps:
        members = set(comp)
        closed = all(w in members for v in comp for w in G.out[v])
        indeterminate = any(v in G.truncated for v in comp)
        infos.append(SCCInfo(tuple(sorted(comp)), closed, indeterminate))
    return infos


def has_trap(G: Digraph) -> bool:
    """Is there a provably closed component (walks entering never leave)?"""
    return any(c.closed and not c.indeterminate for c in finite_sccs(G))


@dataclass(frozen=True)
class GrowthCheck:
    kind: str
    n: int
    lhs: float
    rhs: float
    ok: bool


@dataclass(frozen=True)
class GrowthReport:
    ok: bool
    checks: tuple[GrowthCheck, ...]


def verify_spread_growth(G: Digraph, d: int | None = None,
                         max_checks: int = 4096) -> GrowthReport:
    """Check the spread growth guarantees on every sound argument.

    'ball-growth': F(|B(root, n-1)|) >= n, and 'log-lower':
    F(n) >= log_d(n) - 1 with d the max out-degree.  Requires a trap-free
    graph (FiniteTrapDetected otherwise); on truncated graphs the sound
    argument range is bounded by the radius.
    """
    if has_trap(G):
        raise FiniteTrapDetected("growth checks need a trap-free graph")
    dist = G.distances()
    limit = G.radius if G.truncated else int(dist.max()) + 1
    checks: list[GrowthCheck] = []
    n = 1
    while len(checks) < max_checks:
        b = int(np.count_nonzero(dist <= n - 1))
        if (G.truncated and n - 1 > G.radius) or b > limit:
            break
        value = ball_spread(G, b).value
        checks.append(GrowthCheck("ball-growth", n, float(value), float(n),
                                  value >= n))
        n += 1
    if d is None:
        d = G.max_out_degree
    if d >= 2:
        for n in range(1, limit + 1):
            if len(checks) >= max_checks:
                break
            value = ball_spread(G, n).value
            rhs = math.log(n, d) - 1.0
            checks.append(GrowthCheck("log-lower", n, float(value), rhs,
                                      value >= rhs))
    return GrowthReport(ok=all(c.ok for c in checks), checks=tuple(checks))


def check_spread_inequalities(G: Digraph, n_values: Iterable[int] | None = None
                              ) -> GrowthReport:
    """Universal spread inequalities at every sound (vertex, n) point:
    F(n) <= F(root, n) <= n and dist(v) <= F(v, n) <= dist(v) + n."""
    dist = G.distances()
    if n_values is None:
        top = G.radius if G.truncated else int(dist.max()) + 1
        n_values = range(0, top + 1)
    checks: list[GrowthCheck] = []
    for n in n_values:
        fr = ball_spread_at(G, G.root, n)
        fn = ball_spread(G, n).value
        checks.append(GrowthCheck("min-le-root", n, float(fn), float(fr), fn <= fr))
        checks.append(GrowthCheck("root-le-n", n, float(fr), float(n), fr <= n))
        bound = G.radius - n if (G.truncated and G.radius is not None) else None
        for v in range(G.n_vertices):
            if bound is not None and dist[v] > bound:
                continue
            fv = ball_spread_at(G, v, n)
            ok = dist[v] <= fv <= dist[v] + n
            checks.append(GrowthCheck("vertex-band", n, float(fv),
                                      float(dist[v]), ok))
    return GrowthReport(ok=all(c.ok for c in checks), checks=tuple(checks))


@dataclass(frozen=True)
class CrossingReport:
    num_steps: int
    t_min: int
    seeds: tuple[int, ...]
    crossings: tuple[int, ...]
    exceedances: tuple[int, ...] | None
    spread_max_arg: int


def crossing_counts(G: Digraph, d: int, num_steps: int, seeds: Sequence[int],
                    upper_envelope: np.ndarray | None = None,
                    upper_start: int | None = None) -> CrossingReport:
    """Count the guaranteed distance crossings along uniform d-choice walks.

    At step t >= d the walk's root distance is compared against
    F(floor(log_d t + log_d log_d t)); the count per seed is how often
    dist >= that threshold.  Optionally counts exceedances dist >
    upper_envelope[t] for t in [upper_start, num_steps] along the same runs.
    Requires a trap-free graph and out-degrees <= d (self-loop padding).
    """
    if d < 2:
        raise InvalidParameter(f"need d >= 2, got {d}")
    if num_steps < d:
        raise InvalidParameter(f"need num_steps >= t_min = d = {d}")
    if has_trap(G):
        raise FiniteTrapDetected("crossing walks need a trap-free graph")
    adj = G.adjacency_matrix(d)
    dist = G.distances()
    trunc = G.trunc_flags()
    t_min = d  # least t with log_d(log_d t) >= 0
    t = np.arange(num_steps + 1, dtype=np.float64)
    logd_t = np.zeros(num_steps + 1)
    a_of_t = np.zeros(num_steps + 1, dtype=np.int64)
    sl = slice(t_min, num_steps + 1)
    logd_t[sl] = np.log(t[sl]) / math.log(d)
    a_of_t[sl] = np.floor(logd_t[sl] + np.log(logd_t[sl]) / math.log(d)).astype(np.int64)
    amax = int(a_of_t.max())
    f_hat = np.zeros(amax + 1, dtype=np.int64)
    for a in range(amax + 1):
        f_hat[a] = ball_spread(G, a).value
    thr_lo = f_hat[a_of_t]
    if upper_envelope is None:
        thr_hi = np.zeros(num_steps + 1)
        hi_start, hi_end = num_steps + 1, num_steps  # empty range
    else:
        thr_hi = np.asarray(upper_envelope, dtype=np.float64)
        if thr_hi.shape != (num_steps + 1,):
            raise InvalidParameter("upper_envelope must have num_steps + 1 entries")
        hi_start = int(upper_start) if upper_start is not None else t_min
        hi_end = num_steps
    crossings = []
    exceedances = []
    for seed in seeds:
        choices = np.random.default_rng(seed).integers(0, d, num_steps, dtype=np.uint8)
        c, e, hit = _kernels.digraph_crossings(
            adj, G.root, choices, dist, trunc, thr_lo, t_min,
            thr_hi, hi_start, hi_end)
        if hit:
            raise TruncationUnsound(
                f"walk with seed {seed} left the sound region of the ball")
        crossings.append(int(c))
        exceedances.append(int(e))
    return CrossingReport(
        num_steps=num_steps, t_min=t_min, seeds=tuple(int(s) for s in seeds),
        crossings=tuple(crossings),
        exceedances=tuple(exceedances) if upper_envelope is not None else None,
        spread_max_arg=amax)


def walk_distances(G: Digraph, d: int, num_steps: int, seed: int,
                   grid: Sequence[int]) -> np.ndarray:
    """Root distance of one uniform d-choice walk at each grid step."""
    if has_trap(G):
        raise FiniteTrapDetected("distance walks need a trap-free graph")
    adj = G.adjacency_matrix(d)
    garr = np.asarray(sorted(int(g) for g in grid), dtype=np.int64)
    if garr.size == 0 or garr[0] < 1 or garr[-1] > num_steps:
        raise InvalidParameter("grid steps must lie in [1, num_steps]")
    out = np.zeros(garr.size, dtype=np.int64)
    choices = np.random.default_rng(seed).integers(0, d, num_steps, dtype=np.uint8)
    hit = _kernels.digraph_dist_at(adj, G.root, choices, G.distances(),
                                   G.trunc_flags(), garr, out)
    if hit:
        raise TruncationUnsound(f"walk with seed {seed} left the sound region")
    return out


def walk_distance_samples(G: Digraph, d: int, num_steps: int,
                          grid: Sequence[int], trials: int,
                          master_seed: int) -> np.ndarray:
    """Root distances of many independent walks, one row per trial.

    Trial i uses the derived seed mix64(master_seed, i), so any contiguous
    split of the trial range reproduces the same rows.
    """
    if trials < 1:
        raise InvalidParameter(f"need trials >= 1, got {trials}")
    if has_trap(G):
        raise FiniteTrapDetected("distance walks need a trap-free graph")
    adj = G.adjacency_matrix(d)
    garr = np.asarray(sorted(int(g) for g in grid), dtype=np.int64)
    if garr.size == 0 or garr[0] < 1 or garr[-1] > num_steps:
        raise InvalidParameter("grid steps must lie in [1, num_steps]")
    dist = G.distances()
    trunc = G.trunc_flags()
    samples = np.zeros((trials, garr.size), dtype=np.int64)
    for i in range(trials):
        seed = mix64(master_seed, i)
        choices = np.random.default_rng(seed).integers(0, d, num_steps,
                                                       dtype=np.uint8)
        hit = _kernels.digraph_dist_at(adj, G.root, choices, dist, trunc,
                                       garr, samples[i])
        if hit:
            raise TruncationUnsound(
                f"trial {i} (seed {seed}) left the sound region")
    return samples
