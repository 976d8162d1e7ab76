"""Numba kernels for the hot loops.

Walk stepping never materializes words: the reduced form evolves as
(leading run, stack of interior runs, trailing run) and absorption only ever
inspects the last interior run, so the length-only kernel keeps O(1) state.
Pure-python routes (RewriteSystem.normalize / append_generator folds,
enumeration oracles) stay the source of truth; tests pin kernels to them on
small inputs.

Letter encoding everywhere: 0 = x, 1 = y.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U64 = np.uint64


@njit(cache=True)
def mix64_u64(seed, index):
    """uint64 twin of seeding.mix64 (splitmix64 stream value)."""
    z = U64(seed) + (U64(index) + U64(1)) * U64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> U64(30))) * U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> U64(27))) * U64(0x94D049BB133111EB)
    return z ^ (z >> U64(31))


@njit(cache=True)
def walk_lengths(letters, cls, weak, grid, out):
    """Reduced length of the walk prefix at each grid step.

    letters: uint8[n] (0=x, 1=y); cls: int64[maxrun+1] class lookup table;
    weak: 1 for the weak variant; grid: ascending int64 step counts with
    grid[-1] <= n; out: int64[len(grid)] filled with lengths.
    """
    L = 0
    jt = 0
    has_x = False
    top = -1  # class of the last interior run, -1 if none
    gi = 0
    G = grid.shape[0]
    for step in range(letters.shape[0]):
        if letters[step] == 1:
            jt += 1
            L += 1
        else:
            if not has_x:
                has_x = True
                jt = 0
                L += 1
            elif jt > 0:
                c = cls[jt]
                if top >= 0 and (c < top or (weak == 1 and c == top)):
                    L -= jt  # run absorbed; the new x never lands
                else:
                    top = c
                    L += 1
                jt = 0
        s1 = step + 1
        while gi < G and grid[gi] == s1:
            out[gi] = L
            gi += 1


@njit(cache=True)
def walk_blocks(letters, cls, weak, grid, stack, scal, cnt_sum, cnt_sq, len_sum, len_sq):
    """One walk, accumulating block statistics at each grid step.

    stack: int64 scratch of size >= n//2 + 2 (interior runs, never popped).
    scal: float64[G, 8] accumulating n0, n0^2, n_inf, n_inf^2, delta,
    delta^2, length, length^2.  cnt_* / len_*: float64[G, C+1] accumulating
    per-class block counts / total block lengths and their squares.
    Accumulators add across calls so the caller owns the trial loop.
    """
    j0 = 0
    jt = 0
    has_x = False
    sp = 0
    L = 0
    gi = 0
    G = grid.shape[0]
    for step in range(letters.shape[0]):
        if letters[step] == 1:
            jt += 1
            L += 1
        else:
            if not has_x:
                has_x = True
                j0 = jt
                jt = 0
                L += 1
            elif jt > 0:
                c = cls[jt]
                if sp > 0 and (c < cls[stack[sp - 1]] or (weak == 1 and c == cls[stack[sp - 1]])):
                    L -= jt
                else:
                    stack[sp] = jt
                    sp += 1
                    L += 1
                jt = 0
        s1 = step + 1
        while gi < G and grid[gi] == s1:
            if has_x:
                n0 = j0
                ninf = jt
                delta = 1
            else:
                n0 = jt
                ninf = 0
                delta = 0
            scal[gi, 0] += n0
            scal[gi, 1] += n0 * n0
            scal[gi, 2] += ninf
            scal[gi, 3] += ninf * ninf
            scal[gi, 4] += delta
            scal[gi, 5] += delta
            scal[gi, 6] += L
            scal[gi, 7] += L * L
            i = 0
            while i < sp:
                c = cls[stack[i]]
                cnt = 0
                tl = 0
                while i < sp and cls[stack[i]] == c:
                    cnt += 1
                    tl += stack[i] + 1
                    i += 1
                cnt_sum[gi, c] += cnt
                cnt_sq[gi, c] += cnt * cnt
                len_sum[gi, c] += tl
                len_sq[gi, c] += tl * tl
            gi += 1


@njit(cache=True)
def digraph_crossings(adj, root, choices, dist, trunc,
                      thr_lo, lo_start, thr_hi, hi_start, hi_end):
    """Walk the digraph once, counting threshold crossings.

    adj: int64[V, d]; choices: uint8[N]; dist/trunc: per-vertex arrays;
    thr_lo: int64[N+1] (crossing when dist >= thr_lo[t], t >= lo_start);
    thr_hi: float64[N+1] (exceedance when dist > thr_hi[t], t in
    [hi_start, hi_end]).  Returns (crossings, exceedances, hit_truncated);
    the walk aborts the moment it lands on a truncated vertex.
    """
    v = root
    c = 0
    e = 0
    for i in range(choices.shape[0]):
        v = adj[v, choices[i]]
        if trunc[v] == 1:
            return c, e, 1
        t = i + 1
        if t >= lo_start and dist[v] >= thr_lo[t]:
            c += 1
        if t >= hi_start and t <= hi_end and dist[v] > thr_hi[t]:
            e += 1
    return c, e, 0


@njit(cache=True)
def digraph_dist_at(adj, root, choices, dist, trunc, grid, out):
    """Walk the digraph, recording dist-from-root at each grid step.

    Returns 1 (and stops) if the walk lands on a truncated vertex.
    """
    v = root
    gi = 0
    G = grid.shape[0]
    for i in range(choices.shape[0]):
        v = adj[v, choices[i]]
        if trunc[v] == 1:
            return 1
        t = i + 1
        while gi < G and grid[gi] == t:
            out[gi] = dist[v]
            gi += 1
    return 0


@njit(cache=True)
def _word_hits(w, n, k, powers, kind, target, table, seed):
    """1 if some window X_{j+1..j+k} of the base-d code w (LSB = X_1) equals
    the strategy's target for the prefix X_1..X_j, over 1 <= j <= n-k."""
    dk = powers[k]
    for j in range(1, n - k + 1):
        window = (w // powers[j]) % dk
        if kind == 0:
            tgt = target
        elif kind == 1:
            tgt = table[(w // powers[j - 1]) % powers[1]]
        else:
            prefix = w % powers[j]
            h = mix64_u64(U64(seed), (U64(prefix) << U64(6)) | U64(j))
            tgt = np.int64(h % U64(dk))
        if window == tgt:
            return 1
    return 0


@njit(cache=True)
def subword_hits_exact(n, k, powers, kind, target, table, seed):
    """Number of length-n words (all powers[n] of them) with a strategy hit."""
    hits = 0
    for w in range(powers[n]):
        hits += _word_hits(w, n, k, powers, kind, target, table, seed)
    return hits


@njit(cache=True)
def subword_hits_sample(codes, n, k, powers, kind, target, table, seed):
    """Number of sampled word codes with a strategy hit."""
    hits = 0
    for i in range(codes.shape[0]):
        hits += _word_hits(codes[i], n, k, powers, kind, target, table, seed)
    return hits


def warm_kernels() -> None:
    """Compile (or load from cache) every kernel on tiny inputs."""
    letters = np.array([1, 0, 1, 0], dtype=np.uint8)
    cls = np.arange(5, dtype=np.int64)
    grid = np.array([4], dtype=np.int64)
    out = np.zeros(1, dtype=np.int64)
    walk_lengths(letters, cls, 0, grid, out)
    stack = np.zeros(4, dtype=np.int64)
    scal = np.zeros((1, 8))
    per = np.zeros((1, 5))
    walk_blocks(letters, cls, 0, grid, stack, scal, per.copy(), per.copy(),
                per.copy(), per.copy())
    adj = np.array([[1, 1], [0, 1]], dtype=np.int64)
    dist = np.array([0, 1], dtype=np.int64)
    trunc = np.zeros(2, dtype=np.uint8)
    choices = np.array([0, 1], dtype=np.uint8)
    thr_lo = np.zeros(3, dtype=np.int64)
    thr_hi = np.zeros(3)
    digraph_crossings(adj, 0, choices, dist, trunc, thr_lo, 1, thr_hi, 1, 2)
    dout = np.zeros(1, dtype=np.int64)
    digraph_dist_at(adj, 0, choices, dist, trunc, np.array([2], dtype=np.int64), dout)
    powers = np.array([1, 2, 4, 8], dtype=np.int64)
    table = np.zeros(2, dtype=np.int64)
    subword_hits_exact(3, 1, powers, 0, 0, table, 7)
    subword_hits_sample(np.array([3, 5], dtype=np.int64), 3, 1, powers, 2, 0, table, 7)
    mix64_u64(U64(1), U64(2))
