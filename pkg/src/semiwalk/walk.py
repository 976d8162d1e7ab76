"""Monte Carlo measurement of reduced length along the right-multiplication walk.

A walk appends n i.i.d. uniform generators (0 = x, 1 = y, drawn from
numpy's PCG64 seeded per trial with mix64(master_seed, trial)) and tracks
the reduced form.  estimate_speed / estimate_block_stats aggregate means and
standard errors over trials at the configured grid of step counts; results
are bit-reproducible and independent of trial execution order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .rewriting import BlockStats, ReducedWord, RewriteSystem, VARIANTS
from .seeding import mix64
from .sequences import InvalidParameter, MSequence

MAX_WORD_COLLECTION = 10_000


def class_table(seq: MSequence, max_run: int) -> np.ndarray:
    """cls[j] = class of j for 0 < j <= max_run (cls[0] is padding).

    Raises per the sequence's tail policy if some run length up to max_run
    has no defined class.
    """
    if max_run < 1:
        raise InvalidParameter(f"max_run must be >= 1, got {max_run}")
    seq.class_of(max_run)  # trips the policy error for uncovered tails
    terms = np.asarray(seq.terms_up_to(max_run), dtype=np.int64)
    return np.searchsorted(terms, np.arange(max_run + 1), side="right").astype(np.int64)


def walk_letters(n: int, seed: int) -> np.ndarray:
    """The letter stream of one walk: uint8[n], 0 = x, 1 = y."""
    return np.random.default_rng(seed).integers(0, 2, n, dtype=np.uint8)


@dataclass(frozen=True)
class WalkConfig:
    """Everything that determines a speed measurement bit-for-bit."""

    seq: MSequence
    variant: str
    n_grid: tuple[int, ...]
    trials: int
    master_seed: int

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidParameter(f"variant must be one of {VARIANTS}")
        grid = tuple(int(n) for n in self.n_grid)
        if not grid or any(n < 1 for n in grid) or list(grid) != sorted(set(grid)):
            raise InvalidParameter("n_grid must be ascending distinct positive ints")
        object.__setattr__(self, "n_grid", grid)
        if self.trials < 1:
            raise InvalidParameter("trials must be >= 1")

    def fingerprint(self) -> str:
        grid = ",".join(str(n) for n in self.n_grid)
        return (f"seq={self.seq.spec};variant={self.variant};grid={grid};"
                f"trials={self.trials};master_seed={self.master_seed}")


def _mean_stderr(sums: np.ndarray, sqs: np.ndarray, trials: int):
    mean = sums / trials
    if trials > 1:
        var = np.maximum(sqs - trials * mean * mean, 0.0) / (trials - 1)
        stderr = np.sqrt(var / trials)
    else:
        stderr = np.zeros_like(mean)
    return mean, stderr


@dataclass
class SpeedCurve:
    """Mean reduced length (with standard errors) over the step grid."""

    config: WalkConfig
    n: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray

    @property
    def trials(self) -> int:
        return self.config.trials

    def to_csv(self, path=None) -> str | None:
        lines = ["# semiwalk speed curve", f"# {self.config.fingerprint()}",
                 "n,mean,stderr,trials"]
        for n, m, s in zip(self.n, self.mean, self.stderr):
            lines.append(f"{int(n)},{float(m)!r},{float(s)!r},{self.trials}")
        text = "\n".join(lines) + "\n"
        if path is None:
            return text
        with open(path, "w") as fh:
            fh.write(text)
        return None

    def to_json_dict(self) -> dict:
        return {
            "kind": "speed_curve",
            "fingerprint": self.config.fingerprint(),
            "points": [
                {"n": int(n), "mean": float(m), "stderr": float(s)}
                for n, m, s in zip(self.n, self.mean, self.stderr)
            ],
            "trials": self.trials,
        }

    def to_json(self, path=None) -> str | None:
        text = json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"
        if path is None:
            return text
        with open(path, "w") as fh:
            fh.write(text)
        return None


@dataclass
class BlockCurve:
    """Block-decomposition statistics over the step grid.

    Per-class arrays are indexed [grid point, class id]; column 0 is padding.
    """

    config: WalkConfig
    n: np.ndarray
    num_classes: int
    n0_mean: np.ndarray
    n0_stderr: np.ndarray
    ninf_mean: np.ndarray
    ninf_stderr: np.ndarray
    delta_mean: np.ndarray
    delta_stderr: np.ndarray
    length_mean: np.ndarray
    length_stderr: np.ndarray
    count_mean: np.ndarray
    count_stderr: np.ndarray
    len_mean: np.ndarray
    len_stderr: np.ndarray

    @property
    def trials(self) -> int:
        return self.config.trials


def simulate_walk(seq: MSequence, variant: str, n: int, seed: int,
                  return_words: bool = False):
    """One walk of n steps; lengths[i] = reduced length after i steps.

    With return_words=True (n <= 10_000) also returns the list of reduced
    words after each step, computed by the pure append_generator fold.
    """
    if n < 1:
        raise InvalidParameter(f"walk length must be >= 1, got {n}")
    letters = walk_letters(n, seed)
    lengths = np.zeros(n + 1, dtype=np.int64)
    if return_words:
        if n > MAX_WORD_COLLECTION:
            raise InvalidParameter(
                f"word collection is capped at n <= {MAX_WORD_COLLECTION}")
        system = RewriteSystem(seq, variant)
        w = system.identity()
        words = [w]
        for i, b in enumerate(letters):
            w = system.append_generator(w, "y" if b else "x")
            words.append(w)
            lengths[i + 1] = w.length()
        return lengths, words
    if variant not in VARIANTS:
        raise InvalidParameter(f"variant must be one of {VARIANTS}")
    cls = class_table(seq, n)
    grid = np.arange(1, n + 1, dtype=np.int64)
    _kernels.walk_lengths(letters, cls, 1 if variant == "weak" else 0,
                          grid, lengths[1:])
    return lengths


def walk_block_stats(seq: MSequence, variant: str, n: int, seed: int) -> BlockStats:
    """Block decomposition of the final word of one walk (pure fold route)."""
    system = RewriteSystem(seq, variant)
    w = system.identity()
    for b in walk_letters(n, seed):
        w = system.append_generator(w, "y" if b else "x")
    return system.block_stats(w)


def estimate_speed(config: WalkConfig) -> SpeedCurve:
    """Monte Carlo mean reduced length at each grid point."""
    n_max = config.n_grid[-1]
    cls = class_table(config.seq, n_max)
    weak = 1 if config.variant == "weak" else 0
    grid = np.asarray(config.n_grid, dtype=np.int64)
    G = grid.size
    sums = np.zeros(G)
    sqs = np.zeros(G)
    out = np.zeros(G, dtype=np.int64)
    for trial in range(config.trials):
        letters = walk_letters(n_max, mix64(config.master_seed, trial))
        _kernels.walk_lengths(letters, cls, weak, grid, out)
        sums += out
        sqs += (out * out).astype(np.float64)
    mean, stderr = _mean_stderr(sums, sqs, config.trials)
    return SpeedCurve(config=config, n=grid.copy(), mean=mean, stderr=stderr)


def estimate_block_stats(config: WalkConfig) -> BlockCurve:
    """Monte Carlo block statistics at each grid point."""
    n_max = config.n_grid[-1]
    cls = class_table(config.seq, n_max)
    weak = 1 if config.variant == "weak" else 0
    grid = np.asarray(config.n_grid, dtype=np.int64)
    G = grid.size
    C = int(cls.max())
    stack = np.zeros(n_max // 2 + 2, dtype=np.int64)
    scal = np.zeros((G, 8))
    cnt_sum = np.zeros((G, C + 1))
    cnt_sq = np.zeros((G, C + 1))
    len_sum = np.zeros((G, C + 1))
    len_sq = np.zeros((G, C + 1))
    for trial in range(config.trials):
        letters = walk_letters(n_max, mix64(config.master_seed, trial))
        _kernels.walk_blocks(letters, cls, weak, grid, stack, scal,
                             cnt_sum, cnt_sq, len_sum, len_sq)
    T = config.trials
    n0_mean, n0_stderr = _mean_stderr(scal[:, 0], scal[:, 1], T)
    ninf_mean, ninf_stderr = _mean_stderr(scal[:, 2], scal[:, 3], T)
    delta_mean, delta_stderr = _mean_stderr(scal[:, 4], scal[:, 5], T)
    length_mean, length_stderr = _mean_stderr(scal[:, 6], scal[:, 7], T)
    count_mean, count_stderr = _mean_stderr(cnt_sum, cnt_sq, T)
    len_mean, len_stderr = _mean_stderr(len_sum, len_sq, T)
    return BlockCurve(
        config=config, n=grid.copy(), num_classes=C,
        n0_mean=n0_mean, n0_stderr=n0_stderr,
        ninf_mean=ninf_mean, ninf_stderr=ninf_stderr,
        delta_mean=delta_mean, delta_stderr=delta_stderr,
        length_mean=length_mean, length_stderr=length_stderr,
        count_mean=count_mean, count_stderr=count_stderr,
        len_mean=len_mean, len_stderr=len_stderr,
    )


@dataclass(frozen=True)
class ExponentEstimate:
    """max over the chosen points of log(mean)/log(n)."""

    value: float
    points: tuple[int, ...]
    proxies: tuple[float, ...]


def peak_points(seq: MSequence, n_grid) -> tuple[int, ...]:
    """Grid values of the form 2**m_t (where the profile sum jumps)."""
    peaks = []
    for n in n_grid:
        n = int(n)
        lg = n.bit_length() - 1
        if (1 << lg) != n:
            continue
        if lg in seq.terms_up_to(lg):
            peaks.append(n)
    return tuple(peaks)


def estimate_exponent(curve: SpeedCurve, points=None) -> ExponentEstimate:
    """Growth-exponent proxy from a measured curve.

    Uses log(mean)/log(n) at the chosen points (default: the peak points
    2**m_t present in the grid) and returns the max.  Points with n < 2 or
    mean <= 1 carry no information at this scale and are skipped.
    """
    if points is None:
        points = peak_points(curve.config.seq, curve.n)
    points = tuple(int(p) for p in points)
    index = {int(n): i for i, n in enumerate(curve.n)}
    used = []
    proxies = []
    for p in points:
        if p not in index:
            raise InvalidParameter(f"point {p} is not on the curve grid")
        m = float(curve.mean[index[p]])
        if p < 2 or m <= 1.0:
            continue
        used.append(p)
        proxies.append(math.log(m) / math.log(p))
    if not used:
        raise InvalidParameter("no usable points for an exponent estimate")
    return ExponentEstimate(value=max(proxies), points=tuple(used),
                            proxies=tuple(proxies))
