"""Adaptive subword occurrence: can a prefix-dependent target be dodged?

A strategy maps each proper prefix X_1..X_j (1 <= j <= n-k) of a uniform
word over a d-letter alphabet to a k-letter target; a hit means some window
X_{j+1..j+k} equals the target chosen from the prefix it follows.  The
closed-form floor 1 / (4 (d^k / n + 1)) holds for every strategy when
k <= n/2.  Words are handled as base-d integer codes with X_1 in the least
significant digit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .sequences import InvalidParameter

ENUMERATION_LIMIT = 1 << 24  # d**n above this refuses exact enumeration
SAMPLING_LIMIT = 1 << 57     # keeps codes (and the PRF input) inside int64

_KINDS = {"constant": 0, "last_letter": 1, "pseudorandom": 2}


def encode_word(letters, d: int) -> int:
    """Base-d code of a letter sequence (first letter least significant)."""
    code = 0
    for i, a in enumerate(letters):
        a = int(a)
        if not 0 <= a < d:
            raise InvalidParameter(f"letter {a} outside alphabet of size {d}")
        code += a * d ** i
    return code


def decode_word(code: int, d: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        out.append(code % d)
        code //= d
    return tuple(out)


@dataclass(frozen=True)
class SubwordStrategy:
    """A prefix-to-target rule of one of three kinds.

    constant: always the same k-letter target (code `target`).
    last_letter: target looked up from the last prefix letter (`table`,
      one target code per alphabet letter).
    pseudorandom: target = mix64(seed, (prefix_code << 6) | j) mod d**k, a
      deterministic splitmix64 hash of the whole prefix and its length.
    """

    kind: str
    d: int
    k: int
    target: int = 0
    table: tuple[int, ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidParameter(f"unknown strategy kind {self.kind!r}")
        if self.d < 2 or self.k < 1:
            raise InvalidParameter("need d >= 2 and k >= 1")
        dk = self.d ** self.k
        if self.kind == "constant" and not 0 <= self.target < dk:
            raise InvalidParameter(f"target {self.target} outside [0, {dk})")
        if self.kind == "last_letter":
            if len(self.table) != self.d:
                raise InvalidParameter(f"table needs {self.d} entries")
            if any(not 0 <= t < dk for t in self.table):
                raise InvalidParameter("table entry outside target range")

    def target_code(self, prefix_code: int, j: int, prefix_letters=None) -> int:
        """Target for the prefix with the given code and length j (>= 1)."""
        from .seeding import mix64

        if j < 1:
            raise InvalidParameter("prefixes have length >= 1")
        if self.kind == "constant":
            return self.target
        if self.kind == "last_letter":
            last = (prefix_code // self.d ** (j - 1)) % self.d
            return self.table[last]
        return mix64(self.seed, (prefix_code << 6) | j) % (self.d ** self.k)


def constant_strategy(letters, d: int) -> SubwordStrategy:
    """Strategy that always targets the given k letters (string or ints)."""
    if isinstance(letters, str):
        letters = [{"x": 0, "y": 1}.get(ch, ch) for ch in letters]
    try:
        codes = [int(a) for a in letters]
    except (TypeError, ValueError):
        raise InvalidParameter(f"cannot read target letters {letters!r}") from None
    return SubwordStrategy("constant", d, len(codes),
                           target=encode_word(codes, d))


def last_letter_strategy(table, d: int, k: int) -> SubwordStrategy:
    """Strategy reading only the last prefix letter; table[a] is the target
    code to play after letter a."""
    return SubwordStrategy("last_letter", d, k, table=tuple(int(t) for t in table))


def pseudorandom_strategy(seed: int, d: int, k: int) -> SubwordStrategy:
    """Deterministic hash-of-prefix strategy (a generic adversary).

    The seed is masked to 63 bits so the python and kernel routes hash
    identically.
    """
    return SubwordStrategy("pseudorandom", d, k, seed=int(seed) & (2**63 - 1))


def subword_bound(d: int, k: int, n: int) -> float:
    """Closed-form lower bound 1 / (4 (d**k / n + 1)) on the hit probability.

    Valid for every strategy when 1 <= k <= n / 2 (InvalidParameter outside
    that range, or if d < 2).
    """
    if d < 2:
        raise InvalidParameter(f"need d >= 2, got {d}")
    if k < 1 or 2 * k > n:
        raise InvalidParameter(f"need 1 <= k <= n/2, got k={k}, n={n}")
    return 1.0 / (4.0 * (d ** k / n + 1.0))


def _kernel_args(strategy: SubwordStrategy, n: int):
    powers = np.array([strategy.d ** i for i in range(n + 1)], dtype=np.int64)
    table = np.asarray(strategy.table or (0,) * strategy.d, dtype=np.int64)
    return (powers, _KINDS[strategy.kind], np.int64(strategy.target), table,
            np.int64(strategy.seed & (2**63 - 1)))


def exact_hit_probability(d: int, n: int, k: int,
                          strategy: SubwordStrategy) -> Fraction:
    """Exact hit probability by full enumeration of the d**n words."""
    _check_shape(d, n, k, strategy)
    if d ** n > ENUMERATION_LIMIT:
        raise InvalidParameter(
            f"d**n = {d ** n} exceeds the enumeration limit {ENUMERATION_LIMIT}")
    powers, kind, target, table, seed = _kernel_args(strategy, n)
    hits = int(_kernels.subword_hits_exact(n, k, powers, kind, target, table, seed))
    return Fraction(hits, d ** n)


@dataclass(frozen=True)
class HitEstimate:
    p: float
    stderr: float
    trials: int
    hits: int


def mc_hit_probability(d: int, n: int, k: int, strategy: SubwordStrategy,
                       trials: int, seed: int) -> HitEstimate:
    """Monte Carlo hit probability over `trials` uniform words."""
    _check_shape(d, n, k, strategy)
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    if d ** n > SAMPLING_LIMIT:
        raise InvalidParameter(f"d**n = {d ** n} exceeds the sampling limit")
    rng = np.random.default_rng(seed)
    codes = rng.integers(0, d ** n, size=trials, dtype=np.int64)
    powers, kind, target, table, prf_seed = _kernel_args(strategy, n)
    hits = int(_kernels.subword_hits_sample(codes, n, k, powers, kind, target,
                                            table, prf_seed))
    p = hits / trials
    stderr = (p * (1.0 - p) / trials) ** 0.5
    return HitEstimate(p=p, stderr=stderr, trials=trials, hits=hits)


def _check_shape(d: int, n: int, k: int, strategy: SubwordStrategy) -> None:
    if strategy.d != d or strategy.k != k:
        raise InvalidParameter(
            f"strategy is for (d={strategy.d}, k={strategy.k}), "
            f"query is (d={d}, k={k})")
    if k < 1 or k >= n:
        raise InvalidParameter(f"need 1 <= k < n, got k={k}, n={n}")


def hit_probability_reference(d: int, n: int, k: int,
                              strategy: SubwordStrategy) -> Fraction:
    """Pure-python enumeration oracle (small n only, used to pin kernels)."""
    if d ** n > 1 << 16:
        raise InvalidParameter("reference oracle is for tiny instances")
    hits = 0
    for code in range(d ** n):
        letters = decode_word(code, d, n)
        for j in range(1, n - k + 1):
            window = encode_word(letters[j:j + k], d)
            if window == strategy.target_code(code % d ** j, j):
                hits += 1
                break
    return Fraction(hits, d ** n)
