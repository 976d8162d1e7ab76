"""Threshold sequences partitioning the positive integers into classes.

A sequence 1 = m_1 < m_2 < ... splits {1, 2, ...} into half-open classes
[m_k, m_{k+1}).  class_of(j) returns the index k of the class containing j,
and the order on classes (precedes / precedes_eq / same_class) is what the
rewriting rules and all the closed-form bounds consume.

Terms are materialized lazily and saturate at a configurable cap
(default 2**63 - 1); queries that would need a term past the cap raise
SequenceCapExceeded rather than silently freezing.
"""

from __future__ import annotations

import math
import operator
import threading
from bisect import bisect_right
from typing import Callable, Sequence

SATURATION_CAP = 2**63 - 1

# speed_profile terms are exact integers m_k * 2**(m_{k+1} - m_k); a gap
# wider than this would overflow float range anyway, so we flag +inf.
PROFILE_GAP_LIMIT = 1000


class InvalidParameter(ValueError):
    """A constructor or query argument is out of its documented range."""


class SequenceCapExceeded(RuntimeError):
    """A term or class lookup needs a threshold past the saturation cap."""


# Named slowness gauges for make_slow_sequence.  Each must be nondecreasing
# and unbounded on the positive integers.
OMEGAS: dict[str, Callable[[int], float]] = {
    "log2": math.log2,
    "linear": float,
    "sqrt": math.sqrt,
}


class MSequence:
    """Lazily materialized strictly increasing thresholds m_1 = 1 < m_2 < ...

    `tail` records what lies past the last materialized term:
      "extend"    more terms can always be generated (identity, beta)
      "stop"      finite by construction; queries past the last class raise
      "frozen"    finite; the last class is [m_K, infinity)
      "truncated" generation stopped at the cap; the last class is known to
                  extend at least to the cap, so lookups are sound for
                  j <= cap and raise beyond
    """

    def __init__(self, spec: str, terms: Sequence[int], tail: str,
                 next_term: Callable[[list[int]], int] | None = None,
                 cap: int = SATURATION_CAP):
        if tail not in ("extend", "stop", "frozen", "truncated"):
            raise InvalidParameter(f"unknown tail kind {tail!r}")
        if tail == "extend" and next_term is None:
            raise InvalidParameter("extendable sequence needs a generator")
        terms = [int(t) for t in terms]
        if not terms or terms[0] != 1:
            raise InvalidParameter("threshold sequences must start at m_1 = 1")
        for a, b in zip(terms, terms[1:]):
            if b <= a:
                raise InvalidParameter(f"thresholds must strictly increase, got {a} then {b}")
        if terms[-1] > cap:
            raise SequenceCapExceeded(f"initial terms already pass cap {cap}")
        self.spec = spec
        self.cap = cap
        self.tail = tail
        self._terms = terms
        self._next_term = next_term
        self._lock = threading.Lock()

    @property
    def truncated(self) -> bool:
        return self.tail == "truncated"

    def __repr__(self) -> str:
        head = ",".join(str(t) for t in self._terms[:6])
        more = ",..." if self.tail == "extend" or len(self._terms) > 6 else ""
        return f"MSequence({self.spec!r}: {head}{more})"

    def _grow_once_locked(self) -> bool:
        """Materialize one more term; False if the tail does not extend."""
        if self.tail != "extend":
            return False
        nxt = int(self._next_term(self._terms))
        if nxt <= self._terms[-1]:
            raise InvalidParameter(f"generator produced non-increasing term {nxt}")
        if nxt > self.cap:
            raise SequenceCapExceeded(
                f"term {len(self._terms) + 1} of {self.spec} passes cap {self.cap}")
        self._terms.append(nxt)
        return True

    def term(self, k: int) -> int:
        """The k-th threshold m_k, 1-indexed."""
        if k < 1:
            raise InvalidParameter(f"term index must be >= 1, got {k}")
        with self._lock:
            while len(self._terms) < k:
                if not self._grow_once_locked():
                    raise SequenceCapExceeded(
                        f"{self.spec} has only {len(self._terms)} terms (tail={self.tail})")
            return self._terms[k - 1]

    def prefix(self, count: int) -> tuple[int, ...]:
        """The first `count` thresholds."""
        self.term(count)
        return tuple(self._terms[:count])

    def known_terms(self) -> tuple[int, ...]:
        """Terms materialized so far (the full sequence when tail != extend)."""
        with self._lock:
            return tuple(self._terms)

    def terms_up_to(self, jmax: int) -> tuple[int, ...]:
        """All thresholds m_k <= jmax (materializing as needed)."""
        with self._lock:
            while self._terms[-1] <= jmax:
                try:
                    if not self._grow_once_locked():
                        break
                except SequenceCapExceeded:
                    break
            return tuple(t for t in self._terms if t <= jmax)

    def class_of(self, j: int) -> int:
        """Index k of the class [m_k, m_{k+1}) containing j (j >= 1)."""
        if j < 1:
            raise InvalidParameter(f"class_of needs j >= 1, got {j}")
        with self._lock:
            while self._terms[-1] <= j and self.tail == "extend":
                self._grow_once_locked()
            if self._terms[-1] <= j:
                if self.tail == "stop":
                    raise SequenceCapExceeded(
                        f"{self.spec} ends at m_{len(self._terms)} = {self._terms[-1]}; "
                        f"class of {j} is undefined (extend='frozen' would allow it)")
                if self.tail == "truncated" and j > self.cap:
                    raise SequenceCapExceeded(
                        f"{self.spec} was truncated at cap {self.cap}; class of {j} unknown")
                return len(self._terms)
            return bisect_right(self._terms, j)

    def precedes(self, j1: int, j2: int) -> bool:
        """Strict class order: some threshold separates j1 from j2."""
        return self.class_of(j1) < self.class_of(j2)

    def precedes_eq(self, j1: int, j2: int) -> bool:
        return self.class_of(j1) <= self.class_of(j2)

    def same_class(self, j1: int, j2: int) -> bool:
        return self.class_of(j1) == self.class_of(j2)

    def speed_profile(self, n: int) -> float:
        """Sum of m_k * 2**(m_{k+1} - m_k) over classes with 2**m_{k+1} <= n.

        Up to explicit constants this tracks the expected reduced length of
        the n-step walk in the strict variant (see bounds.profile_envelope).
        Evaluated in exact integer arithmetic; a class gap wider than
        PROFILE_GAP_LIMIT flags the profile as +inf.
        """
        try:
            n = operator.index(n)
        except TypeError:
            raise InvalidParameter(f"speed_profile needs an integer n, got {n!r}") from None
        if n < 1:
            raise InvalidParameter(f"speed_profile needs n >= 1, got {n}")
        lim = n.bit_length() - 1  # floor(log2 n), exact
        if lim > self.cap:
            raise SequenceCapExceeded(f"log2(n) = {lim} passes cap {self.cap}")
        total = 0
        k = 1
        while True:
            try:
                mk1 = self.term(k + 1)
            except SequenceCapExceeded:
                # tail stop: the inclusion test m_{k+1} <= log2 n cannot be
                # decided without the next term
                if self.tail == "stop" and self.term(k) <= lim:
                    raise
                break
            if mk1 > lim:
                break
            mk = self.term(k)
            if mk1 - mk > PROFILE_GAP_LIMIT:
                return math.inf
            total += mk << (mk1 - mk)
            k += 1
        if total.bit_length() > 1024:
            return math.inf
        return float(total)


def speed_profile(seq: "MSequence", n: int) -> float:
    """Module-level alias for MSequence.speed_profile."""
    return seq.speed_profile(n)


def make_identity_sequence(cap: int = SATURATION_CAP) -> MSequence:
    """m_k = k: every positive integer is its own class."""
    return MSequence("identity", [1], "extend",
                     next_term=lambda ts: ts[-1] + 1, cap=cap)


def make_beta_sequence(alpha: float, cap: int = SATURATION_CAP) -> MSequence:
    """Geometric thresholds with ratio beta = 1/(1-alpha), 0 < alpha < 1.

    m_i = 1 + floor(beta) + floor(beta^2) + ... + floor(beta^(i-1)), so the
    i-th increment is floor(beta^i).  When beta lands within 1e-9 of an
    integer it is snapped and the powers are computed in exact integer
    arithmetic (an alpha like 2/3 only reaches beta = 3 up to float
    rounding, and floor would otherwise undershoot every increment); the
    recurrence m_i = beta*m_{i-1} + 1 then holds exactly (alpha = 1/2
    yields 1, 3, 7, 15, 31, ...).
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidParameter(f"alpha must lie in (0, 1), got {alpha}")
    beta = 1.0 / (1.0 - alpha)
    beta_int = round(beta)
    if abs(beta - beta_int) < 1e-9 and beta_int >= 2:
        def nxt(ts: list[int]) -> int:
            return ts[-1] + beta_int ** len(ts)
    else:
        def nxt(ts: list[int]) -> int:
            return ts[-1] + int(math.floor(beta ** len(ts)))

    return MSequence(f"beta:{alpha:g}", [1], "extend", next_term=nxt, cap=cap)


def make_explicit_sequence(terms: Sequence[int], extend: str = "error",
                           cap: int = SATURATION_CAP) -> MSequence:
    """A finite, explicitly given threshold list.

    extend="error" (default): class lookups past the last class raise.
    extend="frozen": the last class is treated as [m_K, infinity).
    """
    if extend not in ("error", "frozen"):
        raise InvalidParameter(f"extend must be 'error' or 'frozen', got {extend!r}")
    spec = "explicit:" + ",".join(str(int(t)) for t in terms)
    if extend == "frozen":
        spec += ":frozen"
    return MSequence(spec, terms, "stop" if extend == "error" else "frozen", cap=cap)


def make_slow_sequence(omega: str | Callable[[int], float],
                       cap: int = SATURATION_CAP,
                       name: str | None = None) -> MSequence:
    """Thresholds forced to grow faster than 2^m by a slowness gauge omega.

    m_1 = 1 and m_k is the smallest integer exceeding 2**m_{k-1} with
    omega(m_k) > sum_{i<k} (m_i + 2) + 3.  omega must be nondecreasing and
    unbounded (named gauges: "log2", "linear", "sqrt").  Construction is
    eager; when the next term would pass the cap the sequence is truncated
    (reported via .truncated, not an exception).
    """
    if isinstance(omega, str):
        if omega not in OMEGAS:
            raise InvalidParameter(f"unknown omega {omega!r}; choices: {sorted(OMEGAS)}")
        name = omega
        omega_fn = OMEGAS[omega]
    else:
        omega_fn = omega
        if name is None:
            name = getattr(omega, "__name__", "custom")
    if cap < 1:
        raise InvalidParameter(f"cap must be >= 1, got {cap}")

    terms = [1]
    truncated = False
    while True:
        threshold = sum(m + 2 for m in terms) + 3
        lo = (1 << terms[-1]) + 1  # candidates start just past 2**m_{k-1}
        if lo > cap or omega_fn(cap) <= threshold:
            truncated = True
            break
        if omega_fn(lo) > threshold:
            terms.append(lo)
            continue
        # omega is nondecreasing, so binary search for the first candidate
        # in (lo, cap] that clears the threshold
        hi = cap
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if omega_fn(mid) > threshold:
                hi = mid
            else:
                lo = mid
        terms.append(hi)

    spec = f"slow:{name}"
    if cap != SATURATION_CAP:
        spec += f":cap={cap}"
    return MSequence(spec, terms, "truncated" if truncated else "stop", cap=cap)


def parse_sequence(spec: str) -> MSequence:
    """Build a sequence from its mini-language string.

    Grammar: "identity" | "beta:<alpha>" | "explicit:<t1,t2,...>[:frozen]"
             | "slow:<omega>[:cap=<N>]"
    """
    parts = spec.strip().split(":")
    kind = parts[0]
    try:
        if kind == "identity" and len(parts) == 1:
            return make_identity_sequence()
        if kind == "beta" and len(parts) == 2:
            return make_beta_sequence(float(parts[1]))
        if kind == "explicit" and len(parts) in (2, 3):
            terms = [int(t) for t in parts[1].split(",") if t]
            if len(parts) == 3:
                if parts[2] != "frozen":
                    raise InvalidParameter(f"unknown explicit option {parts[2]!r}")
                return make_explicit_sequence(terms, extend="frozen")
            return make_explicit_sequence(terms)
        if kind == "slow" and len(parts) in (2, 3):
            cap = SATURATION_CAP
            if len(parts) == 3:
                if not parts[2].startswith("cap="):
                    raise InvalidParameter(f"unknown slow option {parts[2]!r}")
                cap = int(parts[2][4:])
            return make_slow_sequence(parts[1], cap=cap)
    except ValueError as exc:
        if isinstance(exc, InvalidParameter):
            raise
        raise InvalidParameter(f"bad sequence spec {spec!r}: {exc}") from exc
    raise InvalidParameter(f"bad sequence spec {spec!r}")
