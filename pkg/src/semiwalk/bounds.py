"""Closed-form envelopes for the expected reduced length of the n-step walk.

Each bound sums explicit per-class terms of the block decomposition and is
evaluated in exact integer arithmetic where the quantities are integers,
with math.ldexp for the 2**-m weights (harmless underflow to 0 for deep
classes).  min(2**m, n) comparisons go through bit_length so no large power
is ever materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .sequences import (InvalidParameter, MSequence, SequenceCapExceeded,
                        make_beta_sequence)

DEFAULT_C0 = 0.01  # calibration constant for the weak-variant lower bound


class HypothesisViolated(RuntimeError):
    """The sequence fails the growth hypothesis a bound needs."""


@dataclass(frozen=True)
class BoundEnvelope:
    n: int
    lower: float
    upper: float
    kind: str
    lower_terms: int
    upper_terms: int
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isnan(self.lower) or math.isnan(self.upper)):
            if self.lower > self.upper:
                raise InvalidParameter(
                    f"lower {self.lower} exceeds upper {self.upper}")


def _min_pow2(exp: int, n: int) -> int:
    """min(2**exp, n) without materializing 2**exp."""
    if exp <= n.bit_length() - 1:
        return 1 << exp
    return n


def _pow2_weight(numer: int, exp: int) -> float:
    """numer / 2**exp as a float (0.0 on underflow, +inf never: exp >= 0)."""
    try:
        return math.ldexp(numer, -exp)
    except OverflowError:
        return 0.0


def sandwich_bounds(seq: MSequence, n: int) -> BoundEnvelope:
    """Two-sided envelope for the strict variant at n steps.

    Classes with m_k <= n - 2 contribute
      (m_k + 1) / 2**(m_k + 3) * min(2**m_{k+1}, n)   below, and
      (m_k + 2) / 2**m_k       * min(2**m_{k+1}, n)   above (plus 3).
    A class whose successor threshold is beyond the sequence's range
    (frozen or truncated tail) uses min = n, which is what the open-ended
    class contributes.
    """
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    lower = 0.0
    upper = 3.0
    terms = seq.terms_up_to(n - 2) if n >= 3 else ()
    for k, mk in enumerate(terms, start=1):
        try:
            mk1 = seq.term(k + 1)
        except SequenceCapExceeded:
            if seq.tail == "stop":
                raise
            mk1 = None  # open-ended last class: min(2**m_{k+1}, n) = n
        cap = n if mk1 is None else _min_pow2(mk1, n)
        lower += _pow2_weight(mk + 1, mk + 3) * cap
        upper += _pow2_weight(mk + 2, mk) * cap
    return BoundEnvelope(n=n, lower=lower, upper=upper, kind="strict-sandwich",
                         lower_terms=len(terms), upper_terms=len(terms))


def profile_envelope(seq: MSequence, n: int, beta: float, delta: float) -> BoundEnvelope:
    """Envelope tying the mean reduced length to the speed profile.

    Valid for sequences with m_{i+1} <= beta * m_i + delta throughout
    (checked on every materialized pair up to n; HypothesisViolated if it
    fails).  With C = 2**(delta/beta) / beta:

        profile(n) / 8  <=  E length  <=  3 profile(n)
                                           + 3 C n**(1 - 1/beta) log2(n) + 3.
    """
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    if beta < 1.0 or delta < 0.0:
        raise InvalidParameter("need beta >= 1 and delta >= 0")
    i = 1
    while True:
        mi = seq.term(i)
        if mi > n:
            break
        try:
            mi1 = seq.term(i + 1)
        except SequenceCapExceeded:
            break
        if mi1 > beta * mi + delta + 1e-9:
            raise HypothesisViolated(
                f"{seq.spec}: m_{i + 1} = {mi1} > {beta} * {mi} + {delta}")
        i += 1
    profile = seq.speed_profile(n)
    c = 2.0 ** (delta / beta) / beta
    lower = profile / 8.0
    upper = 3.0 * profile + 3.0 * c * n ** (1.0 - 1.0 / beta) * math.log2(n) + 3.0
    return BoundEnvelope(
        n=n, lower=lower, upper=upper, kind="profile",
        lower_terms=i, upper_terms=i,
        constants={"beta": beta, "delta": delta, "C": c, "profile": profile})


def weak_bounds(seq: MSequence, n: int, c0: float = DEFAULT_C0) -> BoundEnvelope:
    """Envelope for the weak variant at n steps.

    Upper: sum over m_k <= n - 2 of (m_k + 2) * min(1, n / 2**m_k), plus 3;
    every class contributes at most one block.  Lower: c0 times
    sum over m_k <= log2 n of (m_k + 1), with c0 an calibration constant
    (the derivation fixes no explicit value).
    """
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n}")
    if not 0.0 < c0 <= 1.0:
        raise InvalidParameter(f"c0 must lie in (0, 1], got {c0}")
    upper = 3.0
    upper_ks = seq.terms_up_to(n - 2) if n >= 3 else ()
    lg = n.bit_length() - 1
    for mk in upper_ks:
        ratio = 1.0 if mk <= lg else _pow2_weight(n, mk)
        upper += (mk + 2) * min(1.0, ratio)
    lower_ks = seq.terms_up_to(lg) if lg >= 1 else ()
    raw = sum(mk + 1 for mk in lower_ks)
    lower = c0 * raw
    return BoundEnvelope(
        n=n, lower=lower, upper=upper, kind="weak",
        lower_terms=len(lower_ks), upper_terms=len(upper_ks),
        constants={"c0": c0, "raw_lower_sum": raw})


@dataclass(frozen=True)
class PeakRow:
    """Profile growth proxy at a peak point n = 2**m_t."""
    t: int
    m_t: int
    n: int
    profile: float
    proxy: float | None  # log(profile) / log(n); None when degenerate

    @property
    def degenerate(self) -> bool:
        return self.proxy is None


def profile_peak_table(alpha: float, t_values) -> list[PeakRow]:
    """Speed-profile proxies for the beta(alpha) sequence at n = 2**m_t.

    The proxy log_n(profile) at the peak points is the deterministic stand-in
    for the measured growth exponent; rows with profile <= 1 carry no
    information and are flagged degenerate.
    """
    seq = make_beta_sequence(alpha)
    rows = []
    for t in t_values:
        t = int(t)
        if t < 1:
            raise InvalidParameter(f"t values must be >= 1, got {t}")
        m_t = seq.term(t)
        n = 1 << m_t
        profile = seq.speed_profile(n)
        if profile > 1.0 and math.isfinite(profile) and m_t > 0:
            proxy = math.log(profile) / (m_t * math.log(2.0))
        else:
            proxy = None
        rows.append(PeakRow(t=t, m_t=m_t, n=n, profile=profile, proxy=proxy))
    return rows
