"""Deterministic seed derivation.

Every Monte Carlo entry point takes a single master seed; per-trial (or
per-strategy, per-walk) seeds are derived as mix64(master, index), the
splitmix64 output function applied to master + (index+1) * golden gamma.
Results are therefore reproducible bit-for-bit and independent of trial
execution order, which keeps any future parallel split safe.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(seed: int, index: int) -> int:
    """splitmix64 stream value: finalizer of seed + (index+1)*gamma, mod 2^64."""
    z = (seed + (index + 1) * _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)
