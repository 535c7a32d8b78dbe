"""splitmix64 uniform generator shared by both stochastic backends.

The compiled and pure-Python Gillespie kernels must consume bit-identical
uniform streams so that outcomes do not depend on which backend is active;
splitmix64 is trivial to reproduce exactly in C and in Python integers.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance the state and return (new_state, 64-bit output)."""
    state = (state + _GOLDEN) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return state, z


def derive_seed(base_seed: int, index: int) -> int:
    """Per-cell seed: scramble base_seed xor (index+1)*golden-ratio step.

    Used by sweeps so that cells get decorrelated, reproducible streams.
    """
    mixed = (int(base_seed) ^ (((index + 1) * _GOLDEN) & _MASK)) & _MASK
    _, out = splitmix64_next(mixed)
    return out


class SplitMix64:
    """Stateful wrapper producing doubles in [0, 1)."""

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_double(self) -> float:
        self.state, z = splitmix64_next(self.state)
        return (z >> 11) * 2.0**-53
