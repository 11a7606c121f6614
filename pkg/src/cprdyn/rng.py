"""Seedable, splittable random number generation.

The generator is xoshiro256** seeded through the splitmix64 expander, the
standard pairing recommended by the xoshiro authors. Both are implemented
here in pure Python (64-bit integer arithmetic with explicit masking) and
again in the compiled kernel; the two produce identical streams, which keeps
simulations reproducible across backends.

Independent streams (one per realization, plus internal sub-streams for
network construction, population placement, and micro-step draws) are derived
with :func:`derive_seed`, a splitmix64-style hash of (master seed, index).
Deriving by index rather than by drawing from a shared generator makes
ensemble results independent of evaluation order.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15

# Sub-stream indexes for a single realization. Realization indexes used by
# ensembles stay below 2**32, so these cannot collide with them.
STREAM_NETWORK = 1 << 32
STREAM_POPULATION = (1 << 32) + 1
STREAM_STEPS = (1 << 32) + 2

_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def _mix64(z: int) -> int:
    """splitmix64 output function (finalizer)."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state, returning (new_state, output)."""
    state = (state + GOLDEN) & MASK64
    return state, _mix64(state)


def derive_seed(master: int, index: int) -> int:
    """Derive the seed of an independent stream from (master, index)."""
    z = (master + ((index + 1) * GOLDEN & MASK64)) & MASK64
    return _mix64(z)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    """xoshiro256** with splitmix64 seeding.

    Mirrors the compiled kernel's generator exactly, including the mapping
    from 64-bit outputs to doubles and to bounded integers.
    """

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        state = seed & MASK64
        state, self.s0 = splitmix64_next(state)
        state, self.s1 = splitmix64_next(state)
        state, self.s2 = splitmix64_next(state)
        state, self.s3 = splitmix64_next(state)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return result

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n). Identical arithmetic to the kernel."""
        return int(self.uniform() * n)
