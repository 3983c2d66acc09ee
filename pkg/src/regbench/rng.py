"""Seeded SplitMix64 stream.

The generator is counter based: the k-th output (k = 1, 2, ...) of a stream
with seed ``s`` is ``mix(s + k * 0x9E3779B97F4A7C15 mod 2**64)`` where
``mix`` is the standard SplitMix64 finalizer. Doubles take the top 53 bits,
normal deviates use the Box-Muller transform on consecutive pairs of
doubles. Everything is defined on unsigned 64-bit integers so the stream is
reproducible from any language.
"""

import numpy as np

GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Sequential SplitMix64 stream.

    Parameters
    ----------
    seed : int
        Any Python integer; reduced modulo 2**64.
    """

    def __init__(self, seed):
        self._state = int(seed) & _MASK64

    @property
    def state(self):
        return self._state

    def next_u64(self, count):
        """Return the next ``count`` outputs as a ``uint64`` array."""
        count = int(count)
        if count < 0:
            raise ValueError("count must be non-negative")
        k = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self._state) + k * GOLDEN_GAMMA
            out = _mix(z)
        self._state = (self._state + count * int(GOLDEN_GAMMA)) & _MASK64
        return out

    def uniform(self, count):
        """Doubles in [0, 1) built from the top 53 bits of each output."""
        return (self.next_u64(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normal(self, count):
        """Standard normal deviates via Box-Muller.

        Each pair of deviates consumes two uniforms ``u1, u2``:
        ``r = sqrt(-2 ln(1 - u1))``, outputs ``r cos(2 pi u2)``,
        ``r sin(2 pi u2)``. An odd ``count`` discards the final sine.
        """
        pairs = (int(count) + 1) // 2
        u = self.uniform(2 * pairs)
        u1, u2 = u[0::2], u[1::2]
        r = np.sqrt(-2.0 * np.log1p(-u1))
        theta = 2.0 * np.pi * u2
        z = np.empty(2 * pairs)
        z[0::2] = r * np.cos(theta)
        z[1::2] = r * np.sin(theta)
        return z[:count]

    def permutation(self, n):
        """Fisher-Yates shuffle of ``range(n)``.

        Position ``i`` (from ``n - 1`` down to 1) swaps with
        ``j = floor(u * (i + 1))`` where ``u`` is the next uniform.
        """
        idx = list(range(n))
        if n < 2:
            return np.asarray(idx, dtype=np.int64)
        u = self.uniform(n - 1)
        for t, i in enumerate(range(n - 1, 0, -1)):
            j = int(u[t] * (i + 1))
            idx[i], idx[j] = idx[j], idx[i]
        return np.asarray(idx, dtype=np.int64)
