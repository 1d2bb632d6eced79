"""Counter-based random number generation (SplitMix64).

Every random quantity in the library is derived from a 64-bit stream seed.
The i-th raw draw of a stream is ``mix64(seed + (i+1)*GAMMA)``, a pure
function of (seed, i), so results are bit-identical regardless of platform,
execution order, or thread count.  Seeds for sub-streams (per trial, per
purpose) are derived with :func:`stream_seed`, never with Python's salted
``hash``.
"""

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_INIT = 0x243F6A8885A308D3

_GAMMA_U = np.uint64(_GAMMA)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)


def _mix64_int(z):
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def stream_seed(*tokens):
    """Fold integer and string tokens into a 64-bit sub-stream seed.

    Deterministic and stable across runs: ints are folded by value, strings
    byte-by-byte (length-prefixed).  Used to split independent streams, e.g.
    ``stream_seed(master, algo, s, m, trial)`` for one benchmark trial.
    """
    acc = _INIT
    for tok in tokens:
        if isinstance(tok, (int, np.integer)):
            words = (int(tok) & _MASK,)
        elif isinstance(tok, str):
            data = tok.encode("utf-8")
            words = (len(data), *data)
        else:
            raise TypeError(f"cannot fold token of type {type(tok).__name__}")
        for w in words:
            acc = _mix64_int((acc ^ w) + _GAMMA)
    return acc


class CounterRng:
    """SplitMix64 stream positioned by an internal draw counter."""

    def __init__(self, seed):
        self._seed = np.uint64(int(seed) & _MASK)
        self._count = 0

    def raw(self, n):
        """Next ``n`` raw uint64 draws."""
        idx = np.arange(self._count + 1, self._count + n + 1, dtype=np.uint64)
        self._count += n
        with np.errstate(over="ignore"):
            z = self._seed + idx * _GAMMA_U
            z = (z ^ (z >> np.uint64(30))) * _MIX_A
            z = (z ^ (z >> np.uint64(27))) * _MIX_B
            return z ^ (z >> np.uint64(31))

    def uniform(self, n):
        """``n`` doubles in the open interval (0, 1)."""
        return ((self.raw(n) >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53

    def normal(self, n):
        """``n`` standard normal draws via Box-Muller on the counter stream.

        Pairs (cos, sin) are interleaved: even outputs use the cosine branch,
        odd outputs the sine branch of the same uniform pair.
        """
        k = (n + 1) // 2
        u1 = self.uniform(k)
        u2 = self.uniform(k)
        r = np.sqrt(-2.0 * np.log(u1))
        ang = 2.0 * np.pi * u2
        out = np.empty(2 * k)
        out[0::2] = r * np.cos(ang)
        out[1::2] = r * np.sin(ang)
        return out[:n]

    def signs(self, n):
        """``n`` independent uniform +-1 values (top bit of the raw draw)."""
        return np.where(self.raw(n) >> np.uint64(63), 1.0, -1.0)

    def permutation(self, n):
        """Uniform random permutation of ``range(n)`` (random-key argsort)."""
        return np.argsort(self.raw(n), kind="stable")

    def subset(self, n, k):
        """Sorted uniform random k-subset of ``range(n)``."""
        return np.sort(self.permutation(n)[:k])
