"""Counter-based deterministic random streams.

Draws are pure functions of (seed, stream, index): there is no generator
state to advance, so any draw can be computed in any order, from any number
of workers, and the result is identical to a sequential run.  The campaign
simulator keys one stream per pulse, which is what makes its records
independent of iteration order.

The mixing function is the standard 64-bit splitmix finalizer, applied once
per input word with a golden-ratio offset so a zero input never hits the
zero fixed point.  Uniforms take the top 53 bits, giving values on [0, 1).
The vectorized numpy path is bit-identical to the scalar one (covered by
test).
"""

import numpy as np

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / (1 << 53)


def _mix64(z: int) -> int:
    z ^= z >> 30
    z = (z * _MIX1) & _MASK64
    z ^= z >> 27
    z = (z * _MIX2) & _MASK64
    return z ^ (z >> 31)


def _stream_key(seed: int, stream: int) -> int:
    h = _mix64((seed + _GAMMA) & _MASK64)
    return _mix64(((h ^ (stream & _MASK64)) + _GAMMA) & _MASK64)


def uniform(seed: int, stream: int, index: int) -> float:
    """Uniform on [0, 1), a pure function of (seed, stream, index)."""
    key = _stream_key(seed, stream)
    word = _mix64(((key ^ (index & _MASK64)) + _GAMMA) & _MASK64)
    return (word >> 11) * _INV_2_53


def uniform_block(seed: int, stream: int, count: int) -> np.ndarray:
    """Uniforms for indices 0..count-1 of one stream, vectorized.

    Bit-identical to calling :func:`uniform` index by index; uint64
    arithmetic wraps exactly like the masked Python-int arithmetic.
    """
    key = np.uint64(_stream_key(seed, stream))
    idx = np.arange(count, dtype=np.uint64)
    z = (key ^ idx) + np.uint64(_GAMMA)
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_MIX1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53


def poisson_inverse_cdf(lam: float, u: float) -> int:
    """Poisson sample by CDF inversion: smallest k with F(k) >= u.

    Platform-independent by construction (no library sampler involved).
    Intended for the modest means a pulsed campaign produces; the scan is
    O(lam) per draw, and means beyond 700 are rejected outright (there
    exp(-lam) underflows and CDF inversion in doubles stops working).
    """
    if lam < 0 or not np.isfinite(lam):
        raise ValueError(f"lam must be finite and >= 0, got {lam!r}")
    if lam > 700.0:
        raise ValueError(f"mean {lam!r} too large for CDF inversion sampling")
    if not (0 <= u < 1):
        raise ValueError(f"u must lie in [0, 1), got {u!r}")
    if lam == 0.0:
        return 0
    k = 0
    pmf = np.exp(-lam)
    cdf = pmf
    # Never scan materially past the mean plus a generous Gaussian tail.
    limit = int(lam + 12.0 * lam ** 0.5 + 60.0)
    while u >= cdf and k < limit:
        k += 1
        pmf *= lam / k
        cdf += pmf
    return k
