"""Exact self-convolution of nonnegative integer sequences.

Two transforms are available:

* ``fft``: float64 real FFT.  Accepted only when every pre-rounding value is
  within 0.25 of an integer and every coefficient is below 2**52; otherwise
  ``PrecisionError`` is raised.
* ``ntt``: number-theoretic transform modulo 998244353, exact whenever each
  true coefficient is below the modulus.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError, PrecisionError, ResourceError

NTT_MODULUS = 998244353  # 119 * 2**23 + 1
NTT_ROOT = 3
NTT_MAX_LOG = 23

FFT_MARGIN = 0.25
FFT_MAX_COEFF = 1 << 52


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def self_convolve_fft(a: np.ndarray) -> np.ndarray:
    """Exact ``a * a`` via float FFT with a certified rounding margin."""
    a = np.asarray(a)
    out_len = 2 * len(a) - 1
    size = _next_pow2(out_len)
    spec = np.fft.rfft(a.astype(np.float64), size)
    raw = np.fft.irfft(spec * spec, size)[:out_len]
    rounded = np.rint(raw)
    residual = float(np.max(np.abs(raw - rounded))) if out_len else 0.0
    if residual >= FFT_MARGIN:
        raise PrecisionError(f"FFT rounding residual {residual:.3g} >= {FFT_MARGIN}")
    if out_len and rounded.max() >= FFT_MAX_COEFF:
        raise PrecisionError("FFT coefficient exceeds 2**52; float result is not certified")
    return rounded.astype(np.int64)


def _bit_reverse_permutation(size: int) -> np.ndarray:
    bits = size.bit_length() - 1
    idx = np.arange(size, dtype=np.int64)
    rev = np.zeros(size, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def ntt(values: np.ndarray, inverse: bool = False) -> np.ndarray:
    """In-order iterative radix-2 NTT over Z/998244353; length must be a power of two."""
    p = NTT_MODULUS
    size = len(values)
    if size & (size - 1) or size == 0:
        raise InvalidArgumentError("NTT length must be a power of two")
    if size > 1 << NTT_MAX_LOG:
        raise ResourceError(f"NTT length {size} exceeds 2**{NTT_MAX_LOG}")
    a = np.asarray(values, dtype=np.uint64)[_bit_reverse_permutation(size)] % p
    half = 1
    while half < size:
        w = pow(NTT_ROOT, (p - 1) // (2 * half), p)
        if inverse:
            w = pow(w, p - 2, p)
        # twiddles w**j for j < half, built by doubling to stay vectorized
        tw = np.ones(half, dtype=np.uint64)
        step = 1
        while step < half:
            tw[step : 2 * step] = tw[:step] * np.uint64(pow(w, step, p)) % np.uint64(p)
            step *= 2
        blocks = a.reshape(-1, 2, half)
        u = blocks[:, 0, :].copy()
        v = blocks[:, 1, :] * tw % np.uint64(p)
        blocks[:, 0, :] = (u + v) % np.uint64(p)
        blocks[:, 1, :] = (u + np.uint64(p) - v) % np.uint64(p)
        half *= 2
    if inverse:
        a = a * np.uint64(pow(size, p - 2, p)) % np.uint64(p)
    return a


def self_convolve_ntt(a: np.ndarray) -> np.ndarray:
    """Exact ``a * a`` for nonnegative integer input.

    Exactness requires every true coefficient to be below the modulus; this is
    checked with the bound ``max(a)**2 * len(a)``.
    """
    a = np.asarray(a, dtype=np.int64)
    out_len = 2 * len(a) - 1
    if len(a) and int(a.max()) ** 2 * len(a) >= NTT_MODULUS:
        raise PrecisionError("convolution coefficients may reach the NTT modulus")
    size = _next_pow2(out_len)
    buf = np.zeros(size, dtype=np.uint64)
    buf[: len(a)] = a
    spec = ntt(buf)
    prod = spec * spec % np.uint64(NTT_MODULUS)
    return ntt(prod, inverse=True)[:out_len].astype(np.int64)


def self_convolve(a: np.ndarray, transform: str = "fft") -> np.ndarray:
    if transform == "fft":
        return self_convolve_fft(a)
    if transform == "ntt":
        return self_convolve_ntt(a)
    raise InvalidArgumentError(f"unknown transform {transform!r}; expected 'fft' or 'ntt'")


def self_convolve_naive(a) -> list[int]:
    """Quadratic schoolbook convolution in Python integers (test oracle)."""
    a = [int(x) for x in a]
    out = [0] * max(0, 2 * len(a) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(a):
                out[i + j] += x * y
    return out
