"""
numpy kernels for enumeration and annealing over small alphabets.

Entries are held as int64 (real alphabets) or complex128 with small integer
parts, so every sum below is exact.
"""

from typing import Iterator, List, Optional, Tuple

import numpy as np


def symbol_values(symbols) -> np.ndarray:
    """Alphabet symbols as a numpy vector (int64 when all real)."""
    values = [complex(s) for s in symbols]
    if all(v.imag == 0 for v in values):
        return np.array([int(v.real) for v in values], dtype=np.int64)
    return np.array(values, dtype=np.complex128)


def symbol_grid(symbols: np.ndarray, n: int, start: int, stop: int) -> np.ndarray:
    """Candidates with lexicographic indices [start, stop); element 0 is the most significant digit."""
    q = len(symbols)
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((len(idx), n), dtype=np.int64)
    for pos in range(n - 1, -1, -1):
        digits[:, pos] = idx % q
        idx //= q
    return symbols[digits]


def batch_acf(X: np.ndarray) -> np.ndarray:
    """Aperiodic ACF of every row, lags 0..n-1."""
    X = np.atleast_2d(X)
    n = X.shape[1]
    conj = np.conj(X) if np.iscomplexobj(X) else X
    out = np.empty(X.shape, dtype=X.dtype)
    for l in range(n):
        out[:, l] = (X[:, :n - l] * conj[:, l:]).sum(axis=1)
    return out


def rset_profiles(acf: np.ndarray, levels: int) -> List[np.ndarray]:
    """
    ACFs of the sign-block recursion members, derived from the seed ACF.

    Each level maps a profile x of length s to the two children
    x(+x) and x(-x):  y(l) = 2x(l) + sign*conj(x(s-l)) for l < s, and
    y(l) = sign*x(l-s) for s <= l < 2s. Negation leaves an ACF unchanged,
    so 2^levels profiles cover every member.

    Args:
        acf: (K, s) array of seed ACFs (one row per candidate)
        levels: recursion depth t

    Returns:
        List of (K, 2^levels * s) arrays
    """
    profiles = [np.atleast_2d(acf)]
    for _ in range(levels):
        nxt = []
        for x in profiles:
            s = x.shape[1]
            # x(s - l) for l = 0..s-1, with x(s) = 0
            mirrored = np.zeros_like(x)
            mirrored[:, 1:] = x[:, :0:-1]
            if np.iscomplexobj(mirrored):
                mirrored = np.conj(mirrored)
            for sign in (1, -1):
                y = np.empty((x.shape[0], 2 * s), dtype=x.dtype)
                y[:, :s] = 2 * x + sign * mirrored
                y[:, s:] = sign * x
                nxt.append(y)
        profiles = nxt
    return profiles


def profile_merit(profile: np.ndarray, kind: str) -> np.ndarray:
    """
    Merit per row of an aperiodic ACF array.

    kind is one of 'lambdaA', 'lambdaP', 'SA', 'SP'. Returned as float64
    magnitudes (exact for real alphabets).
    """
    n = profile.shape[1]
    if n == 1:
        return np.zeros(profile.shape[0])
    values = profile[:, 1:]
    if kind in ("lambdaP", "SP"):
        tail = profile[:, :0:-1]
        if np.iscomplexobj(tail):
            tail = np.conj(tail)
        values = values + tail
    mags = np.abs(values).astype(np.float64)
    if kind in ("lambdaA", "lambdaP"):
        return mags.max(axis=1)
    return mags.sum(axis=1)


def rset_merit(acf: np.ndarray, levels: int, kind: str) -> np.ndarray:
    """Worst merit over all R-set members, per candidate row."""
    merit = None
    for profile in rset_profiles(acf, levels):
        m = profile_merit(profile, kind)
        merit = m if merit is None else np.maximum(merit, m)
    return merit


def find_golay_mate(target: np.ndarray, symbols: np.ndarray, chunk: int = 1 << 15) -> Optional[np.ndarray]:
    """
    First sequence b over the symbols with A_b(l) = -target(l) for l >= 1.

    Candidates are filtered lag by lag, starting at the longest lag where
    only two products contribute.
    """
    n = len(target)
    total = len(symbols) ** n
    for start in range(0, total, chunk):
        X = symbol_grid(symbols, n, start, min(start + chunk, total))
        conj = np.conj(X) if np.iscomplexobj(X) else X
        alive = np.arange(len(X))
        for l in range(n - 1, 0, -1):
            vals = (X[alive, :n - l] * conj[alive, l:]).sum(axis=1)
            alive = alive[vals == -target[l]]
            if alive.size == 0:
                break
        if alive.size:
            return X[alive[0]]
    return None


# ---------------------------------------------------------------------------
# Binary Gray-code enumeration
# ---------------------------------------------------------------------------

def gray(i: int) -> int:
    return i ^ (i >> 1)


def bits_to_seq(code: int, n: int) -> np.ndarray:
    """Bit (n-1-k) of code set -> element k is -1, otherwise +1."""
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    bits = (np.int64(code) >> shifts) & 1
    return (1 - 2 * bits).astype(np.int64)


def auto_flip_delta(x: np.ndarray, k: int) -> np.ndarray:
    """Change of the aperiodic ACF (lags 0..n-1) when real element k flips sign."""
    n = len(x)
    right = np.zeros(n, dtype=np.int64)
    left = np.zeros(n, dtype=np.int64)
    right[1:n - k] = x[k + 1:]
    if k:
        left[1:k + 1] = x[k - 1::-1]
    return -2 * x[k] * (left + right)


def gray_scan(n: int, start: int, stop: int) -> Iterator[Tuple[int, np.ndarray]]:
    """
    Walk Gray-code positions [start, stop), yielding (code, acf).

    The ACF is computed once at start and then updated in O(n) per step,
    since consecutive codes differ in exactly one element.
    """
    if start >= stop:
        return
    code = gray(start)
    x = bits_to_seq(code, n)
    acf = batch_acf(x[np.newaxis, :])[0]
    yield code, acf
    for i in range(start + 1, stop):
        bit = (i & -i).bit_length() - 1
        k = n - 1 - bit
        acf = acf + auto_flip_delta(x, k)
        x[k] = -x[k]
        code ^= 1 << bit
        yield code, acf


def cross_flip_delta_first(first_value: int, second: np.ndarray, k: int) -> Tuple[slice, np.ndarray]:
    """ΔX for flipping first[k], X indexed by lag + n - 1 with X(l) = sum_i first_i second_{i+l}."""
    n = len(second)
    return slice(n - 1 - k, 2 * n - 1 - k), -2 * first_value * second


def cross_flip_delta_second(second_value: int, first: np.ndarray, k: int) -> Tuple[slice, np.ndarray]:
    """ΔX for flipping second[k]."""
    n = len(first)
    return slice(k, k + n), -2 * second_value * first[::-1]


def cross_correlation(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """X(l) = sum_i first_i second_{i+l} for l = -(n-1)..n-1 (real inputs)."""
    return np.correlate(second, first, mode="full")
