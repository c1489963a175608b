"""Rate-1/2 (133,171) convolutional code with DVB-T puncturing, a random
bit interleaver, and a max-log-MAP (BCJR) soft-input soft-output decoder.

Frames are zero-terminated: six tail bits flush the 64-state trellis.
LLR convention matches `mapping`: L = log P(b=0) / P(b=1).
"""

from __future__ import annotations

import numpy as np
from numba import njit

CONSTRAINT_LENGTH = 7
N_STATES = 1 << (CONSTRAINT_LENGTH - 1)
N_TAIL = CONSTRAINT_LENGTH - 1
GENERATORS_OCTAL = (0o133, 0o171)

# keep-masks over the serialized mother stream (X1 Y1 X2 Y2 ...),
# standard DVB-T patterns
PUNCTURE_PATTERNS = {
    "1/2": np.array([1, 1], dtype=bool),
    "2/3": np.array([1, 1, 0, 1], dtype=bool),
    "3/4": np.array([1, 1, 0, 1, 1, 0], dtype=bool),
}

CODE_RATES = {"1/2": 0.5, "2/3": 2.0 / 3.0, "3/4": 0.75}


def _build_trellis():
    """Transition tables for the 64-state trellis.

    State packs the six previous input bits, newest in the MSB. Returns
    (next_state[s, u], out_bits[s, u, 2]).
    """
    g0, g1 = GENERATORS_OCTAL
    states = np.arange(N_STATES)
    next_state = np.empty((N_STATES, 2), dtype=np.int64)
    out_bits = np.empty((N_STATES, 2, 2), dtype=np.int64)
    for u in (0, 1):
        window = (u << N_TAIL) | states
        out_bits[:, u, 0] = _parity(window & g0)
        out_bits[:, u, 1] = _parity(window & g1)
        next_state[:, u] = (u << (N_TAIL - 1)) | (states >> 1)
    return next_state, out_bits


def _parity(x):
    x = np.asarray(x)
    p = np.zeros_like(x)
    while np.any(x):
        p ^= x & 1
        x = x >> 1
    return p


NEXT_STATE, OUT_BITS = _build_trellis()


def conv_encode(bits: np.ndarray) -> np.ndarray:
    """Encode info bits with the rate-1/2 mother code, zero-terminated.

    Returns the serialized stream X1 Y1 X2 Y2 ... of length 2*(len(bits)+6).
    """
    bits = np.asarray(bits, dtype=np.int64)
    if bits.size == 0:
        raise ValueError("empty input")
    u = np.concatenate([bits, np.zeros(N_TAIL, dtype=np.int64)])
    out = np.empty((u.size, 2), dtype=np.int64)
    state = 0
    for k, b in enumerate(u):
        out[k] = OUT_BITS[state, b]
        state = NEXT_STATE[state, b]
    return out.ravel()


def puncture(stream: np.ndarray, rate: str) -> np.ndarray:
    """Drop mother-stream positions according to the keep-mask for `rate`."""
    pattern = PUNCTURE_PATTERNS[rate]
    stream = np.asarray(stream)
    if stream.size % pattern.size:
        raise ValueError(
            f"stream length {stream.size} not a multiple of pattern period {pattern.size}"
        )
    mask = np.tile(pattern, stream.size // pattern.size)
    return stream[mask]


def depuncture(llrs: np.ndarray, rate: str, mother_len: int) -> np.ndarray:
    """Re-expand punctured LLRs to the mother stream, zeros at removed positions."""
    pattern = PUNCTURE_PATTERNS[rate]
    if mother_len % pattern.size:
        raise ValueError("mother length not a multiple of the pattern period")
    mask = np.tile(pattern, mother_len // pattern.size)
    llrs = np.asarray(llrs, dtype=float)
    if llrs.size != int(mask.sum()):
        raise ValueError(
            f"expected {int(mask.sum())} punctured LLRs, got {llrs.size}"
        )
    out = np.zeros(mother_len)
    out[mask] = llrs
    return out


def punctured_length(n_info: int, rate: str) -> int:
    """Coded bits produced for n_info info bits (tail included) at `rate`."""
    pattern = PUNCTURE_PATTERNS[rate]
    mother = 2 * (n_info + N_TAIL)
    if mother % pattern.size:
        raise ValueError("frame length incompatible with puncturing period")
    return int(mother // pattern.size * pattern.sum())


@njit(cache=True)
def _bcjr_maxlog(llrs, next_state, out_sign, out_bits):
    """Max-log BCJR over the terminated trellis.

    llrs: (n, 2) channel LLRs per trellis step. out_sign[s, u, j] is
    1 - 2*c_j for the branch (s, u), out_bits the integer coded bits.
    Returns (info_app, coded_app).
    """
    n = llrs.shape[0]
    n_states = next_state.shape[0]
    neg = -1e30

    alpha = np.full((n + 1, n_states), neg)
    alpha[0, 0] = 0.0
    for t in range(n):
        l0 = llrs[t, 0]
        l1 = llrs[t, 1]
        for s in range(n_states):
            a = alpha[t, s]
            if a <= neg:
                continue
            for u in range(2):
                m = a + 0.5 * (l0 * out_sign[s, u, 0] + l1 * out_sign[s, u, 1])
                ns = next_state[s, u]
                if m > alpha[t + 1, ns]:
                    alpha[t + 1, ns] = m

    beta = np.full((n + 1, n_states), neg)
    beta[n, 0] = 0.0
    for t in range(n - 1, -1, -1):
        l0 = llrs[t, 0]
        l1 = llrs[t, 1]
        for s in range(n_states):
            best = neg
            for u in range(2):
                m = (
                    beta[t + 1, next_state[s, u]]
                    + 0.5 * (l0 * out_sign[s, u, 0] + l1 * out_sign[s, u, 1])
                )
                if m > best:
                    best = m
            beta[t, s] = best

    info_app = np.empty(n)
    coded_app = np.empty((n, 2))
    for t in range(n):
        l0 = llrs[t, 0]
        l1 = llrs[t, 1]
        max_u = np.full(2, neg)
        max_c0 = np.full(2, neg)
        max_c1 = np.full(2, neg)
        for s in range(n_states):
            a = alpha[t, s]
            if a <= neg:
                continue
            for u in range(2):
                m = (
                    a
                    + 0.5 * (l0 * out_sign[s, u, 0] + l1 * out_sign[s, u, 1])
                    + beta[t + 1, next_state[s, u]]
                )
                if m > max_u[u]:
                    max_u[u] = m
                c0 = out_bits[s, u, 0]
                c1 = out_bits[s, u, 1]
                if m > max_c0[c0]:
                    max_c0[c0] = m
                if m > max_c1[c1]:
                    max_c1[c1] = m
        info_app[t] = max_u[0] - max_u[1]
        coded_app[t, 0] = max_c0[0] - max_c0[1]
        coded_app[t, 1] = max_c1[0] - max_c1[1]
    return info_app, coded_app


OUT_SIGN = (1 - 2 * OUT_BITS).astype(np.float64)


def siso_decode(llrs_mother: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Soft-input soft-output decode of a zero-terminated mother stream.

    llrs_mother is the serialized (X, Y) LLR stream, length 2*(k + 6).
    Returns (hard info bits of length k, extrinsic coded-bit LLRs of the
    full mother stream, a-posteriori minus intrinsic).
    """
    llrs_mother = np.asarray(llrs_mother, dtype=float)
    if llrs_mother.size % 2:
        raise ValueError("mother stream length must be even")
    pairs = llrs_mother.reshape(-1, 2)
    if pairs.shape[0] <= N_TAIL:
        raise ValueError("stream too short for a terminated frame")
    info_app, coded_app = _bcjr_maxlog(pairs, NEXT_STATE, OUT_SIGN, OUT_BITS)
    hard = (info_app[: pairs.shape[0] - N_TAIL] < 0).astype(np.int64)
    extrinsic = (coded_app - pairs).ravel()
    return hard, extrinsic


class Interleaver:
    """Seeded uniform random bit permutation with its inverse."""

    def __init__(self, length: int, seed: int):
        self.length = length
        self.seed = seed
        self.permutation = np.random.default_rng(seed).permutation(length)
        self.inverse = np.argsort(self.permutation)

    def interleave(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.size != self.length:
            raise ValueError(f"expected length {self.length}, got {x.size}")
        return x[self.permutation]

    def deinterleave(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.size != self.length:
            raise ValueError(f"expected length {self.length}, got {x.size}")
        return x[self.inverse]
