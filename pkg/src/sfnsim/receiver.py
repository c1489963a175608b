"""Iterative MMSE / parallel-interference-cancellation detection.

First iteration: per-dimension MMSE estimates

    s_hat_p = g_p' (Geq Geq' + sigma^2 I)^{-1} y

with bias mu_p = g_p' (Geq Geq' + sigma^2 I)^{-1} g_p feeding the
demapper's Gaussian model. Later iterations cancel the soft-mapper
feedback and apply matched-filter (inverse) filtering per dimension:

    s_hat_p = g_p' (y - Geq s_tilde + g_p s_tilde_p) / (g_p' g_p).

The turbo loop wires these estimators to the BICM demapper, SISO decoder
and soft mapper, exchanging extrinsic LLRs. A brute-force ML oracle over
small symbol alphabets is provided for validation.

Estimator functions are batched: Geq has shape (..., d, 2Q) and y
(..., d), with any number of leading subcarrier axes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from sfnsim import coding
from sfnsim.coding import Interleaver
from sfnsim.mapping import QamMapping
from sfnsim.stcodes import StCode

SYMBOL_POWER_PER_DIM = 0.5  # unit-energy complex constellation
VAR_FLOOR = 1e-12


def mmse_estimate(
    geq: np.ndarray, y: np.ndarray, noise_var: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """MMSE symbol estimates with per-dimension bias and variance.

    Returns (s_hat, mu, nu) each of shape (..., 2Q); nu is the Gaussian
    model variance mu * (1 - mu) * symbol power per real dimension.
    """
    geq = np.asarray(geq, dtype=float)
    y = np.asarray(y, dtype=float)
    d = geq.shape[-2]
    a = geq @ np.swapaxes(geq, -1, -2) + noise_var * np.eye(d)
    if noise_var <= 0:
        # rely on the solve failing only for genuinely singular systems
        try:
            z = np.linalg.solve(a, geq)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(
                "singular system with zero noise variance; regularization required"
            ) from exc
    else:
        z = np.linalg.solve(a, geq)
    s_hat = np.einsum("...rp,...r->...p", z, y)
    mu = np.einsum("...rp,...rp->...p", z, geq)
    nu = np.maximum(mu * (1.0 - mu) * SYMBOL_POWER_PER_DIM, VAR_FLOOR)
    return s_hat, mu, nu


def pic_estimate(
    geq: np.ndarray,
    y: np.ndarray,
    s_tilde: np.ndarray,
    noise_var: float = 0.0,
    feedback_var: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Interference cancellation followed by per-column inverse filtering.

    s_tilde holds the soft-mapped feedback (its own p-th entry is restored
    before filtering, so only interference is cancelled). Returns
    (s_hat, nu) where nu models residual noise plus feedback uncertainty
    (feedback_var: per-dimension soft-mapper variances, may be None).
    """
    geq = np.asarray(geq, dtype=float)
    y = np.asarray(y, dtype=float)
    s_tilde = np.asarray(s_tilde, dtype=float)
    gram = np.einsum("...rp,...rq->...pq", geq, geq)
    col_norm = np.einsum("...pp->...p", gram)
    if np.any(col_norm <= 0):
        raise ValueError("zero-norm column in Geq")
    residual = y - np.einsum("...rp,...p->...r", geq, s_tilde)
    s_hat = s_tilde + np.einsum("...rp,...r->...p", geq, residual) / col_norm
    nu = np.full_like(s_hat, VAR_FLOOR) + noise_var / col_norm
    if feedback_var is not None:
        feedback_var = np.asarray(feedback_var, dtype=float)
        cross = np.einsum("...pq,...q->...p", gram**2, feedback_var)
        cross = cross - col_norm**2 * feedback_var
        nu = nu + cross / col_norm**2
    return s_hat, np.maximum(nu, VAR_FLOOR)


def ml_oracle(
    geq: np.ndarray, y: np.ndarray, constellation: np.ndarray, max_candidates: int = 1_000_000
) -> np.ndarray:
    """Exhaustive minimum-distance symbol decision for one system.

    Returns the best complex symbol vector (length Q). Refuses when
    |constellation|^Q exceeds max_candidates.
    """
    geq = np.asarray(geq, dtype=float)
    y = np.asarray(y, dtype=float)
    constellation = np.asarray(constellation, dtype=complex)
    q = geq.shape[-1] // 2
    n_candidates = constellation.size**q
    if n_candidates > max_candidates:
        raise ValueError(
            f"{n_candidates} candidates exceed the cap {max_candidates}"
        )
    cand = np.array(list(product(constellation, repeat=q)))
    stacked = np.empty((cand.shape[0], 2 * q))
    stacked[:, 0::2] = cand.real
    stacked[:, 1::2] = cand.imag
    dist = ((y[None, :] - stacked @ geq.T) ** 2).sum(axis=1)
    return cand[int(np.argmin(dist))]


@dataclass(frozen=True)
class ReceiverConfig:
    iterations: int = 4
    mode: str = "mmse+pic"  # 'mmse' = first-iteration estimator only

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.mode not in ("mmse", "mmse+pic"):
            raise ValueError(f"unknown receiver mode {self.mode!r}")


@dataclass
class BicmChain:
    """Frame geometry tying the code rate, mapping and interleaver together.

    One frame spans n_symbols complex symbols (all data of one space-time
    codeword period over all subcarriers).
    """

    rate: str
    qam_order: int
    n_symbols: int
    interleaver_seed: int = 0
    mapping: QamMapping = field(init=False)
    interleaver: Interleaver = field(init=False)

    def __post_init__(self):
        self.mapping = QamMapping(self.qam_order)
        self.n_coded_bits = self.n_symbols * self.mapping.bits_per_symbol
        pattern = coding.PUNCTURE_PATTERNS[self.rate]
        kept_per_period = int(pattern.sum())
        if self.n_coded_bits % kept_per_period:
            raise ValueError("frame length incompatible with puncturing period")
        self.n_mother_bits = self.n_coded_bits // kept_per_period * pattern.size
        self.n_info_bits = self.n_mother_bits // 2 - coding.N_TAIL
        if self.n_info_bits <= 0:
            raise ValueError("frame too short")
        self.interleaver = Interleaver(self.n_coded_bits, self.interleaver_seed)

    def encode(self, info_bits: np.ndarray) -> np.ndarray:
        """Info bits -> interleaved coded bits -> complex symbols."""
        info_bits = np.asarray(info_bits)
        if info_bits.size != self.n_info_bits:
            raise ValueError(f"expected {self.n_info_bits} info bits, got {info_bits.size}")
        coded = coding.puncture(coding.conv_encode(info_bits), self.rate)
        return self.mapping.map_bits(self.interleaver.interleave(coded))


@dataclass
class DetectionResult:
    info_bits: np.ndarray
    per_iteration_bits: list[np.ndarray]


class TurboDetector:
    """Iterative detection-decoding over one frame of subcarriers."""

    def __init__(self, code: StCode, chain: BicmChain, config: ReceiverConfig):
        self.code = code
        self.chain = chain
        self.config = config
        if chain.n_symbols % code.q:
            raise ValueError("frame symbols not a multiple of the code's input size")

    def _axes_to_stream(self, llr_axes: np.ndarray) -> np.ndarray:
        """(n_sc, 2Q, bits_per_axis) axis LLRs -> interleaved coded stream."""
        m_axis = self.chain.mapping.bits_per_axis
        # symbol-major layout: per symbol, I-axis bits then Q-axis bits
        per_symbol = llr_axes.reshape(-1, 2, m_axis).reshape(-1, 2 * m_axis)
        return per_symbol.ravel()

    def _stream_to_axes(self, stream: np.ndarray, n_sc: int) -> np.ndarray:
        m_axis = self.chain.mapping.bits_per_axis
        per_symbol = stream.reshape(-1, 2 * m_axis).reshape(-1, 2, m_axis)
        return per_symbol.reshape(n_sc, 2 * self.code.q, m_axis)

    def _decode(self, stream_llrs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Interleaved coded LLRs -> (hard info bits, interleaved extrinsic)."""
        chain = self.chain
        deint = chain.interleaver.deinterleave(stream_llrs)
        mother = coding.depuncture(deint, chain.rate, chain.n_mother_bits)
        hard, extrinsic = coding.siso_decode(mother)
        ext_kept = coding.puncture(extrinsic, chain.rate)
        return hard, chain.interleaver.interleave(ext_kept)

    def run(self, geq: np.ndarray, y: np.ndarray, noise_var: float) -> DetectionResult:
        """Detect one frame.

        geq: (n_sc, 2*m_r*T, 2Q), y: (n_sc, 2*m_r*T); noise_var is the
        per-real-dimension noise variance.
        """
        n_sc = geq.shape[0]
        mapping = self.chain.mapping

        s_hat, mu, nu = mmse_estimate(geq, y, noise_var)
        llr_axes = mapping.demap_axes(s_hat, mu, nu)
        stream = self._axes_to_stream(llr_axes)
        hard, ext_stream = self._decode(stream)
        per_iteration = [hard]

        for _ in range(1, self.config.iterations):
            if self.config.mode == "mmse":
                break
            # cancellation feedback uses the full a-posteriori soft symbols
            # (each dimension's own entry is excluded inside pic_estimate);
            # only the extrinsic part re-enters the demapper as priors
            app_axes = self._stream_to_axes(ext_stream + stream, n_sc)
            priors_axes = self._stream_to_axes(ext_stream, n_sc)
            s_tilde, fb_var = mapping.soft_map_axes(app_axes)
            s_hat, nu = pic_estimate(geq, y, s_tilde, noise_var, fb_var)
            llr_axes = mapping.demap_axes(s_hat, 1.0, nu, priors=priors_axes)
            stream = self._axes_to_stream(llr_axes)
            hard, ext_stream = self._decode(stream)
            per_iteration.append(hard)

        return DetectionResult(info_bits=per_iteration[-1], per_iteration_bits=per_iteration)
