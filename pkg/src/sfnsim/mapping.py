"""Gray-mapped square QAM with per-axis soft demapping and soft mapping.

Square constellations factor into two independent Gray-labelled PAM axes,
so LLR computation and posterior symbol statistics are done per real
dimension. A symbol's bit label is [I-axis bits, Q-axis bits], MSB first
within each axis.

LLR convention: L = log P(b=0) / P(b=1), so a hard decision is b = (L < 0).
"""

from __future__ import annotations

import numpy as np

LLR_CLIP = 80.0


class QamMapping:
    """Unit-energy square QAM (4/16/64/256) with binary-reflected Gray labels."""

    def __init__(self, order: int):
        if order not in (4, 16, 64, 256):
            raise ValueError(f"unsupported QAM order {order}")
        self.order = order
        self.bits_per_symbol = int(np.log2(order))
        self.bits_per_axis = self.bits_per_symbol // 2
        n_levels = 1 << self.bits_per_axis
        k = np.arange(n_levels)
        # amplitude of level k, scaled for unit average symbol energy
        scale = np.sqrt(2.0 * (order - 1) / 3.0)
        self.axis_levels = (2 * k - (n_levels - 1)) / scale
        gray = k ^ (k >> 1)
        # axis_labels[k, b] = bit b (MSB first) of the Gray label of level k
        shifts = np.arange(self.bits_per_axis - 1, -1, -1)
        self.axis_labels = ((gray[:, None] >> shifts[None, :]) & 1).astype(np.int8)
        # level index for each integer axis label
        self.level_by_label = np.empty(n_levels, dtype=np.int64)
        self.level_by_label[gray] = k

    @property
    def n_levels(self) -> int:
        return self.axis_levels.size

    def points(self) -> np.ndarray:
        """All constellation points, indexed by the integer symbol label."""
        labels = np.arange(self.order)
        hi = labels >> self.bits_per_axis
        lo = labels & (self.n_levels - 1)
        return (
            self.axis_levels[self.level_by_label[hi]]
            + 1j * self.axis_levels[self.level_by_label[lo]]
        )

    def map_bits(self, bits: np.ndarray) -> np.ndarray:
        """Map a bit stream (length multiple of bits_per_symbol) to complex symbols."""
        bits = np.asarray(bits)
        if bits.size % self.bits_per_symbol:
            raise ValueError("bit count not a multiple of bits_per_symbol")
        grouped = bits.reshape(-1, 2, self.bits_per_axis)
        shifts = np.arange(self.bits_per_axis - 1, -1, -1)
        labels = (grouped << shifts).sum(axis=2)
        axes = self.axis_levels[self.level_by_label[labels]]
        return axes[:, 0] + 1j * axes[:, 1]

    def map_axis_bits(self, bits: np.ndarray) -> np.ndarray:
        """Map bits (…, bits_per_axis) to real PAM amplitudes."""
        bits = np.asarray(bits)
        shifts = np.arange(self.bits_per_axis - 1, -1, -1)
        labels = (bits << shifts).sum(axis=-1)
        return self.axis_levels[self.level_by_label[labels]]

    def demap_axes(
        self,
        z: np.ndarray,
        bias: np.ndarray | float,
        variance: np.ndarray | float,
        priors: np.ndarray | None = None,
    ) -> np.ndarray:
        """Max-log extrinsic LLRs for one real dimension per entry of z.

        Model: z ~ bias * a + N(0, variance) with a the PAM amplitude.
        priors, if given, are decoder LLRs of shape z.shape + (bits_per_axis,);
        each bit's own prior is excluded from its output (extrinsic).
        """
        z = np.asarray(z, dtype=float)
        variance = np.broadcast_to(np.asarray(variance, dtype=float), z.shape)
        if np.any(variance <= 0):
            raise ValueError("variance must be positive")
        bias = np.broadcast_to(np.asarray(bias, dtype=float), z.shape)
        # metric[..., k]: log-likelihood of level k (max-log, constants dropped)
        metric = -((z[..., None] - bias[..., None] * self.axis_levels) ** 2) / (
            2.0 * variance[..., None]
        )
        if priors is not None:
            priors = np.asarray(priors, dtype=float)
            # + L/2 for bit 0, - L/2 for bit 1
            metric = metric + 0.5 * np.einsum(
                "...b,kb->...k", priors, 1.0 - 2.0 * self.axis_labels
            )
        llrs = np.empty(z.shape + (self.bits_per_axis,))
        for b in range(self.bits_per_axis):
            mask1 = self.axis_labels[:, b] == 1
            m0 = metric[..., ~mask1].max(axis=-1)
            m1 = metric[..., mask1].max(axis=-1)
            llrs[..., b] = m0 - m1
        if priors is not None:
            llrs -= priors
        return np.clip(llrs, -LLR_CLIP, LLR_CLIP)

    def soft_map_axes(self, llrs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Posterior mean and variance of one real dimension given its bit LLRs.

        llrs has shape (..., bits_per_axis) under bitwise independence.
        Returns (mean, variance) with the leading shape of llrs.
        """
        llrs = np.clip(np.asarray(llrs, dtype=float), -LLR_CLIP, LLR_CLIP)
        # log P(bit of level k) summed over bits, per level
        signed = (2.0 * self.axis_labels - 1.0)  # -1 for bit 0, +1 for bit 1
        logp = -np.logaddexp(0.0, np.einsum("...b,kb->...kb", llrs, signed)).sum(axis=-1)
        logp -= logp.max(axis=-1, keepdims=True)
        p = np.exp(logp)
        p /= p.sum(axis=-1, keepdims=True)
        mean = p @ self.axis_levels
        second = p @ self.axis_levels**2
        return mean, np.maximum(second - mean**2, 0.0)
