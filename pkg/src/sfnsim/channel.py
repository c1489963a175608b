"""Per-subcarrier frequency-domain MIMO channel generation.

Two models: i.i.d. Rayleigh per subcarrier, and a COST 207 Typical Urban
6-tap profile whose taps are converted to per-subcarrier coefficients via
their delays. Per-transmitter network delay offsets enter the TU-6 model
as additional linear phase ramps across the subcarriers.

Every Tx-Rx link has unit average energy; power imbalance between
antennas is applied separately by the linear model's power matrix.
A realization is quasi-static: it is reused for the T slots of one
space-time codeword and drawn independently per codeword block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# COST 207 Typical Urban (TU-6): delays in seconds, relative powers in dB
TU6_DELAYS_S = np.array([0.0, 0.2, 0.5, 1.6, 2.3, 5.0]) * 1e-6
TU6_POWERS_DB = np.array([-3.0, 0.0, -2.0, -6.0, -8.0, -10.0])

# 8K DVB-T subcarrier spacing in an 8 MHz channel
DEFAULT_SPACING_HZ = 1116.0


def draw_rayleigh(rng: np.random.Generator, m_r: int, n_tx: int, n_sc: int) -> np.ndarray:
    """Independent CN(0, 1) coefficients, shape (n_sc, m_r, n_tx)."""
    shape = (n_sc, m_r, n_tx)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def draw_tu6(
    rng: np.random.Generator,
    m_r: int,
    n_tx: int,
    n_sc: int,
    spacing_hz: float = DEFAULT_SPACING_HZ,
    tx_delay_offsets: np.ndarray | None = None,
    tap_delays_s: np.ndarray = TU6_DELAYS_S,
    tap_powers_db: np.ndarray = TU6_POWERS_DB,
) -> np.ndarray:
    """Tapped-delay-line channel in the frequency domain, shape (n_sc, m_r, n_tx).

    h[n, j, i] = sum_l a_{l,j,i} exp(-2j pi n df (tau_l + dtau_i)) with
    independent complex Gaussian tap gains normalized to unit link energy.
    """
    powers = 10.0 ** (np.asarray(tap_powers_db) / 10.0)
    powers = powers / powers.sum()
    n_taps = powers.size
    shape = (n_taps, m_r, n_tx)
    gains = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * np.sqrt(
        powers[:, None, None] / 2.0
    )
    if tx_delay_offsets is None:
        tx_delay_offsets = np.zeros(n_tx)
    tx_delay_offsets = np.asarray(tx_delay_offsets, dtype=float)
    if tx_delay_offsets.shape != (n_tx,):
        raise ValueError("need one delay offset per transmit antenna")
    n = np.arange(n_sc)
    # (n_taps, n_tx, n_sc) phase ramps
    total_delay = np.asarray(tap_delays_s)[:, None] + tx_delay_offsets[None, :]
    phase = np.exp(-2j * np.pi * spacing_hz * n[None, None, :] * total_delay[:, :, None])
    return np.einsum("lji,lin->nji", gains, phase)


@dataclass(frozen=True)
class ChannelModel:
    """Channel configuration used by the harness to draw realizations."""

    kind: str = "rayleigh"  # 'rayleigh' | 'tu6'
    n_sc: int = 1024
    spacing_hz: float = DEFAULT_SPACING_HZ
    tx_delay_offsets: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("rayleigh", "tu6"):
            raise ValueError(f"unknown channel kind {self.kind!r}")

    def draw(self, rng: np.random.Generator, m_r: int, n_tx: int) -> np.ndarray:
        if self.kind == "rayleigh":
            return draw_rayleigh(rng, m_r, n_tx, self.n_sc)
        offsets = self.tx_delay_offsets
        if offsets is not None:
            offsets = np.asarray(offsets)
        return draw_tu6(
            rng, m_r, n_tx, self.n_sc, self.spacing_hz, tx_delay_offsets=offsets
        )
