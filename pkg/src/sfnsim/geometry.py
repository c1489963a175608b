"""Two-site SFN geometry: received powers, imbalance factors and link delays.

All distances are in meters, delays in seconds and powers linear; dB only
appears at the API boundary (the beta factors). The first antenna is the
reference: its received power defines 0 dB and its delay defines t = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 2.99792458e8  # m/s


def received_power(p0: float, d: float, alpha_prop: float) -> float:
    """Received power at distance d for transmit power p0 and path-loss exponent alpha."""
    if p0 <= 0:
        raise ValueError(f"transmit power must be positive, got {p0}")
    if d <= 0:
        raise ValueError(f"distance must be positive, got {d}")
    return p0 / d**alpha_prop

def beta_from_distances(d_i: float, d1: float, alpha_prop: float) -> float:
    """Power imbalance in dB of a transmitter at distance d_i relative to the
    reference transmitter at d1.

    Requires d_i >= d1 (the receiver is closest to its own site), so the
    result is always <= 0 dB.
    """
    if d1 <= 0:
        raise ValueError(f"reference distance must be positive, got {d1}")
    if d_i < d1:
        raise ValueError(f"d_i ({d_i}) must be >= reference distance d1 ({d1})")
    return -10.0 * alpha_prop * np.log10(d_i / d1)

def relative_delay(beta_db: float, d1: float, alpha_prop: float) -> float:
    """Excess propagation delay (seconds) of the link whose power imbalance is
    beta_db, relative to the reference link of length d1.

    Zero iff beta_db == 0 (co-located with the reference site).
    """
    if beta_db > 0:
        raise ValueError(f"beta must be <= 0 dB, got {beta_db}")
    if d1 <= 0:
        raise ValueError(f"reference distance must be positive, got {d1}")
    return (10.0 ** (-beta_db / (10.0 * alpha_prop)) - 1.0) * d1 / SPEED_OF_LIGHT

@dataclass(frozen=True)
class SfnScenario:
    """Per-antenna power attenuation and delay for a two-site network.

    betas_db holds one entry per transmit antenna; antennas on the reference
    site carry 0 dB. Within one site all antennas share the same beta and
    delay (inter-antenna spacing is negligible against the site separation).
    """

    d1: float
    alpha_prop: float = 2.0
    betas_db: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        if self.d1 <= 0:
            raise ValueError("d1 must be positive")
        if self.alpha_prop <= 0:
            raise ValueError("alpha_prop must be positive")
        if not self.betas_db or self.betas_db[0] != 0.0:
            raise ValueError("first antenna is the reference and must have beta = 0 dB")
        if any(b > 0 for b in self.betas_db):
            raise ValueError("betas must be <= 0 dB (receiver closest to reference site)")

    @property
    def n_tx(self) -> int:
        return len(self.betas_db)

    def amplitudes(self) -> np.ndarray:
        """Per-antenna amplitude factors sqrt(P_i), with P_1 = 1."""
        return 10.0 ** (np.asarray(self.betas_db) / 20.0)

    def delays(self) -> np.ndarray:
        """Per-antenna excess delays in seconds."""
        return np.array(
            [relative_delay(b, self.d1, self.alpha_prop) for b in self.betas_db]
        )
