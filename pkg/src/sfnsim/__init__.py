"""Link-level simulator for MIMO-OFDM single-frequency-network broadcasting.

Implements four space-time block codes (Alamouti, spatial multiplexing,
Golden, and a double-layer Alamouti-of-Golden construction for two-site
networks), unbalanced-power SFN channel models, a bit-interleaved coded
modulation chain, and an iterative MMSE/PIC receiver, together with a
Monte-Carlo harness measuring required Eb/N0 at a target BER.
"""

from sfnsim.geometry import SfnScenario, beta_from_distances, received_power, relative_delay
from sfnsim.stcodes import StCode, get_code
from sfnsim.harness import SimConfig, required_ebn0, run_sweep

__version__ = "0.1.0"

__all__ = [
    "SfnScenario",
    "beta_from_distances",
    "received_power",
    "relative_delay",
    "StCode",
    "get_code",
    "SimConfig",
    "required_ebn0",
    "run_sweep",
]
