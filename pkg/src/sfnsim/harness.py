"""Monte-Carlo experiment driver: Eb/N0 sweeps, required-Eb/N0 search and
CSV output.

Eb/N0 accounting: the space-time codes radiate unit total power per
channel use and every link has unit average gain, so the received symbol
energy per receive antenna per subcarrier use is Es = 1 in the balanced
(all beta = 0) configuration. With eta information bits per subcarrier
use, Eb = 1 / eta and N0 = 1 / (eta * EbN0_linear); unbalancing the
powers lowers the received energy and therefore shows up as required-
Eb/N0 degradation against the balanced reference.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass

import numpy as np

from sfnsim.channel import DEFAULT_SPACING_HZ, ChannelModel
from sfnsim.geometry import SfnScenario
from sfnsim.linmodel import build_geq_batch
from sfnsim.receiver import BicmChain, ReceiverConfig, TurboDetector
from sfnsim.stcodes import get_code

# (scheme, spectral efficiency) -> (QAM order, convolutional rate)
MODE_TABLE = {
    ("alamouti", 4): (64, "2/3"),
    ("sm", 4): (16, "1/2"),
    ("golden", 4): (16, "1/2"),
    ("3d", 4): (16, "1/2"),
    ("alamouti", 6): (256, "3/4"),
    ("sm", 6): (64, "1/2"),
    ("golden", 6): (64, "1/2"),
    ("3d", 6): (64, "1/2"),
}

SWEEP_COLUMNS = [
    "scheme",
    "eta",
    "beta_db",
    "ebn0_db",
    "ber",
    "fer",
    "bits",
    "errors",
    "iters",
    "seed",
    "nc",
    "channel",
    "alpha_prop",
    "d1_m",
    "ber_ci95",
    "low_confidence",
]

REQUIRED_COLUMNS = [
    "scheme",
    "eta",
    "beta_db",
    "required_ebn0_db",
    "target_ber",
    "censored",
    "iters",
    "seed",
    "nc",
    "channel",
    "alpha_prop",
    "d1_m",
    "low_confidence",
]

MIN_ERRORS_CONFIDENT = 100


@dataclass(frozen=True)
class SimConfig:
    """One experiment: a scheme at one spectral efficiency over a sweep grid."""

    st_code: str = "alamouti"
    eta: int = 4
    channel: str = "rayleigh"  # 'rayleigh' | 'tu6'
    nc: int = 1024
    m_r: int = 2
    iterations: int = 4
    seed: int = 0
    alpha_prop: float = 2.0
    d1_m: float = 5000.0
    spacing_hz: float = DEFAULT_SPACING_HZ
    beta_db: tuple[float, ...] = (0.0,)
    ebn0_db: tuple[float, ...] = (10.0,)
    error_target: int = 100
    max_info_bits: int = 1_200_000

    def __post_init__(self):
        if (self.st_code, self.eta) not in MODE_TABLE:
            raise ValueError(
                f"no Table-2 entry for scheme {self.st_code!r} at eta={self.eta}"
            )
        if any(b > 0 for b in self.beta_db):
            raise ValueError("beta values must be <= 0 dB")

    @property
    def qam_order(self) -> int:
        return MODE_TABLE[(self.st_code, self.eta)][0]

    @property
    def code_rate(self) -> str:
        return MODE_TABLE[(self.st_code, self.eta)][1]

    def realized_eta(self) -> float:
        code = get_code(self.st_code)
        num, den = self.code_rate.split("/")
        return float(np.log2(self.qam_order)) * float(num) / float(den) * code.rate


def scenario_from_geometry(
    d1_m: float, alpha_prop: float, betas_db: tuple[float, ...]
) -> tuple[np.ndarray, np.ndarray]:
    """Per-antenna received powers P_i and excess delays for a beta profile."""
    scenario = SfnScenario(d1=d1_m, alpha_prop=alpha_prop, betas_db=tuple(betas_db))
    return scenario.amplitudes() ** 2, scenario.delays()


def antenna_betas(st_code: str, beta_db: float) -> tuple[float, ...]:
    """Per-antenna imbalance profile: reference site at 0 dB, the second
    site's antennas at beta_db (single antenna per site except the
    double-layer code)."""
    if st_code == "3d":
        return (0.0, 0.0, beta_db, beta_db)
    return (0.0, beta_db)


@dataclass
class PointResult:
    beta_db: float
    ebn0_db: float
    ber: float
    fer: float
    bits: int
    errors: int
    frames: int
    wall_time: float

    @property
    def ber_ci95(self) -> float:
        if self.bits == 0:
            return float("nan")
        return 1.96 * np.sqrt(max(self.ber * (1.0 - self.ber), 0.0) / self.bits)

    @property
    def low_confidence(self) -> bool:
        return self.errors < MIN_ERRORS_CONFIDENT


@dataclass
class SweepResult:
    config: SimConfig
    points: list[PointResult]


def _frame_rng(cfg: SimConfig, beta_db: float, ebn0_db: float, frame: int) -> np.random.Generator:
    # integer-keyed seed stream so identical (seed, point, frame) is bit-reproducible
    beta_key = int(round(-beta_db * 1000))
    ebn0_key = int(round((ebn0_db + 300.0) * 1000))
    return np.random.default_rng([cfg.seed, beta_key, ebn0_key, frame])


def _build_point_machinery(cfg: SimConfig, beta_db: float):
    code = get_code(cfg.st_code)
    betas = antenna_betas(cfg.st_code, beta_db)
    scenario = SfnScenario(d1=cfg.d1_m, alpha_prop=cfg.alpha_prop, betas_db=betas)
    offsets = tuple(scenario.delays()) if cfg.channel == "tu6" else None
    model = ChannelModel(
        kind=cfg.channel, n_sc=cfg.nc, spacing_hz=cfg.spacing_hz, tx_delay_offsets=offsets
    )
    chain = BicmChain(
        rate=cfg.code_rate,
        qam_order=cfg.qam_order,
        n_symbols=cfg.nc * code.q,
        interleaver_seed=cfg.seed,
    )
    detector = TurboDetector(code, chain, ReceiverConfig(iterations=cfg.iterations))
    return code, scenario, model, chain, detector


def simulate_point(
    cfg: SimConfig,
    beta_db: float,
    ebn0_db: float,
    error_target: int | None = None,
    max_info_bits: int | None = None,
) -> PointResult:
    """Monte-Carlo BER/FER at one (beta, Eb/N0) point.

    Frames are drawn until error_target bit errors are seen or the info
    bit budget is exhausted.
    """
    error_target = cfg.error_target if error_target is None else error_target
    max_info_bits = cfg.max_info_bits if max_info_bits is None else max_info_bits
    code, scenario, model, chain, detector = _build_point_machinery(cfg, beta_db)
    amps = scenario.amplitudes()

    eta = cfg.realized_eta()
    n0 = 1.0 / (eta * 10.0 ** (ebn0_db / 10.0))
    noise_var = n0 / 2.0

    start = time.perf_counter()
    bits = errors = frames = frame_errors = 0
    while errors < error_target and bits < max_info_bits:
        rng = _frame_rng(cfg, beta_db, ebn0_db, frames)
        info = rng.integers(0, 2, chain.n_info_bits)
        symbols = chain.encode(info).reshape(cfg.nc, code.q)
        s_real = np.empty((cfg.nc, 2 * code.q))
        s_real[:, 0::2] = symbols.real
        s_real[:, 1::2] = symbols.imag
        h = model.draw(rng, cfg.m_r, code.n_tx)
        geq = build_geq_batch(h, amps, code)
        y = np.einsum("nrp,np->nr", geq, s_real)
        y += rng.standard_normal(y.shape) * np.sqrt(noise_var)
        result = detector.run(geq, y, noise_var)
        n_err = int(np.count_nonzero(result.info_bits != info))
        errors += n_err
        frame_errors += n_err > 0
        bits += chain.n_info_bits
        frames += 1
    return PointResult(
        beta_db=beta_db,
        ebn0_db=ebn0_db,
        ber=errors / bits,
        fer=frame_errors / frames,
        bits=bits,
        errors=errors,
        frames=frames,
        wall_time=time.perf_counter() - start,
    )


def run_sweep(cfg: SimConfig) -> SweepResult:
    """Simulate every (beta, Eb/N0) grid point of the config."""
    points = [
        simulate_point(cfg, beta, ebn0)
        for beta in cfg.beta_db
        for ebn0 in cfg.ebn0_db
    ]
    return SweepResult(config=cfg, points=points)


@dataclass
class RequiredEbn0:
    beta_db: float
    value_db: float
    target_ber: float
    censored: bool
    low_confidence: bool


def required_ebn0(
    cfg: SimConfig,
    beta_db: float,
    target_ber: float = 1e-3,
    lo_db: float = -2.0,
    hi_db: float = 34.0,
    grid_db: float = 0.25,
    error_target: int | None = None,
) -> RequiredEbn0:
    """Smallest Eb/N0 reaching target_ber, by bisection on a dB grid.

    Assumes BER monotonically non-increasing in Eb/N0. An unreachable
    target within [lo_db, hi_db] is reported as a censored point (value
    +inf), not an error.
    """
    error_target = cfg.error_target if error_target is None else error_target
    max_bits = int(np.ceil(3.0 * error_target / target_ber))

    def ber_at(ebn0):
        point = simulate_point(
            cfg, beta_db, ebn0, error_target=error_target, max_info_bits=max_bits
        )
        # floor so log-interpolation stays finite on error-free runs
        return max(point.ber, 0.5 / point.bits), point

    ber_lo, point_lo = ber_at(lo_db)
    if ber_lo <= target_ber:
        return RequiredEbn0(beta_db, lo_db, target_ber, False, point_lo.low_confidence)
    ber_hi, point_hi = ber_at(hi_db)
    if ber_hi > target_ber:
        return RequiredEbn0(beta_db, float("inf"), target_ber, True, True)

    lo, hi = lo_db, hi_db
    low_conf = False
    while hi - lo > grid_db * 1.0001:
        mid = lo + (hi - lo) / 2.0
        mid = round(mid / grid_db) * grid_db
        if mid <= lo or mid >= hi:
            break
        ber_mid, point_mid = ber_at(mid)
        if ber_mid > target_ber:
            lo, ber_lo = mid, ber_mid
        else:
            hi, ber_hi = mid, ber_mid
            low_conf = point_mid.low_confidence
    # interpolate the crossing on a log-BER scale
    frac = (np.log10(target_ber) - np.log10(ber_lo)) / (
        np.log10(ber_hi) - np.log10(ber_lo)
    )
    return RequiredEbn0(beta_db, lo + frac * (hi - lo), target_ber, False, low_conf)


def _format(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        # repr round-trips exactly; coerce so numpy scalars print plainly
        return repr(float(value))
    return str(value)


def write_sweep_csv(result: SweepResult, path: str) -> None:
    """One CSV row per simulated point, with enough metadata to re-run it.

    Wall time is kept out of the file so identical seeds give identical
    bytes.
    """
    cfg = result.config
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for p in result.points:
            writer.writerow(
                [
                    cfg.st_code,
                    cfg.eta,
                    _format(p.beta_db),
                    _format(p.ebn0_db),
                    _format(p.ber),
                    _format(p.fer),
                    p.bits,
                    p.errors,
                    cfg.iterations,
                    cfg.seed,
                    cfg.nc,
                    cfg.channel,
                    _format(cfg.alpha_prop),
                    _format(cfg.d1_m),
                    _format(p.ber_ci95),
                    _format(p.low_confidence),
                ]
            )


def write_required_csv(cfg: SimConfig, rows: list[RequiredEbn0], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REQUIRED_COLUMNS)
        for r in rows:
            writer.writerow(
                [
                    cfg.st_code,
                    cfg.eta,
                    _format(r.beta_db),
                    _format(r.value_db),
                    _format(r.target_ber),
                    _format(r.censored),
                    cfg.iterations,
                    cfg.seed,
                    cfg.nc,
                    cfg.channel,
                    _format(cfg.alpha_prop),
                    _format(cfg.d1_m),
                    _format(r.low_confidence),
                ]
            )
