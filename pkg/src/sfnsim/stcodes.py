"""Space-time block codes as dispersion-matrix objects.

Four codes are provided: Alamouti, spatial multiplexing (SM), the Golden
code, and the double-layer construction for two-site networks, built
structurally as an Alamouti arrangement of Golden-code blocks,

    X = [[G1, G2], [-conj(G2), conj(G1)]],

with G1 encoding symbols 1..4 and G2 symbols 5..8. Every code is scaled
so that the total transmit power per channel use is 1 for unit-energy
input symbols (symbol power divided by the antenna count).

A codeword is linear in the real and imaginary symbol parts,

    X = sum_q (Re(s_q) U_q + j Im(s_q) V_q),

which also yields the real-valued generator F with x = F s for the
row-wise real/imaginary stacking used by the linear model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

CODE_NAMES = ("alamouti", "sm", "golden", "3d")


@dataclass(frozen=True)
class GoldenConstants:
    theta: float = (1.0 + np.sqrt(5.0)) / 2.0
    theta_bar: float = field(default=1.0 - (1.0 + np.sqrt(5.0)) / 2.0)
    scale: float = 1.0 / np.sqrt(5.0)

    @property
    def alpha(self) -> complex:
        return 1.0 + 1j * (1.0 - self.theta)

    @property
    def alpha_bar(self) -> complex:
        return 1.0 + 1j * (1.0 - self.theta_bar)


GOLDEN = GoldenConstants()


def _alamouti_block(s1, s2):
    return np.array([[s1, -np.conj(s2)], [s2, np.conj(s1)]])


def _golden_block(s1, s2, s3, s4):
    g = GOLDEN
    return g.scale * np.array(
        [
            [g.alpha * (s1 + g.theta * s2), g.alpha * (s3 + g.theta * s4)],
            [
                1j * g.alpha_bar * (s3 + g.theta_bar * s4),
                g.alpha_bar * (s1 + g.theta_bar * s2),
            ],
        ]
    )


def _three_d_block(s):
    g1 = _golden_block(*s[:4])
    g2 = _golden_block(*s[4:])
    top = np.hstack([g1, g2])
    bottom = np.hstack([-np.conj(g2), np.conj(g1)])
    return np.vstack([top, bottom])


_RAW_ENCODERS = {
    # name -> (raw encoder, n_tx, Q, T, power normalization factor)
    "alamouti": (lambda s: _alamouti_block(s[0], s[1]), 2, 2, 2, 1.0 / np.sqrt(2.0)),
    "sm": (lambda s: np.asarray(s).reshape(2, 1), 2, 2, 1, 1.0 / np.sqrt(2.0)),
    "golden": (lambda s: _golden_block(*s), 2, 4, 2, 1.0 / np.sqrt(2.0)),
    "3d": (_three_d_block, 4, 8, 4, 0.5),
}


@dataclass(frozen=True)
class StCode:
    """A linear space-time block code described by its dispersion matrices."""

    name: str
    n_tx: int
    q: int
    t: int
    norm_factor: float
    disp_u: np.ndarray  # (Q, n_tx, T) complex
    disp_v: np.ndarray  # (Q, n_tx, T) complex

    @property
    def rate(self) -> float:
        return self.q / self.t

    def encode(self, s: np.ndarray) -> np.ndarray:
        """Codeword matrix (n_tx x T) for Q complex input symbols."""
        s = np.asarray(s, dtype=complex)
        if s.shape != (self.q,):
            raise ValueError(f"{self.name} expects {self.q} symbols, got shape {s.shape}")
        return np.einsum("q,qit->it", s.real, self.disp_u) + 1j * np.einsum(
            "q,qit->it", s.imag, self.disp_v
        )

    def generator_matrix(self) -> np.ndarray:
        """Real generator F (2*n_tx*T x 2Q) with x = F s in stacked coordinates."""
        f = np.empty((2 * self.n_tx * self.t, 2 * self.q))
        for q in range(self.q):
            f[0::2, 2 * q] = self.disp_u[q].real.ravel()
            f[1::2, 2 * q] = self.disp_u[q].imag.ravel()
            # imaginary input enters as j * V_q
            f[0::2, 2 * q + 1] = -self.disp_v[q].imag.ravel()
            f[1::2, 2 * q + 1] = self.disp_v[q].real.ravel()
        return f


def get_code(name: str) -> StCode:
    """Build one of the four codes by name ('alamouti', 'sm', 'golden', '3d')."""
    key = name.lower()
    if key not in _RAW_ENCODERS:
        raise ValueError(f"unknown code {name!r}, expected one of {CODE_NAMES}")
    raw, n_tx, q, t, norm = _RAW_ENCODERS[key]

    def encode(s):
        return norm * np.asarray(raw(np.asarray(s, dtype=complex)), dtype=complex)

    disp_u = np.empty((q, n_tx, t), dtype=complex)
    disp_v = np.empty((q, n_tx, t), dtype=complex)
    for k in range(q):
        e = np.zeros(q, dtype=complex)
        e[k] = 1.0
        disp_u[k] = encode(e)
        disp_v[k] = -1j * encode(1j * e)
    return StCode(
        name=key, n_tx=n_tx, q=q, t=t, norm_factor=norm, disp_u=disp_u, disp_v=disp_v
    )


def min_det_difference(code: StCode, constellation: np.ndarray, max_codewords: int = 1024) -> float:
    """Minimum |det((Xa - Xb) (Xa - Xb)^H)| over all distinct codeword pairs.

    Exhaustive over constellation^Q; a diversity diagnostic (positive for
    full-diversity codes, zero when rank-deficient difference pairs exist).
    """
    constellation = np.asarray(constellation, dtype=complex)
    n_codewords = constellation.size ** code.q
    if n_codewords > max_codewords:
        raise ValueError(
            f"{n_codewords} codewords exceed the enumeration cap {max_codewords}"
        )
    words = np.array(
        [code.encode(np.array(s)) for s in product(constellation, repeat=code.q)]
    )
    diff = words[:, None, :, :] - words[None, :, :, :]
    iu = np.triu_indices(words.shape[0], k=1)
    diff = diff[iu]
    gram = diff @ diff.conj().transpose(0, 2, 1)
    dets = np.abs(np.linalg.det(gram))
    return float(dets.min())
