"""Real-valued equivalent linear system y = G B F s + w = Geq s + w.

The complex per-subcarrier model Y = H P X + W is rewritten over the
reals by stacking real and imaginary parts row-wise: the symbol vector s
becomes (2Q,), the codeword x becomes (2*n_tx*T,) and the observation y
becomes (2*m_r*T,). G holds 2x2 rotation blocks [[hR, -hI], [hI, hR]]
repeated T times per (rx, tx) link, and B is the diagonal power matrix
with sqrt(P_i) repeated over each antenna's 2T rows.

Noise is white Gaussian with variance N0 per complex entry, i.e. N0/2
per real dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sfnsim.stcodes import StCode


def stack_matrix(m: np.ndarray) -> np.ndarray:
    """Row-wise real/imaginary stacking of a complex matrix."""
    flat = np.asarray(m, dtype=complex).ravel()
    out = np.empty(2 * flat.size)
    out[0::2] = flat.real
    out[1::2] = flat.imag
    return out


def unstack_matrix(v: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Inverse of stack_matrix."""
    v = np.asarray(v, dtype=float)
    return (v[0::2] + 1j * v[1::2]).reshape(shape)


def stack_symbols(s: np.ndarray) -> np.ndarray:
    """Real/imaginary stacking of a complex symbol vector."""
    return stack_matrix(np.asarray(s, dtype=complex).reshape(-1, 1))


def unstack_symbols(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v[0::2] + 1j * v[1::2]


def forward_complex(
    h: np.ndarray,
    sqrt_p: np.ndarray,
    x: np.ndarray,
    rng: np.random.Generator | None = None,
    n0: float = 0.0,
) -> np.ndarray:
    """Complex observation Y = H P X + W for one subcarrier and codeword.

    W is CN(0, n0) per entry (n0 / 2 per real dimension); omitted when
    rng is None or n0 == 0.
    """
    h = np.asarray(h, dtype=complex)
    x = np.asarray(x, dtype=complex)
    sqrt_p = np.asarray(sqrt_p, dtype=float)
    if h.shape[1] != sqrt_p.size or h.shape[1] != x.shape[0]:
        raise ValueError(
            f"shape mismatch: H {h.shape}, P diag {sqrt_p.shape}, X {x.shape}"
        )
    y = (h * sqrt_p[None, :]) @ x
    if rng is not None and n0 > 0:
        w = (rng.standard_normal(y.shape) + 1j * rng.standard_normal(y.shape)) * np.sqrt(
            n0 / 2.0
        )
        y = y + w
    return y


def build_g(h: np.ndarray, t: int) -> np.ndarray:
    """Real channel matrix G (2*m_r*t x 2*n_tx*t) of per-link rotation blocks."""
    h = np.asarray(h, dtype=complex)
    m_r, n_tx = h.shape
    g = np.zeros((2 * m_r * t, 2 * n_tx * t))
    eye = np.eye(t)
    for j in range(m_r):
        for i in range(n_tx):
            rot = np.array(
                [[h[j, i].real, -h[j, i].imag], [h[j, i].imag, h[j, i].real]]
            )
            g[2 * t * j : 2 * t * (j + 1), 2 * t * i : 2 * t * (i + 1)] = np.kron(
                eye, rot
            )
    return g


def build_b(sqrt_p: np.ndarray, t: int) -> np.ndarray:
    """Diagonal power matrix with sqrt(P_i) repeated over each antenna's 2T rows."""
    sqrt_p = np.asarray(sqrt_p, dtype=float)
    if np.any(sqrt_p < 0):
        raise ValueError("amplitude factors must be non-negative")
    return np.diag(np.repeat(sqrt_p, 2 * t))


@dataclass(frozen=True)
class EquivalentSystem:
    """Real-valued linear system for one subcarrier and codeword block."""

    g: np.ndarray
    b: np.ndarray
    f: np.ndarray
    geq: np.ndarray
    noise_var: float  # per real dimension (N0 / 2)


def build_equivalent(
    h: np.ndarray, sqrt_p: np.ndarray, code: StCode, noise_var: float = 0.0
) -> EquivalentSystem:
    """Assemble G, B, F and Geq = G B F for one channel realization."""
    h = np.asarray(h, dtype=complex)
    if h.shape[1] != code.n_tx:
        raise ValueError(f"channel has {h.shape[1]} tx columns, code needs {code.n_tx}")
    g = build_g(h, code.t)
    b = build_b(sqrt_p, code.t)
    f = code.generator_matrix()
    return EquivalentSystem(g=g, b=b, f=f, geq=g @ b @ f, noise_var=noise_var)


def build_geq_batch(h: np.ndarray, sqrt_p: np.ndarray, code: StCode) -> np.ndarray:
    """Geq for a batch of subcarriers, shape (n_sc, 2*m_r*T, 2Q).

    Equivalent to build_equivalent per subcarrier but computed with one
    complex contraction.
    """
    h = np.asarray(h, dtype=complex)
    n_sc, m_r, n_tx = h.shape
    if n_tx != code.n_tx:
        raise ValueError(f"channel has {n_tx} tx columns, code needs {code.n_tx}")
    f = code.generator_matrix()
    # complex view of F, indexed (antenna, slot, input column)
    fc = (f[0::2, :] + 1j * f[1::2, :]).reshape(n_tx, code.t, 2 * code.q)
    yc = np.einsum("nji,itc->njtc", h * np.asarray(sqrt_p, dtype=float)[None, None, :], fc)
    geq = np.empty((n_sc, 2 * m_r * code.t, 2 * code.q))
    yc = yc.reshape(n_sc, m_r * code.t, 2 * code.q)
    geq[:, 0::2, :] = yc.real
    geq[:, 1::2, :] = yc.imag
    return geq
