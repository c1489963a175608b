import numpy as np
import pytest

from sfnsim import linmodel
from sfnsim.stcodes import get_code

ALL_CODES = ["alamouti", "sm", "golden", "3d"]


def random_channel(rng, m_r, n_tx):
    return (rng.standard_normal((m_r, n_tx)) + 1j * rng.standard_normal((m_r, n_tx))) / np.sqrt(2.0)


def test_stacking_roundtrip():
    rng = np.random.default_rng(0)
    m = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    np.testing.assert_allclose(
        linmodel.unstack_matrix(linmodel.stack_matrix(m), (3, 4)), m
    )
    s = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    np.testing.assert_allclose(linmodel.unstack_symbols(linmodel.stack_symbols(s)), s)


def test_forward_identity_channel():
    code = get_code("sm")
    x = code.encode(np.array([1 + 1j, 2 - 1j]))
    y = linmodel.forward_complex(np.eye(2, dtype=complex), np.ones(2), x)
    np.testing.assert_allclose(y, x)


def test_forward_power_gating():
    code = get_code("3d")
    rng = np.random.default_rng(1)
    h = random_channel(rng, 2, 4)
    s = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    x = code.encode(s)
    y_gated = linmodel.forward_complex(h, np.array([1.0, 1.0, 0.0, 0.0]), x)
    y_manual = linmodel.forward_complex(h[:, :2], np.ones(2), x[:2])
    np.testing.assert_allclose(y_gated, y_manual, atol=1e-12)


def test_forward_shape_mismatch():
    with pytest.raises(ValueError):
        linmodel.forward_complex(np.eye(2, dtype=complex), np.ones(3), np.zeros((2, 2)))


def test_g_block_structure():
    rng = np.random.default_rng(2)
    h = random_channel(rng, 2, 2)
    t = 3
    g = linmodel.build_g(h, t)
    assert g.shape == (2 * 2 * t, 2 * 2 * t)
    for j in range(2):
        for i in range(2):
            block = g[2 * t * j : 2 * t * (j + 1), 2 * t * i : 2 * t * (i + 1)]
            rot = np.array(
                [[h[j, i].real, -h[j, i].imag], [h[j, i].imag, h[j, i].real]]
            )
            np.testing.assert_allclose(block, np.kron(np.eye(t), rot))


def test_b_balanced_powers_is_identity_scaled():
    b = linmodel.build_b(np.ones(4) * 0.7, 2)
    np.testing.assert_allclose(b, 0.7 * np.eye(16))


def test_b_rejects_negative():
    with pytest.raises(ValueError):
        linmodel.build_b(np.array([1.0, -0.1]), 2)


@pytest.mark.parametrize("name", ALL_CODES)
def test_representation_equivalence(name):
    """Complex-domain forward model and real-stacked Geq model agree,
    including a shared noise draw."""
    code = get_code(name)
    rng = np.random.default_rng(3)
    for _ in range(200):
        h = random_channel(rng, 2, code.n_tx)
        sqrt_p = rng.uniform(0.05, 1.0, code.n_tx)
        s = rng.standard_normal(code.q) + 1j * rng.standard_normal(code.q)
        w = (
            rng.standard_normal((2, code.t)) + 1j * rng.standard_normal((2, code.t))
        ) * 0.3
        y_complex = linmodel.forward_complex(h, sqrt_p, code.encode(s)) + w
        sys_ = linmodel.build_equivalent(h, sqrt_p, code)
        y_real = sys_.geq @ linmodel.stack_symbols(s) + linmodel.stack_matrix(w)
        np.testing.assert_allclose(
            linmodel.stack_matrix(y_complex), y_real, atol=1e-10
        )


@pytest.mark.parametrize("name", ALL_CODES)
def test_batch_geq_matches_single(name):
    code = get_code(name)
    rng = np.random.default_rng(4)
    h = (rng.standard_normal((8, 2, code.n_tx)) + 1j * rng.standard_normal((8, 2, code.n_tx)))
    sqrt_p = rng.uniform(0.1, 1.0, code.n_tx)
    batch = linmodel.build_geq_batch(h, sqrt_p, code)
    for n in range(8):
        single = linmodel.build_equivalent(h[n], sqrt_p, code).geq
        np.testing.assert_allclose(batch[n], single, atol=1e-12)


def test_sm_t1_geq_is_scaled_rotations():
    code = get_code("sm")
    rng = np.random.default_rng(5)
    h = random_channel(rng, 2, 2)
    sqrt_p = np.array([1.0, 0.5])
    geq = linmodel.build_equivalent(h, sqrt_p, code).geq
    assert geq.shape == (4, 4)
    # hand expansion: per (j, i), a rotation block scaled by sqrt(P_i)/sqrt(2)
    for j in range(2):
        for i in range(2):
            rot = np.array(
                [[h[j, i].real, -h[j, i].imag], [h[j, i].imag, h[j, i].real]]
            )
            np.testing.assert_allclose(
                geq[2 * j : 2 * j + 2, 2 * i : 2 * i + 2],
                sqrt_p[i] * rot / np.sqrt(2.0),
                atol=1e-12,
            )


def test_alamouti_equal_power_decouples():
    code = get_code("alamouti")
    rng = np.random.default_rng(6)
    h = random_channel(rng, 2, 2)
    sys_ = linmodel.build_equivalent(h, np.ones(2), code)
    gram = sys_.geq.T @ sys_.geq
    energy = code.norm_factor**2 * 2 * (np.abs(h) ** 2).sum()
    np.testing.assert_allclose(gram, energy / 2 * np.eye(4), atol=1e-12)


def test_column_energy_invariant():
    rng = np.random.default_rng(7)
    for name in ALL_CODES:
        code = get_code(name)
        h = random_channel(rng, 2, code.n_tx)
        sqrt_p = rng.uniform(0.1, 1.0, code.n_tx)
        sys_ = linmodel.build_equivalent(h, sqrt_p, code)
        # column energy equals channel-and-power weighted dispersion energy
        bf = sys_.b @ sys_.f
        hr = np.abs(h) ** 2
        for p in range(sys_.geq.shape[1]):
            col = bf[:, p].reshape(code.n_tx, code.t, 2)
            weights = (col**2).sum(axis=(1, 2))
            expected = (hr.sum(axis=0) * weights).sum()
            assert np.linalg.norm(sys_.geq[:, p]) ** 2 == pytest.approx(expected, rel=1e-10)


def test_unit_power_matrix_reduces_to_plain_mimo():
    code = get_code("golden")
    rng = np.random.default_rng(8)
    h = random_channel(rng, 2, 2)
    sys_unit = linmodel.build_equivalent(h, np.ones(2), code)
    np.testing.assert_allclose(sys_unit.b, np.eye(8))
    np.testing.assert_allclose(sys_unit.geq, sys_unit.g @ sys_unit.f, atol=1e-13)
