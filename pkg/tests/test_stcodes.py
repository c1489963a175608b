import numpy as np
import pytest

from sfnsim.linmodel import stack_matrix, stack_symbols
from sfnsim.mapping import QamMapping
from sfnsim.stcodes import GOLDEN, get_code, min_det_difference

ALL_CODES = ["alamouti", "sm", "golden", "3d"]


def random_symbols(rng, q):
    return rng.standard_normal(q) + 1j * rng.standard_normal(q)


def test_golden_constants_identities():
    assert GOLDEN.theta * GOLDEN.theta_bar == pytest.approx(-1.0, abs=1e-12)
    assert GOLDEN.theta - GOLDEN.theta_bar == pytest.approx(np.sqrt(5.0), abs=1e-12)
    assert GOLDEN.alpha == pytest.approx(1 + 1j * (1 - GOLDEN.theta))
    assert GOLDEN.alpha_bar == pytest.approx(1 + 1j * (1 - GOLDEN.theta_bar))


@pytest.mark.parametrize(
    "name,n_tx,q,t,rate",
    [
        ("alamouti", 2, 2, 2, 1.0),
        ("sm", 2, 2, 1, 2.0),
        ("golden", 2, 4, 2, 2.0),
        ("3d", 4, 8, 4, 2.0),
    ],
)
def test_shapes_and_rates(name, n_tx, q, t, rate):
    code = get_code(name)
    assert (code.n_tx, code.q, code.t, code.rate) == (n_tx, q, t, rate)
    assert code.generator_matrix().shape == (2 * n_tx * t, 2 * q)


def test_unknown_code_rejected():
    with pytest.raises(ValueError):
        get_code("vblast")


def test_wrong_symbol_count_rejected():
    with pytest.raises(ValueError):
        get_code("alamouti").encode(np.ones(3, dtype=complex))


def test_alamouti_codeword_structure():
    code = get_code("alamouti")
    s = np.array([1 + 2j, -0.5 + 0.25j])
    x = code.encode(s) / code.norm_factor
    expected = np.array([[s[0], -np.conj(s[1])], [s[1], np.conj(s[0])]])
    np.testing.assert_allclose(x, expected, atol=1e-14)


def test_alamouti_orthogonality():
    code = get_code("alamouti")
    rng = np.random.default_rng(7)
    for _ in range(1000):
        s = random_symbols(rng, 2)
        x = code.encode(s)
        gram = x.conj().T @ x
        expected = code.norm_factor**2 * (abs(s[0]) ** 2 + abs(s[1]) ** 2) * np.eye(2)
        np.testing.assert_allclose(gram, expected, atol=1e-12)


def test_golden_basis_codeword():
    code = get_code("golden")
    x = code.encode(np.array([1.0, 0, 0, 0]))
    expected = (
        code.norm_factor
        / np.sqrt(5.0)
        * np.array([[GOLDEN.alpha, 0.0], [0.0, GOLDEN.alpha_bar]])
    )
    np.testing.assert_allclose(x, expected, atol=1e-14)


def test_three_d_block_conjugation_structure():
    code = get_code("3d")
    rng = np.random.default_rng(11)
    for _ in range(50):
        x = code.encode(random_symbols(rng, 8))
        np.testing.assert_allclose(x[2:4, 2:4], np.conj(x[0:2, 0:2]), atol=1e-13)
        np.testing.assert_allclose(x[2:4, 0:2], -np.conj(x[0:2, 2:4]), atol=1e-13)


def test_encoding_is_real_linear():
    rng = np.random.default_rng(3)
    for name in ALL_CODES:
        code = get_code(name)
        s1 = random_symbols(rng, code.q)
        s2 = random_symbols(rng, code.q)
        a, b = rng.standard_normal(2)
        # real scaling acts separately on real and imaginary parts
        combo = (
            a * s1.real + b * s2.real + 1j * (a * s1.imag + b * s2.imag)
        )
        np.testing.assert_allclose(
            code.encode(combo),
            a * code.encode(s1.real + 0j)
            + b * code.encode(s2.real + 0j)
            + a * code.encode(1j * s1.imag)
            + b * code.encode(1j * s2.imag),
            atol=1e-12,
        )


@pytest.mark.parametrize("name", ALL_CODES)
def test_dispersion_generator_consistency(name):
    code = get_code(name)
    f = code.generator_matrix()
    rng = np.random.default_rng(5)
    for _ in range(1000):
        s = random_symbols(rng, code.q)
        np.testing.assert_allclose(
            stack_matrix(code.encode(s)), f @ stack_symbols(s), atol=1e-12
        )


def test_sm_generator_is_permutation_like():
    f = get_code("sm").generator_matrix()
    # one nonzero per row and column, equal magnitudes
    assert np.all((np.abs(f) > 0).sum(axis=0) == 1)
    assert np.all((np.abs(f) > 0).sum(axis=1) == 1)
    np.testing.assert_allclose(np.abs(f[np.abs(f) > 0]), 1 / np.sqrt(2.0))


def test_alamouti_generator_orthogonal_columns():
    code = get_code("alamouti")
    f = code.generator_matrix()
    nz = f[np.abs(f) > 1e-15]
    np.testing.assert_allclose(np.abs(nz), code.norm_factor, atol=1e-14)
    np.testing.assert_allclose(
        f.T @ f, code.norm_factor**2 * 2 * np.eye(4), atol=1e-13
    )


def test_three_d_generator_dimensions():
    assert get_code("3d").generator_matrix().shape == (32, 16)


@pytest.mark.parametrize("name", ALL_CODES)
def test_power_normalization(name):
    code = get_code(name)
    rng = np.random.default_rng(13)
    points = QamMapping(16).points()
    draws = points[rng.integers(0, 16, (100_000, code.q))]
    words = np.einsum("sq,qit->sit", draws.real, code.disp_u) + 1j * np.einsum(
        "sq,qit->sit", draws.imag, code.disp_v
    )
    energy = np.abs(words) ** 2
    assert energy.sum(axis=(1, 2)).mean() / code.t == pytest.approx(1.0, rel=1e-2)


def test_min_det_golden_positive():
    val = min_det_difference(get_code("golden"), QamMapping(4).points())
    assert val > 1e-6


def test_min_det_alamouti_positive():
    val = min_det_difference(get_code("alamouti"), QamMapping(4).points())
    assert val > 1e-6


def test_min_det_sm_zero():
    val = min_det_difference(get_code("sm"), QamMapping(4).points())
    assert val == pytest.approx(0.0, abs=1e-12)


def test_min_det_enumeration_cap():
    with pytest.raises(ValueError):
        min_det_difference(get_code("3d"), QamMapping(4).points())
