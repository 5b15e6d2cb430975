import numpy as np
import pytest

from fsind.center import GrothendieckVector
from fsind.equivariance import (SL2ZElement, act_center, act_indices,
                                matrix_to_word, tilde, verify_equivariance,
                                word_to_matrix)

from conftest import get_category, get_center


def test_tilde_examples():
    t = SL2ZElement.from_word("t")
    assert tilde(t).matrix.tolist() == [[1, -1], [0, 1]]
    s = SL2ZElement.from_word("s")
    assert tilde(s).matrix.tolist() == [[0, -1], [1, 0]]
    ident = SL2ZElement.from_word("")
    assert tilde(ident).matrix.tolist() == [[1, 0], [0, 1]]
    g = SL2ZElement.from_word("tsT")
    assert np.array_equal(tilde(tilde(g)).matrix, g.matrix)


def test_act_indices_examples():
    assert act_indices((4, 1), SL2ZElement.from_word("s")) == (1, -4)
    assert act_indices((4, 1), SL2ZElement.from_word("t")) == (4, -3)
    assert act_indices((7, -2), SL2ZElement.from_word("")) == (7, -2)


def test_act_indices_right_action():
    rng = np.random.default_rng(12)
    for _ in range(30):
        w1 = "".join(rng.choice(list("stST"), size=rng.integers(0, 5)))
        w2 = "".join(rng.choice(list("stST"), size=rng.integers(0, 5)))
        g, h = SL2ZElement.from_word(w1), SL2ZElement.from_word(w2)
        pair = (int(rng.integers(-5, 6)), int(rng.integers(-5, 6)))
        assert act_indices(act_indices(pair, g), h) == act_indices(pair, g * h)


def test_word_matrix_round_trip():
    rng = np.random.default_rng(4)
    for _ in range(100):
        w = "".join(rng.choice(list("stST"), size=rng.integers(0, 10)))
        m = word_to_matrix(w)
        assert np.array_equal(word_to_matrix(matrix_to_word(m)), m)
    with pytest.raises(ValueError):
        SL2ZElement(np.array([[1, 1], [1, 1]]))
    with pytest.raises(ValueError):
        word_to_matrix("x")


def test_act_center_linearity(builtin_name, cat, center):
    g = SL2ZElement.from_word("st")
    a = GrothendieckVector.basis_vector(center, 0)
    b = GrothendieckVector.basis_vector(center, 1)
    combo = 3.0 * a + (1 - 2j) * b
    lhs = act_center(center, g, combo)
    rhs = 3.0 * act_center(center, g, a) + (1 - 2j) * act_center(center, g, b)
    assert np.allclose(lhs.coeffs, rhs.coeffs)


def test_act_center_word_consistency(builtin_name, cat, center):
    # words multiplying to the same matrix act identically
    xi = GrothendieckVector.basis_vector(center, 0)
    for w1, w2 in [("st", "st"), ("sS", ""), ("tT", ""), ("ssss", "")]:
        g1, g2 = SL2ZElement.from_word(w1), SL2ZElement.from_word(w2)
        v1, v2 = act_center(center, g1, xi), act_center(center, g2, xi)
        assert np.allclose(v1.coeffs, v2.coeffs, atol=1e-10)


def test_s_squared_conjugates_unit(builtin_name, cat, center):
    u = center.unit_index()
    xi = GrothendieckVector.basis_vector(center, u)
    out = act_center(center, SL2ZElement.from_word("ss"), xi)
    # the unit is self-conjugate: s^2 fixes its basis vector
    assert np.allclose(out.coeffs, xi.coeffs, atol=1e-10)
    # s^2 permutes every basis vector to a single partner
    for i in range(len(center.simples)):
        out = act_center(center, SL2ZElement.from_word("ss"),
                         GrothendieckVector.basis_vector(center, i))
        mags = np.abs(out.coeffs)
        assert np.max(mags) == pytest.approx(1.0, abs=1e-9)
        assert np.sum(mags > 0.5) == 1


def test_identity_word_residual_exactly_zero(builtin_name, cat, center):
    g = SL2ZElement.from_word("")
    xi = GrothendieckVector.basis_vector(center, 0)
    res = verify_equivariance(cat, center, min(1, cat.rank - 1), (2, 1), g, xi)
    assert res == 0.0


def test_equivariance_small_grid(builtin_name, cat, center):
    words = ["s", "t", "st"]
    worst = 0.0
    for word in words:
        g = SL2ZElement.from_word(word)
        for n in (1, 2):
            for r in (0, 1):
                for i in range(len(center.simples)):
                    xi = GrothendieckVector.basis_vector(center, i)
                    for v in range(cat.rank):
                        worst = max(worst, verify_equivariance(
                            cat, center, v, (n, r), g, xi))
    assert worst <= 1e-7


def test_negative_indices(builtin_name, cat, center):
    g = SL2ZElement.from_word("ts")
    xi = GrothendieckVector.basis_vector(center, len(center.simples) - 1)
    for pair in [(-1, 2), (0, -3), (-2, -2)]:
        res = verify_equivariance(cat, center, min(1, cat.rank - 1), pair, g, xi)
        assert res <= 1e-7
