import numpy as np
import pytest

from fsind.category import (FusionData, builtin_category, dual_word,
                            fibonacci_category, ising_category,
                            pointed_category, word)


def test_pointed_dimensions():
    cat = builtin_category("pointed:3")
    assert cat.rank == 3
    assert np.allclose(cat.qdim, 1.0)
    assert cat.global_dim() == pytest.approx(3.0)


def test_fibonacci_dimension_is_golden_ratio():
    # d solves d^2 = d + 1, forced by tau (x) tau = 1 + tau
    cat = fibonacci_category()
    d = cat.qdim[1]
    assert abs(d * d - d - 1) < 1e-12
    assert d.real > 0
    assert cat.global_dim() == pytest.approx((5 + np.sqrt(5)) / 2)


def test_ising_global_dim():
    cat = ising_category()
    assert cat.global_dim() == pytest.approx(4.0)
    assert cat.qdim[cat.label("sigma")] == pytest.approx(np.sqrt(2))


def test_builtin_validation(builtin_name, cat):
    report = cat.verify()
    assert report.ok
    assert report.max_pentagon_residual <= 1e-10


def test_corrupted_f_symbol_detected():
    cat = fibonacci_category()
    bad = dict(cat.f_symbols)
    bad[(1, 1, 1, 1, 1, 1)] = -bad[(1, 1, 1, 1, 1, 1)]
    broken = FusionData(cat.names, cat.dual, cat.fusion, bad, cat.qdim)
    report = broken.verify()
    assert not report.ok
    assert any(v.check == "pentagon" for v in report.violations)


def test_unit_violation_detected():
    cat = pointed_category(2)
    fusion = cat.fusion.copy()
    fusion[0, 1, 1] = 0
    broken = FusionData(cat.names, cat.dual, fusion, cat.f_symbols, cat.qdim)
    assert any(v.check == "unit" for v in broken.verify().violations)


def test_hom_dim_examples():
    p3 = pointed_category(3)
    g = 1
    assert p3.hom_dim(word((g, 1), (g, 1), (g, 1))) == 1
    fib = fibonacci_category()
    assert fib.hom_dim(((1, 1),) * 3) == 1
    assert fib.hom_dim(((1, 1),) * 4) == 2


def test_hom_dim_against_fusion_matrix_oracle():
    # multiply fusion matrices directly, independent of the path walker
    for name in ("pointed:3:1", "fibonacci", "ising"):
        cat = builtin_category(name)
        rng = np.random.default_rng(5)
        for _ in range(25):
            length = rng.integers(1, 6)
            w = tuple((int(rng.integers(0, cat.rank)), int(rng.choice([-1, 1])))
                      for _ in range(length))
            vec = np.zeros(cat.rank, dtype=np.int64)
            vec[0] = 1
            for lab, s in w:
                obj = lab if s > 0 else cat.dual[lab]
                vec = vec @ cat.fusion[:, obj, :]
            assert cat.hom_dim(w) == vec[0]


def test_hom_dim_duality_invariance():
    for name in ("pointed:3:1", "fibonacci", "ising"):
        cat = builtin_category(name)
        rng = np.random.default_rng(11)
        for _ in range(20):
            length = rng.integers(1, 6)
            w = tuple((int(rng.integers(0, cat.rank)), int(rng.choice([-1, 1])))
                      for _ in range(length))
            assert cat.hom_dim(w) == cat.hom_dim(dual_word(w))


def test_global_dim_nonzero(builtin_name, cat):
    assert abs(cat.global_dim()) > cat.tolerance


def test_unknown_label_raises():
    cat = fibonacci_category()
    with pytest.raises(KeyError):
        cat.hom_dim(((7, 1),))
    with pytest.raises(KeyError):
        cat.label("nope")


def test_pointed_cocycle_range():
    with pytest.raises(ValueError):
        pointed_category(0)
    cat = pointed_category(4, 5)  # exponent taken mod 4
    assert cat.name == "pointed(4,1)"


def test_multiplicity_guard():
    fusion = np.zeros((2, 2, 2), dtype=np.int64)
    fusion[0, 0, 0] = fusion[0, 1, 1] = fusion[1, 0, 1] = 1
    fusion[1, 1, 0] = 1
    fusion[1, 1, 1] = 2
    cat = FusionData(["1", "x"], [0, 1], fusion, {}, [1.0, 2.0])
    with pytest.raises(NotImplementedError):
        cat.assert_multiplicity_free()
