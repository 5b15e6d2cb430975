import numpy as np
import pytest

from fsind.category import builtin_category
from fsind.center import (CenterData, CenterObject, builtin_center,
                          verify_half_braiding)

from conftest import get_category, get_center

EXPECTED_COUNTS = {"pointed:2": 4, "pointed:3": 9, "pointed:2:1": 4,
                   "fibonacci": 4, "ising": 9}


def test_center_size(builtin_name, cat, center):
    assert len(center.simples) == EXPECTED_COUNTS[builtin_name]


def test_beta_zero_is_identity(builtin_name, cat, center):
    for X in center.simples:
        for k, mat in X.braid.get(0, {}).items():
            assert np.max(np.abs(mat - np.eye(mat.shape[0]))) < 1e-12


def test_half_braidings_valid(builtin_name, cat, center):
    for X in center.simples:
        rep = verify_half_braiding(cat, X)
        assert rep.ok, (X.name, rep.violations[:3])
        assert rep.max_residual <= 1e-9


def test_corrupted_half_braiding_detected(cat, center):
    X = center.simples[-1]
    broken = CenterObject(cat, "broken", X.components)
    for i, mats in X.braid.items():
        broken.set_braid(i, {k: m.copy() for k, m in mats.items()})
    target = max(i for i in broken.braid if broken.braid[i])
    if target == 0:
        pytest.skip("nothing to corrupt")
    for k in broken.braid[target]:
        broken.braid[target][k] = 2.0 * broken.braid[target][k]
    rep = verify_half_braiding(cat, broken)
    assert not rep.ok


def test_trivial_center_object(cat):
    X = CenterObject(cat, "triv", [((0, 1),)])
    from fsind.diagrams import basis_keys
    for i in range(cat.rank):
        mats = {}
        for k in range(cat.rank):
            keys = basis_keys(cat, ((X, 1), (i, 1)), k)
            if keys:
                mats[k] = np.eye(len(keys))
        X.set_braid(i, mats)
    rep = verify_half_braiding(cat, X)
    assert rep.ok and rep.max_residual < 1e-12


def test_modular_relations(builtin_name, cat, center):
    rel = center.verify()
    assert rel["s4"] <= 1e-8
    assert rel["st3"] <= 1e-8
    assert rel["dim_center"] <= 1e-8
    assert rel["unit_row"] <= 1e-8


def test_t_diagonal_and_pointed2_fourth_roots():
    center = get_center("pointed:2")
    t = center.t_matrix()
    assert np.max(np.abs(t - np.diag(np.diag(t)))) == 0.0
    diag = np.diag(t)
    assert np.max(np.abs(diag ** 4 - 1)) < 1e-12
    assert sorted(np.round(diag.real).astype(int)) == [-1, 1, 1, 1]


def test_center_dim_squares(builtin_name, cat, center):
    dims = np.array([X.qdim() for X in center.simples])
    assert np.sum(dims ** 2) == pytest.approx(complex(cat.global_dim()) ** 2)


def test_s_squared_is_conjugation_permutation(builtin_name, cat, center):
    s = center.s_matrix()
    s2 = s @ s
    perm = (np.abs(s2) > 0.5).astype(complex)
    assert np.max(np.abs(s2 - perm)) < 1e-8
    assert np.allclose(perm @ perm, np.eye(len(perm)))


def test_unit_row(builtin_name, cat, center):
    s = center.s_matrix()
    dims = np.array([X.qdim() for X in center.simples])
    u = center.unit_index()
    assert np.max(np.abs(s[u] - dims / cat.global_dim())) < 1e-10


def test_fibonacci_center_underlying():
    center = get_center("fibonacci")
    words = sorted(tuple(X.components[0]) for X in center.simples)
    assert words == [((0, 1), (0, 1)), ((0, 1), (1, 1)),
                     ((1, 1), (0, 1)), ((1, 1), (1, 1))]
