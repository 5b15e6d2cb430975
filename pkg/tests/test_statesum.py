import itertools

import numpy as np
import pytest

from fsind.center import CenterObject
from fsind.indicators import IndicatorQuery, nu
from fsind.statesum import (admissible_colorings, dim_of_coloring, evaluate,
                            half_rim_space, sphere_skeleton, torus_skeleton,
                            _coloring_value)

from conftest import get_category, get_center


def test_sphere_skeleton(builtin_name, cat):
    got = evaluate(cat, sphere_skeleton())
    assert got == pytest.approx(1.0 / complex(cat.global_dim()), abs=1e-12)


def test_torus_counts():
    for n in (1, 2, 4, 5):
        sk = torus_skeleton(n, 1)
        assert len(sk.nodes) == n + 5
        assert len(sk.faces) == n + 8
        assert sk.n_cells == 2
        sk.validate()


def test_unsupported_shift():
    with pytest.raises(ValueError):
        torus_skeleton(3, 2)
    with pytest.raises(ValueError):
        torus_skeleton(0, 1)


def test_half_rim_space_words():
    center = get_center("pointed:2")
    sk = torus_skeleton(3, 1)
    sk.decorations["X"] = center.simples[0]
    sk.decorations["V"] = 1
    coloring = {f: 0 for f in sk.faces}
    word = half_rim_space(get_category("pointed:2"), sk, coloring, "a.xu")
    assert word == ((0, 1), (center.simples[0], -1), (0, -1))
    word_v = half_rim_space(get_category("pointed:2"), sk, coloring, "u1.t")
    assert word_v[1] == (1, -1)


def test_trivial_decorations(builtin_name, cat, center):
    sk = torus_skeleton(2, 1)
    sk.decorations["X"] = center.simples[center.unit_index()]
    sk.decorations["V"] = 0
    assert evaluate(cat, sk) == pytest.approx(1.0, abs=1e-10)


def test_dim_of_coloring_chi():
    cat = get_category("fibonacci")
    sk = sphere_skeleton()
    assert dim_of_coloring(cat, sk, {"F": 1}) == pytest.approx(
        complex(cat.qdim[1]))
    sk.faces["F"].chi = 0
    assert dim_of_coloring(cat, sk, {"F": 1}) == pytest.approx(1.0)
    sk.faces["F"].chi = 2
    assert dim_of_coloring(cat, sk, {"F": 1}) == pytest.approx(
        complex(cat.qdim[1]) ** 2)
    sk.faces["F"].chi = 1


def test_sphere_with_chi_two_face():
    # the same 3-sphere, presented without any node: one sphere face
    from fsind.statesum import Face, GraphSkeleton
    cat = get_category("ising")
    skel = GraphSkeleton({"F": Face("F", chi=2)}, [], {}, [], 2, {})
    got = evaluate(cat, skel)
    assert got == pytest.approx(1.0 / complex(cat.global_dim()), abs=1e-12)


def grid_check(name, ns, rs, tol=1e-7):
    cat = get_category(name)
    center = get_center(name)
    worst = 0.0
    for n in ns:
        for r in rs:
            sk = torus_skeleton(n, r)
            for X in center.simples:
                for v in range(cat.rank):
                    sk.decorations["X"] = X
                    sk.decorations["V"] = v
                    got = evaluate(cat, sk)
                    want = nu(cat, center, IndicatorQuery(n, r, X, v))
                    worst = max(worst, abs(got - want))
    return worst


def test_torus_equals_indicator_small(builtin_name):
    assert grid_check(builtin_name, (1, 2), (1,)) <= 1e-7


def test_torus_equals_indicator_r0(builtin_name):
    assert grid_check(builtin_name, (1, 2, 3), (0,)) <= 1e-7


def test_pruning_soundness():
    """Colorings skipped by admissibility contribute exactly zero."""
    cat = get_category("pointed:2")
    center = get_center("pointed:2")
    sk = torus_skeleton(1, 1)
    sk.decorations["X"] = center.simples[-1]
    sk.decorations["V"] = 1
    faces = list(sk.faces)
    admissible = {tuple(sorted(c.items())) for c in admissible_colorings(cat, sk)}
    total = 0.0 + 0.0j
    cache = {}
    count = 0
    for combo in itertools.product(range(cat.rank), repeat=len(faces)):
        coloring = dict(zip(faces, combo))
        term = _coloring_value(cat, sk, coloring, cache)
        if term is None:
            term = 0.0
            assert tuple(sorted(coloring.items())) not in admissible
        else:
            count += 1
        total += dim_of_coloring(cat, sk, coloring) * term
    total /= complex(cat.global_dim()) ** sk.n_cells
    assert count <= len(admissible)
    assert total == pytest.approx(evaluate(cat, sk), abs=1e-12)


def test_linearity_in_x_direct_sum():
    cat = get_category("pointed:2")
    center = get_center("pointed:2")
    X1, X2 = center.simples[1], center.simples[2]
    both = CenterObject(cat, "sum", X1.components + X2.components)
    from fsind.diagrams import basis_keys
    for i in range(cat.rank):
        mats = {}
        for k in range(cat.rank):
            rows = len(basis_keys(cat, ((i, 1), (both, 1)), k))
            cols = len(basis_keys(cat, ((both, 1), (i, 1)), k))
            if not rows:
                continue
            m = np.zeros((rows, cols), dtype=complex)
            # component blocks are diagonal: orderings list component 0 first
            b1 = X1.braid[i].get(k)
            b2 = X2.braid[i].get(k)
            r = c = 0
            for blk in (b1, b2):
                if blk is None:
                    continue
                m[r:r + blk.shape[0], c:c + blk.shape[1]] = blk
                r += blk.shape[0]
                c += blk.shape[1]
            mats[k] = m
        both.set_braid(i, mats)
    sk = torus_skeleton(2, 1)
    sk.decorations["V"] = 1
    vals = []
    for X in (X1, X2, both):
        sk.decorations["X"] = X
        vals.append(evaluate(cat, sk))
    assert vals[2] == pytest.approx(vals[0] + vals[1], abs=1e-9)


def test_trace_log():
    cat = get_category("pointed:2")
    center = get_center("pointed:2")
    sk = torus_skeleton(1, 1)
    sk.decorations["X"] = center.simples[center.unit_index()]
    sk.decorations["V"] = 0
    log = []
    val = evaluate(cat, sk, trace_log=log)
    assert log
    total = sum(w * t for _, w, t in log) / complex(cat.global_dim()) ** 2
    assert total == pytest.approx(val)
