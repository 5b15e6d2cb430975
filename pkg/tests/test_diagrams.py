"""Engine basics plus the string-diagram lemma suite."""
import numpy as np
import pytest

from fsind.category import dual_word
from fsind.diagrams import (DiagState, cap, combine, cup, cup_word, dual_basis,
                            gram_matrix, hom_basis, hom_dim, insert_vector,
                            insert_vector_rotated, pairing_states, trace_endo)

from conftest import random_closed_word, random_state


def unit_state(cat):
    return DiagState(cat, (), 0, {((), (0,)): 1.0 + 0.0j})


def closed_loop(cat, letter):
    st = cup(unit_state(cat), letter, 0)
    return cap(st, 0).scalar()


def test_loops_give_quantum_dimensions(cat):
    for a in range(cat.rank):
        assert closed_loop(cat, (a, +1)) == pytest.approx(complex(cat.qdim[a]))
        assert closed_loop(cat, (a, -1)) == pytest.approx(complex(cat.qdim[a]))


def test_disjoint_loops_multiply(cat):
    st = unit_state(cat)
    for a in range(cat.rank):
        st2 = cup(cup(st, (a, 1), 0), (a, 1), 2)
        st2 = cap(st2, 2)
        st2 = cap(st2, 0)
        assert st2.scalar() == pytest.approx(complex(cat.qdim[a] ** 2))


def test_hom_basis_sizes(cat):
    assert len(hom_basis(cat, ())) == 1
    if cat.name == "fibonacci":
        assert len(hom_basis(cat, ((1, 1),) * 4)) == 2


def test_zigzags_exact(cat):
    for a in range(cat.rank):
        for s in (+1, -1):
            base = hom_basis(cat, ((a, s),), source=cat.obj((a, s)))[0]
            bent = cap(cup(base, (a, s), 0), 1)
            diff = bent.add(base.scale(-1)).chop()
            assert not diff.table
            bent2 = cap(cup(base, (a, -s), 1), 0)
            diff2 = bent2.add(base.scale(-1)).chop()
            assert not diff2.table


def test_dual_basis_re_pairing(cat, rng):
    word = random_closed_word(cat, rng)
    basis = hom_basis(cat, word)
    duals = dual_basis(cat, basis)
    gram = np.array([[pairing_states(b, d) for d in duals] for b in basis])
    assert np.max(np.abs(gram - np.eye(len(basis)))) < 1e-10


def test_pairing_symmetry(cat, rng):
    word = random_closed_word(cat, rng)
    f = random_state(cat, word, rng)
    g = random_state(cat, dual_word(word), rng)
    assert pairing_states(f, g) == pytest.approx(pairing_states(g, f))


def test_pairing_identity_of_simple_gives_dimension(cat):
    # curried identity of a simple strand pairs against itself to d_i
    for a in range(cat.rank):
        f = hom_basis(cat, ((a, 1), (a, -1)))[0]
        basis = [f]
        duals = dual_basis(cat, basis)
        val = pairing_states(f, duals[0].scale(complex(cat.qdim[a])))
        assert val == pytest.approx(complex(cat.qdim[a]))


def test_degenerate_pairing_raises(cat, rng):
    word = random_closed_word(cat, rng)
    basis = hom_basis(cat, word)
    broken = [basis[0]] * len(basis)
    if len(basis) > 1:
        with pytest.raises(ValueError):
            dual_basis(cat, broken)


def test_full_rotation_is_identity(cat, rng):
    """Sphericality: rotating a closed diagram all the way around fixes it."""
    word = random_closed_word(cat, rng)
    v = random_state(cat, word, rng)
    out = v
    for _ in range(len(word)):
        out = insert_vector_rotated(unit_state(cat), out, 0, 1)
    diff = out.add(v.scale(-1)).chop()
    residual = max((abs(x) for x in diff.table.values()), default=0.0)
    assert residual < 1e-8


def test_left_and_right_trace_closures_agree(cat, rng):
    """Sphericality of endomorphism coupons."""
    word = random_closed_word(cat, rng)
    full = word + dual_word(word)
    h = random_state(cat, full, rng)
    st = insert_vector(unit_state(cat), h, 0)
    for t in range(len(word)):
        st = cap(st, len(word) - 1 - t)
    tr_right = st.scalar()
    st2 = insert_vector_rotated(unit_state(cat), h, 0, len(word))
    for t in range(len(word)):
        st2 = cap(st2, len(word) - 1 - t)
    tr_left = st2.scalar()
    assert tr_left == pytest.approx(tr_right, abs=1e-8)


def test_trace_endo_matches_matrix_trace(cat, rng):
    word = random_closed_word(cat, rng)
    n = hom_dim(cat, word)
    fmat = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    assert trace_endo(cat, fmat, word) == pytest.approx(np.trace(fmat))


# -- the lemma suite -------------------------------------------------------------


def dissolve_edges_residual(cat, rng, host_prefix_len=2):
    """Sum_i d_i (dual coupon pair on a strand bundle) acts as the identity."""
    while True:
        u = random_closed_word(cat, rng, max_len=4)
        if len(u) >= 2:
            break
    split = int(rng.integers(1, len(u)))
    W = u[split:]
    w = len(W)
    psi = random_state(cat, u, rng)
    total = None
    for i in range(cat.rank):
        aw = dual_word(W) + ((i, 1),)
        ab = hom_basis(cat, aw)
        if not ab:
            continue
        ad = dual_basis(cat, ab)
        for alpha, astar in zip(ab, ad):
            st = insert_vector(psi, alpha, len(u))
            for t in range(w):
                st = cap(st, len(u) - 1 - t)
            st = insert_vector(st, astar, split + 1)
            st = cap(st, split)
            st = st.scale(complex(cat.qdim[i]))
            total = st if total is None else total.add(st)
    diff = total.add(psi.scale(-1)).chop()
    return max((abs(x) for x in diff.table.values()), default=0.0)


def test_dissolve_edges(cat, rng):
    for _ in range(5):
        assert dissolve_edges_residual(cat, rng) < 1e-8


def dissolve_vertices_residual(cat, rng):
    """Two closed diagrams glued along a summed dual pair."""
    w = random_closed_word(cat, rng)
    g = random_state(cat, dual_word(w), rng)
    h = random_state(cat, w, rng)
    basis = hom_basis(cat, w)
    duals = dual_basis(cat, basis)
    total = sum(pairing_states(alpha, g) * pairing_states(h, astar)
                for alpha, astar in zip(basis, duals))
    return abs(total - pairing_states(h, g))


def test_dissolve_vertices(cat, rng):
    for _ in range(5):
        assert dissolve_vertices_residual(cat, rng) < 1e-8


def merge_bases_residual(cat, rng):
    """Composites through a simple strand and their claimed duals pair to one."""
    Xw = random_closed_word(cat, rng, max_len=3)
    Yw = random_closed_word(cat, rng, max_len=3)
    chis = []
    chistars = []
    for i in range(cat.rank):
        phis = hom_basis(cat, Xw + ((i, -1),))
        psis = hom_basis(cat, Yw + ((i, -1),))
        if not phis or not psis:
            continue
        phid = dual_basis(cat, phis)   # words (i,+) + dual(Xw)
        psid = dual_basis(cat, psis)
        for a, psi_a in enumerate(psis):
            for b, phi_b in enumerate(phid):
                st = insert_vector(psi_a, phi_b, len(Yw) + 1)
                st = cap(st, len(Yw))
                chis.append(st)  # curried Hom(Xw, Yw)
        for b, phi_b in enumerate(phis):
            for a, psi_a in enumerate(psid):
                st = insert_vector(phi_b, psi_a, len(Xw) + 1)
                st = cap(st, len(Xw))
                chistars.append(st.scale(complex(cat.qdim[i])))
    if not chis:
        return 0.0
    if len(chis) != hom_dim(cat, Yw + dual_word(Xw)):
        return float("inf")
    gram = np.zeros((len(chis), len(chis)), dtype=np.complex128)
    for a, chi in enumerate(chis):
        for b, chistar in enumerate(chistars):
            # the dual list is indexed by (i, beta, alpha); transpose the
            # within-block (alpha, beta) ordering when comparing
            gram[a, b] = pairing_states(chi, chistar)
    # expect a permutation-like identity: each chi pairs to 1 with exactly
    # its partner and 0 elsewhere
    err = 0.0
    col_used = set()
    for a in range(len(chis)):
        row = gram[a]
        j = int(np.argmax(np.abs(row)))
        err = max(err, abs(row[j] - 1.0))
        col_used.add(j)
        rest = np.delete(row, j)
        if rest.size:
            err = max(err, float(np.max(np.abs(rest))))
    if len(col_used) != len(chis):
        return float("inf")
    return err


def test_merge_bases(cat, rng):
    for _ in range(3):
        assert merge_bases_residual(cat, rng) < 1e-8


def traced_bases_residual(cat, rng):
    """Tracing an endomorphism through a summed simple edge."""
    W = random_closed_word(cat, rng, max_len=3)
    w = len(W)
    gamma = random_state(cat, W + dual_word(W), rng)
    st = insert_vector(unit_state(cat), gamma, 0)
    for t in range(w):
        st = cap(st, w - 1 - t)
    tr = st.scalar()
    total = 0.0 + 0.0j
    for i in range(cat.rank):
        ab = hom_basis(cat, dual_word(W) + ((i, 1),))
        if not ab:
            continue
        ad = dual_basis(cat, ab)
        for alpha, astar in zip(ab, ad):
            st = insert_vector(unit_state(cat), gamma, 0)
            st = insert_vector(st, alpha, w)
            for t in range(w):
                st = cap(st, w - 1 - t)
            st = insert_vector(st, astar, 1)
            st = cap(st, 0)
            for t in range(w):
                st = cap(st, w - 1 - t)
            total += complex(cat.qdim[i]) * st.scalar()
    return abs(total - tr)


def test_traced_bases(cat, rng):
    for _ in range(5):
        assert traced_bases_residual(cat, rng) < 1e-8


def test_traced_bases_global_dimension(cat):
    """The split form that contributes the global-dimension factor."""
    total = sum(complex(cat.qdim[i]) * closed_loop(cat, (i, 1))
                for i in range(cat.rank))
    assert total == pytest.approx(complex(cat.global_dim()))
