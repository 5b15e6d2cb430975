"""Generalized Frobenius-Schur indicators from the rotation operator.

The indicator of V at (n, r) with center object X is the trace of the
rotation endomorphism of Hom(X, V^{(x)n}): the first r output strands are
bent around the input, crossing it with the half-braiding, and reattached
on the other side.  Morphisms f: X -> W are represented in the curried form
(id_{X*} (x) f) o coev_X, i.e. as states over the word (X*, W), which keeps
all intermediate steps inside Hom(1, -) path spaces.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .category import FusionData, ObjectWord
from .center import CenterData, CenterObject, GrothendieckVector
from . import diagrams as dg
from .diagrams import DiagState, cap, cross, cup_word, dual_basis, hom_basis, \
    insert_vector, pairing_states


@dataclass
class IndicatorQuery:
    n: int
    r: int
    X: object  # CenterObject or GrothendieckVector
    V: object  # label index or ObjectWord


def v_word(cat: FusionData, V, n: int) -> ObjectWord:
    """The word of V^{(x)n}; negative powers use the dual-strand convention."""
    if isinstance(V, (int, np.integer)):
        base = ((int(V), +1),)
    else:
        base = tuple(V)
    if n >= 0:
        return base * n
    from .category import dual_word
    return dual_word(base) * (-n)


def _hom_word(cat: FusionData, X: CenterObject, V, n: int):
    return ((X, -1),) + v_word(cat, V, n)


def hom_space_dim(cat: FusionData, X: CenterObject, V, n: int) -> int:
    return dg.hom_dim(cat, _hom_word(cat, X, V, n))


def _rotation_apply(cat: FusionData, X: CenterObject, V, n: int, r: int,
                    fvec: DiagState) -> DiagState:
    """E_{n,r} applied to a curried morphism state over (X*, V^{(x)n})."""
    target = fvec.word
    if r == 0:
        return fvec
    a_word = v_word(cat, V, -r)          # the object (V*)^{(x)r}
    la = len(a_word)
    st = DiagState(cat, (), 0, {((), (0,)): 1.0 + 0.0j})
    st = dg.cup(st, (X, -1), 0)          # word: X*, X
    st = cup_word(st, a_word, 2)         # word: X*, X, A, Abar
    for t in range(la):
        st = cross(st, 1 + t, True, "L")  # X passes A with its half-braiding
    xpos = 1 + la
    st = insert_vector(st, fvec, xpos + 1)
    st = cap(st, xpos)                   # plug f into the X strand
    # word now: X*, A, W, Abar; contract the bent strands at the seams
    for _ in range(la):
        seam = None
        for p in range(1, len(st.word) - 1):
            l1, l2 = st.word[p], st.word[p + 1]
            if dg.is_simple_letter(l1) and dg.is_simple_letter(l2) \
                    and l1[0] == l2[0] and l1[1] == -l2[1]:
                seam = p
                break
        if seam is None:
            raise AssertionError("rotation seams failed to cancel")
        st = cap(st, seam)
    if st.word != target:
        raise AssertionError("rotation produced an unexpected word")
    return st


def e_matrix(cat: FusionData, center: CenterData, query: IndicatorQuery
             ) -> np.ndarray:
    """Matrix of the rotation operator on Hom(X, V^{(x)n})."""
    X = query.X
    if not isinstance(X, CenterObject):
        raise TypeError("e_matrix needs a simple center object; use nu for vectors")
    word = _hom_word(cat, X, query.V, query.n)
    basis = hom_basis(cat, word)
    if not basis:
        return np.zeros((0, 0), dtype=np.complex128)
    duals = dual_basis(cat, basis)
    mat = np.zeros((len(basis), len(basis)), dtype=np.complex128)
    for col, b in enumerate(basis):
        image = _rotation_apply(cat, X, query.V, query.n, query.r, b)
        for row, d in enumerate(duals):
            mat[row, col] = pairing_states(image, d)
    return mat


def nu(cat: FusionData, center: CenterData, query: IndicatorQuery) -> complex:
    """The indicator: trace of the rotation operator, linear in X."""
    X = query.X
    if isinstance(X, GrothendieckVector):
        total = 0.0 + 0.0j
        for i, coeff in enumerate(X.coeffs):
            if abs(coeff) <= 1e-15:
                continue
            sub = IndicatorQuery(query.n, query.r, center.simples[i], query.V)
            total += coeff * nu(cat, center, sub)
        return complex(total)
    word = _hom_word(cat, X, query.V, query.n)
    basis = hom_basis(cat, word)
    if not basis:
        return 0.0 + 0.0j
    duals = dual_basis(cat, basis)
    total = 0.0 + 0.0j
    for b, d in zip(basis, duals):
        image = _rotation_apply(cat, X, query.V, query.n, query.r, b)
        total += pairing_states(image, d)
    return complex(total)


def nu_via_diagram(cat: FusionData, center: CenterData,
                   query: IndicatorQuery) -> complex:
    """The indicator as one closed diagram with a summed dual-coupon pair."""
    X = query.X
    word = _hom_word(cat, X, query.V, query.n)
    basis = hom_basis(cat, word)
    if not basis:
        return 0.0 + 0.0j
    duals = dual_basis(cat, basis)
    total = 0.0 + 0.0j
    for b, d in zip(basis, duals):
        image = _rotation_apply(cat, X, query.V, query.n, query.r, b)
        st = DiagState(cat, (), 0, {((), (0,)): 1.0 + 0.0j})
        st = insert_vector(st, d, 0)
        st = insert_vector(st, image, len(d.word))
        for t in range(len(d.word)):
            st = cap(st, len(d.word) - 1 - t)
        total += st.scalar()
    return complex(total)


def nu_table(cat: FusionData, center: CenterData, n_max: int, r_range
             ) -> dict:
    """Complete indicator tables keyed by (n, r); rows X, columns V."""
    out = {}
    for n in range(1, n_max + 1):
        for r in r_range:
            tab = np.zeros((len(center.simples), cat.rank), dtype=np.complex128)
            for xi, X in enumerate(center.simples):
                for v in range(cat.rank):
                    tab[xi, v] = nu(cat, center, IndicatorQuery(n, r, X, v))
            out[(n, int(r))] = tab
    return out
