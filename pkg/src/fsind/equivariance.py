"""The two SL(2,Z) actions on indicator data and their compatibility.

The group acts on Grothendieck vectors of the center through the canonical
modular representation (s and t matrices), and on index pairs (n, r) by
right multiplication with the twisted matrix g~ = diag(1,-1) g diag(1,-1).
The generator conventions are fixed by the index action: (n,r) s~ = (r,-n)
and (n,r) t~ = (n, r-n).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .category import FusionData
from .center import CenterData, GrothendieckVector
from .indicators import IndicatorQuery, nu

S_MAT = np.array([[0, 1], [-1, 0]], dtype=np.int64)
T_MAT = np.array([[1, 1], [0, 1]], dtype=np.int64)

_GEN = {"s": S_MAT, "t": T_MAT,
        "S": np.array([[0, -1], [1, 0]], dtype=np.int64),
        "T": np.array([[1, -1], [0, 1]], dtype=np.int64)}


@dataclass
class SL2ZElement:
    matrix: np.ndarray
    word: str | None = None

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.int64)
        if self.matrix.shape != (2, 2) or round(np.linalg.det(self.matrix)) != 1:
            raise ValueError("SL(2,Z) element needs an integer matrix of det 1")
        if self.word is not None:
            if not np.array_equal(word_to_matrix(self.word), self.matrix):
                raise ValueError("generator word does not multiply to the matrix")

    @classmethod
    def from_word(cls, word: str) -> "SL2ZElement":
        return cls(word_to_matrix(word), word)

    @classmethod
    def from_matrix(cls, matrix) -> "SL2ZElement":
        word = matrix_to_word(np.asarray(matrix, dtype=np.int64))
        return cls(np.asarray(matrix, dtype=np.int64), word)

    def __mul__(self, other: "SL2ZElement") -> "SL2ZElement":
        word = None
        if self.word is not None and other.word is not None:
            word = self.word + other.word
        return SL2ZElement(self.matrix @ other.matrix, word)


def word_to_matrix(word: str) -> np.ndarray:
    m = np.eye(2, dtype=np.int64)
    for ch in word:
        if ch in " ":
            continue
        if ch not in _GEN:
            raise ValueError(f"invalid generator letter {ch!r}; use s, t, S, T")
        m = m @ _GEN[ch]
    return m


def matrix_to_word(matrix) -> str:
    """A word in s, t (and inverses S, T) multiplying to the matrix.

    Euclidean reduction on the first column by left multiplications; the word
    collects the inverses of the applied moves and is validated by
    multiplying it back out.
    """
    m = np.array(matrix, dtype=np.int64)
    if m.shape != (2, 2) or round(np.linalg.det(m)) != 1:
        raise ValueError("need an integer matrix of determinant 1")
    work = m.copy()
    letters = []  # inverses of the applied left-multiplications, in order

    def shear(q):  # left-multiply by t^{-q}; inverse contributes t^{q}
        nonlocal work
        work = np.array([[1, -q], [0, 1]], dtype=np.int64) @ work
        letters.extend(["t" if q > 0 else "T"] * abs(q))

    while work[1, 0] != 0:
        a, c = int(work[0, 0]), int(work[1, 0])
        shear(int(round(a / c)))
        work = _GEN["S"] @ work  # left-multiply by s^{-1}; inverse is s
        letters.append("s")
    if work[0, 0] == -1:
        work = -work  # left-multiply by s^2 = -1; inverse is s^2
        letters.extend(["s", "s"])
    shear(int(work[0, 1]))
    result = "".join(letters)
    if not np.array_equal(word_to_matrix(result), m):
        raise AssertionError("word reconstruction failed")
    return result


def tilde(g: SL2ZElement) -> SL2ZElement:
    d = np.diag([1, -1]).astype(np.int64)
    word = None
    return SL2ZElement(d @ g.matrix @ d, word)


def act_indices(pair: tuple, g: SL2ZElement) -> tuple:
    n, r = pair
    vec = np.array([n, r], dtype=np.int64) @ tilde(g).matrix
    return (int(vec[0]), int(vec[1]))


def act_center(center: CenterData, g: SL2ZElement,
               xi: GrothendieckVector) -> GrothendieckVector:
    """Left action through the canonical modular representation.

    The letter s denotes the generator with index action (n,r) -> (r,-n),
    which the representation sends to the inverse of the standard-presentation
    s-matrix.
    """
    if g.word is None:
        raise ValueError("the modular representation acts through generator words")
    mats = {"s": center.rho_s(), "t": center.t_matrix()}
    mats["S"] = center.s_matrix()
    mats["T"] = np.linalg.inv(mats["t"])
    coeffs = xi.coeffs.copy()
    for ch in reversed(g.word):
        if ch in " ":
            continue
        coeffs = mats[ch] @ coeffs
    return GrothendieckVector(center, coeffs)


def verify_equivariance(cat: FusionData, center: CenterData, V, pair: tuple,
                        g: SL2ZElement, xi: GrothendieckVector) -> float:
    """Residual of the indicator equivariance for one parameter cell."""
    lhs = nu(cat, center, IndicatorQuery(pair[0], pair[1],
                                         act_center(center, g, xi), V))
    np_pair = act_indices(pair, g)
    rhs = nu(cat, center, IndicatorQuery(np_pair[0], np_pair[1], xi, V))
    return float(abs(lhs - rhs))


def equivariance_grid(cat: FusionData, center: CenterData, words,
                      n_max: int = 3) -> float:
    """Max residual over center simples, simples V, index grid, and words."""
    worst = 0.0
    for word in words:
        g = SL2ZElement.from_word(word)
        for n in range(1, n_max + 1):
            for r in range(0, n + 1):
                for i in range(len(center.simples)):
                    xi = GrothendieckVector.basis_vector(center, i)
                    for v in range(cat.rank):
                        worst = max(worst, verify_equivariance(
                            cat, center, v, (n, r), g, xi))
    return worst
