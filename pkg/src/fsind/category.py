"""Skeletal spherical fusion categories: fusion rules, F-symbols, dimensions.

A category is stored strictified: objects are words in the simple labels,
bracketing is normalized left-to-right, and the F-symbols mediate the basis
changes between fusion trees.  Scalars are complex floats; every approximate
comparison goes through the per-category ``tolerance``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

_UID = itertools.count(1)

# A letter is (label, sign); sign -1 denotes the dual strand orientation.
Letter = tuple[int, int]
ObjectWord = tuple[Letter, ...]


def word(*letters: tuple) -> ObjectWord:
    """Normalize a sequence of (label, sign) pairs into an ObjectWord."""
    out = []
    for lab, sign in letters:
        if sign not in (+1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign!r}")
        out.append((int(lab), int(sign)))
    return tuple(out)


def dual_word(w: ObjectWord) -> ObjectWord:
    """Reversed word with all signs flipped; the two-sided dual object."""
    return tuple((lab, -sign) for lab, sign in reversed(w))


@dataclass
class ObjectSum:
    """Formal direct sum of object words with multiplicities."""

    terms: dict = field(default_factory=dict)  # ObjectWord -> positive int

    def add(self, w: ObjectWord, mult: int = 1) -> None:
        if mult < 0:
            raise ValueError("multiplicities must be nonnegative")
        if mult:
            self.terms[tuple(w)] = self.terms.get(tuple(w), 0) + mult

    def words(self) -> list[ObjectWord]:
        out = []
        for w, m in sorted(self.terms.items()):
            out.extend([w] * m)
        return out


@dataclass
class Violation:
    check: str
    where: str
    residual: float


@dataclass
class CategoryReport:
    max_pentagon_residual: float
    max_unit_residual: float
    max_duality_residual: float
    max_dimension_residual: float
    max_pivotal_residual: float
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations


class FusionData:
    """A skeletal spherical fusion category.

    Parameters
    ----------
    names:
        Display names of the simple labels; index 0 is the tensor unit.
    dual:
        Involution ``i -> i*`` as a list of label indices.
    fusion:
        Integer array ``N[i, j, k] = dim Hom(i (x) j, k)``.
    f_symbols:
        Sparse map ``(a, b, c, d, e, f) -> complex`` over admissible tuples.
        Entries where any of a, b, c is the unit may be omitted (they are 1).
    qdim:
        Quantum dimensions of the simples.
    """

    def __init__(self, names: Sequence[str], dual: Sequence[int],
                 fusion: np.ndarray, f_symbols: dict, qdim: Sequence[complex],
                 tolerance: float = 1e-9, name: str = ""):
        self.names = tuple(str(s) for s in names)
        self.dual = tuple(int(d) for d in dual)
        self.fusion = np.asarray(fusion, dtype=np.int64)
        self.f_symbols = {tuple(int(x) for x in k): complex(v)
                          for k, v in f_symbols.items()}
        self.qdim = np.asarray(qdim, dtype=np.complex128)
        self.tolerance = float(tolerance)
        self.name = name or "category"
        self.rank = len(self.names)
        if self.fusion.shape != (self.rank,) * 3:
            raise ValueError("fusion tensor has wrong shape")
        self.uid = next(_UID)
        self._fmat_cache: dict = {}
        self._finv_cache: dict = {}

    # -- basic structure ---------------------------------------------------

    def label(self, name: str) -> int:
        try:
            return self.names.index(str(name))
        except ValueError:
            raise KeyError(f"unknown label {name!r} in {self.name}") from None

    def n(self, a: int, b: int, c: int) -> int:
        return int(self.fusion[a, b, c])

    def channels(self, a: int, b: int) -> list[int]:
        return [c for c in range(self.rank) if self.fusion[a, b, c]]

    def obj(self, letter: Letter) -> int:
        """Underlying simple label of a signed letter."""
        lab, sign = letter
        if not (0 <= lab < self.rank):
            raise KeyError(f"unknown label index {lab} in {self.name}")
        return lab if sign > 0 else self.dual[lab]

    def f_entry(self, a: int, b: int, c: int, d: int, e: int, f: int) -> complex:
        if min(self.n(a, b, e), self.n(e, c, d), self.n(b, c, f), self.n(a, f, d)) == 0:
            return 0.0
        if a == 0 or b == 0 or c == 0:
            return 1.0
        try:
            return self.f_symbols[(a, b, c, d, e, f)]
        except KeyError:
            raise KeyError(
                f"missing F-symbol ({a},{b},{c},{d},{e},{f}) in {self.name}") from None

    def f_matrix(self, a: int, b: int, c: int, d: int):
        """Rows: channels e of a(x)b; cols: channels f of b(x)c; admissible for d."""
        key = (a, b, c, d)
        hit = self._fmat_cache.get(key)
        if hit is not None:
            return hit
        es = [e for e in self.channels(a, b) if self.n(e, c, d)]
        fs = [f for f in self.channels(b, c) if self.n(a, f, d)]
        mat = np.array([[self.f_entry(a, b, c, d, e, f) for f in fs] for e in es],
                       dtype=np.complex128).reshape(len(es), len(fs))
        out = (es, fs, mat)
        self._fmat_cache[key] = out
        return out

    def f_inverse(self, a: int, b: int, c: int, d: int):
        """Rows: channels f (right trees); cols: channels e (left trees)."""
        key = (a, b, c, d)
        hit = self._finv_cache.get(key)
        if hit is not None:
            return hit
        es, fs, mat = self.f_matrix(a, b, c, d)
        if len(es) != len(fs):
            raise ValueError(f"non-square F-block {key} in {self.name}")
        inv = np.linalg.inv(mat) if len(es) else mat.reshape(0, 0)
        out = (fs, es, inv)
        self._finv_cache[key] = out
        return out

    # -- pivotal coefficients used by the diagram engine --------------------

    def kappa(self, a: int) -> complex:
        """[F^{a a* a}_a] at unit internal channels; fixes the zig-zag gauge."""
        return self.f_entry(a, self.dual[a], a, a, 0, 0)

    def coev_coeff(self, a: int) -> complex:
        return 1.0

    def ev_coeff(self, a: int) -> complex:
        return 1.0 / self.kappa(a)

    def coev_tilde_coeff(self, a: int) -> complex:
        return complex(self.qdim[a]) * self.kappa(a)

    def ev_tilde_coeff(self, a: int) -> complex:
        return complex(self.qdim[a])

    # -- dimensions ----------------------------------------------------------

    def global_dim(self) -> complex:
        return complex(np.sum(self.qdim ** 2))

    def hom_dim(self, w: ObjectWord, source: int = 0) -> int:
        """dim Hom(source, w) by iterated fusion."""
        vec = np.zeros(self.rank, dtype=np.int64)
        vec[0] = 1
        for letter in w:
            o = self.obj(letter)
            vec = vec @ self.fusion[:, o, :]
        return int(vec[source])

    def assert_multiplicity_free(self) -> None:
        if self.fusion.max(initial=0) > 1:
            raise NotImplementedError(
                "fusion multiplicities > 1 are not supported by the tree engine")

    # -- validation ----------------------------------------------------------

    def pentagon_residual(self) -> float:
        """Worst deviation of the two reductions ((ab)c)d -> a(b(cd))."""
        worst = 0.0
        rng = range(self.rank)
        for a in rng:
            for b in rng:
                for c in rng:
                    for d in rng:
                        for p in self.channels(a, b):
                            for q in self.channels(p, c):
                                for e in self.channels(q, d):
                                    worst = max(worst, self._pentagon_at(
                                        a, b, c, d, p, q, e))
        return worst

    def _pentagon_at(self, a, b, c, d, p, q, e) -> float:
        worst = 0.0
        for r in self.channels(c, d):
            for s in self.channels(b, r):
                if not self.n(a, s, e):
                    continue
                lhs = (self.f_entry(p, c, d, e, q, r)
                       * self.f_entry(a, b, r, e, p, s))
                rhs = 0.0 + 0.0j
                for x in self.channels(b, c):
                    rhs += (self.f_entry(a, b, c, q, p, x)
                            * self.f_entry(a, x, d, e, q, s)
                            * self.f_entry(b, c, d, s, x, r))
                worst = max(worst, abs(lhs - rhs))
        return worst

    def verify(self) -> CategoryReport:
        """Check the defining axioms; returns residuals, not exceptions."""
        tol = self.tolerance
        violations: list[Violation] = []

        unit_res = 0.0
        dual_res = 0.0
        for j in range(self.rank):
            for k in range(self.rank):
                unit_res = max(unit_res,
                               abs(self.n(0, j, k) - (1 if j == k else 0)),
                               abs(self.n(j, 0, k) - (1 if j == k else 0)))
                dual_res = max(dual_res,
                               abs(self.n(j, k, 0) - (1 if k == self.dual[j] else 0)))
        if unit_res > tol:
            violations.append(Violation("unit", "fusion", unit_res))
        if dual_res > tol:
            violations.append(Violation("duality", "fusion", dual_res))

        if unit_res > tol or dual_res > tol:
            # fusion axioms broken; the tree calculus is not even well-formed
            pent = float("inf")
            violations.append(Violation("pentagon", "f_symbols", pent))
        else:
            try:
                pent = self.pentagon_residual()
            except (KeyError, ValueError) as exc:
                pent = float("inf")
                violations.append(Violation("pentagon", str(exc), pent))
            else:
                if pent > tol:
                    violations.append(Violation("pentagon", "f_symbols", pent))

        dim_res = 0.0
        for i in range(self.rank):
            if abs(self.qdim[i]) <= tol:
                violations.append(Violation("dimension", self.names[i],
                                            float(abs(self.qdim[i]))))
            dim_res = max(dim_res, float(abs(self.qdim[self.dual[i]] - self.qdim[i])))
        if dim_res > tol:
            violations.append(Violation("dimension", "qdim", dim_res))

        # Solvability of the zig-zag equations for the chosen ev/coev scalars.
        piv_res = 0.0
        try:
            for a in range(self.rank):
                ab = self.dual[a]
                piv_res = max(piv_res, float(abs(
                    self.qdim[a] ** 2 * self.kappa(a) * self.kappa(ab) - 1.0)))
                fs, es, inv = self.f_inverse(ab, a, ab, ab)
                if 0 in fs and 0 in es:
                    val = inv[fs.index(0), es.index(0)]
                    piv_res = max(piv_res, float(abs(val - self.kappa(a))))
        except (KeyError, ValueError) as exc:
            piv_res = float("inf")
            violations.append(Violation("pivotal", str(exc), piv_res))
        else:
            if piv_res > tol:
                violations.append(Violation("pivotal", "f_symbols", piv_res))

        return CategoryReport(float(pent), float(unit_res), float(dual_res),
                              float(dim_res), float(piv_res), violations)


# -- built-in categories -----------------------------------------------------


def pointed_category(n: int, cocycle_exponent: int = 0,
                     tolerance: float = 1e-9) -> FusionData:
    """Z/n graded lines with the standard 3-cocycle of class ``cocycle_exponent``."""
    if n < 1:
        raise ValueError("pointed category needs n >= 1")
    m = cocycle_exponent % n
    names = [str(k) for k in range(n)]
    dual = [(-k) % n for k in range(n)]
    fusion = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            fusion[a, b, (a + b) % n] = 1
    zeta = np.exp(2j * np.pi * m / n)

    def omega(a: int, b: int, c: int) -> complex:
        return zeta ** (a * ((b + c) // n))

    f_symbols = {}
    for a in range(1, n):
        for b in range(1, n):
            for c in range(1, n):
                d = (a + b + c) % n
                f_symbols[(a, b, c, d, (a + b) % n, (b + c) % n)] = omega(a, b, c)
    qdim = np.ones(n, dtype=np.complex128)
    return FusionData(names, dual, fusion, f_symbols, qdim, tolerance,
                      name=f"pointed({n},{m})")


def fibonacci_category(tolerance: float = 1e-9) -> FusionData:
    """Simples {1, tau} with tau (x) tau = 1 + tau, d_tau the golden ratio."""
    phi = (1 + np.sqrt(5)) / 2
    names = ["1", "tau"]
    dual = [0, 1]
    fusion = np.zeros((2, 2, 2), dtype=np.int64)
    fusion[0, 0, 0] = fusion[0, 1, 1] = fusion[1, 0, 1] = 1
    fusion[1, 1, 0] = fusion[1, 1, 1] = 1
    f = {
        (1, 1, 1, 0, 1, 1): 1.0,
        (1, 1, 1, 1, 0, 0): 1 / phi,
        (1, 1, 1, 1, 0, 1): 1 / np.sqrt(phi),
        (1, 1, 1, 1, 1, 0): 1 / np.sqrt(phi),
        (1, 1, 1, 1, 1, 1): -1 / phi,
    }
    qdim = np.array([1.0, phi], dtype=np.complex128)
    return FusionData(names, dual, fusion, f, qdim, tolerance, name="fibonacci")


def ising_category(tolerance: float = 1e-9) -> FusionData:
    """Tambara-Yamagami category for Z/2; the variant whose sigma has indicator +1."""
    names = ["1", "sigma", "psi"]
    dual = [0, 1, 2]
    UNIT, SIG, PSI = 0, 1, 2
    fusion = np.zeros((3, 3, 3), dtype=np.int64)
    for a in (UNIT, SIG, PSI):
        fusion[UNIT, a, a] = fusion[a, UNIT, a] = 1
    fusion[SIG, SIG, UNIT] = fusion[SIG, SIG, PSI] = 1
    fusion[SIG, PSI, SIG] = fusion[PSI, SIG, SIG] = 1
    fusion[PSI, PSI, UNIT] = 1

    def chi(a: int, b: int) -> float:
        # symmetric nondegenerate bicharacter on Z/2 = {0: unit, 1: psi}
        return -1.0 if (a == PSI and b == PSI) else 1.0

    tau = 1 / np.sqrt(2)
    f = {
        # F^{s s s}_s = tau * chi(e, f)
        (SIG, SIG, SIG, SIG, UNIT, UNIT): tau,
        (SIG, SIG, SIG, SIG, UNIT, PSI): tau,
        (SIG, SIG, SIG, SIG, PSI, UNIT): tau,
        (SIG, SIG, SIG, SIG, PSI, PSI): -tau,
        # F^{a s b}_s = chi(a, b)
        (PSI, SIG, PSI, SIG, SIG, SIG): chi(PSI, PSI),
        # F^{s a s}_b = chi(a, b)
        (SIG, PSI, SIG, UNIT, SIG, SIG): chi(PSI, UNIT),
        (SIG, PSI, SIG, PSI, SIG, SIG): chi(PSI, PSI),
        # the remaining admissible non-unit entries are trivial
        (SIG, SIG, PSI, PSI, UNIT, SIG): 1.0,
        (SIG, SIG, PSI, UNIT, PSI, SIG): 1.0,
        (PSI, SIG, SIG, PSI, SIG, UNIT): 1.0,
        (PSI, SIG, SIG, UNIT, SIG, PSI): 1.0,
        (SIG, PSI, PSI, SIG, SIG, UNIT): 1.0,
        (PSI, PSI, SIG, SIG, UNIT, SIG): 1.0,
        (PSI, PSI, PSI, PSI, UNIT, UNIT): 1.0,
    }
    qdim = np.array([1.0, np.sqrt(2), 1.0], dtype=np.complex128)
    return FusionData(names, dual, fusion, f, qdim, tolerance, name="ising")


def builtin_category(name: str, tolerance: float = 1e-9) -> FusionData:
    """Resolve 'pointed:N[:m]' | 'fibonacci' | 'ising' to validated data."""
    key = name.strip().lower()
    if key.startswith("pointed"):
        parts = key.split(":")
        if len(parts) < 2:
            raise ValueError("pointed category needs 'pointed:N[:m]'")
        n = int(parts[1])
        m = int(parts[2]) if len(parts) > 2 else 0
        cat = pointed_category(n, m, tolerance)
    elif key == "fibonacci":
        cat = fibonacci_category(tolerance)
    elif key == "ising":
        cat = ising_category(tolerance)
    else:
        raise ValueError(f"unknown built-in category {name!r}")
    report = cat.verify()
    if not report.ok:
        raise AssertionError(f"built-in {name} failed validation: {report.violations}")
    return cat
