"""Cobrackets, r-matrices and the dual Lie algebra of a Poisson-Lie structure.

A cobracket stores, per basis vector e_a, the antisymmetric matrix of
delta(e_a) in the second exterior power.  The dual bracket is the
transpose-read of those components: ([e^a, e^b])_g = delta(e_g)[a, b].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import liealg
from .errors import InvalidStructure
from .liealg import LieAlgebra, Multivector


@dataclass(frozen=True)
class Cobracket:
    base: LieAlgebra
    delta: np.ndarray = field(repr=False)  # shape (dim, dim, dim), delta[a] antisymmetric

    def __post_init__(self):
        d = np.asarray(self.delta, dtype=float)
        n = self.base.dim
        if d.shape != (n, n, n):
            raise InvalidStructure(f"cobracket components must have shape {(n, n, n)}")
        anti = float(np.max(np.abs(d + np.swapaxes(d, 1, 2))))
        if anti > 1e-12:
            raise InvalidStructure(f"cobracket images not antisymmetric: residual {anti:.3e}")
        object.__setattr__(self, "delta", d)
        self.delta.setflags(write=False)

    def image(self, a: int) -> Multivector:
        return Multivector(dim=self.base.dim, degree=2, components=self.delta[a])


@dataclass(frozen=True)
class LieBialgebra:
    primal: LieAlgebra
    dual: LieAlgebra
    cobracket: Cobracket
    r: Multivector | None = None


def cobracket_from_r(algebra: LieAlgebra, r: Multivector) -> Cobracket:
    """Coboundary cobracket delta(xi) = ad_xi r."""
    if r.degree != 2:
        raise InvalidStructure(f"r-matrix must have degree 2, got {r.degree}")
    n = algebra.dim
    delta = np.zeros((n, n, n))
    for a in range(n):
        e_a = liealg.basis_multivector(n, (a,))
        delta[a] = liealg.schouten(algebra, e_a, r).components
    return Cobracket(base=algebra, delta=delta)


def cobracket_from_terms(algebra: LieAlgebra, per_generator_terms) -> Cobracket:
    """Cobracket from explicit wedge terms, one [(i, j, coeff), ...] list per generator."""
    n = algebra.dim
    if len(per_generator_terms) != n:
        raise InvalidStructure(f"expected {n} generator images, got {len(per_generator_terms)}")
    delta = np.zeros((n, n, n))
    for a, terms in enumerate(per_generator_terms):
        delta[a] = liealg.multivector_from_terms(n, 2, terms).components
    return Cobracket(base=algebra, delta=delta)


def yang_baxter_residual(algebra: LieAlgebra, r: Multivector) -> float:
    """Generalized Yang-Baxter check: max norm of ad_{e_a}[r, r] over the basis."""
    if r.degree != 2:
        raise InvalidStructure(f"r-matrix must have degree 2, got {r.degree}")
    rr = liealg.schouten(algebra, r, r)
    worst = 0.0
    for a in range(algebra.dim):
        e_a = liealg.basis_multivector(algebra.dim, (a,))
        worst = max(worst, liealg.schouten(algebra, e_a, rr).norm())
    return worst


def cocycle_residual(algebra: LieAlgebra, cob: Cobracket) -> float:
    """Adjoint 1-cocycle defect: delta[e_a, e_b] - ad_{e_a} delta(e_b) + ad_{e_b} delta(e_a)."""
    n = algebra.dim
    c = algebra.constants
    worst = 0.0
    for a in range(n):
        e_a = liealg.basis_multivector(n, (a,))
        for b in range(a + 1, n):
            e_b = liealg.basis_multivector(n, (b,))
            lhs = np.einsum("g,gij->ij", c[:, a, b], cob.delta)
            ad_a = liealg.schouten(algebra, e_a, cob.image(b)).components
            ad_b = liealg.schouten(algebra, e_b, cob.image(a)).components
            worst = max(worst, float(np.max(np.abs(lhs - ad_a + ad_b))))
    return worst


def dual_algebra(cob: Cobracket, tol: float = 1e-10) -> LieAlgebra:
    """Dual Lie algebra read off the cobracket components.

    Fails when the transpose-read constants violate Jacobi, which signals
    that the supplied components are not a valid cobracket.
    """
    dual_constants = np.array(cob.delta)  # dc[g, a, b] = delta[g][a, b]
    try:
        return liealg.make_algebra(cob.base.dim, dual_constants, _dual_labels(cob.base), tol=tol)
    except InvalidStructure as exc:
        raise InvalidStructure(f"cobracket does not define a Lie bracket on the dual: {exc}") from exc


def _dual_labels(algebra: LieAlgebra) -> tuple[str, ...]:
    return tuple(f"{lab}*" for lab in algebra.labels)


def make_bialgebra(
    algebra: LieAlgebra,
    cob: Cobracket,
    r: Multivector | None = None,
    check_tol: float = 1e-10,
) -> LieBialgebra:
    """Assemble and validate a bialgebra: cocycle condition plus dual Jacobi."""
    res = cocycle_residual(algebra, cob)
    if res > check_tol:
        raise InvalidStructure(f"cocycle residual {res:.3e} exceeds {check_tol:.1e}")
    dual = dual_algebra(cob, tol=check_tol)
    return LieBialgebra(primal=algebra, dual=dual, cobracket=cob, r=r)


def bialgebra_from_r(algebra: LieAlgebra, r: Multivector, check_tol: float = 1e-10) -> LieBialgebra:
    res = yang_baxter_residual(algebra, r)
    if res > check_tol:
        raise InvalidStructure(f"Yang-Baxter residual {res:.3e} exceeds {check_tol:.1e}")
    return make_bialgebra(algebra, cobracket_from_r(algebra, r), r=r, check_tol=check_tol)


def unimodularity_verdict(bialg: LieBialgebra, tol: float = 1e-10) -> dict:
    """Modular character of the dual algebra and the resulting verdict.

    The character lives in the primal algebra (components on its basis); the
    Poisson-Lie structure is unimodular exactly when it vanishes.
    """
    char, is_uni = liealg.modular_character(bialg.dual, tol=tol)
    return {"dual_modular_character": char, "is_unimodular": is_uni}
