"""Finite-dimensional Lie algebras given by structure constants.

Conventions: constants c[g, a, b] encode [e_a, e_b] = c[g, a, b] e_g, the
modular character is m_a = trace(ad_{e_a}) = c[b, a, b], and multivectors of
degree k are stored as fully antisymmetric k-index arrays whose increasing
tuples carry the wedge coefficients (P = sum_{i1<...<ik} P[i1..ik] e_i1 ^ ... ^ e_ik).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidStructure

EXACT_TOL = 1e-12


@dataclass(frozen=True)
class LieAlgebra:
    """Lie algebra data: dimension, structure constants, basis labels."""

    dim: int
    constants: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "constants", np.asarray(self.constants, dtype=float))
        self.constants.setflags(write=False)


@dataclass(frozen=True)
class Multivector:
    """Antisymmetric k-index coefficient array over a fixed basis."""

    dim: int
    degree: int
    components: np.ndarray = field(repr=False)

    def __post_init__(self):
        comps = np.asarray(self.components, dtype=float)
        if comps.shape != (self.dim,) * self.degree:
            raise InvalidStructure(
                f"degree-{self.degree} multivector needs shape {(self.dim,) * self.degree}, got {comps.shape}"
            )
        object.__setattr__(self, "components", comps)
        self.components.setflags(write=False)

    def norm(self) -> float:
        return float(np.max(np.abs(self.components))) if self.components.size else 0.0


def antisymmetry_residual(constants: np.ndarray) -> float:
    c = np.asarray(constants, dtype=float)
    return float(np.max(np.abs(c + np.swapaxes(c, 1, 2))))


def jacobi_residual(constants: np.ndarray) -> float:
    """Max absolute Jacobiator contraction over all basis index quadruples."""
    c = np.asarray(constants, dtype=float)
    t1 = np.einsum("mab,dmg->dabg", c, c)
    t2 = np.einsum("mbg,dma->dabg", c, c)
    t3 = np.einsum("mga,dmb->dabg", c, c)
    return float(np.max(np.abs(t1 + t2 + t3)))


def make_algebra(
    dim: int,
    constants,
    labels: Sequence[str] | None = None,
    tol: float = EXACT_TOL,
) -> LieAlgebra:
    """Validate structure constants and build the algebra.

    Rejects constants whose antisymmetry or Jacobi residual exceeds `tol`
    (exactly-entered data should sit at machine zero).
    """
    c = np.asarray(constants, dtype=float)
    if c.shape != (dim, dim, dim):
        raise InvalidStructure(f"constants must have shape {(dim, dim, dim)}, got {c.shape}")
    anti = antisymmetry_residual(c)
    if anti > tol:
        raise InvalidStructure(f"antisymmetry violated: residual {anti:.3e} > {tol:.1e}")
    jac = jacobi_residual(c)
    if jac > tol:
        raise InvalidStructure(f"Jacobi identity violated: residual {jac:.3e} > {tol:.1e}")
    if labels is None:
        labels = tuple(f"e{i}" for i in range(dim))
    else:
        labels = tuple(labels)
        if len(labels) != dim:
            raise InvalidStructure(f"expected {dim} labels, got {len(labels)}")
    return LieAlgebra(dim=dim, constants=c, labels=labels)


def bracket(algebra: LieAlgebra, xi, eta) -> np.ndarray:
    """Bracket of two coefficient vectors: out_g = c[g,a,b] xi_a eta_b."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if xi.shape != (algebra.dim,) or eta.shape != (algebra.dim,):
        raise InvalidStructure(f"coefficient vectors must have length {algebra.dim}")
    return np.einsum("gab,a,b->g", algebra.constants, xi, eta)


def ad_matrix(algebra: LieAlgebra, xi) -> np.ndarray:
    """Matrix of ad_xi acting on coefficient vectors, (ad_xi)[g, b] = c[g,a,b] xi_a."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (algebra.dim,):
        raise InvalidStructure(f"coefficient vector must have length {algebra.dim}")
    return np.einsum("gab,a->gb", algebra.constants, xi)


def modular_character(algebra: LieAlgebra, tol: float = 1e-10):
    """Covector a -> trace(ad_{e_a}) plus a unimodularity flag."""
    char = np.einsum("bab->a", algebra.constants)
    return char, bool(np.max(np.abs(char)) <= tol if char.size else True)


def basis_multivector(dim: int, indices: Sequence[int], coeff: float = 1.0) -> Multivector:
    """Wedge of basis vectors e_{i1} ^ ... ^ e_{ik} times a coefficient."""
    degree = len(indices)
    comps = np.zeros((dim,) * degree)
    _wedge_insert(comps, tuple(indices), coeff)
    return Multivector(dim=dim, degree=degree, components=comps)


def multivector_from_terms(dim: int, degree: int, terms) -> Multivector:
    """Build a multivector from (indices..., coeff) wedge terms."""
    comps = np.zeros((dim,) * degree)
    for term in terms:
        *idx, coeff = term
        if len(idx) != degree:
            raise InvalidStructure(f"term {term} does not match degree {degree}")
        _wedge_insert(comps, tuple(int(i) for i in idx), float(coeff))
    return Multivector(dim=dim, degree=degree, components=comps)


def _wedge_insert(comps: np.ndarray, indices: tuple[int, ...], coeff: float) -> None:
    """Add coeff * e_{i1} ^ ... ^ e_{ik} into a full antisymmetric array."""
    if coeff == 0.0 or len(set(indices)) != len(indices):
        return
    order = tuple(sorted(range(len(indices)), key=indices.__getitem__))
    sign = _permutation_sign(order)
    key = tuple(sorted(indices))
    for perm in itertools.permutations(range(len(key))):
        comps[tuple(key[p] for p in perm)] += sign * _permutation_sign(perm) * coeff


def _permutation_sign(perm: Sequence[int]) -> float:
    sign = 1.0
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def schouten(algebra: LieAlgebra, p: Multivector, q: Multivector) -> Multivector:
    """Algebraic Schouten bracket on the exterior algebra of the Lie algebra.

    Extends the bracket as a graded Lie bracket: on wedge monomials,
    [x_1^..^x_k, y_1^..^y_l] = sum_{a,b} (-1)^(a+b) [x_a, y_b] ^ (rest),
    so degree-1 inputs reduce to the plain bracket and [xi, P] = ad_xi P acts
    as a derivation.
    """
    k, l = p.degree, q.degree
    if k < 1 or l < 1 or k + l - 1 > algebra.dim:
        raise InvalidStructure(f"degrees ({k}, {l}) out of range for dim {algebra.dim}")
    if p.dim != algebra.dim or q.dim != algebra.dim:
        raise InvalidStructure("multivector dimension does not match the algebra")
    c = algebra.constants
    out = np.zeros((algebra.dim,) * (k + l - 1))
    for idx_p in itertools.combinations(range(algebra.dim), k):
        cp = p.components[idx_p]
        if cp == 0.0:
            continue
        for idx_q in itertools.combinations(range(algebra.dim), l):
            cq = q.components[idx_q]
            if cq == 0.0:
                continue
            for a in range(k):
                rest_p = idx_p[:a] + idx_p[a + 1:]
                for b in range(l):
                    rest_q = idx_q[:b] + idx_q[b + 1:]
                    sign = -1.0 if (a + b) % 2 else 1.0
                    vec = c[:, idx_p[a], idx_q[b]]
                    for g in np.nonzero(vec)[0]:
                        _wedge_insert(out, (int(g),) + rest_p + rest_q, sign * cp * cq * vec[g])
    return Multivector(dim=algebra.dim, degree=k + l - 1, components=out)


# ---------------------------------------------------------------------------
# Registry of the built-in algebras used by the bundled models.
# ---------------------------------------------------------------------------

def _constants_from_brackets(dim, entries):
    c = np.zeros((dim, dim, dim))
    for a, b, out in entries:
        for g, coeff in enumerate(out):
            c[g, a, b] += coeff
            c[g, b, a] -= coeff
    return c


def standard_algebra(name: str, param=None) -> LieAlgebra:
    """Look up a named algebra with the conventional basis.

    Names: sl2, gl2_sklyanin, su2_quaternion, so3, book (param eta),
    b2xb2 (param eta), affine2d, abelian (param n).
    """
    if name == "sl2":
        # basis (J3, Jp, Jm): [J3, Jp] = 2 Jp, [J3, Jm] = -2 Jm, [Jp, Jm] = J3
        c = _constants_from_brackets(3, [
            (0, 1, (0.0, 2.0, 0.0)),
            (0, 2, (0.0, 0.0, -2.0)),
            (1, 2, (1.0, 0.0, 0.0)),
        ])
        return make_algebra(3, c, ("J3", "Jp", "Jm"))
    if name == "gl2_sklyanin":
        # sl2 extended by the central half-identity, basis (J3, Jp, Jm, I/2).
        c = _constants_from_brackets(4, [
            (0, 1, (0.0, 2.0, 0.0, 0.0)),
            (0, 2, (0.0, 0.0, -2.0, 0.0)),
            (1, 2, (1.0, 0.0, 0.0, 0.0)),
        ])
        return make_algebra(4, c, ("J3", "Jp", "Jm", "I/2"))
    if name == "su2_quaternion":
        # unit-quaternion frame (e1..e4), e1 central:
        # [e2,e3] = -2 e4, [e2,e4] = 2 e3, [e3,e4] = -2 e2
        c = _constants_from_brackets(4, [
            (1, 2, (0.0, 0.0, 0.0, -2.0)),
            (1, 3, (0.0, 0.0, 2.0, 0.0)),
            (2, 3, (0.0, -2.0, 0.0, 0.0)),
        ])
        return make_algebra(4, c, ("e1", "e2", "e3", "e4"))
    if name == "so3":
        c = _constants_from_brackets(3, [
            (0, 1, (0.0, 0.0, 1.0)),
            (1, 2, (1.0, 0.0, 0.0)),
            (2, 0, (0.0, 1.0, 0.0)),
        ])
        return make_algebra(3, c, ("e1", "e2", "e3"))
    if name == "book":
        eta = 1.0 if param is None else float(param)
        # [X,Y] = -eta Y, [X,Z] = -eta Z
        c = _constants_from_brackets(3, [
            (0, 1, (0.0, -eta, 0.0)),
            (0, 2, (0.0, 0.0, -eta)),
        ])
        return make_algebra(3, c, ("X", "Y", "Z"))
    if name == "b2xb2":
        eta = 1.0 if param is None else float(param)
        # [X,Z] = eta X, [X,W] = eta (X+Y), [Y,Z] = eta Y, [Y,W] = eta (X/2 + Y)
        c = _constants_from_brackets(4, [
            (0, 2, (eta, 0.0, 0.0, 0.0)),
            (0, 3, (eta, eta, 0.0, 0.0)),
            (1, 2, (0.0, eta, 0.0, 0.0)),
            (1, 3, (eta / 2.0, eta, 0.0, 0.0)),
        ])
        return make_algebra(4, c, ("X", "Y", "Z", "W"))
    if name == "affine2d":
        c = _constants_from_brackets(2, [(0, 1, (0.0, 1.0))])
        return make_algebra(2, c, ("X", "Y"))
    if name == "abelian":
        n = 3 if param is None else int(param)
        return make_algebra(n, np.zeros((n, n, n)))
    raise InvalidStructure(f"unknown algebra name {name!r}")


def algebra_from_spec(spec: dict) -> LieAlgebra:
    """Build an algebra from a config mapping.

    Expected keys: "dim", optional "labels", and "brackets" as a list of
    {"a": i, "b": j, "out": [coeffs]} entries with 0-based indices.  Unlisted
    pairs default to zero; the antisymmetric completion is applied.
    """
    dim = int(spec["dim"])
    entries = []
    for item in spec.get("brackets", []):
        a, b = int(item["a"]), int(item["b"])
        out = [float(v) for v in item["out"]]
        if not (0 <= a < dim and 0 <= b < dim):
            raise InvalidStructure(f"bracket indices ({a}, {b}) out of range for dim {dim}")
        if len(out) != dim:
            raise InvalidStructure(f"bracket output for ({a}, {b}) must have length {dim}")
        entries.append((a, b, out))
    c = _constants_from_brackets(dim, entries)
    return make_algebra(dim, c, spec.get("labels"))
