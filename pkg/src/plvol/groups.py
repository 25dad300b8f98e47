"""Coordinate Lie group models: group law, translations, adjoint action, volumes.

A model stores multiply/inverse/identity in chart coordinates plus optional
analytic translation Jacobians.  `basis_at_identity` maps abstract algebra
basis vectors to tangent coordinates at the identity (columns), so bialgebra
data expressed on an algebra basis can drive chart-level vector fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ndiff
from .charts import ScalarField
from .errors import DomainViolation, InvalidStructure


@dataclass(frozen=True)
class GroupModel:
    dim: int
    multiply: Callable  # (g, h) -> g h
    inverse: Callable  # g -> g^{-1}
    identity: np.ndarray
    name: str = ""
    jacobian_left: Callable | None = None  # g -> d(g h)/dh at h = e
    jacobian_right: Callable | None = None  # g -> d(h g)/dh at h = e
    basis_at_identity: np.ndarray | None = None

    def __post_init__(self):
        e = np.asarray(self.identity, dtype=float)
        object.__setattr__(self, "identity", e)
        basis = self.basis_at_identity
        basis = np.eye(self.dim) if basis is None else np.asarray(basis, dtype=float)
        object.__setattr__(self, "basis_at_identity", basis)


@dataclass(frozen=True)
class VolumeForm:
    """Positive density against the coordinate volume."""

    density: ScalarField
    name: str = ""

    def log_density(self, x) -> float:
        value = self.density(x)
        if value <= 0.0:
            raise DomainViolation(f"volume form {self.name!r} has nonpositive density at {np.asarray(x).tolist()}")
        return float(np.log(value))

    def scaled_by_exp(self, f: ScalarField, name: str = "") -> "VolumeForm":
        """The conformally rescaled volume e^F * this."""
        base = self.density
        return VolumeForm(
            density=ScalarField(func=lambda x: np.exp(f(x)) * base(x), name=name or f"exp*{self.name}"),
            name=name or f"exp({f.name})*{self.name}",
        )


def lebesgue(dim: int, scale: float = 1.0) -> VolumeForm:
    return VolumeForm(
        density=ScalarField(func=lambda x: scale, grad=lambda x: np.zeros_like(x), name="lebesgue"),
        name="lebesgue",
    )


def translation_jacobian(gm: GroupModel, g, side: str) -> np.ndarray:
    """Differential of left/right translation by g, taken at the identity.

    left: d multiply(g, h)/dh at h = e; right: d multiply(h, g)/dh at h = e.
    Uses the model's analytic hook when present, central differences otherwise.
    """
    g = np.asarray(g, dtype=float)
    if side == "left":
        if gm.jacobian_left is not None:
            return np.asarray(gm.jacobian_left(g), dtype=float)
        return ndiff.jacobian(lambda h: gm.multiply(g, h), gm.identity)
    if side == "right":
        if gm.jacobian_right is not None:
            return np.asarray(gm.jacobian_right(g), dtype=float)
        return ndiff.jacobian(lambda h: gm.multiply(h, g), gm.identity)
    raise InvalidStructure(f"side must be 'left' or 'right', got {side!r}")


def invariant_field(gm: GroupModel, xi, side: str) -> Callable:
    """Left- or right-invariant vector field with value xi (algebra basis) at e."""
    xi_chart = gm.basis_at_identity @ np.asarray(xi, dtype=float)

    def field_eval(g):
        return translation_jacobian(gm, g, side) @ xi_chart

    return field_eval


def adjoint_matrix(gm: GroupModel, g) -> np.ndarray:
    """Differential at e of h -> g h g^{-1}, in chart coordinates.

    With analytic translation Jacobians the chain rule gives the exact value
    J_r(g)^{-1} J_l(g); otherwise the conjugation map is differenced directly.
    """
    g = np.asarray(g, dtype=float)
    if gm.jacobian_left is not None and gm.jacobian_right is not None:
        return np.linalg.solve(translation_jacobian(gm, g, "right"), translation_jacobian(gm, g, "left"))
    g_inv = np.asarray(gm.inverse(g), dtype=float)
    return ndiff.jacobian(lambda h: gm.multiply(gm.multiply(g, h), g_inv), gm.identity)


def adjoint_determinant(gm: GroupModel, g) -> float:
    """det of the adjoint action at g; equals 1 at the identity, positive on connected models."""
    value = float(np.linalg.det(adjoint_matrix(gm, g)))
    if value <= 0.0:
        raise DomainViolation(f"nonpositive adjoint determinant {value:.3e} at {np.asarray(g).tolist()}")
    return value


def left_volume_density(gm: GroupModel, scale: float = 1.0) -> VolumeForm:
    """Left-invariant volume as a chart density, normalized to `scale` at e."""

    def rho(g):
        det = np.linalg.det(translation_jacobian(gm, g, "left"))
        if abs(det) < 1e-300:
            raise DomainViolation(f"degenerate left translation at {np.asarray(g).tolist()}")
        return scale / abs(det)

    return VolumeForm(density=ScalarField(func=rho, name="left_density"), name=f"left({gm.name})")


def group_axiom_residuals(gm: GroupModel, points) -> dict:
    """Identity/inverse/associativity defects over sample points (triples cycled)."""
    pts = [np.asarray(p, dtype=float) for p in points]
    res = {"identity": 0.0, "inverse": 0.0, "associativity": 0.0}
    for g in pts:
        res["identity"] = max(
            res["identity"],
            float(np.max(np.abs(gm.multiply(g, gm.identity) - g))),
            float(np.max(np.abs(gm.multiply(gm.identity, g) - g))),
        )
        res["inverse"] = max(
            res["inverse"],
            float(np.max(np.abs(gm.multiply(g, gm.inverse(g)) - gm.identity))),
        )
    for i in range(len(pts)):
        g, h, k = pts[i], pts[(i + 1) % len(pts)], pts[(i + 2) % len(pts)]
        lhs = gm.multiply(gm.multiply(g, h), k)
        rhs = gm.multiply(g, gm.multiply(h, k))
        res["associativity"] = max(res["associativity"], float(np.max(np.abs(lhs - rhs))))
    return res
