"""Modular vector fields, invariant volumes and the Morse obstruction.

Core identity used throughout: with respect to a volume of density rho, the
divergence of a Hamiltonian field is paired off the modular field
M^i(x) = (1/rho) d_j(rho P[j, i]), and for a left-invariant volume that field
splits into invariant fields of the dual modular character plus a Hamiltonian
correction by half the log of the adjoint determinant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import ndiff
from .bialgebra import LieBialgebra
from .charts import PoissonChart, ScalarField, sharp
from .groups import (
    GroupModel,
    VolumeForm,
    adjoint_determinant,
    invariant_field,
    left_volume_density,
    translation_jacobian,
)


def divergence(chart: PoissonChart, field_eval: Callable, volume: VolumeForm, x) -> float:
    """div of a vector field w.r.t. a volume: sum_i d_i X^i + X(log rho), by central differences."""
    x = chart.require_inside(x)
    total = ndiff.divergence_sum(field_eval, x)
    grad_logrho = ndiff.gradient(volume.log_density, x)
    return float(total + grad_logrho @ field_eval(x))


def modular_field(chart: PoissonChart, volume: VolumeForm) -> Callable:
    """Evaluator of the modular vector field of (chart, volume).

    Satisfies <dH, M(x)> = divergence(X_H, volume, x) for any Hamiltonian H.
    """

    def field_eval(x):
        x = chart.require_inside(x)
        rho_x = volume.density(x)
        h = ndiff.steps(x)
        out = np.zeros(chart.dim)
        for j in range(chart.dim):
            e = np.zeros_like(x)
            e[j] = h[j]
            xp, xm = x + e, x - e
            row_p = volume.density(xp) * np.asarray(chart.components(xp), dtype=float)[j]
            row_m = volume.density(xm) * np.asarray(chart.components(xm), dtype=float)[j]
            out += (row_p - row_m) / (2.0 * h[j])
        return out / rho_x

    return field_eval


def conformal_shift_residual(chart: PoissonChart, volume: VolumeForm, f: ScalarField, points) -> float:
    """Defect of the conformal-change identity M_{e^F vol} = M_vol - X_F over points."""
    shifted = volume.scaled_by_exp(f)
    base_field = modular_field(chart, volume)
    shifted_field = modular_field(chart, shifted)
    worst = 0.0
    for x in points:
        x = chart.require_inside(x)
        x_f = np.asarray(chart.components(x), dtype=float) @ f.gradient(x)
        res = shifted_field(x) - base_field(x) + x_f
        worst = max(worst, float(np.max(np.abs(res))))
    return worst


def log_sqrt_adjoint_determinant(gm: GroupModel) -> ScalarField:
    """The scalar g -> log sqrt(det Ad_g), the left-volume correction exponent."""
    return ScalarField(
        func=lambda g: 0.5 * np.log(adjoint_determinant(gm, g)),
        name="log_sqrt_adjdet",
    )


def dual_character_field(gm: GroupModel, bialg: LieBialgebra, half: bool = True) -> Callable:
    """Evaluator of (half of) the sum of invariant fields of the dual modular character."""
    char = bialg.dual.constants
    m_star = np.einsum("bab->a", char)
    left = invariant_field(gm, m_star, "left")
    right = invariant_field(gm, m_star, "right")
    factor = 0.5 if half else 1.0

    def field_eval(g):
        return factor * (left(g) + right(g))

    return field_eval


def left_volume_modular_field(gm: GroupModel, chart: PoissonChart, bialg: LieBialgebra) -> Callable:
    """Modular field of a left-invariant volume, assembled from bialgebra characters.

    Half the sum of the left/right invariant fields of the dual character,
    plus the bivector applied to the right-invariant form of the primal
    character (pulled back through the right-translation Jacobian).
    """
    m_star = np.einsum("bab->a", bialg.dual.constants)
    m_primal = np.einsum("bab->a", bialg.primal.constants)
    basis = gm.basis_at_identity
    m_star_chart = basis @ m_star
    # covector components at the identity in chart coordinates
    m_primal_chart = np.linalg.solve(basis.T, m_primal)

    def field_eval(g):
        jl = translation_jacobian(gm, g, "left")
        jr = translation_jacobian(gm, g, "right")
        alpha = np.linalg.solve(jr.T, m_primal_chart)  # right-invariant 1-form at g
        return 0.5 * (jl @ m_star_chart + jr @ m_star_chart + sharp(chart, g, alpha))

    return field_eval


def volume_preservation_residual(
    gm: GroupModel,
    chart: PoissonChart,
    bialg: LieBialgebra,
    h: ScalarField,
    sigma: ScalarField,
    points,
) -> dict:
    """Residual of the preservation criterion for the volume e^sigma * (left volume).

    Evaluates |X_H(sigma - log sqrt(det Ad)) + (half character sum)(H)| over
    the points; a vanishing residual certifies that the volume is preserved
    by the flow of H.  Returns the max and the point attaining it.
    """
    log_corr = log_sqrt_adjoint_determinant(gm)
    char_field = dual_character_field(gm, bialg, half=True)

    def shifted(x):
        return sigma(x) - log_corr(x)

    worst, worst_point = 0.0, None
    for x in points:
        x = chart.require_inside(x)
        xh = np.asarray(chart.components(x), dtype=float) @ h.gradient(x)
        value = float(ndiff.gradient(shifted, x) @ xh + h.gradient(x) @ char_field(x))
        if abs(value) >= worst:
            worst, worst_point = abs(value), x
    return {"max": worst, "argmax": worst_point}


def singular_point_obstruction(
    gm: GroupModel,
    chart: PoissonChart,
    bialg: LieBialgebra,
    h: ScalarField,
    g,
) -> float:
    """Value of the full character-sum field applied to H at the point g.

    At an equilibrium of X_H this must vanish whenever some volume form is
    preserved by the flow; the caller pairs it with an equilibrium check.
    """
    g = chart.require_inside(g)
    field_eval = dual_character_field(gm, bialg, half=False)
    return float(h.gradient(g) @ field_eval(g))


def invariant_volume(gm: GroupModel, scale: float = 1.0) -> VolumeForm:
    """Volume with density sqrt(det Ad) times the left-invariant density.

    Constructed unconditionally; it is the canonical invariant volume exactly
    when the dual algebra is unimodular, so callers pair it with the verdict.
    """
    left = left_volume_density(gm, scale)

    def rho(g):
        return float(np.sqrt(adjoint_determinant(gm, g)) * left.density(g))

    return VolumeForm(density=ScalarField(func=rho, name="invariant_density"),
                      name=f"sqrt_adjdet*left({gm.name})")


@dataclass(frozen=True)
class MorseReport:
    gradient_at_e: np.ndarray
    hessian: np.ndarray
    eigenvalues: np.ndarray
    is_critical: bool
    is_morse: bool
    kernel_condition: np.ndarray
    kernel_condition_norm: float


def morse_report(
    gm: GroupModel,
    h: ScalarField,
    bialg: LieBialgebra | None = None,
    critical_tol: float = 1e-7,
    degeneracy_ratio: float = 1e-6,
) -> MorseReport:
    """Criticality and Hessian data of H at the identity, in chart coordinates.

    At a critical point the coordinate Hessian equals the intrinsic one, so
    eigenvalues decide nondegeneracy (min |eig| > ratio * max |eig|).  The
    kernel condition pairs the Hessian with the dual modular character; a
    nonzero value at a Morse point rules out any preserved volume form.
    """
    e = gm.identity
    grad = h.gradient(e)
    hess = ndiff.hessian(h.func, e)
    eigs = np.linalg.eigvalsh(hess)
    is_critical = bool(np.max(np.abs(grad)) <= critical_tol)
    max_eig = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    nondegenerate = bool(max_eig > 0.0 and np.min(np.abs(eigs)) > degeneracy_ratio * max_eig)
    if bialg is not None:
        m_star_chart = gm.basis_at_identity @ np.einsum("bab->a", bialg.dual.constants)
    else:
        m_star_chart = np.zeros(gm.dim)
    kernel = hess @ m_star_chart
    return MorseReport(
        gradient_at_e=grad,
        hessian=hess,
        eigenvalues=eigs,
        is_critical=is_critical,
        is_morse=is_critical and nondegenerate,
        kernel_condition=kernel,
        kernel_condition_norm=float(np.linalg.norm(kernel)),
    )


def morse_verdict(report: MorseReport, dual_unimodular: bool) -> str:
    """Combined statement of the Morse pipeline for CLI reports."""
    if not report.is_morse:
        return "theorem not applicable"
    if dual_unimodular:
        return "invariant volume exists"
    return "no invariant volume exists for this Hamiltonian flow"
