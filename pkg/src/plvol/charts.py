"""Coordinate Poisson bivectors on open chart domains.

A chart supplies x -> antisymmetric matrix P(x) with P[i, j] = {x_i, x_j}.
The anchor conventions, validated against the built-in models:
{F, G}(x) = grad F . P(x) . grad G and Hamiltonian fields X_H = P(x) grad H.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ndiff
from .errors import DomainViolation, InvalidStructure
from .liealg import LieAlgebra


@dataclass(frozen=True)
class ScalarField:
    """Real function on a chart with an optional analytic gradient."""

    func: Callable
    grad: Callable | None = None
    name: str = ""

    def __call__(self, x) -> float:
        return float(self.func(np.asarray(x, dtype=float)))

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.grad is not None:
            return np.asarray(self.grad(x), dtype=float)
        return ndiff.gradient(self.func, x)

    def gradient_check(self, points, tol: float = ndiff.FD_TOL) -> float:
        """Max deviation between the analytic gradient and central differences."""
        if self.grad is None:
            return 0.0
        worst = 0.0
        for x in points:
            x = np.asarray(x, dtype=float)
            worst = max(worst, float(np.max(np.abs(self.gradient(x) - ndiff.gradient(self.func, x)))))
        if worst > tol:
            raise InvalidStructure(f"analytic gradient of {self.name or 'field'} off by {worst:.3e}")
        return worst


def constant_field(value: float, name: str = "const") -> ScalarField:
    return ScalarField(func=lambda x: value, grad=lambda x: np.zeros_like(x), name=name)


@dataclass(frozen=True)
class PoissonChart:
    """Bivector components on a guarded coordinate domain."""

    dim: int
    components: Callable  # x -> antisymmetric (dim, dim) array
    domain_guard: Callable = field(default=lambda x: True)
    name: str = ""
    coord_names: tuple[str, ...] = ()

    def matrix(self, x) -> np.ndarray:
        x = self.require_inside(x)
        return np.asarray(self.components(x), dtype=float)

    def require_inside(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DomainViolation(f"point of length {x.size} on a {self.dim}-dimensional chart")
        if not self.domain_guard(x):
            raise DomainViolation(f"point {x.tolist()} outside the domain of chart {self.name!r}")
        return x


def sharp(chart: PoissonChart, x, alpha) -> np.ndarray:
    """Vector obtained from a covector through the bivector: (P(x) alpha)_i = P[i,j] alpha_j."""
    alpha = np.asarray(alpha, dtype=float)
    return chart.matrix(x) @ alpha


def hamiltonian_field(chart: PoissonChart, h: ScalarField) -> Callable:
    """Evaluator x -> P(x) grad H(x)."""

    def field_eval(x):
        x = chart.require_inside(x)
        return np.asarray(chart.components(x), dtype=float) @ h.gradient(x)

    return field_eval


def poisson_bracket(chart: PoissonChart, f: ScalarField, g: ScalarField) -> Callable:
    """Evaluator of {F, G}(x) = grad F . P(x) . grad G."""

    def bracket_eval(x):
        x = chart.require_inside(x)
        return float(f.gradient(x) @ np.asarray(chart.components(x), dtype=float) @ g.gradient(x))

    return bracket_eval


def jacobi_residual(chart: PoissonChart, x) -> float:
    """Max over coordinate triples of the cyclic nested bracket {x_i,{x_j,x_k}} + cyc.

    The inner bracket of two coordinates is a bivector component, so only its
    outer derivative needs finite differences (taken with a doubled step).
    """
    x = chart.require_inside(x)
    m = np.asarray(chart.components(x), dtype=float)
    h = ndiff.steps(x, scale=2.0)
    dm = np.empty((chart.dim, chart.dim, chart.dim))  # dm[k] = d components / d x_k
    for k in range(chart.dim):
        e = np.zeros_like(x)
        e[k] = h[k]
        dm[k] = (np.asarray(chart.components(x + e), dtype=float)
                 - np.asarray(chart.components(x - e), dtype=float)) / (2.0 * h[k])
    worst = 0.0
    for i, j, k in itertools.combinations(range(chart.dim), 3):
        val = (m[i] @ dm[:, j, k] + m[j] @ dm[:, k, i] + m[k] @ dm[:, i, j])
        worst = max(worst, abs(float(val)))
    return worst


def casimir_residual(chart: PoissonChart, casimir: ScalarField, points) -> float:
    """Max norm of P(x) grad C(x) over the supplied points."""
    worst = 0.0
    for x in points:
        worst = max(worst, float(np.max(np.abs(sharp(chart, x, casimir.gradient(x))))))
    return worst


def lie_poisson_chart(algebra: LieAlgebra) -> PoissonChart:
    """Linear chart with components P[a, b](x) = c[g, a, b] x_g."""
    constants = algebra.constants

    def components(x):
        return np.einsum("gab,g->ab", constants, x)

    return PoissonChart(
        dim=algebra.dim,
        components=components,
        name=f"lie_poisson({','.join(algebra.labels)})",
        coord_names=tuple(f"x{i + 1}" for i in range(algebra.dim)),
    )


def pencil(chart0: PoissonChart, chart1: PoissonChart, lam: float) -> PoissonChart:
    """Pointwise combination lam * P0 + (1 - lam) * P1 with conjoined guards."""
    if chart0.dim != chart1.dim:
        raise InvalidStructure(f"pencil of charts with dims {chart0.dim} and {chart1.dim}")

    def components(x):
        return lam * np.asarray(chart0.components(x), dtype=float) \
            + (1.0 - lam) * np.asarray(chart1.components(x), dtype=float)

    def guard(x):
        return bool(chart0.domain_guard(x)) and bool(chart1.domain_guard(x))

    return PoissonChart(
        dim=chart0.dim,
        components=components,
        domain_guard=guard,
        name=f"pencil({chart0.name},{chart1.name},{lam})",
        coord_names=chart0.coord_names or chart1.coord_names,
    )


def random_polynomial(dim: int, rng: np.random.Generator, degree: int = 3,
                      n_terms: int = 6, name: str = "poly") -> ScalarField:
    """Random multivariate polynomial with an exact gradient, for sampling checks."""
    exponents = rng.integers(0, degree + 1, size=(n_terms, dim))
    exponents = exponents[exponents.sum(axis=1) <= degree]
    if len(exponents) == 0:
        exponents = np.zeros((1, dim), dtype=int)
    coeffs = rng.uniform(-1.0, 1.0, size=len(exponents))

    def func(x):
        return float(np.sum(coeffs * np.prod(x[None, :] ** exponents, axis=1)))

    def grad(x):
        g = np.zeros(dim)
        for c, ex in zip(coeffs, exponents):
            for i in range(dim):
                if ex[i] == 0:
                    continue
                e2 = ex.copy()
                e2[i] -= 1
                g[i] += c * ex[i] * np.prod(x ** e2)
        return g

    return ScalarField(func=func, grad=grad, name=name)
