"""Built-in model bundles and config-file loading.

Each bundle wires a coordinate group, a Poisson chart, bialgebra data, named
Hamiltonians and Casimirs, and a table of closed-form ground truths used by
the verification commands and the test suite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from . import bialgebra as bl
from . import charts as ch
from . import groups as gr
from . import liealg as la
from . import modular as mo
from .errors import InvalidStructure
from .expressions import compile_point_function, compile_two_point_function

DEFAULT_SEED = 20240


@dataclass(frozen=True)
class ModelBundle:
    name: str
    chart: ch.PoissonChart
    group: gr.GroupModel | None = None
    bialgebra: bl.LieBialgebra | None = None
    hamiltonians: dict = dc_field(default_factory=dict)
    casimirs: dict = dc_field(default_factory=dict)
    ground_truth: dict = dc_field(default_factory=dict)
    extra_structures: dict = dc_field(default_factory=dict)  # name -> (chart, bialgebra)
    sample_box: np.ndarray | None = None
    sample_guard: Callable | None = None
    default_hamiltonian: str = ""
    default_x0: np.ndarray | None = None
    params: dict = dc_field(default_factory=dict)

    def hamiltonian(self, name: str | None = None) -> ch.ScalarField:
        key = name or self.default_hamiltonian
        if key not in self.hamiltonians:
            raise InvalidStructure(
                f"model {self.name!r} has no Hamiltonian {key!r}; available: {sorted(self.hamiltonians)}"
            )
        return self.hamiltonians[key]


def sample_points(bundle: ModelBundle, rng: np.random.Generator, n: int) -> np.ndarray:
    """Random chart points inside the domain guard (rejection sampling in the box)."""
    box = bundle.sample_box
    if box is None:
        box = np.array([[-1.0, 1.0]] * bundle.chart.dim)
    guard = bundle.sample_guard or bundle.chart.domain_guard
    points = []
    attempts = 0
    while len(points) < n:
        x = rng.uniform(box[:, 0], box[:, 1])
        attempts += 1
        if attempts > 1000 * n:
            raise InvalidStructure(f"sampling for model {bundle.name!r} keeps hitting the domain guard")
        if guard(x) and bundle.chart.domain_guard(x):
            points.append(x)
    return np.asarray(points)


# ---------------------------------------------------------------------------
# SL(2, R) with the Sklyanin bracket in the ambient GL(2)+ chart
# ---------------------------------------------------------------------------

def _sl2_det(a):
    return a[0] * a[3] - a[1] * a[2]


def _sl2_reference_flow(a):
    """Transcribed closed-form flow of the shifted quadratic Hamiltonian.

    The two middle components of this transcription disagree with the
    bivector contraction (they do not even vanish on the diagonal
    equilibria); `check sl2r` reports the mismatch per component.
    """
    a11, a12, a21, a22 = a
    return np.array([
        -a11 * (a12 ** 2 + a21 ** 2) - 2.0 * (a22 - 1.0) * a12 * a21,
        (a11 - 1.0) * a11 * a22 - (a22 - 1.0) * a12 * a22,
        (a11 - 1.0) * a11 * a12 - (a22 - 1.0) * a12 * a22,
        2.0 * (a11 - 1.0) * a12 * a21 + a22 * (a12 ** 2 + a21 ** 2),
    ])


def sl2r_sklyanin() -> ModelBundle:
    """Sklyanin bracket on the ambient GL(2)+ chart (a11, a12, a21, a22)."""

    def components(a):
        a11, a12, a21, a22 = a
        m = np.zeros((4, 4))
        m[0, 1] = a11 * a12
        m[0, 2] = a11 * a21
        m[0, 3] = 2.0 * a12 * a21
        m[1, 3] = a12 * a22
        m[2, 3] = a21 * a22
        return m - m.T

    chart = ch.PoissonChart(
        dim=4,
        components=components,
        domain_guard=lambda a: _sl2_det(a) > 1e-8,
        name="sl2r_sklyanin",
        coord_names=("a11", "a12", "a21", "a22"),
    )

    def multiply(g, h):
        g11, g12, g21, g22 = g
        h11, h12, h21, h22 = h
        return np.array([
            g11 * h11 + g12 * h21,
            g11 * h12 + g12 * h22,
            g21 * h11 + g22 * h21,
            g21 * h12 + g22 * h22,
        ])

    def inverse(g):
        det = _sl2_det(g)
        return np.array([g[3], -g[1], -g[2], g[0]]) / det

    group = gr.GroupModel(
        dim=4,
        multiply=multiply,
        inverse=inverse,
        identity=np.array([1.0, 0.0, 0.0, 1.0]),
        name="gl2_plus",
        jacobian_left=lambda g: np.kron(np.array([[g[0], g[1]], [g[2], g[3]]]), np.eye(2)),
        jacobian_right=lambda g: np.kron(np.eye(2), np.array([[g[0], g[1]], [g[2], g[3]]]).T),
        # columns: J3, Jp, Jm, I/2 as tangent vectors at the identity
        basis_at_identity=np.array([
            [1.0, 0.0, 0.0, 0.5],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [-1.0, 0.0, 0.0, 0.5],
        ]),
    )

    algebra = la.standard_algebra("gl2_sklyanin")
    r = la.multivector_from_terms(4, 2, [(2, 1, 1.0)])  # Jm wedge Jp
    bialg = bl.bialgebra_from_r(algebra, r)

    hamiltonians = {
        "toda_svd": ch.ScalarField(
            func=lambda a: 0.5 * float(np.dot(a, a)),
            grad=lambda a: np.asarray(a, dtype=float),
            name="toda_svd",
        ),
        "toda_svd_centered": ch.ScalarField(
            func=lambda a: 0.5 * float(np.dot(a, a)) - a[0] - a[3],
            grad=lambda a: np.array([a[0] - 1.0, a[1], a[2], a[3] - 1.0]),
            name="toda_svd_centered",
        ),
        "contrast": ch.ScalarField(
            func=lambda a: (1.0 - a[0]) ** 2 + a[1] ** 2 + a[2] ** 2 + (1.0 - a[3]) ** 2,
            grad=lambda a: np.array([2.0 * (a[0] - 1.0), 2.0 * a[1], 2.0 * a[2], 2.0 * (a[3] - 1.0)]),
            name="contrast",
        ),
    }
    casimirs = {
        "det": ch.ScalarField(
            func=_sl2_det,
            grad=lambda a: np.array([a[3], -a[2], -a[1], a[0]]),
            name="det",
        )
    }
    ground_truth = {
        "symmetric_modular_field": lambda a: np.array([2.0 * a[0], 0.0, 0.0, -2.0 * a[3]]),
        "dual_modular_character": np.array([2.0, 0.0, 0.0, 0.0]),  # on (J3, Jp, Jm, I/2)
        # value of the full character-sum field on toda_svd_centered at diag(a, 1/a)
        "diag_obstruction_centered": lambda a: (4.0 / a ** 2) * (a ** 2 - 1.0) * (a ** 2 - a + 1.0),
        # same for the plain quadratic toda_svd
        "diag_obstruction_toda": lambda a: 4.0 * (a ** 2 - 1.0 / a ** 2),
        "adjoint_determinant": lambda g: 1.0,
        "invariant_density": lambda g: 1.0 / _sl2_det(g) ** 2,
        "flow_reference": _sl2_reference_flow,
        "flow_reference_hamiltonian": "toda_svd_centered",
        "flow_reference_sign": -1.0,
    }
    return ModelBundle(
        name="sl2r",
        chart=chart,
        group=group,
        bialgebra=bialg,
        hamiltonians=hamiltonians,
        casimirs=casimirs,
        ground_truth=ground_truth,
        sample_box=np.array([[0.6, 1.6], [-0.5, 0.5], [-0.5, 0.5], [0.6, 1.6]]),
        default_hamiltonian="toda_svd",
        default_x0=np.array([1.25, 0.05, 0.03, 0.8]),
    )


# ---------------------------------------------------------------------------
# S^3 in the ambient punctured R^4 quaternion chart
# ---------------------------------------------------------------------------

def s3_standard() -> ModelBundle:
    """Standard multiplicative structure on the unit quaternions, ambient chart."""

    def components(p):
        x, y, z, t = p
        m = np.zeros((4, 4))
        m[0, 1] = -(z ** 2 + t ** 2)
        m[0, 2] = y * z
        m[0, 3] = y * t
        m[1, 2] = -x * z
        m[1, 3] = -x * t
        return m - m.T

    chart = ch.PoissonChart(
        dim=4,
        components=components,
        domain_guard=lambda p: float(np.dot(p, p)) > 1e-8,
        name="s3_standard",
        coord_names=("x", "y", "z", "t"),
    )

    def left_matrix(g):
        x, y, z, t = g
        return np.array([
            [x, -y, -z, -t],
            [y, x, t, -z],
            [z, -t, x, y],
            [t, z, -y, x],
        ])

    def right_matrix(g):
        x, y, z, t = g
        return np.array([
            [x, -y, -z, -t],
            [y, x, -t, z],
            [z, t, x, -y],
            [t, -z, y, x],
        ])

    group = gr.GroupModel(
        dim=4,
        multiply=lambda g, h: left_matrix(g) @ np.asarray(h, dtype=float),
        inverse=lambda g: np.array([g[0], -g[1], -g[2], -g[3]]) / float(np.dot(g, g)),
        identity=np.array([1.0, 0.0, 0.0, 0.0]),
        name="quaternions",
        jacobian_left=left_matrix,
        jacobian_right=right_matrix,
    )

    algebra = la.standard_algebra("su2_quaternion")
    cob = bl.cobracket_from_terms(algebra, [
        [],
        [],
        [(1, 2, -1.0)],  # image of e3
        [(1, 3, -1.0)],  # image of e4
    ])
    bialg = bl.make_bialgebra(algebra, cob)

    hamiltonians = {
        "zt2": ch.ScalarField(
            func=lambda p: p[2] ** 2 + p[3] ** 2,
            grad=lambda p: np.array([0.0, 0.0, 2.0 * p[2], 2.0 * p[3]]),
            name="zt2",
        )
    }
    casimirs = {
        "norm_sq": ch.ScalarField(
            func=lambda p: float(np.dot(p, p)),
            grad=lambda p: 2.0 * np.asarray(p, dtype=float),
            name="norm_sq",
        )
    }
    ground_truth = {
        "dual_modular_character": np.array([0.0, -2.0, 0.0, 0.0]),
        "symmetric_modular_field": lambda p: np.array([2.0 * p[1], -2.0 * p[0], 0.0, 0.0]),
        "adjoint_determinant": lambda g: 1.0,
        "invariant_density": lambda g: 1.0 / float(np.dot(g, g)) ** 2,
    }
    return ModelBundle(
        name="s3",
        chart=chart,
        group=group,
        bialgebra=bialg,
        hamiltonians=hamiltonians,
        casimirs=casimirs,
        ground_truth=ground_truth,
        sample_box=np.array([[-1.2, 1.2]] * 4),
        sample_guard=lambda p: float(np.dot(p, p)) > 0.16,
        default_hamiltonian="zt2",
        default_x0=np.array([0.5, 0.5, 0.5, 0.5]),
    )


# ---------------------------------------------------------------------------
# Deformed conservative Lorenz system on a 4-d solvable group
# ---------------------------------------------------------------------------

def lorenz_deformed(eta: float) -> ModelBundle:
    """Integrable deformation of a conservative Lorenz system, eta > 0."""
    if eta <= 0.0:
        raise InvalidStructure(f"deformation parameter must be positive, got {eta}")
    sq2 = np.sqrt(2.0)

    def components(p):
        x, y, z, w = p
        m = np.zeros((4, 4))
        m[0, 1] = (np.expm1(-2.0 * eta * (z + w)) + eta ** 2 * (2.0 * x ** 2 - y ** 2)) / (4.0 * eta)
        m[0, 2] = 0.5 * y
        m[1, 2] = x
        return m - m.T

    chart = ch.PoissonChart(dim=4, components=components, name="lorenz_deformed",
                            coord_names=("x", "y", "z", "w"))

    def multiply(g, h):
        x, y, z, w = g
        hx, hy, hz, hw = h
        e = np.exp(-eta * (z + w))
        c = np.cosh(eta * w / sq2)
        s = np.sinh(eta * w / sq2)
        return np.array([
            x + 0.5 * e * (2.0 * hx * c - sq2 * hy * s),
            y + e * (hy * c - sq2 * hx * s),
            z + hz,
            w + hw,
        ])

    def inverse(g):
        x, y, z, w = g
        e_inv = np.exp(eta * (z + w))
        c = np.cosh(eta * w / sq2)
        s = np.sinh(eta * w / sq2)
        return np.array([
            -(c * x + 0.5 * sq2 * s * y) * e_inv,
            -(sq2 * s * x + c * y) * e_inv,
            -z,
            -w,
        ])

    def jacobian_left(g):
        _, _, z, w = g
        e = np.exp(-eta * (z + w))
        c = np.cosh(eta * w / sq2)
        s = np.sinh(eta * w / sq2)
        return np.array([
            [e * c, -0.5 * sq2 * e * s, 0.0, 0.0],
            [-sq2 * e * s, e * c, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])

    def jacobian_right(g):
        x, y = g[0], g[1]
        return np.array([
            [1.0, 0.0, -eta * x, -eta * (x + 0.5 * y)],
            [0.0, 1.0, -eta * y, -eta * (x + y)],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])

    group = gr.GroupModel(
        dim=4,
        multiply=multiply,
        inverse=inverse,
        identity=np.zeros(4),
        name=f"b2xb2({eta})",
        jacobian_left=jacobian_left,
        jacobian_right=jacobian_right,
    )

    algebra = la.standard_algebra("b2xb2", eta)
    cob = bl.cobracket_from_terms(algebra, [
        [(1, 2, 1.0)],    # image of X: Y ^ Z
        [(0, 2, 0.5)],    # image of Y: X ^ Z / 2
        [(0, 1, -0.5)],   # image of Z: -X ^ Y / 2
        [(0, 1, -0.5)],   # image of W: -X ^ Y / 2
    ])
    bialg = bl.make_bialgebra(algebra, cob)

    hamiltonians = {
        "H": ch.ScalarField(
            func=lambda p: 2.0 * (p[2] - p[3]) - p[0] ** 2,
            grad=lambda p: np.array([-2.0 * p[0], 0.0, 2.0, -2.0]),
            name="H",
        )
    }
    casimirs = {
        "w": ch.ScalarField(func=lambda p: p[3],
                            grad=lambda p: np.array([0.0, 0.0, 0.0, 1.0]), name="w")
    }

    def ode_rhs(p):
        x, y, z, w = p
        return np.array([
            y,
            0.5 * x * (4.0 + np.expm1(-2.0 * eta * (z + w)) / eta + eta * (2.0 * x ** 2 - y ** 2)),
            x * y,
            0.0,
        ])

    def limit_components(p):
        x, y, z, w = p
        m = np.zeros((4, 4))
        m[0, 1] = -0.5 * (z + w)
        m[0, 2] = 0.5 * y
        m[1, 2] = x
        return m - m.T

    ground_truth = {
        "dual_modular_character": np.zeros(4),
        "adjoint_determinant": lambda g: float(np.exp(-2.0 * eta * (g[2] + g[3]))),
        "invariant_density": lambda g: float(np.exp(eta * (g[2] + g[3]))),
        "ode_rhs": ode_rhs,
        "limit_components": limit_components,
        "limit_ode": lambda p: np.array([p[1], p[0] * (2.0 - p[2] - p[3]), p[0] * p[1], 0.0]),
        "dual_constants": bialg.dual.constants,
    }
    return ModelBundle(
        name="lorenz",
        chart=chart,
        group=group,
        bialgebra=bialg,
        hamiltonians=hamiltonians,
        casimirs=casimirs,
        ground_truth=ground_truth,
        sample_box=np.array([[-1.2, 1.2]] * 4),
        default_hamiltonian="H",
        default_x0=np.array([0.1, 0.2, 0.3, 0.5]),
        params={"eta": eta},
    )


# ---------------------------------------------------------------------------
# Deformed Euler top on the 3-d book group, with its Poisson pencil
# ---------------------------------------------------------------------------

def euler_top_deformed(eta: float) -> ModelBundle:
    """Bi-Hamiltonian deformation of the Euler top; eta = 0 gives the linear limit."""

    def stretch(x):
        # (exp(-2 eta x) - 1) / eta with a clean eta -> 0 limit
        return np.expm1(-2.0 * eta * x) / eta if eta != 0.0 else -2.0 * x

    def cosh_term(x):
        # (cosh(eta x) - 1) / eta^2, stable near eta = 0
        return 2.0 * np.sinh(0.5 * eta * x) ** 2 / eta ** 2 if eta != 0.0 else 0.5 * x ** 2

    def sinh_term(x):
        return np.sinh(eta * x) / eta if eta != 0.0 else x

    def components0(p):
        x, y, z = p
        m = np.zeros((3, 3))
        m[0, 1] = -z
        m[0, 2] = y
        m[1, 2] = 0.5 * (-eta * (y ** 2 + z ** 2) + stretch(x))
        return m - m.T

    def components1(p):
        x, y, z = p
        m = np.zeros((3, 3))
        m[0, 1] = -y
        m[0, 2] = z
        m[1, 2] = -eta * y * z + stretch(x)
        return m - m.T

    chart0 = ch.PoissonChart(dim=3, components=components0, name="euler_top_pi0",
                             coord_names=("x", "y", "z"))
    chart1 = ch.PoissonChart(dim=3, components=components1, name="euler_top_pi1",
                             coord_names=("x", "y", "z"))

    group = gr.GroupModel(
        dim=3,
        multiply=lambda g, h: np.array([
            g[0] + h[0],
            g[1] + h[1] * np.exp(-eta * g[0]),
            g[2] + h[2] * np.exp(-eta * g[0]),
        ]),
        inverse=lambda g: np.array([-g[0], -g[1] * np.exp(eta * g[0]), -g[2] * np.exp(eta * g[0])]),
        identity=np.zeros(3),
        name=f"book({eta})",
        jacobian_left=lambda g: np.diag([1.0, np.exp(-eta * g[0]), np.exp(-eta * g[0])]),
        jacobian_right=lambda g: np.array([
            [1.0, 0.0, 0.0],
            [-eta * g[1], 1.0, 0.0],
            [-eta * g[2], 0.0, 1.0],
        ]),
    )

    algebra = la.standard_algebra("book", eta)
    cob0 = bl.cobracket_from_terms(algebra, [
        [(1, 2, -1.0)],  # image of X: -Y ^ Z
        [(0, 2, 1.0)],   # image of Y: X ^ Z
        [(0, 1, -1.0)],  # image of Z: -X ^ Y
    ])
    cob1 = bl.cobracket_from_terms(algebra, [
        [(1, 2, -2.0)],
        [(0, 1, -1.0)],
        [(0, 2, 1.0)],
    ])
    bialg0 = bl.make_bialgebra(algebra, cob0)
    bialg1 = bl.make_bialgebra(algebra, cob1)

    hamiltonians = {
        "H0": ch.ScalarField(
            func=lambda p: p[1] * p[2] * np.exp(eta * p[0]) + 2.0 * cosh_term(p[0]),
            grad=lambda p: np.array([
                eta * p[1] * p[2] * np.exp(eta * p[0]) + 2.0 * sinh_term(p[0]),
                p[2] * np.exp(eta * p[0]),
                p[1] * np.exp(eta * p[0]),
            ]),
            name="H0",
        ),
        "H1": ch.ScalarField(
            func=lambda p: -0.5 * (p[1] ** 2 + p[2] ** 2) * np.exp(eta * p[0]) - cosh_term(p[0]),
            grad=lambda p: np.array([
                -0.5 * eta * (p[1] ** 2 + p[2] ** 2) * np.exp(eta * p[0]) - sinh_term(p[0]),
                -p[1] * np.exp(eta * p[0]),
                -p[2] * np.exp(eta * p[0]),
            ]),
            name="H1",
        ),
    }

    def ode_rhs(p):
        x, y, z = p
        e = np.exp(eta * x)
        return np.array([
            e * (y ** 2 - z ** 2),
            eta * e * y * z ** 2 - 0.5 * eta * e * y * (y ** 2 + z ** 2) + sinh_term(x) * (2.0 * z - y),
            -eta * e * y ** 2 * z + 0.5 * eta * e * z * (y ** 2 + z ** 2) + sinh_term(x) * (z - 2.0 * y),
        ])

    def limit_components0(p):
        x, y, z = p
        m = np.zeros((3, 3))
        m[0, 1] = -z
        m[0, 2] = y
        m[1, 2] = -x
        return m - m.T

    def limit_components1(p):
        x, y, z = p
        m = np.zeros((3, 3))
        m[0, 1] = -y
        m[0, 2] = z
        m[1, 2] = -2.0 * x
        return m - m.T

    ground_truth = {
        "dual_modular_character": np.zeros(3),
        "adjoint_determinant": lambda g: float(np.exp(-2.0 * eta * g[0])),
        "invariant_density": lambda g: float(np.exp(eta * g[0])),
        "ode_rhs": ode_rhs,
        "limit_ode": lambda p: np.array([
            p[1] ** 2 - p[2] ** 2,
            p[0] * (2.0 * p[2] - p[1]),
            p[0] * (p[2] - 2.0 * p[1]),
        ]),
        "limit_components_pi0": limit_components0,
        "limit_components_pi1": limit_components1,
        "limit_hamiltonians": {
            "H0": lambda p: p[0] ** 2 + p[1] * p[2],
            "H1": lambda p: -0.5 * float(np.dot(p, p)),
        },
        "dual_constants_pi0": bialg0.dual.constants,
        "dual_constants_pi1": bialg1.dual.constants,
    }
    return ModelBundle(
        name="eulertop",
        chart=chart0,
        group=group,
        bialgebra=bialg0,
        hamiltonians=hamiltonians,
        ground_truth=ground_truth,
        extra_structures={"pi1": (chart1, bialg1)},
        sample_box=np.array([[-1.2, 1.2]] * 3),
        default_hamiltonian="H0",
        default_x0=np.array([0.25, 0.4, 0.3]),
        params={"eta": eta},
    )


# ---------------------------------------------------------------------------
# Linear (Lie-Poisson) models on the dual of an algebra
# ---------------------------------------------------------------------------

def lie_poisson_model(algebra: la.LieAlgebra, imatrix, casimirs: dict | None = None) -> ModelBundle:
    """Quadratic Hamiltonian H(x) = x.I.x / 2 on the linear chart of the algebra's dual."""
    imatrix = np.asarray(imatrix, dtype=float)
    n = algebra.dim
    if imatrix.shape != (n, n):
        raise InvalidStructure(f"quadratic form must be {n}x{n}, got {imatrix.shape}")
    if float(np.max(np.abs(imatrix - imatrix.T))) > 1e-12:
        raise InvalidStructure("quadratic form must be symmetric")
    chart = ch.lie_poisson_chart(algebra)
    group = gr.GroupModel(
        dim=n,
        multiply=lambda g, h: np.asarray(g, dtype=float) + np.asarray(h, dtype=float),
        inverse=lambda g: -np.asarray(g, dtype=float),
        identity=np.zeros(n),
        name=f"abelian({n})",
        jacobian_left=lambda g: np.eye(n),
        jacobian_right=lambda g: np.eye(n),
    )
    # the primal algebra of the abelian group is trivial; the chart's linear
    # part is exactly the cobracket, so the dual recovers the input algebra
    abelian = la.standard_algebra("abelian", n)
    cob = bl.Cobracket(base=abelian, delta=np.array(algebra.constants))
    bialg = bl.make_bialgebra(abelian, cob)
    hamiltonians = {
        "quadratic": ch.ScalarField(
            func=lambda x: 0.5 * float(x @ imatrix @ x),
            grad=lambda x: imatrix @ x,
            name="quadratic",
        )
    }
    verdict = bl.unimodularity_verdict(bialg)
    ground_truth = {
        "dual_modular_character": np.array(verdict["dual_modular_character"]),
        "adjoint_determinant": lambda g: 1.0,
        "invariant_density": lambda g: 1.0,
    }
    return ModelBundle(
        name="liepoisson",
        chart=chart,
        group=group,
        bialgebra=bialg,
        hamiltonians=hamiltonians,
        casimirs=dict(casimirs or {}),
        ground_truth=ground_truth,
        sample_box=np.array([[-1.5, 1.5]] * n),
        default_hamiltonian="quadratic",
        default_x0=np.full(n, 0.5) + 0.1 * np.arange(n),
        params={"algebra": ",".join(algebra.labels)},
    )


def _sum_sq_casimir(n):
    return ch.ScalarField(
        func=lambda x: float(np.dot(x, x)),
        grad=lambda x: 2.0 * np.asarray(x, dtype=float),
        name="sum_sq",
    )


def parse_algebra_token(token: str, eta: float | None = None) -> la.LieAlgebra:
    """Resolve CLI algebra names like so3, sl2, abelian3, book, b2xb2."""
    named = {"so3", "sl2", "affine2d", "su2_quaternion", "gl2_sklyanin"}
    if token in named:
        return la.standard_algebra(token)
    if token in {"book", "b2xb2"}:
        return la.standard_algebra(token, 1.0 if eta is None else eta)
    if token.startswith("abelian") and token[len("abelian"):].isdigit():
        return la.standard_algebra("abelian", int(token[len("abelian"):]))
    raise InvalidStructure(f"unknown algebra {token!r}")


def build_model(model_id: str, eta: float | None = None, algebra: str | None = None,
                quad: np.ndarray | None = None) -> ModelBundle:
    """CLI-facing model registry; ids: sl2r, s3, lorenz, eulertop, liepoisson."""
    if model_id == "sl2r":
        return sl2r_sklyanin()
    if model_id == "s3":
        return s3_standard()
    if model_id == "lorenz":
        return lorenz_deformed(0.3 if eta is None else eta)
    if model_id == "eulertop":
        return euler_top_deformed(0.3 if eta is None else eta)
    if model_id == "liepoisson":
        token = algebra or "so3"
        alg = parse_algebra_token(token, eta)
        imatrix = np.eye(alg.dim) if quad is None else quad
        casimirs = {"sum_sq": _sum_sq_casimir(alg.dim)} if token == "so3" else None
        return lie_poisson_model(alg, imatrix, casimirs)
    raise InvalidStructure(f"unknown model {model_id!r}; "
                           "expected one of sl2r, s3, lorenz, eulertop, liepoisson")


# ---------------------------------------------------------------------------
# Bundle validation and ground-truth comparison
# ---------------------------------------------------------------------------

def chart_cobracket_residual(bundle: ModelBundle, chart: ch.PoissonChart | None = None,
                             bialg: bl.LieBialgebra | None = None) -> float:
    """Max deviation between the chart's linearization at e and the declared cobracket.

    The bivector differential at the identity, pushed to the algebra basis,
    must reproduce the cobracket components: the chart and the bialgebra then
    describe the same multiplicative structure.
    """
    chart = chart or bundle.chart
    bialg = bialg or bundle.bialgebra
    if bundle.group is None or bialg is None:
        return 0.0
    gm = bundle.group
    e = gm.identity
    from . import ndiff
    h = ndiff.steps(e)
    d_components = np.empty((gm.dim, gm.dim, gm.dim))
    for k in range(gm.dim):
        step = np.zeros(gm.dim)
        step[k] = h[k]
        d_components[k] = (np.asarray(chart.components(e + step), dtype=float)
                           - np.asarray(chart.components(e - step), dtype=float)) / (2.0 * h[k])
    basis = gm.basis_at_identity
    basis_inv = np.linalg.inv(basis)
    worst = 0.0
    for a in range(gm.dim):
        w_chart = np.einsum("kij,k->ij", d_components, basis[:, a])
        w_alg = basis_inv @ w_chart @ basis_inv.T
        worst = max(worst, float(np.max(np.abs(w_alg - bialg.cobracket.delta[a]))))
    return worst


def validate_bundle(bundle: ModelBundle, rng: np.random.Generator | None = None,
                    n_points: int = 100, jacobi_tol: float = 1e-6,
                    casimir_tol: float = 1e-9) -> dict:
    """Run the structural invariants of a bundle; raise on failure.

    Checks chart antisymmetry and Jacobi residuals on guarded random points,
    Casimir residuals, group axioms, analytic gradients, and the consistency
    of the chart with the declared cobracket.
    """
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    points = sample_points(bundle, rng, n_points)
    report: dict = {"model": bundle.name}

    structures = [("", bundle.chart, bundle.bialgebra)]
    structures += [(name, chart, bialg) for name, (chart, bialg) in bundle.extra_structures.items()]
    for suffix, chart, bialg in structures:
        tag = f"jacobi{('_' + suffix) if suffix else ''}"
        worst_jac = 0.0
        worst_anti = 0.0
        for x in points:
            m = np.asarray(chart.components(x), dtype=float)
            worst_anti = max(worst_anti, float(np.max(np.abs(m + m.T))))
            worst_jac = max(worst_jac, ch.jacobi_residual(chart, x))
        report[tag] = worst_jac
        if worst_anti > 1e-12:
            raise InvalidStructure(f"{bundle.name}: bivector not antisymmetric, residual {worst_anti:.3e}")
        if worst_jac > jacobi_tol:
            raise InvalidStructure(f"{bundle.name}: Jacobi residual {worst_jac:.3e} exceeds {jacobi_tol:.1e}")
        if bundle.group is not None and bialg is not None:
            res = chart_cobracket_residual(bundle, chart, bialg)
            report[f"cobracket{('_' + suffix) if suffix else ''}"] = res
            if res > 1e-5:
                raise InvalidStructure(f"{bundle.name}: chart/cobracket mismatch {res:.3e}")

    for name, cas in bundle.casimirs.items():
        res = ch.casimir_residual(bundle.chart, cas, points[:50])
        report[f"casimir_{name}"] = res
        if res > casimir_tol:
            raise InvalidStructure(f"{bundle.name}: Casimir {name!r} residual {res:.3e} exceeds {casimir_tol:.1e}")

    if bundle.group is not None:
        axioms = gr.group_axiom_residuals(bundle.group, points[:20])
        report.update({f"group_{k}": v for k, v in axioms.items()})
        if axioms["identity"] > 1e-10 or axioms["inverse"] > 1e-8 or axioms["associativity"] > 1e-8:
            raise InvalidStructure(f"{bundle.name}: group axioms violated: {axioms}")

    for name, ham in bundle.hamiltonians.items():
        ham.gradient_check(points[:10])
    for name, cas in bundle.casimirs.items():
        cas.gradient_check(points[:10])
    return report


def ground_truth_report(bundle: ModelBundle, rng: np.random.Generator | None = None,
                        n_points: int = 50) -> dict:
    """Residuals of every closed-form ground-truth entry against the numeric path."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    points = sample_points(bundle, rng, n_points)
    gm, bialg = bundle.group, bundle.bialgebra
    out: dict = {}
    gt = bundle.ground_truth

    if "dual_modular_character" in gt and bialg is not None:
        verdict = bl.unimodularity_verdict(bialg)
        out["dual_modular_character"] = float(np.max(np.abs(
            verdict["dual_modular_character"] - np.asarray(gt["dual_modular_character"]))))

    if "adjoint_determinant" in gt and gm is not None:
        worst = 0.0
        for x in points:
            ref = gt["adjoint_determinant"](x)
            worst = max(worst, abs(gr.adjoint_determinant(gm, x) - ref) / max(abs(ref), 1e-30))
        out["adjoint_determinant"] = worst

    if "invariant_density" in gt and gm is not None:
        vol = mo.invariant_volume(gm)
        worst = 0.0
        for x in points:
            ref = gt["invariant_density"](x)
            worst = max(worst, abs(vol.density(x) - ref) / max(abs(ref), 1e-30))
        out["invariant_density"] = worst

    if "symmetric_modular_field" in gt and gm is not None and bialg is not None:
        field_eval = mo.dual_character_field(gm, bialg, half=True)
        worst = 0.0
        for x in points:
            worst = max(worst, float(np.max(np.abs(field_eval(x) - gt["symmetric_modular_field"](x)))))
        out["symmetric_modular_field"] = worst

    if "ode_rhs" in gt:
        field_eval = ch.hamiltonian_field(bundle.chart, bundle.hamiltonian())
        worst = 0.0
        for x in points:
            worst = max(worst, float(np.max(np.abs(field_eval(x) - gt["ode_rhs"](x)))))
        out["ode_rhs"] = worst

    return out


# ---------------------------------------------------------------------------
# Config-file loading
# ---------------------------------------------------------------------------

def from_config(path) -> ModelBundle:
    """Build and validate a bundle from a JSON config file.

    Two layouts are supported: a custom chart ("coordinates" + "bivector",
    optionally "group", "algebra" and "r"/"delta"), or a pure linear model
    ("algebra" alone, placed on the dual space with the abelian group).
    """
    with open(path, "r", encoding="utf-8") as handle:
        try:
            spec = json.load(handle)
        except json.JSONDecodeError as exc:
            raise InvalidStructure(f"config parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None

    name = spec.get("name", "config")
    algebra = la.algebra_from_spec(spec["algebra"]) if "algebra" in spec else None

    if "bivector" in spec:
        bundle = _bundle_from_chart_spec(spec, name, algebra)
    elif algebra is not None:
        imatrix = np.asarray(spec.get("quadratic_form", np.eye(algebra.dim)), dtype=float)
        bundle = lie_poisson_model(algebra, imatrix)
        bundle = _replace(bundle, name=name)
    else:
        raise InvalidStructure("config needs a 'bivector' section or an 'algebra' section")

    validate_bundle(bundle, np.random.default_rng(DEFAULT_SEED), n_points=60)
    return bundle


def _replace(bundle: ModelBundle, **kwargs) -> ModelBundle:
    import dataclasses
    return dataclasses.replace(bundle, **kwargs)


def _cobracket_from_spec(spec: dict, algebra: la.LieAlgebra):
    r_mv = None
    cob = None
    if "r" in spec:
        r_mv = la.multivector_from_terms(algebra.dim, 2,
                                         [(int(i), int(j), float(c)) for i, j, c in spec["r"]])
        cob = bl.cobracket_from_r(algebra, r_mv)
    if "delta" in spec:
        terms = [[(int(i), int(j), float(c)) for i, j, c in gen] for gen in spec["delta"]]
        declared = bl.cobracket_from_terms(algebra, terms)
        if cob is not None:
            gap = float(np.max(np.abs(declared.delta - cob.delta)))
            if gap > 1e-10:
                raise InvalidStructure(f"'r' and 'delta' disagree: max component gap {gap:.3e}")
        cob = declared
    if cob is None:
        return None, None
    return bl.make_bialgebra(algebra, cob, r=r_mv), r_mv


def _bundle_from_chart_spec(spec: dict, name: str, algebra) -> ModelBundle:
    coords = [str(c) for c in spec["coordinates"]]
    dim = len(coords)
    index = {c: i for i, c in enumerate(coords)}

    entries = []
    for ci, cj, expr in spec["bivector"]:
        if ci not in index or cj not in index:
            raise InvalidStructure(f"bivector entry names unknown coordinates ({ci}, {cj})")
        entries.append((index[ci], index[cj], compile_point_function(expr, coords)))

    def components(x):
        m = np.zeros((dim, dim))
        for i, j, fn in entries:
            m[i, j] += fn(x)
        return m - m.T

    guard = None
    if "domain_guard" in spec:
        guard_fn = compile_point_function(spec["domain_guard"], coords)
        guard = lambda x: guard_fn(x) > 0.0  # noqa: E731

    chart = ch.PoissonChart(
        dim=dim,
        components=components,
        domain_guard=guard or (lambda x: True),
        name=name,
        coord_names=tuple(coords),
    )

    group = None
    if "group" in spec:
        gspec = spec["group"]
        mult_fns = [compile_two_point_function(e, coords) for e in gspec["multiply"]]
        inv_fns = [compile_point_function(e, coords) for e in gspec["inverse"]]
        if len(mult_fns) != dim or len(inv_fns) != dim:
            raise InvalidStructure("group multiply/inverse must give one expression per coordinate")
        identity = np.asarray(gspec["identity"], dtype=float)
        basis = np.asarray(spec["basis_at_identity"], dtype=float) if "basis_at_identity" in spec else None
        group = gr.GroupModel(
            dim=dim,
            multiply=lambda g, h: np.array([fn(g, h) for fn in mult_fns]),
            inverse=lambda g: np.array([fn(g) for fn in inv_fns]),
            identity=identity,
            name=f"{name}_group",
            basis_at_identity=basis,
        )

    bialg, _ = (None, None)
    if algebra is not None:
        bialg, _ = _cobracket_from_spec(spec, algebra)

    hamiltonians = {
        str(k): ch.ScalarField(func=compile_point_function(v, coords), name=str(k))
        for k, v in spec.get("hamiltonians", {}).items()
    }
    casimirs = {
        str(k): ch.ScalarField(func=compile_point_function(v, coords), name=str(k))
        for k, v in spec.get("casimirs", {}).items()
    }
    box = np.asarray(spec.get("sample_box", [[-1.0, 1.0]] * dim), dtype=float)
    x0 = np.asarray(spec["default_x0"], dtype=float) if "default_x0" in spec else None
    return ModelBundle(
        name=name,
        chart=chart,
        group=group,
        bialgebra=bialg,
        hamiltonians=hamiltonians,
        casimirs=casimirs,
        sample_box=box,
        default_hamiltonian=spec.get("default_hamiltonian", next(iter(hamiltonians), "")),
        default_x0=x0,
    )
