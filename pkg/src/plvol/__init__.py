"""Unimodularity and invariant-volume diagnostics for Poisson-Lie groups.

The library decides whether a multiplicative Poisson structure admits a
volume form preserved by every Hamiltonian flow (the dual Lie algebra must
be unimodular), constructs the canonical invariant volume when it exists,
and quantifies volume transport along integrated trajectories.
"""

from .bialgebra import (
    Cobracket,
    LieBialgebra,
    bialgebra_from_r,
    cobracket_from_r,
    cobracket_from_terms,
    cocycle_residual,
    dual_algebra,
    make_bialgebra,
    unimodularity_verdict,
    yang_baxter_residual,
)
from .charts import (
    PoissonChart,
    ScalarField,
    casimir_residual,
    hamiltonian_field,
    jacobi_residual,
    lie_poisson_chart,
    pencil,
    poisson_bracket,
    random_polynomial,
    sharp,
)
from .dynamics import DriftReport, Trajectory, integral_drift, integrate, volume_drift
from .errors import DomainExit, DomainViolation, InvalidStructure
from .groups import (
    GroupModel,
    VolumeForm,
    adjoint_determinant,
    adjoint_matrix,
    invariant_field,
    lebesgue,
    left_volume_density,
    translation_jacobian,
)
from .liealg import (
    LieAlgebra,
    Multivector,
    ad_matrix,
    algebra_from_spec,
    basis_multivector,
    bracket,
    make_algebra,
    modular_character,
    multivector_from_terms,
    schouten,
    standard_algebra,
)
from .models import (
    ModelBundle,
    build_model,
    euler_top_deformed,
    from_config,
    lie_poisson_model,
    lorenz_deformed,
    s3_standard,
    sample_points,
    sl2r_sklyanin,
    validate_bundle,
)
from .modular import (
    MorseReport,
    conformal_shift_residual,
    divergence,
    dual_character_field,
    invariant_volume,
    left_volume_modular_field,
    log_sqrt_adjoint_determinant,
    modular_field,
    morse_report,
    morse_verdict,
    singular_point_obstruction,
    volume_preservation_residual,
)

__version__ = "0.1.0"
