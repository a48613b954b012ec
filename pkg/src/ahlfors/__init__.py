"""Numerical conformal mapping of two-connected planar domains onto the
canonical family A_r = {z : |z + 1/z| < 2r}, built on boundary integral
equations for the Szego kernel, plus explicit algebraic Bergman kernels
for A_r and their pullbacks."""

from .errors import (
    AccuracyError,
    AhlforsError,
    BranchCutError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
    GeometryError,
    NearBoundaryError,
    ParseError,
    SingularityError,
)
from .geometry import (
    Curve,
    QuadratureGrid,
    TwoConnectedDomain,
    boundary_derivative,
    build_domain,
    cauchy_eval,
    cauchy_transform,
    domain_to_spec,
    parse_domain_spec,
    winding_count,
)
from .elliptic import complete_elliptic_k, jacobi_cn_dn, jacobi_sn
from .repdomain import (
    AnnulusModel,
    ar_boundary,
    joukowsky,
    joukowsky_inverse,
    psi,
    psi_derivative,
    r_from_rho,
    rho_from_r,
    slit_parameters,
)
from .szego import (
    AhlforsMap,
    BranchPair,
    SzegoSolution,
    ahlfors_map,
    branch_points,
    preimages,
    solve_szego,
    szego_zero,
)
from .pipeline import (
    ConformalMapPhi,
    MapParameters,
    MedianPolyline,
    PipelineResult,
    build_phi,
    map_parameters,
    modulus,
    run_pipeline,
    select_base_point,
    trace_median,
)
from .kernels import (
    KernelConstants,
    ahlfors_at_one,
    annulus_bergman,
    bergman_ar,
    bergman_omega,
    fit_constants,
    kr_blocks,
    phi_derivative,
    q_rational,
)

__all__ = [
    "AccuracyError",
    "AhlforsError",
    "AhlforsMap",
    "AnnulusModel",
    "BranchCutError",
    "BranchPair",
    "ConformalMapPhi",
    "ConvergenceError",
    "Curve",
    "DegeneracyError",
    "DomainError",
    "GeometryError",
    "KernelConstants",
    "MapParameters",
    "MedianPolyline",
    "NearBoundaryError",
    "ParseError",
    "PipelineResult",
    "QuadratureGrid",
    "SingularityError",
    "SzegoSolution",
    "TwoConnectedDomain",
    "ahlfors_at_one",
    "ahlfors_map",
    "annulus_bergman",
    "ar_boundary",
    "bergman_ar",
    "bergman_omega",
    "boundary_derivative",
    "branch_points",
    "build_domain",
    "build_phi",
    "cauchy_eval",
    "cauchy_transform",
    "complete_elliptic_k",
    "domain_to_spec",
    "fit_constants",
    "jacobi_cn_dn",
    "jacobi_sn",
    "joukowsky",
    "joukowsky_inverse",
    "kr_blocks",
    "map_parameters",
    "modulus",
    "parse_domain_spec",
    "phi_derivative",
    "preimages",
    "psi",
    "psi_derivative",
    "q_rational",
    "r_from_rho",
    "rho_from_r",
    "run_pipeline",
    "select_base_point",
    "slit_parameters",
    "solve_szego",
    "szego_zero",
    "trace_median",
    "winding_count",
]

__version__ = "0.1.0"
