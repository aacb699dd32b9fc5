"""minvar: numerical verification of screw-invariant minimal submanifolds.

The package builds explicit parametrized immersions for a family of
generalized helicoids, Clifford tori and multi-ray cones, and certifies their
defining properties numerically: vanishing mean curvature, torus frame
identities, metric determinant factorization, sphere/cone minimality
equivalence, and the six-term cancellation behind the helicoid minimality
proof.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    BranchLocusError,
    ChartDomainError,
    DegenerateMetric,
    DimensionMismatch,
    DomainError,
    MinvarError,
    NotSpherical,
    SamplingExhausted,
    SpecError,
)
from .jets import Jet2, StepPolicy, fd_jet, jet_eval, variables
from .geometry import (
    Immersion,
    MeanCurvatureEval,
    MetricEval,
    PointEval,
    coordinate_laplacian,
    laplace_beltrami,
    laplace_from_pointeval,
    mean_curvature,
    metric,
    metric_derivative,
    sphere_minimality_residual,
)
from .charts import (
    CliffordBlock,
    CliffordFrame,
    SphereChart,
    apply_complex_structure,
    clifford_frame,
)
from .families import (
    BDJ,
    ChoeHoppe,
    CliffordCone,
    CliffordTorus,
    Cylinder,
    GenHelicoidA,
    GenHelicoidB,
    HarveyLawsonCone,
    LatitudeCircle,
    LawsonSurface,
    LRaysCliffordCone,
    LRaysCone,
    PitchVector,
    SPHERICAL_KINDS,
    ScrewData,
    SphericalJoin,
    SphericalSlice,
    build_immersion,
    choe_hoppe_graph_function,
    choe_hoppe_graph_residual,
    is_negative_control,
    lands_on_unit_sphere,
    scaling_indices,
    screw_action,
    screw_data,
    spec_dimensions,
    spec_from_json,
    spec_to_json,
    standard_block,
    standard_chart,
)
from .identities import (
    AxialHarmonicity,
    HelicoidAlgebra,
    LemmaResiduals,
    ProofTerms,
    helicoid_algebra,
    lemma_magic_residuals,
    pairing_derivative_defect,
    proof_terms,
    theta_harmonicity,
)
from .harness import (
    CheckResult,
    SamplePlan,
    TakahashiReport,
    TolerancePolicy,
    VerificationReport,
    default_campaign,
    report_from_json,
    sample_points,
    takahashi_equivalence,
    verify_cone_scaling,
    verify_minimality,
    verify_screw_invariance,
)
from .mesh import MeshData, obj_text, resolve_projection, tessellate, write_obj

__all__ = [
    "__version__",
    # errors
    "MinvarError",
    "DomainError",
    "DegenerateMetric",
    "NotSpherical",
    "ChartDomainError",
    "BranchLocusError",
    "DimensionMismatch",
    "SpecError",
    "SamplingExhausted",
    # jets
    "Jet2",
    "StepPolicy",
    "fd_jet",
    "jet_eval",
    "variables",
    # geometry
    "Immersion",
    "PointEval",
    "MetricEval",
    "MeanCurvatureEval",
    "metric",
    "metric_derivative",
    "laplace_beltrami",
    "laplace_from_pointeval",
    "coordinate_laplacian",
    "mean_curvature",
    "sphere_minimality_residual",
    # charts
    "SphereChart",
    "CliffordBlock",
    "CliffordFrame",
    "clifford_frame",
    "apply_complex_structure",
    # families
    "PitchVector",
    "CliffordTorus",
    "CliffordCone",
    "LRaysCone",
    "LRaysCliffordCone",
    "SphericalJoin",
    "GenHelicoidA",
    "GenHelicoidB",
    "ChoeHoppe",
    "BDJ",
    "LawsonSurface",
    "HarveyLawsonCone",
    "SphericalSlice",
    "LatitudeCircle",
    "Cylinder",
    "SPHERICAL_KINDS",
    "ScrewData",
    "build_immersion",
    "choe_hoppe_graph_function",
    "choe_hoppe_graph_residual",
    "spec_dimensions",
    "spec_to_json",
    "spec_from_json",
    "standard_chart",
    "standard_block",
    "screw_action",
    "screw_data",
    "scaling_indices",
    "lands_on_unit_sphere",
    "is_negative_control",
    # identities
    "LemmaResiduals",
    "HelicoidAlgebra",
    "AxialHarmonicity",
    "ProofTerms",
    "lemma_magic_residuals",
    "pairing_derivative_defect",
    "helicoid_algebra",
    "theta_harmonicity",
    "proof_terms",
    # harness
    "SamplePlan",
    "TolerancePolicy",
    "CheckResult",
    "VerificationReport",
    "TakahashiReport",
    "sample_points",
    "verify_minimality",
    "verify_screw_invariance",
    "verify_cone_scaling",
    "takahashi_equivalence",
    "default_campaign",
    "report_from_json",
    # mesh
    "MeshData",
    "tessellate",
    "obj_text",
    "write_obj",
    "resolve_projection",
]
