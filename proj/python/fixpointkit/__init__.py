"""Sampled condition checks, scale scans and fixed-point drivers for
nonexpansive mappings.

The heavy lifting lives in the compiled extension ``fixpointkit._core``;
this package re-exports its public surface.
"""

from ._core import (
    Annulus,
    Ball,
    Certificate,
    ConditionSpec,
    ConvergenceError,
    Counterexample,
    CurvePoint,
    DomainError,
    Error,
    EtaSchedule,
    FixedPointResult,
    Mapping,
    ParamError,
    Point,
    ProbeResult,
    ProbeStep,
    ResolventResult,
    SamplerError,
    SolverTrace,
    Space,
    StructureError,
    TraceStep,
    VerificationReport,
    c4_schedule_from_c2,
    catalog,
    catalog_names,
    certify_c6_from_fixed_point,
    check_nonexpansive,
    curve_to_csv,
    default_resolvent_schedule,
    derive_c1_from_c2,
    derive_c3_from_c4,
    derive_c4_from_c2,
    find_fixed_point,
    gap_curve,
    invariant_ball,
    lin_comb,
    point_norm,
    pointwise_margin,
    ratio_curve,
    residual_infimum_probe,
    resolvent,
    universal_bases,
    verify_condition,
    verify_invariance,
)

__all__ = [
    "Annulus",
    "Ball",
    "Certificate",
    "ConditionSpec",
    "ConvergenceError",
    "Counterexample",
    "CurvePoint",
    "DomainError",
    "Error",
    "EtaSchedule",
    "FixedPointResult",
    "Mapping",
    "ParamError",
    "Point",
    "ProbeResult",
    "ProbeStep",
    "ResolventResult",
    "SamplerError",
    "SolverTrace",
    "Space",
    "StructureError",
    "TraceStep",
    "VerificationReport",
    "c4_schedule_from_c2",
    "catalog",
    "catalog_names",
    "certify_c6_from_fixed_point",
    "check_nonexpansive",
    "curve_to_csv",
    "default_resolvent_schedule",
    "derive_c1_from_c2",
    "derive_c3_from_c4",
    "derive_c4_from_c2",
    "find_fixed_point",
    "gap_curve",
    "invariant_ball",
    "lin_comb",
    "point_norm",
    "pointwise_margin",
    "ratio_curve",
    "residual_infimum_probe",
    "resolvent",
    "universal_bases",
    "verify_condition",
    "verify_invariance",
]

__version__ = "0.1.0"
