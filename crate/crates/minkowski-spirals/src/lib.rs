//! Spiral curves in Minkowski 3-space: synthesis, integration, estimation,
//! and classification.
//!
//! The ambient space is ℝ³ with the indefinite inner product
//! `⟨u,v⟩ = uₓvₓ + u_yv_y − u_zv_z` (signature `++-`). Curves are handled
//! as uniform arc-length samples of position plus Frenet frame
//! ([`curve::SampledCurve`]), produced either by quadrature of planar
//! spirals ([`planar`]) or by integrating the Frenet system for arbitrary
//! curvature/torsion profiles ([`integrator`]), and consumed by a
//! finite-difference estimator ([`mod@estimate`]) and a family classifier with
//! the theorem-level constructions — Bertrand mates, Darboux and
//! reciprocal fields, involute offsets, developable ruled surfaces
//! ([`mod@classify`]).
//!
//! Profiles κ(s), τ(s) are parsed from a small expression language
//! ([`profile`]) and fitted back from data with least squares ([`fit`]);
//! [`lorentz`] carries the metric primitives and [`quadrature`] the
//! adaptive integration everything rests on.

pub mod classify;
pub mod curve;
pub mod estimate;
pub mod fit;
pub mod integrator;
pub mod lorentz;
pub mod planar;
pub mod profile;
pub mod quadrature;

pub use classify::{
    bertrand_coefficients, bertrand_mate, classify, classify_samples, classify_with_tolerance,
    darboux_curve, developability_residual, involute_identity_rhs, involute_offset_curve,
    normal_inner_products, parallel_to_normal_residual, u_curve, ClassificationReport,
    ClassifyError, RuledSurfaceSpec, DEFAULT_THEOREM_TOLERANCE,
};
pub use curve::{CurveCase, CurveError, CurveSample, FrenetFrame, SampledCurve};
pub use estimate::{estimate, estimate_curve, EstimateError, EstimatedData, EstimatedSample};
pub use fit::{
    fit_linear, fit_ratio_rational_linear, FitError, LinearFit, RatioFit, DEFAULT_FIT_TOLERANCE,
};
pub use integrator::{integrate_default, IntegrateError};
pub use lorentz::{
    causal_character, euclidean_line_angle, lorentz_cross, lorentz_dot, lorentz_normalize,
    CausalCharacter, LVec3, LorentzError,
};
pub use planar::{
    generate_spacelike_planar, generate_timelike_planar, turning_angle, GenerateError,
    PlanarKind, PlanarSpiralSpec,
};
pub use profile::{
    canonicalize, eval_profile, parse_profile, CanonicalForm, EvalError, ParseError,
    ParseErrorKind, ProfileExpr,
};
pub use quadrature::QuadratureError;
