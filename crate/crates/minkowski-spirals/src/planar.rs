//! Closed-form planar spiral generators via turning-angle quadrature.
//!
//! A planar curve with prescribed signed curvature κ(s) is recovered from
//! its turning angle `φ(s) = ∫ κ(u) du` — here a *hyperbolic* angle, because
//! the generating planes are Lorentzian:
//!
//! * **Timelike generator** (plane ⟨e₂,e₃⟩): `β(s) = (0, ∫ sinh φ, ∫ cosh φ)`
//!   with tangent `(0, sinh φ, cosh φ)`, so `y′² − z′² = −1` identically and
//!   the curve is unit-speed timelike for *any* κ — regularity is free.
//! * **Spacelike generator** (plane ⟨e₁,e₃⟩): `α(s) = (∫ cosh φ, 0, ∫ sinh φ)`
//!   with tangent `(cosh φ, 0, sinh φ)`, so `x′² − z′² = 1` identically. Its
//!   principal normal `(sinh φ, 0, cosh φ)` is timelike.
//!
//! The component order is fixed by the derivative relations above: only
//! `β′ = (0, sinh φ, cosh φ)` gives `⟨β′,β′⟩ = −1`, and only
//! `α′ = (cosh φ, 0, sinh φ)` gives `⟨α′,α′⟩ = +1`.
//!
//! Both generators emit exact frames: T, N are hyperbolic-trig expressions
//! of φ and B is a constant unit vector, so the only numerical error in the
//! output is the quadrature error in φ and in the position integrals
//! (bounded by [`PANEL_TOLERANCE`] per grid panel).
//!
//! The frames use the *signed*-curvature convention: N is the fixed
//! hyperbolic rotation of T by a quarter turn and κ keeps its sign, so
//! `T′ = κN` holds with a frame that stays smooth through inflections
//! (κ = 0). Along arcs with κ > 0 this agrees with the nonnegative-curvature
//! Frenet convention used by the estimators.

use thiserror::Error;

use crate::curve::{CurveCase, CurveError, CurveSample, FrenetFrame, SampledCurve};
use crate::lorentz::LVec3;
use crate::profile::{eval_profile, EvalError, ProfileExpr};
use crate::quadrature::{cumulative, integrate, QuadratureError, DEFAULT_QUAD_TOLERANCE};

/// Absolute quadrature tolerance per grid panel. Tighter than the
/// one-shot default because downstream finite-difference estimators divide
/// local position error by step² — at step 1e−3 a 1e−12 panel error
/// contributes ~1e−6 to estimated curvature, safely inside the 1e−4 budget.
pub const PANEL_TOLERANCE: f64 = 1e-12;

/// Which planar generator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanarKind {
    /// Timelike curve in the ⟨e₂,e₃⟩ plane.
    TimelikePlanar,
    /// Spacelike curve in the ⟨e₁,e₃⟩ plane.
    SpacelikePlanar,
}

/// Specification for a planar spiral: signed curvature profile, arc-length
/// interval, sample count, and plane kind.
#[derive(Debug, Clone)]
pub struct PlanarSpiralSpec {
    pub kappa: ProfileExpr,
    pub s0: f64,
    pub s1: f64,
    /// Number of samples (≥ 2), uniformly spaced over `[s0, s1]`.
    pub n: usize,
    pub kind: PlanarKind,
}

/// Planar-generation failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("invalid interval: s0 = {s0} must be < s1 = {s1} and both finite")]
    InvalidInterval { s0: f64, s1: f64 },
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Profile(#[from] EvalError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Turning angle `φ(s) = ∫_{s0}^{s} κ(u) du` by adaptive quadrature to
/// absolute tolerance [`DEFAULT_QUAD_TOLERANCE`].
///
/// A non-integrable singularity of κ inside the interval (e.g. `1/s`
/// integrated across 0) is reported with the location of the failure.
pub fn turning_angle(kappa: &ProfileExpr, s0: f64, s: f64) -> Result<f64, QuadratureError> {
    integrate(|u| eval_profile(kappa, u), s0, s, DEFAULT_QUAD_TOLERANCE)
}

/// Generate a planar spiral per `spec`. See the module docs for the two
/// constructions.
pub fn generate(spec: &PlanarSpiralSpec) -> Result<SampledCurve, GenerateError> {
    if !(spec.s0.is_finite() && spec.s1.is_finite()) || spec.s0 >= spec.s1 {
        return Err(GenerateError::InvalidInterval { s0: spec.s0, s1: spec.s1 });
    }
    if spec.n < 2 {
        return Err(GenerateError::TooFewSamples(spec.n));
    }

    let n = spec.n;
    let h = (spec.s1 - spec.s0) / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| spec.s0 + h * i as f64).collect();

    // Turning angle at every grid point, panel by panel.
    let phi = cumulative(|u| eval_profile(&spec.kappa, u), &grid, PANEL_TOLERANCE)?;

    // Position components: running integrals of sinh φ(t) and cosh φ(t).
    // Inside panel [sᵢ, sᵢ₊₁] the angle is reconstructed as
    // φ(t) = φᵢ + ∫_{sᵢ}^{t} κ — a nested quadrature over a subinterval no
    // wider than one panel, so the inner integral is cheap.
    let mut int_sinh = Vec::with_capacity(n);
    let mut int_cosh = Vec::with_capacity(n);
    int_sinh.push(0.0);
    int_cosh.push(0.0);
    let mut acc_sinh = 0.0;
    let mut acc_cosh = 0.0;
    for i in 0..n - 1 {
        let (a, b) = (grid[i], grid[i + 1]);
        let phi_at = |t: f64| -> Result<f64, EvalError> {
            let dphi = integrate(|u| eval_profile(&spec.kappa, u), a, t, PANEL_TOLERANCE)
                .map_err(|e| quad_to_eval(&e))?;
            Ok(phi[i] + dphi)
        };
        acc_sinh += integrate(|t| phi_at(t).map(f64::sinh), a, b, PANEL_TOLERANCE)?;
        acc_cosh += integrate(|t| phi_at(t).map(f64::cosh), a, b, PANEL_TOLERANCE)?;
        int_sinh.push(acc_sinh);
        int_cosh.push(acc_cosh);
    }

    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let kappa_i = eval_profile(&spec.kappa, grid[i])?;
        let (sh, ch) = (phi[i].sinh(), phi[i].cosh());
        let sample = match spec.kind {
            PlanarKind::TimelikePlanar => CurveSample {
                s: grid[i],
                point: LVec3::new(0.0, int_sinh[i], int_cosh[i]),
                frame: FrenetFrame::new(
                    LVec3::new(0.0, sh, ch),
                    LVec3::new(0.0, ch, sh),
                    LVec3::new(-1.0, 0.0, 0.0),
                ),
                kappa: kappa_i,
                tau: 0.0,
            },
            PlanarKind::SpacelikePlanar => CurveSample {
                s: grid[i],
                point: LVec3::new(int_cosh[i], 0.0, int_sinh[i]),
                frame: FrenetFrame::new(
                    LVec3::new(ch, 0.0, sh),
                    LVec3::new(sh, 0.0, ch),
                    LVec3::new(0.0, -1.0, 0.0),
                ),
                kappa: kappa_i,
                tau: 0.0,
            },
        };
        samples.push(sample);
    }

    let case = match spec.kind {
        PlanarKind::TimelikePlanar => CurveCase::Timelike,
        PlanarKind::SpacelikePlanar => CurveCase::SpacelikeTimelikeNormal,
    };
    Ok(SampledCurve::new(case, h, samples)?)
}

/// Timelike planar spiral in the ⟨e₂,e₃⟩ plane with signed curvature `kappa`.
pub fn generate_timelike_planar(
    kappa: &ProfileExpr,
    s0: f64,
    s1: f64,
    n: usize,
) -> Result<SampledCurve, GenerateError> {
    generate(&PlanarSpiralSpec {
        kappa: kappa.clone(),
        s0,
        s1,
        n,
        kind: PlanarKind::TimelikePlanar,
    })
}

/// Spacelike planar spiral in the ⟨e₁,e₃⟩ plane with signed curvature `kappa`.
pub fn generate_spacelike_planar(
    kappa: &ProfileExpr,
    s0: f64,
    s1: f64,
    n: usize,
) -> Result<SampledCurve, GenerateError> {
    generate(&PlanarSpiralSpec {
        kappa: kappa.clone(),
        s0,
        s1,
        n,
        kind: PlanarKind::SpacelikePlanar,
    })
}

/// Adapt an inner-quadrature failure to the integrand error type of the
/// outer quadrature, preserving the failure location.
fn quad_to_eval(e: &QuadratureError) -> EvalError {
    match e {
        QuadratureError::Integrand { source, .. } => source.clone(),
        QuadratureError::NonFinite { at } => {
            EvalError::NonFinite { expr: "turning angle".into(), s: *at }
        }
        QuadratureError::NoConvergence { near } => {
            EvalError::NonFinite { expr: "turning angle".into(), s: *near }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::lorentz_dot;
    use crate::profile::parse_profile;

    #[test]
    fn turning_angle_of_linear_curvature() {
        // κ = s from 0: φ(2) = 2. κ = a·s+b from 0: φ(s) = (a/2)s² + b·s.
        let k = parse_profile("s").unwrap();
        assert!((turning_angle(&k, 0.0, 2.0).unwrap() - 2.0).abs() < 1e-10);
        let k = parse_profile("3*s+0.5").unwrap();
        let want = 1.5 * 4.0 + 0.5 * 2.0;
        assert!((turning_angle(&k, 0.0, 2.0).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn turning_angle_of_reciprocal_curvature() {
        // κ = 1/s from 1 to e: φ = ln e − ln 1 = 1.
        let k = parse_profile("1/s").unwrap();
        let phi = turning_angle(&k, 1.0, std::f64::consts::E).unwrap();
        assert!((phi - 1.0).abs() < 1e-10);
    }

    #[test]
    fn turning_angle_pole_inside_interval_errors_with_location() {
        let k = parse_profile("1/s").unwrap();
        match turning_angle(&k, 0.0, 1.0).unwrap_err() {
            QuadratureError::Integrand { at, .. } => assert_eq!(at, 0.0),
            QuadratureError::NoConvergence { near } => assert!(near.abs() < 0.01),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_curvature_gives_straight_lines() {
        let k = parse_profile("0").unwrap();
        let tl = generate_timelike_planar(&k, 0.0, 1.0, 11).unwrap();
        for smp in tl.samples() {
            // β(s) = (0, 0, s): the timelike axis.
            assert!((smp.point - LVec3::new(0.0, 0.0, smp.s)).euclidean_norm() < 1e-12);
        }
        let sl = generate_spacelike_planar(&k, 0.0, 1.0, 11).unwrap();
        for smp in sl.samples() {
            assert!((smp.point - LVec3::new(smp.s, 0.0, 0.0)).euclidean_norm() < 1e-12);
        }
    }

    #[test]
    fn timelike_generator_is_unit_speed_to_rounding() {
        // ⟨T,T⟩ = sinh²φ − cosh²φ = −1 holds identically; the only slack is
        // the rounding of the hyperbolics, ~ulp(cosh²φ) ≈ 3e-15 at φ = 2.
        let k = parse_profile("s").unwrap();
        let curve = generate_timelike_planar(&k, 0.0, 2.0, 201).unwrap();
        assert_eq!(curve.case(), CurveCase::Timelike);
        for smp in curve.samples() {
            assert!((lorentz_dot(smp.frame.t, smp.frame.t) + 1.0).abs() <= 1e-13);
        }
        assert!(curve.max_frame_residual() <= 1e-12);
    }

    #[test]
    fn spacelike_generator_is_unit_speed_to_rounding() {
        let k = parse_profile("s").unwrap();
        let curve = generate_spacelike_planar(&k, 0.0, 2.0, 201).unwrap();
        assert_eq!(curve.case(), CurveCase::SpacelikeTimelikeNormal);
        for smp in curve.samples() {
            assert!((lorentz_dot(smp.frame.t, smp.frame.t) - 1.0).abs() <= 1e-13);
        }
        assert!(curve.max_frame_residual() <= 1e-12);
    }

    #[test]
    fn timelike_position_matches_quadrature_oracle() {
        // Independent check of β(1) for κ = s: compare the generator's
        // endpoint against direct integrals of sinh(t²/2), cosh(t²/2).
        let k = parse_profile("s").unwrap();
        let curve = generate_timelike_planar(&k, 0.0, 1.0, 101).unwrap();
        let last = curve.samples().last().unwrap();
        let y = integrate(|t| Ok((0.5 * t * t).sinh()), 0.0, 1.0, 1e-13).unwrap();
        let z = integrate(|t| Ok((0.5 * t * t).cosh()), 0.0, 1.0, 1e-13).unwrap();
        assert!((last.point.y - y).abs() < 1e-9, "y: {} vs {}", last.point.y, y);
        assert!((last.point.z - z).abs() < 1e-9, "z: {} vs {}", last.point.z, z);
    }

    #[test]
    fn constant_curvature_spacelike_matches_closed_form() {
        // κ = a constant, φ = a·s: α(s) = (sinh(as)/a, 0, (cosh(as)−1)/a).
        let a = 0.75;
        let k = parse_profile("0.75").unwrap();
        let curve = generate_spacelike_planar(&k, 0.0, 2.0, 81).unwrap();
        for smp in curve.samples() {
            let want = LVec3::new(
                (a * smp.s).sinh() / a,
                0.0,
                ((a * smp.s).cosh() - 1.0) / a,
            );
            assert!(
                (smp.point - want).euclidean_norm() < 1e-10,
                "s = {}: {} vs {}",
                smp.s,
                smp.point,
                want
            );
        }
    }

    #[test]
    fn frames_satisfy_the_planar_frenet_relations() {
        // Finite-difference T′ against κ·N for the stored (signed-κ) frames.
        let k = parse_profile("2*s+0.5").unwrap();
        let curve = generate_timelike_planar(&k, 0.0, 1.0, 501).unwrap();
        let h = curve.step();
        let smp = curve.samples();
        for i in 1..curve.len() - 1 {
            let dt = (smp[i + 1].frame.t - smp[i - 1].frame.t).scale(1.0 / (2.0 * h));
            let want = smp[i].kappa * smp[i].frame.n;
            assert!((dt - want).euclidean_norm() < 1e-4, "i = {i}");
        }
    }

    #[test]
    fn interval_and_count_validation() {
        let k = parse_profile("s").unwrap();
        assert!(matches!(
            generate_timelike_planar(&k, 1.0, 1.0, 10),
            Err(GenerateError::InvalidInterval { .. })
        ));
        assert!(matches!(
            generate_timelike_planar(&k, 0.0, 1.0, 1),
            Err(GenerateError::TooFewSamples(1))
        ));
    }

    #[test]
    fn divergent_endpoint_is_rejected() {
        // κ = 1/s on [0, 1]: logarithmic-spiral curvature with its pole at
        // the left endpoint; the position integrands diverge like 1/t there.
        let k = parse_profile("1/s").unwrap();
        assert!(generate_spacelike_planar(&k, 0.0, 1.0, 11).is_err());
    }
}
