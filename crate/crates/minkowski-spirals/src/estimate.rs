//! Frame, curvature, and torsion estimation from raw sampled points.
//!
//! This is the independent oracle of the crate: it never looks at stored
//! frames or profiles, only at positions on a uniform arc-length grid, and
//! reconstructs everything by second-order central differences:
//!
//! 1. `T̃ᵢ = (pᵢ₊₁ − pᵢ₋₁)/2h`, normalized to `T̂ᵢ` (available on `[1, n−2]`);
//! 2. `T̂′ᵢ = (T̂ᵢ₊₁ − T̂ᵢ₋₁)/2h`, giving `κ̂ᵢ = √|⟨T̂′,T̂′⟩|`, `N̂ᵢ = T̂′ᵢ/κ̂ᵢ`,
//!    `B̂ᵢ = T̂ᵢ ×ₗ N̂ᵢ` (on `[2, n−3]`);
//! 3. `N̂′ᵢ = (N̂ᵢ₊₁ − N̂ᵢ₋₁)/2h`, giving `τ̂ᵢ = ⟨N̂′ᵢ,B̂ᵢ⟩/⟨B̂ᵢ,B̂ᵢ⟩`
//!    (on `[3, n−4]`).
//!
//! Rows are reported on the common interior `[3, n−4]`; endpoints are
//! dropped rather than estimated one-sided, keeping the error uniformly
//! O(h²). The τ̂ formula divides by ⟨B̂,B̂⟩, which makes it correct in every
//! causal case under this crate's Frenet matrices (⟨B,B⟩ = −1 flips the
//! sign exactly when the convention requires it) and tolerant of the slight
//! non-unitness of a finite-difference B̂.
//!
//! The causal case is detected per sample from the characters of T̂ and T̂′
//! and must be unanimous across the interior; mixed-causality inputs are
//! rejected, as is any sample with lightlike T̂ or T̂′ (no Frenet apparatus
//! exists there) or with κ̂ below [`STRAIGHT_THRESHOLD`] (straight segment —
//! the normal direction, and hence torsion, is undefined).
//!
//! If the input is not unit-speed, T̂ is still the correct unit tangent
//! *direction* (it is normalized) and N̂, B̂ remain geometrically meaningful,
//! but κ̂ and τ̂ are then rates with respect to the sample parameter, not
//! arc length. The Bertrand-mate verification relies on exactly this:
//! offset mates are not unit-speed, yet their normal *lines* are estimated
//! correctly.

use thiserror::Error;

use crate::curve::{CurveCase, SampledCurve};
use crate::lorentz::{
    causal_character, lorentz_cross, lorentz_dot, CausalCharacter, LVec3, EPS_CAUSAL,
};

/// Below this estimated curvature a segment is treated as straight and
/// estimation fails: N̂ = T̂′/κ̂ would be pure noise.
pub const STRAIGHT_THRESHOLD: f64 = 1e-12;

/// Absolute tolerance on grid uniformity for estimator input.
pub const GRID_TOLERANCE: f64 = 1e-9;

/// One interior estimate row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatedSample {
    pub s: f64,
    pub t: LVec3,
    pub n: LVec3,
    pub b: LVec3,
    /// Estimated curvature, always ≥ 0 (Frenet convention).
    pub kappa: f64,
    pub tau: f64,
}

/// Estimator output: detected case plus rows over the common interior.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatedData {
    pub case: CurveCase,
    /// Grid spacing of the input samples.
    pub h: f64,
    pub samples: Vec<EstimatedSample>,
}

impl EstimatedData {
    /// `(s, κ̂)` pairs, ready for line fitting.
    #[must_use]
    pub fn kappa_samples(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|r| (r.s, r.kappa)).collect()
    }

    /// `(s, τ̂)` pairs, ready for line fitting.
    #[must_use]
    pub fn tau_samples(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|r| (r.s, r.tau)).collect()
    }
}

/// Estimation failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimateError {
    #[error("need at least 7 samples for interior torsion estimates, got {0}")]
    TooFewSamples(usize),
    #[error("non-uniform grid at index {index}: spacing {got}, expected {expected}")]
    NonUniformGrid { index: usize, got: f64, expected: f64 },
    #[error("non-finite point at index {0}")]
    NonFinitePoint(usize),
    #[error("lightlike tangent at s = {s}; no Frenet frame exists there")]
    LightlikeTangent { s: f64 },
    #[error("lightlike normal at s = {s}; curvature is undefined for null normals")]
    LightlikeNormal { s: f64 },
    #[error(
        "curvature {kappa:.3e} below {STRAIGHT_THRESHOLD:.0e} at s = {s}: \
         torsion undefined on straight segments"
    )]
    StraightSegment { s: f64, kappa: f64 },
    #[error(
        "mixed causal characters across samples ({majority} at {majority_count} of \
         {total} samples); theorems assume a fixed causal case"
    )]
    MixedCausality { majority: CurveCase, majority_count: usize, total: usize },
    #[error("timelike tangent with timelike normal at s = {s}: inconsistent data")]
    InconsistentCausality { s: f64 },
}

/// Estimate frames, curvature, and torsion from `(s, point)` samples on a
/// uniform grid. See the module docs for the scheme and its domain.
pub fn estimate(points: &[(f64, LVec3)]) -> Result<EstimatedData, EstimateError> {
    let n = points.len();
    if n < 7 {
        return Err(EstimateError::TooFewSamples(n));
    }
    for (i, &(s, p)) in points.iter().enumerate() {
        if !s.is_finite() || !p.is_finite() {
            return Err(EstimateError::NonFinitePoint(i));
        }
    }
    let h = points[1].0 - points[0].0;
    if !(h.is_finite() && h > 0.0) {
        return Err(EstimateError::NonUniformGrid { index: 1, got: h, expected: f64::NAN });
    }
    for i in 1..n {
        let got = points[i].0 - points[i - 1].0;
        if (got - h).abs() > GRID_TOLERANCE {
            return Err(EstimateError::NonUniformGrid { index: i, got, expected: h });
        }
    }

    let inv2h = 1.0 / (2.0 * h);

    // Pass 1: unit tangents on [1, n−2]. Index offset: t_hat[i] is at grid
    // point i+1.
    let mut t_hat = Vec::with_capacity(n - 2);
    let mut t_char = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let d = (points[i + 1].1 - points[i - 1].1).scale(inv2h);
        let ch = causal_character(d, EPS_CAUSAL)
            .map_err(|_| EstimateError::LightlikeTangent { s: points[i].0 })?;
        if ch == CausalCharacter::Lightlike {
            return Err(EstimateError::LightlikeTangent { s: points[i].0 });
        }
        t_hat.push(d.scale(1.0 / d.lorentz_norm()));
        t_char.push(ch);
    }

    // Pass 2: curvature, normal, binormal on [2, n−3]. n_hat[j] is at grid
    // point j+2.
    let mut n_hat = Vec::with_capacity(n - 4);
    let mut b_hat = Vec::with_capacity(n - 4);
    let mut kappa_hat = Vec::with_capacity(n - 4);
    let mut case_votes = Vec::with_capacity(n - 4);
    for j in 1..t_hat.len() - 1 {
        let grid_idx = j + 1; // grid point of t_hat[j]
        let s = points[grid_idx].0;
        let dt = (t_hat[j + 1] - t_hat[j - 1]).scale(inv2h);
        let kappa = lorentz_dot(dt, dt).abs().sqrt();
        if kappa < STRAIGHT_THRESHOLD {
            return Err(EstimateError::StraightSegment { s, kappa });
        }
        let dt_char = causal_character(dt, EPS_CAUSAL)
            .map_err(|_| EstimateError::StraightSegment { s, kappa })?;
        if dt_char == CausalCharacter::Lightlike {
            return Err(EstimateError::LightlikeNormal { s });
        }
        let case = match (t_char[j], dt_char) {
            (CausalCharacter::Timelike, CausalCharacter::Spacelike) => CurveCase::Timelike,
            (CausalCharacter::Spacelike, CausalCharacter::Spacelike) => {
                CurveCase::SpacelikeSpacelikeNormal
            }
            (CausalCharacter::Spacelike, CausalCharacter::Timelike) => {
                CurveCase::SpacelikeTimelikeNormal
            }
            (CausalCharacter::Timelike, CausalCharacter::Timelike) => {
                return Err(EstimateError::InconsistentCausality { s });
            }
            // Lightlike was already rejected above.
            _ => unreachable!("lightlike characters rejected earlier"),
        };
        let nv = dt.scale(1.0 / kappa);
        n_hat.push(nv);
        b_hat.push(lorentz_cross(t_hat[j], nv));
        kappa_hat.push(kappa);
        case_votes.push(case);
    }

    // Case must be unanimous; report the majority when it is not.
    let mut counts = [0usize; 3];
    for &c in &case_votes {
        let k = match c {
            CurveCase::Timelike => 0,
            CurveCase::SpacelikeSpacelikeNormal => 1,
            CurveCase::SpacelikeTimelikeNormal => 2,
        };
        counts[k] += 1;
    }
    let majority_idx = (0..3).max_by_key(|&i| counts[i]).unwrap();
    let majority = [
        CurveCase::Timelike,
        CurveCase::SpacelikeSpacelikeNormal,
        CurveCase::SpacelikeTimelikeNormal,
    ][majority_idx];
    if counts[majority_idx] != case_votes.len() {
        return Err(EstimateError::MixedCausality {
            majority,
            majority_count: counts[majority_idx],
            total: case_votes.len(),
        });
    }

    // Pass 3: torsion on [3, n−4]; assemble rows over the common interior.
    let mut samples = Vec::with_capacity(n.saturating_sub(6));
    for k in 1..n_hat.len() - 1 {
        let grid_idx = k + 2; // grid point of n_hat[k]
        let dn = (n_hat[k + 1] - n_hat[k - 1]).scale(inv2h);
        let b = b_hat[k];
        let tau = lorentz_dot(dn, b) / lorentz_dot(b, b);
        samples.push(EstimatedSample {
            s: points[grid_idx].0,
            t: t_hat[k + 1],
            n: n_hat[k],
            b,
            kappa: kappa_hat[k],
            tau,
        });
    }

    Ok(EstimatedData { case: majority, h, samples })
}

/// Convenience: run [`estimate`] on a curve's sampled points (ignoring its
/// stored frames and profiles).
pub fn estimate_curve(curve: &SampledCurve) -> Result<EstimatedData, EstimateError> {
    estimate(&curve.points())
}
