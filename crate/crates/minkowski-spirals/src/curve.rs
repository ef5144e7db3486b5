//! Curve cases, Frenet frames, and the sampled-curve exchange type.
//!
//! A non-null curve in E₁³ with non-null normal falls into one of three
//! causal cases, each with its own frame signature and derivative system:
//!
//! | case                      | ⟨T,T⟩ | ⟨N,N⟩ | ⟨B,B⟩ | ε  |
//! |---------------------------|-------|-------|-------|----|
//! | `Timelike`                | −1    | +1    | +1    | −1 |
//! | `SpacelikeSpacelikeNormal`| +1    | +1    | −1    | +1 |
//! | `SpacelikeTimelikeNormal` | +1    | −1    | +1    | +1 |
//!
//! The fourth combination (spacelike tangent, lightlike normal) admits no
//! curvature normalization and is rejected wherever it is detected.
//!
//! In every case `B = T ×ₗ N`: for a Lorentz-orthonormal pair the identity
//! `⟨u×v, u×v⟩ = −⟨u,u⟩⟨v,v⟩` gives the binormal exactly the metric sign the
//! table requires, so the cross product needs no per-case correction.
//!
//! [`SampledCurve`] is the universal exchange value between the generators,
//! the integrator, the estimators, and the classification layer: uniform
//! arc-length samples of position, frame, curvature, and torsion.

use std::fmt;

use thiserror::Error;

use crate::lorentz::{
    causal_character, lorentz_cross, lorentz_dot, lorentz_normalize, CausalCharacter, LVec3,
    EPS_CAUSAL,
};

/// Absolute tolerance on grid uniformity for [`SampledCurve`].
pub const STEP_UNIFORMITY_TOLERANCE: f64 = 1e-12;

/// Causal case of a framed curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveCase {
    /// Timelike tangent; N and B spacelike.
    Timelike,
    /// Spacelike tangent with spacelike principal normal; B timelike.
    SpacelikeSpacelikeNormal,
    /// Spacelike tangent with timelike principal normal; B spacelike.
    SpacelikeTimelikeNormal,
}

impl CurveCase {
    /// The sign ε of ⟨T,T⟩: −1 for timelike curves, +1 for spacelike.
    #[must_use]
    pub fn epsilon(self) -> f64 {
        match self {
            CurveCase::Timelike => -1.0,
            _ => 1.0,
        }
    }

    /// Required metric signs `(⟨T,T⟩, ⟨N,N⟩, ⟨B,B⟩)`.
    #[must_use]
    pub fn metric_signs(self) -> (f64, f64, f64) {
        match self {
            CurveCase::Timelike => (-1.0, 1.0, 1.0),
            CurveCase::SpacelikeSpacelikeNormal => (1.0, 1.0, -1.0),
            CurveCase::SpacelikeTimelikeNormal => (1.0, -1.0, 1.0),
        }
    }

    /// Required causal characters of (T, N, B).
    #[must_use]
    pub fn causal_characters(self) -> (CausalCharacter, CausalCharacter, CausalCharacter) {
        use CausalCharacter::{Spacelike, Timelike};
        match self {
            CurveCase::Timelike => (Timelike, Spacelike, Spacelike),
            CurveCase::SpacelikeSpacelikeNormal => (Spacelike, Spacelike, Timelike),
            CurveCase::SpacelikeTimelikeNormal => (Spacelike, Timelike, Spacelike),
        }
    }

    /// Stable lower-case name used in file formats and CLI flags.
    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            CurveCase::Timelike => "timelike",
            CurveCase::SpacelikeSpacelikeNormal => "spacelike-spacelike-normal",
            CurveCase::SpacelikeTimelikeNormal => "spacelike-timelike-normal",
        }
    }

    /// Inverse of [`CurveCase::name`].
    #[must_use]
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "timelike" => CurveCase::Timelike,
            "spacelike-spacelike-normal" => CurveCase::SpacelikeSpacelikeNormal,
            "spacelike-timelike-normal" => CurveCase::SpacelikeTimelikeNormal,
            _ => return None,
        })
    }
}

impl fmt::Display for CurveCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Frame-validity failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("frame vector {which} is lightlike or zero; cannot orthonormalize")]
    DegenerateVector { which: &'static str },
    #[error("frame vector {which} has causal character {got}, case {case} requires {want}")]
    WrongCausalCharacter {
        which: &'static str,
        case: CurveCase,
        got: CausalCharacter,
        want: CausalCharacter,
    },
    #[error("frame contains a non-finite vector")]
    NonFinite,
}

/// An ordered Frenet triple (T, N, B). The causal case is carried by the
/// surrounding curve, not by the frame itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetFrame {
    pub t: LVec3,
    pub n: LVec3,
    pub b: LVec3,
}

impl FrenetFrame {
    #[must_use]
    pub const fn new(t: LVec3, n: LVec3, b: LVec3) -> Self {
        Self { t, n, b }
    }

    /// Maximum absolute deviation of the six Lorentz–Gram constraints from
    /// the values the case prescribes: the three self-products against their
    /// required signs and the three cross-products against zero.
    #[must_use]
    pub fn constraint_residual(&self, case: CurveCase) -> f64 {
        let (st, sn, sb) = case.metric_signs();
        [
            lorentz_dot(self.t, self.t) - st,
            lorentz_dot(self.n, self.n) - sn,
            lorentz_dot(self.b, self.b) - sb,
            lorentz_dot(self.t, self.n),
            lorentz_dot(self.t, self.b),
            lorentz_dot(self.n, self.b),
        ]
        .into_iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Lorentz Gram–Schmidt: renormalize T, project T out of N and
    /// renormalize, and recompute `B = T ×ₗ N`.
    ///
    /// Each vector's causal character is checked against the case, so drift
    /// across the null cone is an error rather than a silent sign flip. The
    /// operation is idempotent to rounding on its own output. The input B
    /// participates only through the error check — the cross product already
    /// yields the unique binormal with the correct metric sign.
    pub fn reorthonormalize(&self, case: CurveCase) -> Result<FrenetFrame, FrameError> {
        if !(self.t.is_finite() && self.n.is_finite() && self.b.is_finite()) {
            return Err(FrameError::NonFinite);
        }
        let (want_t, want_n, _) = case.causal_characters();

        let check = |v: LVec3, which: &'static str, want: CausalCharacter| {
            match causal_character(v, EPS_CAUSAL) {
                Ok(CausalCharacter::Lightlike) | Err(_) => {
                    Err(FrameError::DegenerateVector { which })
                }
                Ok(got) if got != want => Err(FrameError::WrongCausalCharacter {
                    which,
                    case,
                    got,
                    want,
                }),
                Ok(_) => Ok(()),
            }
        };

        check(self.t, "T", want_t)?;
        let t = lorentz_normalize(self.t)
            .map_err(|_| FrameError::DegenerateVector { which: "T" })?;

        let n_raw = self.n - (lorentz_dot(self.n, t) / lorentz_dot(t, t)) * t;
        check(n_raw, "N", want_n)?;
        let n = lorentz_normalize(n_raw)
            .map_err(|_| FrameError::DegenerateVector { which: "N" })?;

        let b = lorentz_cross(t, n);
        Ok(FrenetFrame::new(t, n, b))
    }
}

/// One arc-length sample: position, frame, curvature, torsion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub s: f64,
    pub point: LVec3,
    pub frame: FrenetFrame,
    pub kappa: f64,
    pub tau: f64,
}

/// Validation failures when assembling a [`SampledCurve`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("a sampled curve needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("arc length must increase strictly: s[{index}] = {value} after {previous}")]
    NonIncreasing { index: usize, value: f64, previous: f64 },
    #[error(
        "non-uniform grid at index {index}: spacing {got} deviates from step {step} \
         by more than {tolerance}"
    )]
    NonUniformStep { index: usize, got: f64, step: f64, tolerance: f64 },
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("sample {index} contains non-finite data")]
    NonFinite { index: usize },
}

/// Uniform arc-length samples of a framed curve — the exchange value all
/// modules speak.
///
/// Invariants enforced at construction: at least two samples, strictly
/// increasing `s`, spacing uniform to [`STEP_UNIFORMITY_TOLERANCE`], and all
/// data finite. Frame *quality* (how well the Gram constraints hold) is
/// deliberately not an invariant — estimated curves carry finite-difference
/// error — but can be queried via [`SampledCurve::max_frame_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    case: CurveCase,
    step: f64,
    samples: Vec<CurveSample>,
}

impl SampledCurve {
    pub fn new(
        case: CurveCase,
        step: f64,
        samples: Vec<CurveSample>,
    ) -> Result<Self, CurveError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(CurveError::BadStep(step));
        }
        if samples.len() < 2 {
            return Err(CurveError::TooFewSamples(samples.len()));
        }
        for (i, sample) in samples.iter().enumerate() {
            let finite = sample.s.is_finite()
                && sample.point.is_finite()
                && sample.frame.t.is_finite()
                && sample.frame.n.is_finite()
                && sample.frame.b.is_finite()
                && sample.kappa.is_finite()
                && sample.tau.is_finite();
            if !finite {
                return Err(CurveError::NonFinite { index: i });
            }
            if i > 0 {
                let prev = samples[i - 1].s;
                if sample.s <= prev {
                    return Err(CurveError::NonIncreasing {
                        index: i,
                        value: sample.s,
                        previous: prev,
                    });
                }
                let got = sample.s - prev;
                if (got - step).abs() > STEP_UNIFORMITY_TOLERANCE {
                    return Err(CurveError::NonUniformStep {
                        index: i,
                        got,
                        step,
                        tolerance: STEP_UNIFORMITY_TOLERANCE,
                    });
                }
            }
        }
        Ok(Self { case, step, samples })
    }

    #[must_use]
    pub fn case(&self) -> CurveCase {
        self.case
    }

    #[must_use]
    pub fn step(&self) -> f64 {
        self.step
    }

    #[must_use]
    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `(s, point)` pairs, the estimator's input.
    #[must_use]
    pub fn points(&self) -> Vec<(f64, LVec3)> {
        self.samples.iter().map(|smp| (smp.s, smp.point)).collect()
    }

    /// `(s, κ, τ)` triples, the classifier's input.
    #[must_use]
    pub fn profile_samples(&self) -> Vec<(f64, f64, f64)> {
        self.samples.iter().map(|smp| (smp.s, smp.kappa, smp.tau)).collect()
    }

    /// Worst Gram-constraint violation across all samples.
    #[must_use]
    pub fn max_frame_residual(&self) -> f64 {
        self.samples
            .iter()
            .fold(0.0f64, |m, smp| m.max(smp.frame.constraint_residual(self.case)))
    }

    /// Worst deviation of ⟨T,T⟩ from the case's ε over all samples — the
    /// quantitative unit-speed check.
    #[must_use]
    pub fn max_unit_speed_residual(&self) -> f64 {
        let eps = self.case.epsilon();
        self.samples
            .iter()
            .fold(0.0f64, |m, smp| m.max((lorentz_dot(smp.frame.t, smp.frame.t) - eps).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical_frame(case: CurveCase) -> FrenetFrame {
        match case {
            CurveCase::Timelike => FrenetFrame::new(LVec3::E3, LVec3::E1, LVec3::E2),
            CurveCase::SpacelikeSpacelikeNormal => {
                FrenetFrame::new(LVec3::E1, LVec3::E2, -LVec3::E3)
            }
            CurveCase::SpacelikeTimelikeNormal => {
                FrenetFrame::new(LVec3::E1, LVec3::E3, -LVec3::E2)
            }
        }
    }

    #[test]
    fn canonical_frames_satisfy_their_case_constraints_exactly() {
        for case in [
            CurveCase::Timelike,
            CurveCase::SpacelikeSpacelikeNormal,
            CurveCase::SpacelikeTimelikeNormal,
        ] {
            let f = canonical_frame(case);
            assert_eq!(f.constraint_residual(case), 0.0, "case {case}");
            // B must equal T ×ₗ N exactly.
            assert_eq!(f.b, lorentz_cross(f.t, f.n), "case {case}");
        }
    }

    #[test]
    fn reorthonormalize_is_identity_on_canonical_frames() {
        for case in [
            CurveCase::Timelike,
            CurveCase::SpacelikeSpacelikeNormal,
            CurveCase::SpacelikeTimelikeNormal,
        ] {
            let f = canonical_frame(case);
            let g = f.reorthonormalize(case).unwrap();
            assert_eq!(f, g, "case {case}");
        }
    }

    #[test]
    fn reorthonormalize_cleans_small_perturbations() {
        let case = CurveCase::Timelike;
        let f = canonical_frame(case);
        let perturbed = FrenetFrame::new(
            f.t + LVec3::new(1e-6, -2e-6, 3e-7),
            f.n + LVec3::new(-4e-7, 1e-6, 2e-6),
            f.b + LVec3::new(2e-6, 5e-7, -1e-6),
        );
        let g = perturbed.reorthonormalize(case).unwrap();
        assert!(g.constraint_residual(case) <= 1e-12);
        // The corrected frame stays near the perturbed one.
        assert!((g.t - f.t).euclidean_norm() < 1e-5);
    }

    #[test]
    fn reorthonormalize_large_perturbation_still_orthonormalizes_or_errors() {
        let case = CurveCase::SpacelikeSpacelikeNormal;
        let f = canonical_frame(case);
        let perturbed = FrenetFrame::new(
            f.t + LVec3::new(0.5, -0.25, 0.3),
            f.n + LVec3::new(-0.2, 0.5, 0.1),
            f.b,
        );
        match perturbed.reorthonormalize(case) {
            Ok(g) => assert!(g.constraint_residual(case) <= 1e-12),
            Err(e) => assert!(matches!(
                e,
                FrameError::DegenerateVector { .. } | FrameError::WrongCausalCharacter { .. }
            )),
        }
    }

    #[test]
    fn reorthonormalize_is_idempotent() {
        let case = CurveCase::SpacelikeTimelikeNormal;
        let f = canonical_frame(case);
        let perturbed = FrenetFrame::new(
            f.t + LVec3::new(1e-4, 2e-4, -1e-4),
            f.n + LVec3::new(3e-4, -1e-4, 2e-4),
            f.b,
        );
        let once = perturbed.reorthonormalize(case).unwrap();
        let twice = once.reorthonormalize(case).unwrap();
        let drift = (once.t - twice.t)
            .euclidean_norm()
            .max((once.n - twice.n).euclidean_norm())
            .max((once.b - twice.b).euclidean_norm());
        assert!(drift <= 1e-14, "idempotence drift {drift}");
    }

    #[test]
    fn reorthonormalize_rejects_causal_flips() {
        // A timelike-case frame whose T is actually spacelike.
        let bad = FrenetFrame::new(LVec3::E1, LVec3::E2, LVec3::E3);
        assert!(matches!(
            bad.reorthonormalize(CurveCase::Timelike),
            Err(FrameError::WrongCausalCharacter { which: "T", .. })
        ));
    }

    #[test]
    fn sampled_curve_validates_grid() {
        let case = CurveCase::Timelike;
        let f = canonical_frame(case);
        let mk = |s: f64| CurveSample {
            s,
            point: LVec3::new(0.0, 0.0, s),
            frame: f,
            kappa: 0.0,
            tau: 0.0,
        };
        assert!(SampledCurve::new(case, 0.5, vec![mk(0.0), mk(0.5), mk(1.0)]).is_ok());
        assert!(matches!(
            SampledCurve::new(case, 0.5, vec![mk(0.0)]),
            Err(CurveError::TooFewSamples(1))
        ));
        assert!(matches!(
            SampledCurve::new(case, 0.5, vec![mk(0.0), mk(0.5), mk(0.5)]),
            Err(CurveError::NonIncreasing { .. })
        ));
        assert!(matches!(
            SampledCurve::new(case, 0.5, vec![mk(0.0), mk(0.5), mk(1.2)]),
            Err(CurveError::NonUniformStep { .. })
        ));
    }
}
