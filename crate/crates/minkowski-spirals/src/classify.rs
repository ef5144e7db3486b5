//! Curve-family classification and the classical constructions behind it.
//!
//! The first half of the module decides, from sampled `(s, κ, τ)` data,
//! which of the recognized families a curve belongs to:
//!
//! * **planar Cornu** — κ linear, τ ≡ 0;
//! * **Euler** — κ and τ both linear;
//! * **logarithmic** — 1/κ and 1/τ both linear;
//! * **generalized Euler** — κ/τ a ratio of two linear functions;
//! * **helix** — τ/κ constant;
//! * **rectifying** — τ/κ linear;
//! * **Bertrand** — constants (A, B) with A·κ + B·τ = 1.
//!
//! The verdicts are not exclusive: constants are linear, so a helix also
//! passes the Euler and logarithmic fits, and every family above embeds in
//! the generalized Euler family. [`ClassificationReport`] therefore carries
//! one independent flag per family together with the fit it was judged on.
//!
//! The second half provides the constructions the characterization theorems
//! quantify over — Bertrand mates, the Darboux field `W = ετT − κB`, the
//! reciprocal field `U = (ε/κ)T − (1/τ)B`, involute-style offsets
//! `β = α + (as+b)T + (cs+d)B + λN`, and the developability determinant
//! `det(T, X, X′)` of the ruled surface with director `X = (as+b)T +
//! (cs+d)B` — plus the finite-difference residuals that turn each theorem
//! into a number.

use thiserror::Error;

use crate::curve::{CurveCase, CurveError, CurveSample, FrenetFrame, SampledCurve};
use crate::estimate::{estimate, EstimateError, STRAIGHT_THRESHOLD};
use crate::fit::{
    fit_linear, fit_ratio_rational_linear, FitError, LinearFit, RatioFit, DEFAULT_FIT_TOLERANCE,
};
use crate::lorentz::{det3, lorentz_dot, LVec3};

/// Default tolerance for theorem-level residuals (finite-difference checks
/// of the characterizations), as opposed to profile-fit residuals.
pub const DEFAULT_THEOREM_TOLERANCE: f64 = 1e-3;

/// Profiles closer to zero than this cannot be inverted or divided by;
/// the affected fits are skipped rather than polluted.
pub const PROFILE_POLE_GUARD: f64 = 1e-9;

/// Below this Lorentz norm a second difference carries no direction
/// information and parallelism conditions on it are vacuous.
pub const DEGENERATE_SECOND_DIFFERENCE: f64 = 1e-12;

/// Failures in classification or in the theorem constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error(
        "maximum |κ| = {max_kappa:.3e} is below {STRAIGHT_THRESHOLD:.0e}: \
         torsion undefined on straight segments"
    )]
    StraightSegment { max_kappa: f64 },
    #[error("profiles proportional (helix) — Bertrand coefficients not unique")]
    ProportionalProfiles,
    #[error("{name} is within {PROFILE_POLE_GUARD:.0e} of zero at s = {s}")]
    ProfileNearZero { name: &'static str, s: f64 },
    #[error("principal normal undefined on a straight base curve")]
    StraightBase,
    #[error("mate speed vanishes near s = {s}; offset curve is not regular there")]
    MateVanishingSpeed { s: f64 },
    #[error("parameter must be finite, got {0}")]
    NonFiniteParameter(f64),
    #[error("sample grids do not match: {detail}")]
    GridMismatch { detail: String },
    #[error(
        "second difference is degenerate (norm ≤ {DEGENERATE_SECOND_DIFFERENCE:.0e}) \
         at s = {s}; the parallelism condition is vacuous there"
    )]
    DegenerateSecondDifference { s: f64 },
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("mate frame estimation failed: {0}")]
    Estimate(#[from] EstimateError),
    #[error("offset curve assembly failed: {0}")]
    Curve(#[from] CurveError),
}

/// Family verdicts with the fits that justify them.
///
/// Every fit that could be computed is reported even when its verdict is
/// negative; fits that would require dividing by a near-zero profile are
/// `None`. Verdict flags are plain booleans judged against
/// [`ClassificationReport::fit_tolerance`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    /// Tolerance all verdicts were judged against.
    pub fit_tolerance: f64,
    /// Line fit of κ against s.
    pub kappa_fit: LinearFit,
    /// Line fit of τ against s.
    pub tau_fit: LinearFit,
    /// Largest |τ| over the samples (the planarity measure).
    pub max_abs_tau: f64,
    /// κ linear and τ ≡ 0.
    pub planar_cornu: bool,
    /// κ and τ both linear.
    pub euler: bool,
    /// Line fit of 1/κ against s; `None` if κ approaches zero.
    pub radius_fit: Option<LinearFit>,
    /// Line fit of 1/τ against s; `None` if τ approaches zero.
    pub torsion_reciprocal_fit: Option<LinearFit>,
    /// 1/κ and 1/τ both linear.
    pub logarithmic: bool,
    /// Line fit of τ/κ against s (slope λ₁, intercept λ₂); `None` if κ
    /// approaches zero.
    pub ratio_fit: Option<LinearFit>,
    /// τ/κ linear.
    pub rectifying: bool,
    /// Mean of τ/κ; `None` if κ approaches zero.
    pub helix_lambda: Option<f64>,
    /// Largest deviation |τ/κ − λ| from the mean ratio.
    pub helix_residual: Option<f64>,
    /// τ/κ constant.
    pub helix: bool,
    /// Homogeneous fit of κ/τ to a ratio of linear functions.
    pub rational_ratio_fit: RatioFit,
    /// κ/τ is a ratio of linear functions.
    pub generalized_euler: bool,
    /// `(A, B)` with A·κ + B·τ = 1, present when the Euler fits pass and
    /// the profiles are not proportional.
    pub bertrand: Option<(f64, f64)>,
}

/// Classify a sampled curve from its stored κ, τ at the default tolerance.
pub fn classify(curve: &SampledCurve) -> Result<ClassificationReport, ClassifyError> {
    classify_samples(&curve.profile_samples(), DEFAULT_FIT_TOLERANCE)
}

/// [`classify`] with an explicit fit tolerance.
pub fn classify_with_tolerance(
    curve: &SampledCurve,
    fit_tolerance: f64,
) -> Result<ClassificationReport, ClassifyError> {
    classify_samples(&curve.profile_samples(), fit_tolerance)
}

/// Classify `(s, κ, τ)` samples directly.
///
/// Needs at least 5 samples and a curve that actually bends: if |κ| never
/// exceeds [`STRAIGHT_THRESHOLD`] the normal direction, and with it τ and
/// every family above, is undefined.
pub fn classify_samples(
    samples: &[(f64, f64, f64)],
    fit_tolerance: f64,
) -> Result<ClassificationReport, ClassifyError> {
    if samples.len() < 5 {
        return Err(ClassifyError::TooFewSamples { need: 5, got: samples.len() });
    }
    let max_kappa = samples.iter().fold(0.0f64, |m, &(_, k, _)| m.max(k.abs()));
    if max_kappa <= STRAIGHT_THRESHOLD {
        return Err(ClassifyError::StraightSegment { max_kappa });
    }

    let kappa_samples: Vec<(f64, f64)> = samples.iter().map(|&(s, k, _)| (s, k)).collect();
    let tau_samples: Vec<(f64, f64)> = samples.iter().map(|&(s, _, t)| (s, t)).collect();
    let kappa_fit = fit_linear(&kappa_samples)?;
    let tau_fit = fit_linear(&tau_samples)?;
    let max_abs_tau = tau_samples.iter().fold(0.0f64, |m, &(_, t)| m.max(t.abs()));

    let euler = kappa_fit.ok(fit_tolerance) && tau_fit.ok(fit_tolerance);
    let planar_cornu = kappa_fit.ok(fit_tolerance) && max_abs_tau <= fit_tolerance;

    let kappa_bounded = samples.iter().all(|&(_, k, _)| k.abs() >= PROFILE_POLE_GUARD);
    let tau_bounded = samples.iter().all(|&(_, _, t)| t.abs() >= PROFILE_POLE_GUARD);

    let radius_fit = if kappa_bounded {
        let recip: Vec<(f64, f64)> = samples.iter().map(|&(s, k, _)| (s, 1.0 / k)).collect();
        Some(fit_linear(&recip)?)
    } else {
        None
    };
    let torsion_reciprocal_fit = if tau_bounded {
        let recip: Vec<(f64, f64)> = samples.iter().map(|&(s, _, t)| (s, 1.0 / t)).collect();
        Some(fit_linear(&recip)?)
    } else {
        None
    };
    let logarithmic = matches!(
        (&radius_fit, &torsion_reciprocal_fit),
        (Some(rf), Some(tf)) if rf.ok(fit_tolerance) && tf.ok(fit_tolerance)
    );

    let (ratio_fit, helix_lambda, helix_residual) = if kappa_bounded {
        let ratios: Vec<(f64, f64)> = samples.iter().map(|&(s, k, t)| (s, t / k)).collect();
        let fit = fit_linear(&ratios)?;
        let lambda = ratios.iter().map(|&(_, r)| r).sum::<f64>() / ratios.len() as f64;
        let dev = ratios.iter().fold(0.0f64, |m, &(_, r)| m.max((r - lambda).abs()));
        (Some(fit), Some(lambda), Some(dev))
    } else {
        (None, None, None)
    };
    let rectifying = ratio_fit.as_ref().is_some_and(|f| f.ok(fit_tolerance));
    let helix = helix_residual.is_some_and(|r| r <= fit_tolerance);

    let rational_ratio_fit = fit_ratio_rational_linear(samples)?;
    let generalized_euler = rational_ratio_fit.ok(fit_tolerance);

    let bertrand =
        if euler { bertrand_coefficients(&kappa_fit, &tau_fit).ok() } else { None };

    Ok(ClassificationReport {
        fit_tolerance,
        kappa_fit,
        tau_fit,
        max_abs_tau,
        planar_cornu,
        euler,
        radius_fit,
        torsion_reciprocal_fit,
        logarithmic,
        ratio_fit,
        rectifying,
        helix_lambda,
        helix_residual,
        helix,
        rational_ratio_fit,
        generalized_euler,
        bertrand,
    })
}

/// Solve for the Bertrand constants of linear profiles.
///
/// For κ = c₁s + c₂ and τ = d₁s + d₂ the identity A·κ(s) + B·τ(s) = 1 must
/// hold for all s, which splits into A·c₁ + B·d₁ = 0 (slopes) and
/// A·c₂ + B·d₂ = 1 (intercepts). The 2×2 system is solvable exactly when
/// the profiles are not proportional.
pub fn bertrand_coefficients(
    kappa_fit: &LinearFit,
    tau_fit: &LinearFit,
) -> Result<(f64, f64), ClassifyError> {
    let (c1, c2) = (kappa_fit.slope, kappa_fit.intercept);
    let (d1, d2) = (tau_fit.slope, tau_fit.intercept);
    let det = c1 * d2 - d1 * c2;
    let scale = (c1 * c1 + c2 * c2).sqrt() * (d1 * d1 + d2 * d2).sqrt();
    if det.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(ClassifyError::ProportionalProfiles);
    }
    Ok((-d1 / det, c1 / det))
}

/// Offset a curve along its principal normal and re-derive the mate's
/// frames from its points alone.
///
/// The returned curve is trimmed to the estimator's interior (three samples
/// at each end are consumed by the finite differences). The mate is not
/// unit-speed in general; its κ, τ entries are rates with respect to the
/// base parameter, but its frame *directions* — all the Bertrand property
/// speaks about — are estimated soundly. `r = 0` returns the input
/// unchanged.
pub fn bertrand_mate(curve: &SampledCurve, r: f64) -> Result<SampledCurve, ClassifyError> {
    if !r.is_finite() {
        return Err(ClassifyError::NonFiniteParameter(r));
    }
    if r == 0.0 {
        return Ok(curve.clone());
    }
    let max_kappa = curve.samples().iter().fold(0.0f64, |m, smp| m.max(smp.kappa.abs()));
    if max_kappa <= STRAIGHT_THRESHOLD {
        return Err(ClassifyError::StraightBase);
    }

    let offset: Vec<(f64, LVec3)> = curve
        .samples()
        .iter()
        .map(|smp| (smp.s, smp.point + r * smp.frame.n))
        .collect();

    let inv2h = 1.0 / (2.0 * curve.step());
    for i in 1..offset.len() - 1 {
        let speed = (offset[i + 1].1 - offset[i - 1].1).scale(inv2h).euclidean_norm();
        if speed < PROFILE_POLE_GUARD {
            return Err(ClassifyError::MateVanishingSpeed { s: offset[i].0 });
        }
    }

    let est = estimate(&offset)?;
    let mate_samples: Vec<CurveSample> = est
        .samples
        .iter()
        .enumerate()
        .map(|(k, row)| {
            // The estimator's first row sits three grid points in.
            let (s, point) = offset[k + 3];
            debug_assert!((s - row.s).abs() < 1e-12);
            CurveSample {
                s,
                point,
                frame: FrenetFrame::new(row.t, row.n, row.b),
                kappa: row.kappa,
                tau: row.tau,
            }
        })
        .collect();
    Ok(SampledCurve::new(est.case, est.h, mate_samples)?)
}

/// The Darboux field W = ετT − κB sampled along the curve.
///
/// Its derivative is ετ′T − κ′B — the N-components cancel identically in
/// all three causal cases — so W is constant exactly on helices, and W″ is
/// parallel to N exactly when κ and τ are both linear.
#[must_use]
pub fn darboux_curve(curve: &SampledCurve) -> Vec<(f64, LVec3)> {
    let eps = curve.case().epsilon();
    curve
        .samples()
        .iter()
        .map(|smp| (smp.s, (eps * smp.tau) * smp.frame.t - smp.kappa * smp.frame.b))
        .collect()
}

/// The reciprocal field U = (ε/κ)T − (1/τ)B sampled along the curve.
///
/// Like W, its derivative has no N-component in any causal case:
/// U′ = (ε/κ)′T − (1/τ)′B identically, so U″ is parallel to N exactly
/// when 1/κ and 1/τ are both linear.
///
/// Fails if κ or τ comes within [`PROFILE_POLE_GUARD`] of zero anywhere.
pub fn u_curve(curve: &SampledCurve) -> Result<Vec<(f64, LVec3)>, ClassifyError> {
    let eps = curve.case().epsilon();
    curve
        .samples()
        .iter()
        .map(|smp| {
            if smp.kappa.abs() < PROFILE_POLE_GUARD {
                return Err(ClassifyError::ProfileNearZero { name: "curvature", s: smp.s });
            }
            if smp.tau.abs() < PROFILE_POLE_GUARD {
                return Err(ClassifyError::ProfileNearZero { name: "torsion", s: smp.s });
            }
            Ok((smp.s, (eps / smp.kappa) * smp.frame.t - (1.0 / smp.tau) * smp.frame.b))
        })
        .collect()
}

/// How far a sampled vector field is from having its second derivative
/// parallel to the curve's principal normal.
///
/// At each interior sample the second central difference D of the field is
/// formed, its Lorentz-orthogonal projection onto N is removed, and the
/// Lorentz norm of the remainder is compared to the norm of D. The result
/// is the worst such ratio — ~0 when D ∥ N everywhere, ~1 when some D has
/// no N-component at all. (The indefinite metric can push individual
/// ratios slightly above 1; only smallness is meaningful.)
///
/// The field must be sampled on exactly the curve's grid. A second
/// difference with Lorentz norm below [`DEGENERATE_SECOND_DIFFERENCE`]
/// (a straight or stationary stretch of the field) makes the condition
/// vacuous and is reported as an error rather than as a pass.
pub fn parallel_to_normal_residual(
    vector_samples: &[(f64, LVec3)],
    curve: &SampledCurve,
) -> Result<f64, ClassifyError> {
    let n = vector_samples.len();
    if n != curve.len() {
        return Err(ClassifyError::GridMismatch {
            detail: format!("{n} field samples vs {} curve samples", curve.len()),
        });
    }
    if n < 3 {
        return Err(ClassifyError::TooFewSamples { need: 3, got: n });
    }
    for (v, c) in vector_samples.iter().zip(curve.samples()) {
        if (v.0 - c.s).abs() > 1e-9 {
            return Err(ClassifyError::GridMismatch {
                detail: format!("field sample at s = {} vs curve sample at s = {}", v.0, c.s),
            });
        }
    }

    let h = curve.step();
    let inv_h2 = 1.0 / (h * h);
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let d = (vector_samples[i + 1].1 - 2.0 * vector_samples[i].1 + vector_samples[i - 1].1)
            .scale(inv_h2);
        let den = lorentz_dot(d, d).abs().sqrt();
        if den <= DEGENERATE_SECOND_DIFFERENCE {
            return Err(ClassifyError::DegenerateSecondDifference { s: vector_samples[i].0 });
        }
        let normal = curve.samples()[i].frame.n;
        let coefficient = lorentz_dot(d, normal) / lorentz_dot(normal, normal);
        let remainder = d - coefficient * normal;
        worst = worst.max(lorentz_dot(remainder, remainder).abs().sqrt() / den);
    }
    Ok(worst)
}

/// Offset a curve by (as+b)T + (cs+d)B + λN.
///
/// The returned curve keeps the *base* curve's frames and profiles at each
/// parameter — which is precisely the pairing the involute–evolute
/// criterion ⟨β′, N⟩ = 0 needs, and makes zero coefficients the exact
/// identity. It does not describe the offset curve's own Frenet apparatus;
/// run the estimator on its points for that.
pub fn involute_offset_curve(
    curve: &SampledCurve,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    lambda: f64,
) -> Result<SampledCurve, ClassifyError> {
    for p in [a, b, c, d, lambda] {
        if !p.is_finite() {
            return Err(ClassifyError::NonFiniteParameter(p));
        }
    }
    let samples: Vec<CurveSample> = curve
        .samples()
        .iter()
        .map(|smp| {
            let u = a * smp.s + b;
            let w = c * smp.s + d;
            CurveSample {
                point: smp.point + u * smp.frame.t + w * smp.frame.b + lambda * smp.frame.n,
                ..*smp
            }
        })
        .collect();
    Ok(SampledCurve::new(curve.case(), curve.step(), samples)?)
}

/// ⟨β′, N⟩ at each interior sample, with β′ by central differences of the
/// curve's points and N its stored normal.
///
/// On a curve from [`involute_offset_curve`] this is the involute–evolute
/// functional: the offset is an involute-style mate exactly when it
/// vanishes.
#[must_use]
pub fn normal_inner_products(curve: &SampledCurve) -> Vec<(f64, f64)> {
    let smp = curve.samples();
    if smp.len() < 3 {
        return Vec::new();
    }
    let inv2h = 1.0 / (2.0 * curve.step());
    (1..smp.len() - 1)
        .map(|i| {
            let v = (smp[i + 1].point - smp[i - 1].point).scale(inv2h);
            (smp[i].s, lorentz_dot(v, smp[i].frame.n))
        })
        .collect()
}

/// Closed form of ⟨β′, N⟩ for the offset β = α + uT + wB + λN with
/// u = as + b, w = cs + d (λ never enters).
///
/// The sign pattern follows each case's derivative system and normal
/// metric: timelike gives κu − τw, a spacelike curve with spacelike normal
/// gives κu + τw, and a spacelike curve with timelike normal gives
/// −(κu + τw).
#[must_use]
pub fn involute_identity_rhs(case: CurveCase, kappa: f64, tau: f64, u: f64, w: f64) -> f64 {
    match case {
        CurveCase::Timelike => kappa * u - tau * w,
        CurveCase::SpacelikeSpacelikeNormal => kappa * u + tau * w,
        CurveCase::SpacelikeTimelikeNormal => -(kappa * u + tau * w),
    }
}

/// A ruled surface over a framed base curve with director
/// X(s) = (as+b)T + (cs+d)B.
#[derive(Debug, Clone, Copy)]
pub struct RuledSurfaceSpec<'a> {
    pub base: &'a SampledCurve,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RuledSurfaceSpec<'_> {
    /// The director X at one sample.
    #[must_use]
    pub fn director(&self, sample: &CurveSample) -> LVec3 {
        (self.a * sample.s + self.b) * sample.frame.t
            + (self.c * sample.s + self.d) * sample.frame.b
    }
}

/// Developability residual max |det(T, X, X′)| over interior samples, with
/// X′ by central differences of the sampled director.
///
/// The surface is developable exactly when the determinant vanishes along
/// the base. The determinant is evaluated directly — not via an expanded
/// scalar condition — so the case-dependent sign conventions cannot enter.
/// Note the residual scales *quadratically* under uniform scaling of
/// (a, b, c, d): both the X and X′ columns carry the factor.
pub fn developability_residual(spec: &RuledSurfaceSpec<'_>) -> Result<f64, ClassifyError> {
    for p in [spec.a, spec.b, spec.c, spec.d] {
        if !p.is_finite() {
            return Err(ClassifyError::NonFiniteParameter(p));
        }
    }
    let smp = spec.base.samples();
    if smp.len() < 3 {
        return Err(ClassifyError::TooFewSamples { need: 3, got: smp.len() });
    }
    let x: Vec<LVec3> = smp.iter().map(|sample| spec.director(sample)).collect();
    let inv2h = 1.0 / (2.0 * spec.base.step());
    let mut worst = 0.0f64;
    for i in 1..smp.len() - 1 {
        let x_prime = (x[i + 1] - x[i - 1]).scale(inv2h);
        worst = worst.max(det3(smp[i].frame.t, x[i], x_prime).abs());
    }
    Ok(worst)
}
