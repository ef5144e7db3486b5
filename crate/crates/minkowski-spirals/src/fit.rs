//! Least-squares fits of sampled data to the recognized profile families.
//!
//! Two fits cover everything the classifier needs:
//!
//! * [`fit_linear`] — ordinary least squares for `v ≈ a·s + b`, used directly
//!   for κ and τ, and on transformed samples (1/κ, τ/κ, …) for the
//!   reciprocal-linear and ratio families.
//! * [`fit_ratio_rational_linear`] — the homogeneous fit for
//!   `κ/τ = (a·s + b)/(c·s + d)`. The relation `κ(cs+d) − τ(as+b) = 0` is
//!   *projective* in (a,b,c,d): any nonzero scalar multiple is the same
//!   ratio. Fitting it as an ordinary regression would privilege one
//!   coefficient as the denominator; instead we minimize `‖R·x‖` over unit
//!   vectors `x`, i.e. take the eigenvector of the 4×4 normal matrix `RᵀR`
//!   belonging to its smallest eigenvalue.
//!
//! In both cases the reported residual is the *maximum absolute* deviation
//! over the samples — the quantity the acceptance thresholds are stated in —
//! not the RMS that the solver minimizes.

use thiserror::Error;

/// Default absolute tolerance against which a fit is judged `ok`: matches
/// the accuracy budget of the fixed-step integrator that produces the
/// samples being fitted.
pub const DEFAULT_FIT_TOLERANCE: f64 = 1e-6;

/// Errors from degenerate fitting inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("all abscissae are identical (s = {0}); line fit is underdetermined")]
    DegenerateAbscissae(f64),
    #[error("all rows vanish; ratio fit is underdetermined")]
    DegenerateRows,
    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),
}

/// Result of a straight-line fit `v ≈ slope·s + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Maximum absolute deviation `max_i |slope·sᵢ + intercept − vᵢ|`.
    pub residual: f64,
}

impl LinearFit {
    /// Whether the fit reproduces the data within `tolerance`.
    #[must_use]
    pub fn ok(&self, tolerance: f64) -> bool {
        self.residual <= tolerance
    }

    #[must_use]
    pub fn at(&self, s: f64) -> f64 {
        self.slope * s + self.intercept
    }
}

/// Result of the homogeneous rational-linear ratio fit
/// `κ/τ ≈ (a·s + b)/(c·s + d)` with `a² + b² + c² + d² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioFit {
    /// Unit-norm coefficient vector `(a, b, c, d)`, sign-normalized so the
    /// largest-magnitude component is positive.
    pub coefficients: [f64; 4],
    /// Maximum absolute deviation `max_i |κᵢ(c·sᵢ+d) − τᵢ(a·sᵢ+b)|`.
    pub residual: f64,
}

impl RatioFit {
    #[must_use]
    pub fn ok(&self, tolerance: f64) -> bool {
        self.residual <= tolerance
    }

    /// The fitted ratio `(a·s + b)/(c·s + d)`; infinite at the denominator's
    /// root.
    #[must_use]
    pub fn ratio_at(&self, s: f64) -> f64 {
        let [a, b, c, d] = self.coefficients;
        (a * s + b) / (c * s + d)
    }
}

/// Ordinary least squares for `v ≈ a·s + b`; residual is max-absolute.
///
/// The normal equations are solved in centered coordinates (s − s̄), which
/// keeps the fit stable for intervals far from the origin and makes the
/// zero-variance degeneracy test exact.
pub fn fit_linear(samples: &[(f64, f64)]) -> Result<LinearFit, FitError> {
    if samples.len() < 2 {
        return Err(FitError::TooFewSamples { needed: 2, got: samples.len() });
    }
    for (i, &(s, v)) in samples.iter().enumerate() {
        if !s.is_finite() || !v.is_finite() {
            return Err(FitError::NonFiniteSample(i));
        }
    }
    let n = samples.len() as f64;
    let s_mean = samples.iter().map(|&(s, _)| s).sum::<f64>() / n;
    let v_mean = samples.iter().map(|&(_, v)| v).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxv = 0.0;
    for &(s, v) in samples {
        let ds = s - s_mean;
        sxx += ds * ds;
        sxv += ds * (v - v_mean);
    }
    if sxx == 0.0 {
        return Err(FitError::DegenerateAbscissae(samples[0].0));
    }
    let slope = sxv / sxx;
    let intercept = v_mean - slope * s_mean;
    let residual = samples
        .iter()
        .fold(0.0f64, |m, &(s, v)| m.max((slope * s + intercept - v).abs()));
    Ok(LinearFit { slope, intercept, residual })
}

/// Homogeneous least-squares fit of `κᵢ(c·sᵢ + d) − τᵢ(a·sᵢ + b) = 0`.
///
/// Builds the 4×4 normal matrix `M = Σ rᵢrᵢᵀ` with rows
/// `rᵢ = (−τᵢsᵢ, −τᵢ, κᵢsᵢ, κᵢ)` and returns the unit eigenvector of the
/// smallest eigenvalue. Scaling all κ, τ by a common factor scales `M`
/// uniformly and therefore leaves the recovered ratio unchanged.
pub fn fit_ratio_rational_linear(samples: &[(f64, f64, f64)]) -> Result<RatioFit, FitError> {
    if samples.len() < 4 {
        return Err(FitError::TooFewSamples { needed: 4, got: samples.len() });
    }
    let mut m = [[0.0f64; 4]; 4];
    let mut any_nonzero = false;
    for (i, &(s, kappa, tau)) in samples.iter().enumerate() {
        if !s.is_finite() || !kappa.is_finite() || !tau.is_finite() {
            return Err(FitError::NonFiniteSample(i));
        }
        let row = [-tau * s, -tau, kappa * s, kappa];
        if row.iter().any(|&x| x != 0.0) {
            any_nonzero = true;
        }
        for (j, &rj) in row.iter().enumerate() {
            for (k, &rk) in row.iter().enumerate() {
                m[j][k] += rj * rk;
            }
        }
    }
    if !any_nonzero {
        return Err(FitError::DegenerateRows);
    }

    let (eigenvalues, eigenvectors) = jacobi_eigen_4x4(m);
    let mut best = 0;
    for i in 1..4 {
        if eigenvalues[i] < eigenvalues[best] {
            best = i;
        }
    }
    let mut x = eigenvectors[best];

    // Deterministic sign: largest-magnitude component positive.
    let mut lead = 0;
    for i in 1..4 {
        if x[i].abs() > x[lead].abs() {
            lead = i;
        }
    }
    if x[lead] < 0.0 {
        for xi in &mut x {
            *xi = -*xi;
        }
    }

    let residual = samples.iter().fold(0.0f64, |mx, &(s, kappa, tau)| {
        let r = kappa * (x[2] * s + x[3]) - tau * (x[0] * s + x[1]);
        mx.max(r.abs())
    });
    Ok(RatioFit { coefficients: x, residual })
}

/// Cyclic Jacobi eigendecomposition of a symmetric 4×4 matrix.
///
/// Returns `(eigenvalues, eigenvectors)` with `eigenvectors[i]` the unit
/// eigenvector of `eigenvalues[i]` (columns of the accumulated rotation).
/// Jacobi is exact to rounding for matrices this small and needs no
/// pivoting strategy beyond sweeping all off-diagonal pairs until they
/// vanish relative to the diagonal.
fn jacobi_eigen_4x4(mut a: [[f64; 4]; 4]) -> ([f64; 4], [[f64; 4]; 4]) {
    let mut v = [[0.0f64; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let scale = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .fold(0.0f64, |m, (i, j)| m.max(a[i][j].abs()))
        .max(f64::MIN_POSITIVE);

    for _sweep in 0..64 {
        let off: f64 = (0..4)
            .flat_map(|p| ((p + 1)..4).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                // Classical Jacobi rotation annihilating a[p][q].
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for row in &mut a {
                    let akp = row[p];
                    let akq = row[q];
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (head, tail) = a.split_at_mut(q);
                for (apk, aqk) in head[p].iter_mut().zip(&mut tail[0]) {
                    let x = *apk;
                    let y = *aqk;
                    *apk = c * x - s * y;
                    *aqk = s * x + c * y;
                }
                for row in &mut v {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let eigenvalues = [a[0][0], a[1][1], a[2][2], a[3][3]];
    // Columns of v are the eigenvectors; transpose into rows for indexing.
    let mut vectors = [[0.0f64; 4]; 4];
    for (i, vec) in vectors.iter_mut().enumerate() {
        for (j, x) in vec.iter_mut().enumerate() {
            *x = v[j][i];
        }
    }
    (eigenvalues, vectors)
}
