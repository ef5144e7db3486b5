//! Adaptive Simpson quadrature for the turning-angle integrals.
//!
//! The planar generators need `φ(s) = ∫ κ(u) du` and the position integrals
//! `∫ sinh φ`, `∫ cosh φ` — smooth integrands over short panels, for which
//! adaptive Simpson with Richardson extrapolation is simple and effectively
//! spectral. Error control is by absolute tolerance per call; the cumulative
//! helpers split the target across panels so the running integrals reuse
//! previous work instead of re-integrating from the left endpoint.
//!
//! Integrands return `Result`, so profile domain errors (a pole of `1/s`
//! inside the interval, say) surface as quadrature errors *naming the point*
//! rather than as silently infinite panels; non-finite values from plain
//! closures are caught the same way.

use thiserror::Error;

use crate::profile::EvalError;

/// Default absolute tolerance for one-shot integrals such as the turning
/// angle.
pub const DEFAULT_QUAD_TOLERANCE: f64 = 1e-10;

/// Recursion limit: a panel halved this many times spans less than 2⁻⁴⁸ of
/// the original interval; failure to converge by then means a genuine
/// singularity, not a tolerance problem.
const MAX_DEPTH: u32 = 48;

/// Quadrature failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    /// The integrand itself failed (profile domain error).
    #[error("integrand failed at s = {at}: {source}")]
    Integrand {
        at: f64,
        #[source]
        source: EvalError,
    },
    /// The integrand produced NaN or ±∞.
    #[error("integrand is not finite at s = {at}")]
    NonFinite { at: f64 },
    /// Refinement hit the depth limit without meeting the tolerance —
    /// an unintegrable singularity near the named point.
    #[error("no convergence near s = {near}: singularity suspected")]
    NoConvergence { near: f64 },
}

type Integrand<'a> = dyn Fn(f64) -> Result<f64, EvalError> + 'a;

fn eval_checked(f: &Integrand<'_>, x: f64) -> Result<f64, QuadratureError> {
    let v = f(x).map_err(|source| QuadratureError::Integrand { at: x, source })?;
    if !v.is_finite() {
        return Err(QuadratureError::NonFinite { at: x });
    }
    Ok(v)
}

fn simpson(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
    width / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &Integrand<'_>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, QuadratureError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval_checked(f, lm)?;
    let frm = eval_checked(f, rm)?;
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    // Simpson's rule is O(h⁴); the factor 15 is the Richardson estimate of
    // the error of the refined pair against the coarse panel.
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(QuadratureError::NoConvergence { near: m });
    }
    let half_tol = 0.5 * tol;
    Ok(adaptive(f, a, m, fa, flm, fm, left, half_tol, depth - 1)?
        + adaptive(f, m, b, fm, frm, fb, right, half_tol, depth - 1)?)
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
///
/// `a > b` integrates backwards with the usual sign flip; `a == b` is zero
/// without evaluating the integrand.
pub fn integrate(
    f: impl Fn(f64) -> Result<f64, EvalError>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, QuadratureError> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    let f: &Integrand<'_> = &f;
    let fa = eval_checked(f, a)?;
    let m = 0.5 * (a + b);
    let fm = eval_checked(f, m)?;
    let fb = eval_checked(f, b)?;
    let whole = simpson(fa, fm, fb, b - a);
    adaptive(f, a, b, fa, fm, fb, whole, tol.max(1e-300), MAX_DEPTH)
}

/// Running integral of `f` along an ascending grid: returns `F` with
/// `F[0] = 0` and `F[i] = ∫_{grid[0]}^{grid[i]} f`, computed panel by panel
/// (each to absolute tolerance `panel_tol`) so the whole sweep costs one
/// pass over the grid.
pub fn cumulative(
    f: impl Fn(f64) -> Result<f64, EvalError>,
    grid: &[f64],
    panel_tol: f64,
) -> Result<Vec<f64>, QuadratureError> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in grid.windows(2) {
        acc += integrate(&f, w[0], w[1], panel_tol)?;
        out.push(acc);
    }
    Ok(out)
}
