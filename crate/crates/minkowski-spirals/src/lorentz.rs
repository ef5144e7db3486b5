//! Lorentzian linear algebra for the signature (+, +, −).
//!
//! Everything in this crate lives in Minkowski 3-space E₁³: ℝ³ equipped with
//! the indefinite inner product
//!
//! ```text
//! ⟨u, v⟩ = uₓvₓ + u_y v_y − u_z v_z
//! ```
//!
//! so the z-axis is the timelike direction. The signature is fixed rather
//! than configurable: the planar spiral generators in this crate rely on the
//! identities `y′² − z′² = −1` (timelike curves in the ⟨e₂,e₃⟩ plane) and
//! `x′² − z′² = 1` (spacelike curves in the ⟨e₁,e₃⟩ plane), and both force
//! diag(+1, +1, −1).
//!
//! The cross product here is *defined* by the determinant identity
//! `⟨u × v, c⟩ = det[u v c]` for all `c`; the component formula below is
//! derived from that identity, not assumed. It differs from the Euclidean
//! cross product in the sign of the z-component.

use std::fmt;

use thiserror::Error;

/// Relative threshold below which `⟨v,v⟩` is considered zero and `v` is
/// classified lightlike. Relative to the *Euclidean* norm squared, so the
/// classification is scale-invariant.
pub const EPS_CAUSAL: f64 = 1e-10;

/// A vector in Minkowski 3-space E₁³ with signature (+, +, −).
///
/// The type carries no signature information itself; all metric structure
/// enters through [`lorentz_dot`] and friends. Coordinates are dimensionless
/// and the z-axis is timelike.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl LVec3 {
    pub const ZERO: LVec3 = LVec3::new(0.0, 0.0, 0.0);
    /// Spacelike basis vector (1, 0, 0).
    pub const E1: LVec3 = LVec3::new(1.0, 0.0, 0.0);
    /// Spacelike basis vector (0, 1, 0).
    pub const E2: LVec3 = LVec3::new(0.0, 1.0, 0.0);
    /// Timelike basis vector (0, 0, 1); ⟨e₃,e₃⟩ = −1.
    pub const E3: LVec3 = LVec3::new(0.0, 0.0, 1.0);

    #[must_use]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// True when every component is finite (no NaN, no ±∞).
    #[must_use]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Euclidean norm squared `x² + y² + z²`. Used only as a positive-definite
    /// yardstick for tolerances; it has no invariant meaning in E₁³.
    #[must_use]
    pub fn euclidean_norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Euclidean norm. See [`LVec3::euclidean_norm_sq`].
    #[must_use]
    pub fn euclidean_norm(self) -> f64 {
        self.euclidean_norm_sq().sqrt()
    }

    /// Lorentzian pseudo-norm `√|⟨v,v⟩|`. Zero for lightlike vectors.
    #[must_use]
    pub fn lorentz_norm(self) -> f64 {
        lorentz_dot(self, self).abs().sqrt()
    }

    #[must_use]
    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.x, k * self.y, k * self.z)
    }
}

impl std::ops::Add for LVec3 {
    type Output = LVec3;
    fn add(self, rhs: LVec3) -> LVec3 {
        LVec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl std::ops::Sub for LVec3 {
    type Output = LVec3;
    fn sub(self, rhs: LVec3) -> LVec3 {
        LVec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl std::ops::Neg for LVec3 {
    type Output = LVec3;
    fn neg(self) -> LVec3 {
        LVec3::new(-self.x, -self.y, -self.z)
    }
}

impl std::ops::Mul<LVec3> for f64 {
    type Output = LVec3;
    fn mul(self, v: LVec3) -> LVec3 {
        v.scale(self)
    }
}

impl fmt::Display for LVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Causal character of a nonzero vector: the sign of `⟨v,v⟩`.
///
/// Classification near the null cone is explicit and scale-invariant: a
/// vector is lightlike when `|⟨v,v⟩| ≤ ε·‖v‖²ₑ` for the relative threshold
/// [`EPS_CAUSAL`]. The zero vector has no causal character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalCharacter {
    /// `⟨v,v⟩ > 0`.
    Spacelike,
    /// `⟨v,v⟩ < 0`.
    Timelike,
    /// `⟨v,v⟩ = 0` within tolerance (null cone).
    Lightlike,
}

impl fmt::Display for CausalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CausalCharacter::Spacelike => "spacelike",
            CausalCharacter::Timelike => "timelike",
            CausalCharacter::Lightlike => "lightlike",
        };
        f.write_str(s)
    }
}

/// Errors from the metric primitives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LorentzError {
    /// The zero vector cannot be causally classified.
    #[error("undefined causal character: zero vector")]
    ZeroVector,
    /// Normalization requires `⟨v,v⟩ ≠ 0`.
    #[error("cannot normalize {0}: vector is lightlike or zero")]
    LightlikeNormalize(LVec3),
    /// A vector has a NaN or infinite component.
    #[error("non-finite vector {0}")]
    NonFinite(LVec3),
}

/// The indefinite inner product `uₓvₓ + u_y v_y − u_z v_z`.
#[inline]
#[must_use]
pub fn lorentz_dot(u: LVec3, v: LVec3) -> f64 {
    u.x * v.x + u.y * v.y - u.z * v.z
}

/// Lorentzian cross product: the unique `w` with `⟨w, c⟩ = det[u v c]`
/// (columns u, v, c) for every `c`.
///
/// Taking `c` over the basis and inverting the metric gives
///
/// ```text
/// u × v = (u_y v_z − u_z v_y,  u_z vₓ − uₓ v_z,  u_y vₓ − uₓ v_y)
/// ```
///
/// i.e. the Euclidean cross product with the z-component negated. In
/// particular `e₁ × e₂ = −e₃`, while `e₂ × e₃ = e₁` and `e₃ × e₁ = e₂`.
#[inline]
#[must_use]
pub fn lorentz_cross(u: LVec3, v: LVec3) -> LVec3 {
    LVec3::new(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.y * v.x - u.x * v.y,
    )
}

/// Classify a nonzero vector relative to the null cone.
///
/// `eps_causal` is relative to the Euclidean norm squared, making the
/// decision invariant under scaling. Errors on the zero vector (the only
/// vector with no causal character) and on non-finite input.
pub fn causal_character(v: LVec3, eps_causal: f64) -> Result<CausalCharacter, LorentzError> {
    if !v.is_finite() {
        return Err(LorentzError::NonFinite(v));
    }
    let e2 = v.euclidean_norm_sq();
    if e2 == 0.0 {
        return Err(LorentzError::ZeroVector);
    }
    let q = lorentz_dot(v, v);
    if q > eps_causal * e2 {
        Ok(CausalCharacter::Spacelike)
    } else if q < -eps_causal * e2 {
        Ok(CausalCharacter::Timelike)
    } else {
        Ok(CausalCharacter::Lightlike)
    }
}

/// Scale `v` to unit pseudo-norm: `v / √|⟨v,v⟩|`.
///
/// Preserves the causal character (the sign of `⟨v,v⟩` is invariant under
/// positive scaling). Lightlike and zero vectors cannot be normalized.
pub fn lorentz_normalize(v: LVec3) -> Result<LVec3, LorentzError> {
    if !v.is_finite() {
        return Err(LorentzError::NonFinite(v));
    }
    if causal_character(v, EPS_CAUSAL)? == CausalCharacter::Lightlike {
        return Err(LorentzError::LightlikeNormalize(v));
    }
    Ok(v.scale(1.0 / v.lorentz_norm()))
}

/// Euclidean determinant of the 3×3 matrix with columns `a`, `b`, `c`.
///
/// This is the plain alternating form on ℝ³; it is what the cross product's
/// defining identity refers to, and what the developability test evaluates.
#[must_use]
pub fn det3(a: LVec3, b: LVec3, c: LVec3) -> f64 {
    a.x * (b.y * c.z - b.z * c.y) - b.x * (a.y * c.z - a.z * c.y)
        + c.x * (a.y * b.z - a.z * b.y)
}

/// Angle in radians between the *lines* spanned by `u` and `v`, measured in
/// the Euclidean metric (lines have no orientation, so the angle is folded
/// into [0, π/2]).
///
/// The Euclidean angle is the right yardstick for "these two lines
/// coincide" assertions: the Lorentzian product of two nearly parallel
/// timelike vectors does not vanish with the geometric angle.
pub fn euclidean_line_angle(u: LVec3, v: LVec3) -> Result<f64, LorentzError> {
    let nu = u.euclidean_norm();
    let nv = v.euclidean_norm();
    if nu == 0.0 || nv == 0.0 {
        return Err(LorentzError::ZeroVector);
    }
    let cos = ((u.x * v.x + u.y * v.y + u.z * v.z) / (nu * nv)).abs();
    Ok(cos.clamp(0.0, 1.0).acos())
}
