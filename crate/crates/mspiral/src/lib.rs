//! On-disk formats and figure export for the `mspiral` binary.
//!
//! The versioned JSON document ([`CurveFileV1`]) is the canonical
//! interchange format: self-describing and serialized with shortest
//! round-trip float formatting, so write∘read∘write is byte-identical.
//! CSV is a write-only flat export with a fixed header carrying the same
//! numbers at full printed precision. SVG export draws one coordinate-plane
//! projection of a curve as a single polyline.

use minkowski_spirals::curve::{CurveCase, CurveError, CurveSample, FrenetFrame};
use minkowski_spirals::lorentz::LVec3;
use minkowski_spirals::SampledCurve;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fixed header of the CSV export.
pub const CSV_HEADER: &str = "s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,tau";

/// Version-1 curve document.
///
/// `case` is one of the three causal case names (`"timelike"`,
/// `"spacelike-spacelike-normal"`, `"spacelike-timelike-normal"`) and
/// `signature` is always `"++-"` — both are stored explicitly so a file is
/// meaningful without this tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFileV1 {
    pub version: u32,
    pub signature: String,
    pub case: String,
    pub step: f64,
    pub samples: Vec<SampleRecord>,
}

/// One arc-length sample: position, Frenet frame, curvature, torsion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub s: f64,
    pub point: [f64; 3],
    #[serde(rename = "T")]
    pub t: [f64; 3],
    #[serde(rename = "N")]
    pub n: [f64; 3],
    #[serde(rename = "B")]
    pub b: [f64; 3],
    pub kappa: f64,
    pub tau: f64,
}

/// Why a curve file could not be read.
#[derive(Debug, Error)]
pub enum FileError {
    #[error("not a valid curve document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported version {0}; this build reads version 1")]
    UnsupportedVersion(u32),
    #[error("unsupported signature {0:?}; this build reads \"++-\"")]
    UnsupportedSignature(String),
    #[error("unknown causal case {0:?}")]
    UnknownCase(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

fn to_array(v: LVec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

fn from_array(a: [f64; 3]) -> LVec3 {
    LVec3::new(a[0], a[1], a[2])
}

impl CurveFileV1 {
    /// Snapshot a sampled curve into the document form.
    #[must_use]
    pub fn from_curve(curve: &SampledCurve) -> Self {
        CurveFileV1 {
            version: 1,
            signature: "++-".to_string(),
            case: curve.case().name().to_string(),
            step: curve.step(),
            samples: curve
                .samples()
                .iter()
                .map(|smp| SampleRecord {
                    s: smp.s,
                    point: to_array(smp.point),
                    t: to_array(smp.frame.t),
                    n: to_array(smp.frame.n),
                    b: to_array(smp.frame.b),
                    kappa: smp.kappa,
                    tau: smp.tau,
                })
                .collect(),
        }
    }

    /// Validate the document and rebuild the sampled curve.
    ///
    /// Grid structure (nonempty, ascending, uniform) is enforced by the
    /// curve constructor; version, signature, and case are checked here.
    pub fn to_curve(&self) -> Result<SampledCurve, FileError> {
        if self.version != 1 {
            return Err(FileError::UnsupportedVersion(self.version));
        }
        if self.signature != "++-" {
            return Err(FileError::UnsupportedSignature(self.signature.clone()));
        }
        let case = CurveCase::from_name(&self.case)
            .ok_or_else(|| FileError::UnknownCase(self.case.clone()))?;
        let samples: Vec<CurveSample> = self
            .samples
            .iter()
            .map(|r| CurveSample {
                s: r.s,
                point: from_array(r.point),
                frame: FrenetFrame::new(from_array(r.t), from_array(r.n), from_array(r.b)),
                kappa: r.kappa,
                tau: r.tau,
            })
            .collect();
        Ok(SampledCurve::new(case, self.step, samples)?)
    }

    /// Parse a document from JSON text.
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Serialize to pretty-printed JSON with a trailing newline.
    ///
    /// Field order is fixed and floats print in shortest round-trip form,
    /// so serializing a parsed document reproduces the input byte for byte.
    #[must_use]
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("curve documents always serialize");
        text.push('\n');
        text
    }
}

/// Flat CSV export: [`CSV_HEADER`] then one row per sample, floats in
/// shortest round-trip form (the same digits the JSON export prints).
#[must_use]
pub fn curve_to_csv(curve: &SampledCurve) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for smp in curve.samples() {
        let p = smp.point;
        let (t, n, b) = (smp.frame.t, smp.frame.n, smp.frame.b);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            smp.s, p.x, p.y, p.z, t.x, t.y, t.z, n.x, n.y, n.z, b.x, b.y, b.z, smp.kappa,
            smp.tau
        ));
    }
    out
}

/// Coordinate plane to project onto for SVG export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    /// (y, z): the plane of the timelike planar generator.
    Yz,
    /// (x, z): the plane of the spacelike planar generator.
    Xz,
    /// (x, y): the spacelike coordinate plane.
    Xy,
}

impl Plane {
    /// Project a point onto the plane as (horizontal, vertical).
    #[must_use]
    pub fn project(self, p: LVec3) -> (f64, f64) {
        match self {
            Plane::Yz => (p.y, p.z),
            Plane::Xz => (p.x, p.z),
            Plane::Xy => (p.x, p.y),
        }
    }
}

/// Render projected points as a standalone SVG with a single polyline.
///
/// The viewBox is the data bounding box padded by 5% per side (a fixed pad
/// for degenerate spans), with the vertical axis flipped so larger
/// coordinates draw upward. `width`/`height` set the nominal display size.
#[must_use]
pub fn svg_polyline(points: &[(f64, f64)], width: u32, height: u32) -> String {
    // SVG's y axis grows downward; negate the vertical coordinate.
    let flipped: Vec<(f64, f64)> = points.iter().map(|&(u, v)| (u, -v)).collect();

    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &flipped {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let pad = |span: f64| if span > 0.0 { 0.05 * span } else { 0.5 };
    let (px, py) = (pad(hi.0 - lo.0), pad(hi.1 - lo.1));
    let (vx, vy) = (lo.0 - px, lo.1 - py);
    let (vw, vh) = (hi.0 - lo.0 + 2.0 * px, hi.1 - lo.1 + 2.0 * py);

    let vertices: Vec<String> = flipped.iter().map(|(x, y)| format!("{x},{y}")).collect();
    let stroke = vw.max(vh) / 400.0;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"{vx} {vy} {vw} {vh}\">\n  <polyline fill=\"none\" stroke=\"black\" \
         stroke-width=\"{stroke}\" points=\"{}\"/>\n</svg>\n",
        vertices.join(" ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use minkowski_spirals::integrator::integrate_default;
    use minkowski_spirals::profile::parse_profile;

    fn demo_curve() -> SampledCurve {
        let kappa = parse_profile("s+1").unwrap();
        let tau = parse_profile("0.5").unwrap();
        integrate_default(CurveCase::Timelike, &kappa, &tau, 0.0, 1.0, 0.05).unwrap()
    }

    #[test]
    fn json_write_read_write_is_byte_identical() {
        let doc = CurveFileV1::from_curve(&demo_curve());
        let first = doc.to_json();
        let second = CurveFileV1::from_json(&first).unwrap().to_json();
        assert_eq!(first, second);
    }

    #[test]
    fn document_round_trips_through_the_curve_type() {
        let curve = demo_curve();
        let rebuilt = CurveFileV1::from_curve(&curve).to_curve().unwrap();
        assert_eq!(curve, rebuilt);
    }

    #[test]
    fn version_and_signature_are_enforced() {
        let mut doc = CurveFileV1::from_curve(&demo_curve());
        doc.version = 2;
        assert!(matches!(doc.to_curve(), Err(FileError::UnsupportedVersion(2))));
        doc.version = 1;
        doc.signature = "+++".into();
        assert!(matches!(doc.to_curve(), Err(FileError::UnsupportedSignature(_))));
        doc.signature = "++-".into();
        doc.case = "circular".into();
        assert!(matches!(doc.to_curve(), Err(FileError::UnknownCase(_))));
    }

    #[test]
    fn empty_samples_are_rejected() {
        let mut doc = CurveFileV1::from_curve(&demo_curve());
        doc.samples.clear();
        assert!(matches!(doc.to_curve(), Err(FileError::Curve(_))));
    }

    #[test]
    fn csv_has_header_and_one_row_per_sample() {
        let curve = demo_curve();
        let csv = curve_to_csv(&curve);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.count(), curve.len());
    }

    #[test]
    fn svg_contains_every_vertex_and_a_padded_viewbox() {
        let points = vec![(0.0, 0.0), (1.0, 2.0), (2.0, 1.0)];
        let svg = svg_polyline(&points, 640, 480);
        assert!(svg.starts_with("<svg "));
        let attr = svg.split("points=\"").nth(1).unwrap();
        let attr = &attr[..attr.find('"').unwrap()];
        assert_eq!(attr.split_whitespace().count(), points.len());
        // x span 2 → 5% pad 0.1 per side.
        assert!(svg.contains("viewBox=\"-0.1 "));
    }

    #[test]
    fn svg_handles_a_degenerate_span() {
        // A vertical segment has zero horizontal span; the fixed pad keeps
        // the viewBox two-dimensional.
        let svg = svg_polyline(&[(1.0, 0.0), (1.0, 3.0)], 100, 100);
        assert!(svg.contains("viewBox=\"0.5 "));
    }
}
