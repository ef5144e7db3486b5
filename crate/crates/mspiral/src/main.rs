//! `mspiral`: synthesize, classify, verify, and export spiral curves in
//! Minkowski 3-space.
//!
//! Exit codes are a stable scripting contract: 0 success (or verification
//! PASS), 1 verification FAIL, 2 usage or file-format error, 3 numeric or
//! domain failure.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minkowski_spirals::classify::{
    bertrand_coefficients, bertrand_mate, classify_samples, classify_with_tolerance,
    darboux_curve, developability_residual, involute_identity_rhs, involute_offset_curve,
    normal_inner_products, parallel_to_normal_residual, u_curve, ClassificationReport,
    ClassifyError, RuledSurfaceSpec, DEFAULT_THEOREM_TOLERANCE,
};
use minkowski_spirals::curve::CurveCase;
use minkowski_spirals::estimate::estimate_curve;
use minkowski_spirals::fit::{LinearFit, RatioFit, DEFAULT_FIT_TOLERANCE};
use minkowski_spirals::integrator::{integrate_default, IntegrateError};
use minkowski_spirals::lorentz::euclidean_line_angle;
use minkowski_spirals::planar::{
    generate_spacelike_planar, generate_timelike_planar, GenerateError,
};
use minkowski_spirals::profile::parse_profile;
use minkowski_spirals::SampledCurve;
use mspiral::{curve_to_csv, svg_polyline, CurveFileV1, Plane};
use serde_json::json;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

/// A terminal failure: message for stderr plus the exit code contract.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Failure { code: EXIT_NUMERIC, message: message.into() }
    }
}

impl From<mspiral::FileError> for Failure {
    fn from(e: mspiral::FileError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<GenerateError> for Failure {
    fn from(e: GenerateError) -> Self {
        match e {
            GenerateError::InvalidInterval { .. } | GenerateError::TooFewSamples(_) => {
                Failure::usage(e.to_string())
            }
            _ => Failure::numeric(e.to_string()),
        }
    }
}

impl From<IntegrateError> for Failure {
    fn from(e: IntegrateError) -> Self {
        match e {
            IntegrateError::InvalidInterval { .. } | IntegrateError::BadStep(_) => {
                Failure::usage(e.to_string())
            }
            _ => Failure::numeric(e.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        Failure::numeric(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "mspiral",
    version,
    about = "Spiral curves in Minkowski 3-space: generate, classify, verify, export",
    after_help = "Exit codes: 0 success/PASS, 1 verification FAIL, \
                  2 usage or file-format error, 3 numeric or domain failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a curve: closed-form planar synthesis or Frenet integration
    Generate(GenerateArgs),
    /// Classify a curve file into the spiral families
    Classify(ClassifyArgs),
    /// Check one characterization theorem against a curve file
    Verify(VerifyArgs),
    /// Render a coordinate-plane projection as an SVG polyline
    ExportSvg(ExportSvgArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Timelike planar curve in the (y,z)-plane from κ alone
    PlanarTimelike,
    /// Spacelike planar curve in the (x,z)-plane from κ alone
    PlanarSpacelike,
    /// Frenet integration from κ and τ in a chosen causal case
    Frenet,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    /// Timelike tangent
    Timelike,
    /// Spacelike tangent, spacelike principal normal
    SpacelikeSpacelikeNormal,
    /// Spacelike tangent, timelike principal normal
    SpacelikeTimelikeNormal,
}

impl From<CaseArg> for CurveCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::Timelike => CurveCase::Timelike,
            CaseArg::SpacelikeSpacelikeNormal => CurveCase::SpacelikeSpacelikeNormal,
            CaseArg::SpacelikeTimelikeNormal => CurveCase::SpacelikeTimelikeNormal,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlaneArg {
    Yz,
    Xz,
    Xy,
}

impl From<PlaneArg> for Plane {
    fn from(p: PlaneArg) -> Self {
        match p {
            PlaneArg::Yz => Plane::Yz,
            PlaneArg::Xz => Plane::Xz,
            PlaneArg::Xy => Plane::Xy,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    /// Causal case (frenet mode only)
    #[arg(long, value_enum)]
    case: Option<CaseArg>,
    /// Curvature profile κ(s), e.g. "2*s+1"
    #[arg(long, allow_hyphen_values = true)]
    kappa: String,
    /// Torsion profile τ(s) (frenet mode only)
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    /// Arc-length start
    #[arg(long, allow_hyphen_values = true)]
    s0: f64,
    /// Arc-length end
    #[arg(long, allow_hyphen_values = true)]
    s1: f64,
    /// Arc-length step between samples
    #[arg(long)]
    step: f64,
    /// Output path; "-" writes to stdout
    #[arg(long)]
    out: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Input curve file (JSON); "-" reads stdin
    #[arg(long = "in", value_name = "PATH")]
    input: String,
    /// Fit tolerance the verdicts are judged against
    #[arg(long, default_value_t = DEFAULT_FIT_TOLERANCE)]
    tolerance: f64,
    /// Re-estimate κ and τ from the sample points instead of trusting the
    /// stored profiles
    #[arg(long)]
    estimate: bool,
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    /// Bertrand constants A, B with A·κ + B·τ = 1 (and the r-offset mate
    /// when --r is given)
    Bertrand,
    /// Darboux field W has W″ parallel to the principal normal
    Darboux,
    /// Offset-curve identity for ⟨β′, N⟩ with coefficients --abcd, --lambda
    Involute,
    /// Ruled surface with director (as+b)T + (cs+d)B is developable
    Developable,
    /// U field has U″ parallel to the principal normal
    Ucurve,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: CheckKind,
    /// Input curve file (JSON); "-" reads stdin
    #[arg(long = "in", value_name = "PATH")]
    input: String,
    /// Theorem-residual tolerance for the PASS/FAIL verdict
    #[arg(long, default_value_t = DEFAULT_THEOREM_TOLERANCE)]
    tolerance: f64,
    /// Coefficients "a,b,c,d" of the tangent/binormal offset or director
    #[arg(long, allow_hyphen_values = true)]
    abcd: Option<String>,
    /// Principal-normal offset coefficient λ (involute check)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda: f64,
    /// Normal-offset distance for the Bertrand mate check
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
}

#[derive(Args)]
struct ExportSvgArgs {
    /// Input curve file (JSON); "-" reads stdin
    #[arg(long = "in", value_name = "PATH")]
    input: String,
    #[arg(long, value_enum)]
    plane: PlaneArg,
    /// Output path; "-" writes to stdout
    #[arg(long)]
    out: String,
    #[arg(long, default_value_t = 800)]
    width: u32,
    #[arg(long, default_value_t = 600)]
    height: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Generate(args) => run_generate(&args),
        Command::Classify(args) => run_classify(&args),
        Command::Verify(args) => run_verify(&args),
        Command::ExportSvg(args) => run_export_svg(&args),
    }
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

fn run_generate(args: &GenerateArgs) -> Result<u8, Failure> {
    if !(args.s0.is_finite() && args.s1.is_finite()) || args.s0 >= args.s1 {
        return Err(Failure::usage(format!(
            "--s0 {} must be < --s1 {} and both finite",
            args.s0, args.s1
        )));
    }
    if !(args.step.is_finite() && args.step > 0.0) {
        return Err(Failure::usage(format!("--step must be positive, got {}", args.step)));
    }
    let kappa = parse_profile(&args.kappa)
        .map_err(|e| Failure::usage(format!("--kappa: {e}")))?;

    let curve = match args.mode {
        Mode::PlanarTimelike | Mode::PlanarSpacelike => {
            if args.case.is_some() {
                return Err(Failure::usage("--case applies only to --mode frenet"));
            }
            if args.tau.is_some() {
                return Err(Failure::usage("--tau applies only to --mode frenet"));
            }
            let n_steps = ((args.s1 - args.s0) / args.step).round().max(1.0) as usize;
            let n = n_steps + 1;
            if args.mode == Mode::PlanarTimelike {
                generate_timelike_planar(&kappa, args.s0, args.s1, n)?
            } else {
                generate_spacelike_planar(&kappa, args.s0, args.s1, n)?
            }
        }
        Mode::Frenet => {
            let case = args
                .case
                .ok_or_else(|| Failure::usage("--mode frenet requires --case"))?;
            let tau_text = args
                .tau
                .as_deref()
                .ok_or_else(|| Failure::usage("--mode frenet requires --tau"))?;
            let tau = parse_profile(tau_text)
                .map_err(|e| Failure::usage(format!("--tau: {e}")))?;
            integrate_default(case.into(), &kappa, &tau, args.s0, args.s1, args.step)?
        }
    };

    let payload = match args.format {
        Format::Json => CurveFileV1::from_curve(&curve).to_json(),
        Format::Csv => curve_to_csv(&curve),
    };
    write_output(&args.out, &payload)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn run_classify(args: &ClassifyArgs) -> Result<u8, Failure> {
    let curve = read_curve(&args.input)?;
    let report = if args.estimate {
        let est = estimate_curve(&curve).map_err(|e| Failure::numeric(e.to_string()))?;
        let rows: Vec<(f64, f64, f64)> =
            est.samples.iter().map(|r| (r.s, r.kappa, r.tau)).collect();
        classify_samples(&rows, args.tolerance)?
    } else {
        classify_with_tolerance(&curve, args.tolerance)?
    };

    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report_to_json(&report))
                .expect("report always serializes")
        );
    } else {
        print!("{}", render_report(&report, &curve));
    }
    Ok(0)
}

fn fit_to_json(fit: &LinearFit) -> serde_json::Value {
    json!({ "slope": fit.slope, "intercept": fit.intercept, "residual": fit.residual })
}

fn ratio_to_json(fit: &RatioFit) -> serde_json::Value {
    json!({ "coefficients": fit.coefficients, "residual": fit.residual })
}

fn report_to_json(r: &ClassificationReport) -> serde_json::Value {
    json!({
        "fit_tolerance": r.fit_tolerance,
        "kappa_fit": fit_to_json(&r.kappa_fit),
        "tau_fit": fit_to_json(&r.tau_fit),
        "max_abs_tau": r.max_abs_tau,
        "planar_cornu": r.planar_cornu,
        "euler": r.euler,
        "radius_fit": r.radius_fit.as_ref().map(fit_to_json),
        "torsion_reciprocal_fit": r.torsion_reciprocal_fit.as_ref().map(fit_to_json),
        "logarithmic": r.logarithmic,
        "ratio_fit": r.ratio_fit.as_ref().map(fit_to_json),
        "rectifying": r.rectifying,
        "helix_lambda": r.helix_lambda,
        "helix_residual": r.helix_residual,
        "helix": r.helix,
        "rational_ratio_fit": ratio_to_json(&r.rational_ratio_fit),
        "generalized_euler": r.generalized_euler,
        "bertrand": r.bertrand.map(|(a, b)| json!({ "A": a, "B": b })),
    })
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn render_report(r: &ClassificationReport, curve: &SampledCurve) -> String {
    let first = curve.samples().first().expect("curves are nonempty");
    let last = curve.samples().last().expect("curves are nonempty");
    let mut out = String::new();
    out.push_str(&format!("case:          {}\n", curve.case().name()));
    out.push_str(&format!(
        "samples:       {} on [{}, {}] (step {})\n",
        curve.len(),
        first.s,
        last.s,
        curve.step()
    ));
    out.push_str(&format!("fit tolerance: {:e}\n", r.fit_tolerance));
    out.push_str(&format!(
        "kappa fit:     slope {}, intercept {} (residual {:.3e})\n",
        r.kappa_fit.slope, r.kappa_fit.intercept, r.kappa_fit.residual
    ));
    out.push_str(&format!(
        "tau fit:       slope {}, intercept {} (residual {:.3e})\n",
        r.tau_fit.slope, r.tau_fit.intercept, r.tau_fit.residual
    ));
    out.push_str(&format!("max |tau|:     {:.6e}\n", r.max_abs_tau));
    out.push_str("verdicts:\n");
    out.push_str(&format!("  planar-cornu:      {}\n", yes_no(r.planar_cornu)));
    out.push_str(&format!("  euler:             {}\n", yes_no(r.euler)));
    out.push_str(&format!("  logarithmic:       {}\n", yes_no(r.logarithmic)));
    out.push_str(&format!("  rectifying:        {}\n", yes_no(r.rectifying)));
    match (r.helix_lambda, r.helix_residual) {
        (Some(lambda), Some(dev)) => out.push_str(&format!(
            "  helix:             {} (lambda {}, deviation {:.3e})\n",
            yes_no(r.helix),
            lambda,
            dev
        )),
        _ => out.push_str(&format!("  helix:             {}\n", yes_no(r.helix))),
    }
    out.push_str(&format!(
        "  generalized-euler: {} (residual {:.3e})\n",
        yes_no(r.generalized_euler),
        r.rational_ratio_fit.residual
    ));
    let [a, b, c, d] = r.rational_ratio_fit.coefficients;
    out.push_str(&format!(
        "ratio kappa/tau = (a*s+b)/(c*s+d): a = {a}, b = {b}, c = {c}, d = {d}\n"
    ));
    match r.bertrand {
        Some((a, b)) => {
            out.push_str(&format!("bertrand constants: A = {a}, B = {b}\n"));
        }
        None => out.push_str("bertrand constants: none\n"),
    }
    out
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn run_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    if !(args.tolerance.is_finite() && args.tolerance > 0.0) {
        return Err(Failure::usage(format!(
            "--tolerance must be positive, got {}",
            args.tolerance
        )));
    }
    let curve = read_curve(&args.input)?;
    let pass = match args.check {
        CheckKind::Bertrand => verify_bertrand(&curve, args)?,
        CheckKind::Darboux => {
            let residual = parallel_to_normal_residual(&darboux_curve(&curve), &curve)?;
            println!("check: darboux");
            println!(
                "parallel-to-normal residual: {residual:.6e} (tolerance {:e})",
                args.tolerance
            );
            residual <= args.tolerance
        }
        CheckKind::Involute => verify_involute(&curve, args)?,
        CheckKind::Developable => {
            let [a, b, c, d] = required_abcd(args)?;
            let spec = RuledSurfaceSpec { base: &curve, a, b, c, d };
            let residual = developability_residual(&spec)?;
            println!("check: developable");
            println!("director: ({a}*s+{b})T + ({c}*s+{d})B");
            println!(
                "max |det(T, X, X')|: {residual:.6e} (tolerance {:e})",
                args.tolerance
            );
            residual <= args.tolerance
        }
        CheckKind::Ucurve => {
            let field = u_curve(&curve)?;
            let residual = parallel_to_normal_residual(&field, &curve)?;
            println!("check: ucurve");
            println!(
                "parallel-to-normal residual: {residual:.6e} (tolerance {:e})",
                args.tolerance
            );
            residual <= args.tolerance
        }
    };

    if pass {
        println!("PASS");
        Ok(0)
    } else {
        println!("FAIL");
        Ok(EXIT_FAIL)
    }
}

fn required_abcd(args: &VerifyArgs) -> Result<[f64; 4], Failure> {
    let text = args
        .abcd
        .as_deref()
        .ok_or_else(|| Failure::usage("this check requires --abcd a,b,c,d"))?;
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Failure::usage(format!(
            "--abcd needs exactly four comma-separated numbers, got {:?}",
            text
        )));
    }
    let mut out = [0.0; 4];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse::<f64>()
            .map_err(|_| Failure::usage(format!("--abcd: {part:?} is not a number")))?;
        if !slot.is_finite() {
            return Err(Failure::usage(format!("--abcd: {part:?} is not finite")));
        }
    }
    Ok(out)
}

fn verify_bertrand(curve: &SampledCurve, args: &VerifyArgs) -> Result<bool, Failure> {
    println!("check: bertrand");
    let report = classify_with_tolerance(curve, DEFAULT_FIT_TOLERANCE)?;
    if !(report.kappa_fit.ok(DEFAULT_FIT_TOLERANCE) && report.tau_fit.ok(DEFAULT_FIT_TOLERANCE))
    {
        println!(
            "profiles are not linear at fit tolerance {:e} \
             (kappa residual {:.3e}, tau residual {:.3e})",
            DEFAULT_FIT_TOLERANCE, report.kappa_fit.residual, report.tau_fit.residual
        );
        return Ok(false);
    }
    let (a, b) = match bertrand_coefficients(&report.kappa_fit, &report.tau_fit) {
        Ok(pair) => pair,
        Err(e @ ClassifyError::ProportionalProfiles) => {
            // A helix has no unique Bertrand constants: that is a verification
            // failure, not a numeric error.
            println!("{e}");
            return Ok(false);
        }
        Err(other) => return Err(other.into()),
    };
    let identity_residual = curve
        .samples()
        .iter()
        .map(|smp| (a * smp.kappa + b * smp.tau - 1.0).abs())
        .fold(0.0, f64::max);
    println!("constants: A = {a}, B = {b}");
    println!(
        "max |A*kappa + B*tau - 1|: {identity_residual:.6e} (tolerance {:e})",
        args.tolerance
    );
    let mut pass = identity_residual <= args.tolerance;

    if let Some(r) = args.r {
        let mate = bertrand_mate(curve, r)?;
        // The estimator trims the mate's grid; align by arc length.
        let offset = ((mate.samples()[0].s - curve.samples()[0].s) / curve.step()).round()
            as usize;
        let mut worst_angle = 0.0f64;
        for (k, mate_sample) in mate.samples().iter().enumerate() {
            let base = &curve.samples()[k + offset];
            let angle = euclidean_line_angle(mate_sample.frame.n, base.frame.n)
                .map_err(|e| Failure::numeric(e.to_string()))?;
            worst_angle = worst_angle.max(angle);
        }
        println!(
            "mate normal-line angle (r = {r}): {worst_angle:.6e} rad (tolerance {:e})",
            args.tolerance
        );
        pass = pass && worst_angle <= args.tolerance;
    }
    Ok(pass)
}

fn verify_involute(curve: &SampledCurve, args: &VerifyArgs) -> Result<bool, Failure> {
    let [a, b, c, d] = required_abcd(args)?;
    let lambda = args.lambda;
    let offset = involute_offset_curve(curve, a, b, c, d, lambda)?;
    let products = normal_inner_products(&offset);
    let case = curve.case();

    let mut identity_deviation = 0.0f64;
    let mut mate_residual = 0.0f64;
    for (i, &(s, got)) in products.iter().enumerate() {
        let base = &curve.samples()[i + 1];
        let want = involute_identity_rhs(case, base.kappa, base.tau, a * s + b, c * s + d);
        identity_deviation = identity_deviation.max((got - want).abs());
        mate_residual = mate_residual.max(got.abs());
    }

    println!("check: involute");
    println!("offset: ({a}*s+{b})T + ({c}*s+{d})B + ({lambda})N");
    println!(
        "identity deviation |<beta',N> - closed form|: {identity_deviation:.6e} \
         (tolerance {:e})",
        args.tolerance
    );
    println!("mate residual max |<beta',N>|: {mate_residual:.6e}");
    Ok(identity_deviation <= args.tolerance)
}

// ---------------------------------------------------------------------------
// export-svg
// ---------------------------------------------------------------------------

fn run_export_svg(args: &ExportSvgArgs) -> Result<u8, Failure> {
    let curve = read_curve(&args.input)?;
    let plane: Plane = args.plane.into();
    let points: Vec<(f64, f64)> =
        curve.samples().iter().map(|smp| plane.project(smp.point)).collect();
    write_output(&args.out, &svg_polyline(&points, args.width, args.height))?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// I/O plumbing
// ---------------------------------------------------------------------------

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("reading stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("reading {path}: {e}")))
    }
}

fn read_curve(path: &str) -> Result<SampledCurve, Failure> {
    let text = read_input(path)?;
    let doc = CurveFileV1::from_json(&text)
        .map_err(|e| Failure::usage(format!("{path}: {e}")))?;
    doc.to_curve().map_err(|e| Failure::usage(format!("{path}: {e}")))
}

/// Write to `path` atomically (temp file + rename), or to stdout for "-".
fn write_output(path: &str, contents: &str) -> Result<(), Failure> {
    if path == "-" {
        std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| Failure::usage(format!("writing stdout: {e}")))?;
        return Ok(());
    }
    let dir = Path::new(path)
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| Failure::usage(format!("creating temporary file in {dir:?}: {e}")))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| Failure::usage(format!("writing {path}: {e}")))?;
    tmp.persist(path)
        .map_err(|e| Failure::usage(format!("renaming into {path}: {e}")))?;
    Ok(())
}
