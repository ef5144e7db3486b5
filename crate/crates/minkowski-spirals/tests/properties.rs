//! Property-based checks of the algebraic invariants the modules promise:
//! metric algebra, causal classification, frame orthonormalization, parser
//! round trips, profile fits, quadrature, and the estimator's behaviour
//! under isometries of the ambient space.

use std::sync::OnceLock;

use minkowski_spirals::curve::{CurveCase, FrenetFrame};
use minkowski_spirals::estimate::estimate;
use minkowski_spirals::fit::{fit_linear, fit_ratio_rational_linear};
use minkowski_spirals::integrator::integrate_default;
use minkowski_spirals::lorentz::{causal_character, lorentz_cross, lorentz_dot, LVec3, EPS_CAUSAL};
use minkowski_spirals::profile::{canonicalize, parse_profile, CanonicalForm, ProfileExpr, UnaryFn};
use minkowski_spirals::quadrature;

use proptest::prelude::*;

fn vec3() -> impl Strategy<Value = LVec3> {
    (-100.0f64..100.0, -100.0f64..100.0, -100.0f64..100.0)
        .prop_map(|(x, y, z)| LVec3::new(x, y, z))
}

/// Nonzero scale factor spanning several decades, either sign.
fn nonzero_scale() -> impl Strategy<Value = f64> {
    (1e-3f64..1e3, any::<bool>()).prop_map(|(m, neg)| if neg { -m } else { m })
}

proptest! {
    #[test]
    fn lorentz_dot_is_symmetric(u in vec3(), v in vec3()) {
        // Term-by-term the two expressions multiply the same pairs, so the
        // equality is exact, not approximate.
        prop_assert_eq!(lorentz_dot(u, v), lorentz_dot(v, u));
    }

    #[test]
    fn lorentz_dot_is_bilinear(
        u in vec3(), w in vec3(), v in vec3(),
        a in -10.0f64..10.0, b in -10.0f64..10.0,
    ) {
        let lhs = lorentz_dot(a * u + b * w, v);
        let rhs = a * lorentz_dot(u, v) + b * lorentz_dot(w, v);
        let scale = (a.abs() * u.euclidean_norm() + b.abs() * w.euclidean_norm())
            * v.euclidean_norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (scale + 1.0),
            "lhs {lhs} vs rhs {rhs} at scale {scale}");
    }

    #[test]
    fn lorentz_cross_is_orthogonal_to_both_factors(u in vec3(), v in vec3()) {
        let w = lorentz_cross(u, v);
        let scale = u.euclidean_norm() * v.euclidean_norm();
        let tol = 1e-12 * (scale * (u.euclidean_norm() + v.euclidean_norm()) + 1.0);
        prop_assert!(lorentz_dot(w, u).abs() <= tol);
        prop_assert!(lorentz_dot(w, v).abs() <= tol);
    }

    #[test]
    fn causal_character_is_scale_invariant(v in vec3(), k in nonzero_scale()) {
        let norm2 = v.euclidean_norm() * v.euclidean_norm();
        prop_assume!(norm2 > 0.0);
        // Stay away from the lightlike decision boundary, where one rounding
        // step in k·v could legitimately flip the verdict.
        let ratio = lorentz_dot(v, v).abs() / norm2;
        prop_assume!((ratio - EPS_CAUSAL).abs() > 0.1 * EPS_CAUSAL);
        prop_assert_eq!(
            causal_character(k * v, EPS_CAUSAL).unwrap(),
            causal_character(v, EPS_CAUSAL).unwrap()
        );
    }

    #[test]
    fn reorthonormalize_is_idempotent(
        case_pick in 0usize..3,
        noise in proptest::array::uniform9(-0.05f64..0.05),
    ) {
        let case = [
            CurveCase::Timelike,
            CurveCase::SpacelikeSpacelikeNormal,
            CurveCase::SpacelikeTimelikeNormal,
        ][case_pick];
        // Canonical exact frame for each case, then a small perturbation.
        let (t, n, b) = match case {
            CurveCase::Timelike => (LVec3::E3, LVec3::E1, LVec3::E2),
            CurveCase::SpacelikeSpacelikeNormal => (LVec3::E1, LVec3::E2, -LVec3::E3),
            CurveCase::SpacelikeTimelikeNormal => (LVec3::E1, LVec3::E3, -LVec3::E2),
        };
        let frame = FrenetFrame::new(
            t + LVec3::new(noise[0], noise[1], noise[2]),
            n + LVec3::new(noise[3], noise[4], noise[5]),
            b + LVec3::new(noise[6], noise[7], noise[8]),
        );
        let once = frame.reorthonormalize(case).unwrap();
        let twice = once.reorthonormalize(case).unwrap();
        for (a, b) in [
            (once.t, twice.t),
            (once.n, twice.n),
            (once.b, twice.b),
        ] {
            prop_assert!((a - b).euclidean_norm() <= 1e-14,
                "drift {:.3e}", (a - b).euclidean_norm());
        }
    }

    #[test]
    fn fit_linear_is_exact_on_noiseless_data(
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        n in 2usize..50,
        x0 in 0.0f64..1.0,
        h in 0.01f64..0.1,
    ) {
        let samples: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let s = x0 + h * i as f64;
                (s, a * s + b)
            })
            .collect();
        let fit = fit_linear(&samples).unwrap();
        prop_assert!(fit.residual <= 1e-10, "residual {:.3e}", fit.residual);
        prop_assert!((fit.slope - a).abs() <= 1e-9);
        prop_assert!((fit.intercept - b).abs() <= 1e-9);
    }

    #[test]
    fn ratio_fit_is_scale_invariant(
        kappa_slope in -0.4f64..0.4,
        kappa_icpt in 1.0f64..2.0,
        tau_slope in -2.0f64..2.0,
        tau_icpt in -2.0f64..2.0,
        k in nonzero_scale(),
    ) {
        let samples: Vec<(f64, f64, f64)> = (0..21)
            .map(|i| {
                let s = 0.1 * i as f64;
                (s, kappa_slope * s + kappa_icpt, tau_slope * s + tau_icpt)
            })
            .collect();
        let scaled: Vec<(f64, f64, f64)> =
            samples.iter().map(|&(s, ka, ta)| (s, k * ka, k * ta)).collect();
        let base = fit_ratio_rational_linear(&samples).unwrap();
        let again = fit_ratio_rational_linear(&scaled).unwrap();
        // The coefficient vector is only defined up to scale; the ratio
        // function it induces is what must not move.
        for probe in [0.1f64, 0.75, 1.9] {
            let r0 = base.ratio_at(probe);
            let r1 = again.ratio_at(probe);
            prop_assert!((r0 - r1).abs() <= 1e-6 * (1.0 + r0.abs()),
                "ratio at {probe}: {r0} vs {r1}");
        }
    }

    #[test]
    fn quadrature_is_additive_and_antisymmetric(
        c0 in -3.0f64..3.0,
        c1 in -3.0f64..3.0,
        c2 in -3.0f64..3.0,
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        c in -3.0f64..3.0,
    ) {
        let f = |s: f64| Ok(c0 + c1 * s + c2 * s.sin());
        let ab = quadrature::integrate(f, a, b, 1e-10).unwrap();
        let bc = quadrature::integrate(f, b, c, 1e-10).unwrap();
        let ac = quadrature::integrate(f, a, c, 1e-10).unwrap();
        prop_assert!((ab + bc - ac).abs() <= 1e-8,
            "additivity violated by {:.3e}", (ab + bc - ac).abs());
        // Reversal recomputes the same forward integral and negates it, so
        // the antisymmetry is exact.
        prop_assert_eq!(quadrature::integrate(f, b, a, 1e-10).unwrap(), -ab);
    }

    #[test]
    fn canonicalize_recovers_programmatic_linear_coefficients(
        a in -10.0f64..10.0,
        b in -10.0f64..10.0,
        shape in 0usize..4,
    ) {
        prop_assume!(a.abs() > 1e-6);
        // Literals are nonnegative by convention; negative values get a Neg.
        fn num(v: f64) -> Box<ProfileExpr> {
            if v < 0.0 {
                Box::new(ProfileExpr::Neg(Box::new(ProfileExpr::Number(-v))))
            } else {
                Box::new(ProfileExpr::Number(v))
            }
        }
        let var = || Box::new(ProfileExpr::Var);
        let ast = match shape {
            0 => ProfileExpr::Add(Box::new(ProfileExpr::Mul(num(a), var())), num(b)),
            1 => ProfileExpr::Add(num(b), Box::new(ProfileExpr::Mul(var(), num(a)))),
            2 => ProfileExpr::Sub(Box::new(ProfileExpr::Mul(num(a), var())), num(-b)),
            _ => ProfileExpr::Div(
                Box::new(ProfileExpr::Add(Box::new(ProfileExpr::Mul(num(a), var())), num(b))),
                num(1.0),
            ),
        };
        match canonicalize(&ast) {
            CanonicalForm::Linear { slope, intercept } => {
                prop_assert!((slope - a).abs() <= 1e-12, "slope {slope} vs {a}");
                prop_assert!((intercept - b).abs() <= 1e-12, "intercept {intercept} vs {b}");
            }
            other => prop_assert!(false, "expected Linear, got {other:?}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Parser round trip over random ASTs.
// ---------------------------------------------------------------------------

fn expr_strategy() -> impl Strategy<Value = ProfileExpr> {
    let leaf = prop_oneof![
        Just(ProfileExpr::Var),
        (0.0f64..100.0).prop_map(ProfileExpr::Number),
    ];
    leaf.prop_recursive(4, 64, 8, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| ProfileExpr::Add(Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| ProfileExpr::Sub(Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| ProfileExpr::Mul(Box::new(l), Box::new(r))),
            (inner.clone(), inner.clone())
                .prop_map(|(l, r)| ProfileExpr::Div(Box::new(l), Box::new(r))),
            inner.clone().prop_map(|x| ProfileExpr::Neg(Box::new(x))),
            (
                prop_oneof![
                    Just(UnaryFn::Sin),
                    Just(UnaryFn::Cos),
                    Just(UnaryFn::Sinh),
                    Just(UnaryFn::Cosh),
                    Just(UnaryFn::Exp),
                    Just(UnaryFn::Ln),
                ],
                inner,
            )
                .prop_map(|(f, x)| ProfileExpr::Call(f, Box::new(x))),
        ]
    })
}

proptest! {
    #[test]
    fn parse_print_parse_is_the_identity(ast in expr_strategy()) {
        let printed = ast.to_string();
        let reparsed = parse_profile(&printed);
        prop_assert_eq!(reparsed.as_ref().ok(), Some(&ast), "printed `{}`", printed);
        prop_assert_eq!(reparsed.unwrap().to_string(), printed);
    }
}

// ---------------------------------------------------------------------------
// Estimator invariance under isometries of E₁³.
// ---------------------------------------------------------------------------

type BaseData = (Vec<(f64, LVec3)>, Vec<f64>, Vec<f64>);

/// One shared integrated curve plus its baseline estimates; integrating once
/// keeps the property test fast.
fn base_curve() -> &'static BaseData {
    static BASE: OnceLock<BaseData> = OnceLock::new();
    BASE.get_or_init(|| {
        let kappa = parse_profile("2*s+0.5").unwrap();
        let tau = parse_profile("-s+1").unwrap();
        // The invariance bound is about rounding, not truncation: in real
        // arithmetic the estimate of an isometry image agrees with the
        // original exactly, at any step. The rounding noise in τ̂ scales
        // like (2h)⁻³ times the squared Euclidean size of the frame, and
        // the frame grows like cosh(∫√(κ²+τ²)) — so the test wants a curve
        // of modest hyperbolic winding and a *coarse* grid. Here the floor
        // sits near 1e-10, an order under the asserted bound.
        let curve =
            integrate_default(CurveCase::Timelike, &kappa, &tau, 0.0, 1.0, 1e-2).unwrap();
        let points = curve.points();
        let est = estimate(&points).unwrap();
        let kappas = est.samples.iter().map(|r| r.kappa).collect();
        let taus = est.samples.iter().map(|r| r.tau).collect();
        (points, kappas, taus)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn estimator_is_invariant_under_lorentz_isometries(
        theta in 0.0f64..std::f64::consts::TAU,
        rapidity in -1.0f64..1.0,
    ) {
        let (points, kappas, taus) = base_curve();
        // Rotation in the spacelike (x, y)-plane followed by a hyperbolic
        // rotation in the (y, z)-plane: both preserve x² + y² − z².
        let (sin_t, cos_t) = theta.sin_cos();
        let (sh, ch) = (rapidity.sinh(), rapidity.cosh());
        let mapped: Vec<(f64, LVec3)> = points
            .iter()
            .map(|&(s, p)| {
                let (x, y) = (cos_t * p.x - sin_t * p.y, sin_t * p.x + cos_t * p.y);
                (s, LVec3::new(x, ch * y + sh * p.z, sh * y + ch * p.z))
            })
            .collect();
        let est = estimate(&mapped).unwrap();
        for (row, (k0, t0)) in est.samples.iter().zip(kappas.iter().zip(taus.iter())) {
            prop_assert!((row.kappa - k0).abs() <= 1e-9,
                "curvature moved {:.3e} at s = {}", (row.kappa - k0).abs(), row.s);
            prop_assert!((row.tau - t0).abs() <= 1e-9,
                "torsion moved {:.3e} at s = {}", (row.tau - t0).abs(), row.s);
        }
    }
}
