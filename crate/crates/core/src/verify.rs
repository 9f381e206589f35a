//! Named numerical checks, grouped into suites. Each check reports a
//! residual and the tolerance it is held to.

use crate::cosets::{cosets_hyperbolic, group_ball};
use crate::error::{Error, Result};
use crate::expansions::{
    elliptic_coeffs_contour, elliptic_coeffs_taylor, hyperbolic_coeffs, op_a_elliptic, op_a_hyperbolic,
    op_a_parabolic, parabolic_coeffs,
};
use crate::forms::{delta_integers, delta_qexp};
use crate::moebius::{
    slash_eval, Cusp, EllipticDatum, HyperbolicDatum, Matrix, ParabolicDatum, PointH, C64,
};
use crate::poincare::{
    phi_elliptic, phi_elliptic_star, phi_parabolic, representative_shift_residual, PoincareSeries, SeedFunction,
};
use crate::qforms::{automorph, form_of, hyperbolic_period, ClassList, KatokTheta, QuadForm, ZagierSum};
use crate::quadrature::{
    ball_integral, elliptic_inner_constant, hyperbolic_inner_constant, i_ab, lemma_disc_integral,
    lemma_sector_integral, mean_value_check, mean_value_constant, parabolic_inner_constant, petersson_inner,
    DEFAULT_ORDER, DEFAULT_Y_CAP,
};
use crate::secondorder::{build_second_order, PeriodHom, SeedSpec};
use crate::special::gamma;
use crate::Group;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// Elliptic coefficients of Δ at i for l = 0, 2, 4, 6, 8, to three decimals.
pub const DELTA_AT_I: [(i64, f64); 5] = [(0, -0.114), (2, 1.094), (4, -2.621), (6, -6.694), (8, 37.787)];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Expansions,
    InnerProducts,
    Qform,
    SecondOrder,
    Invariants,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Identities,
        Suite::Expansions,
        Suite::InnerProducts,
        Suite::Qform,
        Suite::SecondOrder,
        Suite::Invariants,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Expansions => "expansions",
            Suite::InnerProducts => "inner-products",
            Suite::Qform => "qform",
            Suite::SecondOrder => "second-order",
            Suite::Invariants => "invariants",
        }
    }

    /// `"all"` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{s}'")))
    }
}

/// A residual, the tolerance and a human-readable note.
type Outcome = Result<(f64, f64, String)>;

fn run(suite: Suite, name: &str, f: impl FnOnce() -> Outcome) -> CheckResult {
    let start = Instant::now();
    let out = f();
    let seconds = start.elapsed().as_secs_f64();
    match out {
        Ok((residual, tolerance, detail)) => CheckResult {
            suite: suite.name(),
            name: name.to_string(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            detail,
            seconds,
        },
        Err(e) => CheckResult {
            suite: suite.name(),
            name: name.to_string(),
            residual: f64::INFINITY,
            tolerance: 0.0,
            passed: false,
            detail: format!("error: {e}"),
            seconds,
        },
    }
}

fn c(x: f64, y: f64) -> C64 {
    C64::new(x, y)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn run_suite(suite: Suite) -> Vec<CheckResult> {
    match suite {
        Suite::Identities => identities(),
        Suite::Expansions => expansions(),
        Suite::InnerProducts => inner_products(),
        Suite::Qform => qform(),
        Suite::SecondOrder => second_order(),
        Suite::Invariants => invariants(),
    }
}

pub fn run_suites(suites: &[Suite]) -> Vec<CheckResult> {
    suites.iter().flat_map(|&s| run_suite(s)).collect()
}

fn identities() -> Vec<CheckResult> {
    let s = Suite::Identities;
    vec![
        run(s, "iab-closed-form", || {
            let mut worst: f64 = 0.0;
            for a in [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 1.0), c(3.0, -2.0), c(0.5, 4.0)] {
                for b in [0, 2, 4, 6, 8] {
                    let v = i_ab(a, b)?;
                    worst = worst.max(rel(v.closed_form, v.quadrature)).max(rel(v.recurrence, v.quadrature));
                }
            }
            Ok((worst, 1e-9, "a over 6 complex values, b in {0,2,4,6,8}".into()))
        }),
        run(s, "hyperbolic-constant", || {
            let mut worst: f64 = 0.0;
            for xi in [(3.0 + 5f64.sqrt()) / 2.0, 2.0 + 3f64.sqrt(), 5.0 + 24f64.sqrt()] {
                for m in -3..=3 {
                    let h = hyperbolic_inner_constant(12, m, xi)?;
                    worst = worst.max(rel(h.closed_form, h.integral));
                }
            }
            Ok((worst, 1e-9, "k=12, |m| <= 3, three values of xi".into()))
        }),
        run(s, "disc-integral", || {
            let mut worst: f64 = 0.0;
            for beta in [0.5, 1.0, 2.0] {
                let diag: Vec<f64> = (0..=4)
                    .map(|a| lemma_disc_integral(a, a, 12, beta, DEFAULT_ORDER).map(|v| v.closed_form))
                    .collect::<Result<_>>()?;
                for a in 0..=4u32 {
                    for b in 0..=4u32 {
                        let v = lemma_disc_integral(a, b, 12, beta, DEFAULT_ORDER)?;
                        let scale = (diag[a as usize] * diag[b as usize]).sqrt();
                        worst = worst.max((v.quadrature - v.closed_form).norm() / scale);
                    }
                }
            }
            Ok((worst, 1e-9, "k=12, 0 <= a,b <= 4, beta in {0.5,1,2}".into()))
        }),
        run(s, "sector-integral", || {
            let mut worst: f64 = 0.0;
            for (order, range) in [(2u32, 3..=5i64), (3, 2..=4)] {
                let diag: Vec<f64> = range
                    .clone()
                    .map(|l| lemma_sector_integral(l, l, order, 12, 1.0, DEFAULT_ORDER).map(|v| v.closed_form))
                    .collect::<Result<_>>()?;
                let lo = *range.start();
                for l in range.clone() {
                    for m in range.clone() {
                        let v = lemma_sector_integral(l, m, order, 12, 1.0, DEFAULT_ORDER)?;
                        let scale = (diag[(l - lo) as usize] * diag[(m - lo) as usize]).sqrt();
                        worst = worst.max((v.quadrature - v.closed_form).norm() / scale);
                    }
                }
            }
            Ok((worst, 1e-9, "k=12, sectors of order 2 and 3".into()))
        }),
        run(s, "mean-value", || {
            let d = delta_qexp(120)?;
            let f = d.evaluator();
            let mut worst: f64 = 0.0;
            for (z, r) in [(c(0.0, 1.0), 0.5), (c(0.3, 1.2), 0.4), (c(-0.1, 0.8), 0.3)] {
                let mv = mean_value_check(&f, 12, z, r, d.y_min, DEFAULT_ORDER)?;
                worst = worst.max(mv.residual / mv.lhs.norm());
            }
            let one = |_: C64| -> Result<C64> { Ok(c(1.0, 0.0)) };
            let z = c(0.3, 1.7);
            let v = ball_integral(&one, 12, z, 0.5, DEFAULT_ORDER)?.value;
            let expect = mean_value_constant(0.5, 12) * z.im.powi(-6);
            worst = worst.max((v.re - expect).abs() / expect);
            Ok((worst, 1e-9, "Delta at three balls and the constant function".into()))
        }),
    ]
}

fn expansions() -> Vec<CheckResult> {
    let s = Suite::Expansions;
    let i = PointH::new(c(0.0, 1.0)).expect("i");
    let rho = PointH::new(c(0.5, 3f64.sqrt() / 2.0)).expect("rho");
    vec![
        run(s, "delta-at-i", || {
            let d = delta_qexp(80)?;
            let t = elliptic_coeffs_taylor(&d, &EllipticDatum::new(i, Group::Sl2z)?, 8)?;
            let mut worst: f64 = 0.0;
            for (l, want) in DELTA_AT_I {
                let v = t.get(l).ok_or_else(|| Error::InvalidInput("missing index".into()))?;
                worst = worst.max((v.re - want).abs());
            }
            let stray = t
                .entries
                .iter()
                .map(|(l, v)| if l % 2 == 1 { v.norm() } else { v.im.abs() })
                .fold(0.0, f64::max);
            let residual = if stray < 1e-9 { worst } else { f64::INFINITY };
            Ok((residual, 5e-4, format!("odd/imaginary parts {stray:.1e}")))
        }),
        run(s, "chowla-selberg", || {
            let d = delta_qexp(80)?;
            let t = elliptic_coeffs_taylor(&d, &EllipticDatum::new(i, Group::Sl2z)?, 0)?;
            let g = gamma(c(0.25, 0.0)).re / gamma(c(0.75, 0.0)).re;
            let cs = -(4.0 * PI).powi(-6) * g.powi(12);
            let c0 = t.get(0).unwrap_or_default();
            Ok(((c0.re - cs).abs() / cs.abs(), 1e-9, format!("c(0) = {:.12}", c0.re)))
        }),
        run(s, "taylor-vs-contour", || {
            let d = delta_qexp(200)?;
            let f = d.evaluator();
            let mut worst: f64 = 0.0;
            for z0 in [i, rho] {
                let ed = EllipticDatum::new(z0, Group::Sl2z)?;
                let t = elliptic_coeffs_taylor(&d, &ed, 8)?;
                let k = elliptic_coeffs_contour(&f, 12, &ed, 8, 0.5)?;
                for l in 0..=8 {
                    worst = worst.max((t.get(l).unwrap_or_default() - k.get(l).unwrap_or_default()).norm());
                }
            }
            Ok((worst, 1e-8, "Delta at i and rho, l <= 8".into()))
        }),
        run(s, "elliptic-radius", || {
            let d = delta_qexp(200)?;
            let f = d.evaluator();
            let mut worst: f64 = 0.0;
            for z0 in [i, rho] {
                let ed = EllipticDatum::new(z0, Group::Sl2z)?;
                let a = elliptic_coeffs_contour(&f, 12, &ed, 8, 0.4)?;
                let b = elliptic_coeffs_contour(&f, 12, &ed, 8, 0.6)?;
                for ((_, x), (_, y)) in a.entries.iter().zip(&b.entries) {
                    worst = worst.max((x - y).norm());
                }
            }
            Ok((worst, 1e-8, "radii 0.4 and 0.6".into()))
        }),
        run(s, "tau", || {
            let d = delta_qexp(600)?;
            let f = d.evaluator();
            let tau = delta_integers(20)?;
            let b = parabolic_coeffs(&f, 12, &ParabolicDatum::infinity(), 20, 0.15)?;
            let worst = b
                .entries
                .iter()
                .map(|(m, v)| {
                    let t = tau[*m as usize] as f64;
                    (v - t).norm() / t.abs()
                })
                .fold(0.0, f64::max);
            Ok((worst, 1e-9, "m <= 20 sampled at y = 0.15".into()))
        }),
        run(s, "hyperbolic-height", || {
            let d = delta_qexp(600)?;
            let f = d.evaluator();
            let hd = HyperbolicDatum::new(&Matrix::new(1, 1, 1, 2)?)?;
            let h = hd.strip_height();
            let a = hyperbolic_coeffs(&f, 12, &hd, 4, 0.3 * h)?;
            let b = hyperbolic_coeffs(&f, 12, &hd, 4, 0.6 * h)?;
            let worst = a
                .entries
                .iter()
                .zip(&b.entries)
                .map(|((_, x), (_, y))| (x - y).norm() / x.norm().max(1.0))
                .fold(0.0, f64::max);
            Ok((worst, 1e-8, "D=5, |m| <= 4, heights 0.3H and 0.6H".into()))
        }),
    ]
}

fn inner_products() -> Vec<CheckResult> {
    let s = Suite::InnerProducts;
    vec![
        run(s, "delta-parabolic", || {
            let d = delta_qexp(120)?;
            let f = d.evaluator();
            let want = parabolic_inner_constant(12, 1);
            let errs: Vec<f64> = [5u64, 10, 20]
                .iter()
                .map(|&b| {
                    let p = phi_parabolic(Group::Sl2z, Cusp::Infinity, 12, 1, b)?;
                    let g = p.evaluator();
                    let v = petersson_inner(&f, 12, &g, 12, DEFAULT_Y_CAP, DEFAULT_ORDER)?.value;
                    Ok(rel(v, c(want, 0.0)))
                })
                .collect::<Result<_>>()?;
            monotone("c_max", &[5, 10, 20], &errs, 1e-3)
        }),
        run(s, "delta-elliptic-at-i", || {
            let d = delta_qexp(120)?;
            let f = d.evaluator();
            let i = PointH::new(c(0.0, 1.0))?;
            let b4 = elliptic_coeffs_taylor(&d, &EllipticDatum::new(i, Group::Sl2z)?, 2)?
                .get(2)
                .unwrap_or_default();
            let want = elliptic_inner_constant(12, 2, 4)?;
            let errs: Vec<f64> = [8u64, 16, 32]
                .iter()
                .map(|&b| {
                    let p = phi_elliptic(Group::Sl2z, i, 12, 4, b)?;
                    let g = p.evaluator();
                    let v = petersson_inner(&f, 12, &g, 12, DEFAULT_Y_CAP, DEFAULT_ORDER)?.value;
                    Ok(rel(v / b4, c(want, 0.0)))
                })
                .collect::<Result<_>>()?;
            monotone("entry bound", &[8, 16, 32], &errs, 1e-2)
        }),
    ]
}

/// Passes when the last error is within `tol` and the errors never grow.
fn monotone(label: &str, bounds: &[u64], errs: &[f64], tol: f64) -> Outcome {
    let detail = bounds
        .iter()
        .zip(errs)
        .map(|(b, e)| format!("{label} {b}: {e:.2e}"))
        .collect::<Vec<_>>()
        .join("; ");
    let last = *errs.last().unwrap_or(&f64::INFINITY);
    let grows = errs.windows(2).any(|w| w[1] > w[0]);
    Ok((if grows { f64::INFINITY } else { last }, tol, detail))
}

fn qform() -> Vec<CheckResult> {
    let s = Suite::Qform;
    let pts = [c(0.0, 1.0), c(0.3, 0.9), c(-0.2, 1.4)];
    vec![
        run(s, "theta-vs-hyperbolic-series", || {
            let g = Matrix::new(1, 1, 1, 2)?;
            let datum = HyperbolicDatum::new(&g)?;
            let cos = cosets_hyperbolic(Group::Sl2z, &datum, 25)?;
            let phi = PoincareSeries::new(SeedFunction::hyperbolic(datum.clone(), 0), 12, &cos)?;
            let theta = KatokTheta::from_cosets(&g, 12, &cos)?;
            let scale = (datum.xi - 1.0 / datum.xi).powi(-6);
            let mut worst: f64 = 0.0;
            for z in pts {
                let t = theta.eval(z)?;
                worst = worst.max(rel(phi.value(z)? * scale, t));
            }
            Ok((worst, 1e-6, "D=5, k=12, three points".into()))
        }),
        run(s, "theta-vs-class-sum", || {
            let mut worst: f64 = 0.0;
            for d in [5, 8, 13] {
                let q = ClassList::new(d)?.classes[0].representative;
                let g = automorph(&q)?;
                let theta = KatokTheta::new(Group::Sl2z, &g, 12, 30)?;
                let zs = ZagierSum::new(12, d, 80, Some(&q))?;
                // [Q_γ] = u·[Q]
                let u = (form_of(&g)?.a / q.a) as f64;
                for z in pts {
                    let t = theta.eval(z)?;
                    worst = worst.max(rel(zs.eval(z)? * u.powi(-6), t));
                }
            }
            Ok((worst, 1e-6, "D in {5,8,13}, k=12, theta bound 30, class sum bound 80".into()))
        }),
        run(s, "cycles-partition-reduced-forms", || {
            let mut bad = 0usize;
            for d in nonsquare_discriminants(100) {
                let cl = ClassList::new(d)?;
                let total: usize = cl.classes.iter().map(|x| x.cycle.len()).sum();
                let mut seen: Vec<QuadForm> = cl.classes.iter().flat_map(|x| x.cycle.clone()).collect();
                seen.sort();
                seen.dedup();
                if seen.len() != total || seen.iter().any(|q| !q.is_reduced() || q.disc() != d) {
                    bad += 1;
                }
            }
            Ok((bad as f64, 0.0, "nonsquare D <= 100".into()))
        }),
        run(s, "automorphs", || {
            let mut bad = 0usize;
            let mut n = 0usize;
            for d in nonsquare_discriminants(100) {
                for cls in ClassList::new(d)?.classes {
                    let q = cls.representative;
                    let a = automorph(&q)?;
                    let f = form_of(&a)?;
                    let u = a.c / q.a;
                    n += 1;
                    if q.act(&a)? != q || f != QuadForm::new(u * q.a, u * q.b, u * q.c) {
                        bad += 1;
                    }
                }
            }
            Ok((bad as f64, 0.0, format!("{n} class representatives")))
        }),
        run(s, "period-base-point", || {
            let d = delta_qexp(120)?;
            let g = Matrix::new(1, 1, 1, 2)?;
            let a = hyperbolic_period(&d, &g, c(0.0, 1.0), 32)?;
            let b = hyperbolic_period(&d, &g, c(1.0, 2.0), 32)?;
            Ok((rel(b.value, a.value), 1e-8, format!("period {:.6e}", a.value)))
        }),
    ]
}

/// Nonsquare `D ≡ 0, 1 (mod 4)` with `5 ≤ D ≤ max`.
pub fn nonsquare_discriminants(max: i64) -> Vec<i64> {
    (5..=max)
        .filter(|d| d % 4 == 0 || d % 4 == 1)
        .filter(|&d| {
            let r = (d as f64).sqrt().round() as i64;
            r * r != d
        })
        .collect()
}

/// Hyperbolic elements of Γ₀(11) used for the second-order law.
pub const LAW_ELEMENTS: [[i64; 4]; 3] = [[3, 1, 11, 4], [4, -1, 33, -8], [5, -1, 11, -2]];
pub const SECOND_ORDER_BOUND: u64 = 600;

fn second_order() -> Vec<CheckResult> {
    let s = Suite::SecondOrder;
    let grp = Group::Gamma0(11);
    let hom = match PeriodHom::x11_plus() {
        Ok(h) => h,
        Err(e) => return vec![run(s, "period-homomorphism", || Err(e))],
    };
    let mut out = vec![
        run(s, "additivity", || {
            let ball: Vec<Matrix> = group_ball(grp, 40).into_iter().filter(|g| g.c != 0).collect();
            let step = (ball.len() / 23).max(1);
            let mut worst: f64 = 0.0;
            for i in 0..20 {
                let g1 = ball[(i * step) % ball.len()];
                let g2 = ball[(i * step * 7 + 13) % ball.len()];
                let lhs = hom.value(&g1.checked_mul(&g2)?)?;
                worst = worst.max((lhs - hom.value(&g1)? - hom.value(&g2)?).norm());
            }
            Ok((worst, 1e-8, "20 pairs from the entry-40 ball".into()))
        }),
        run(s, "parabolic-vanishing", || {
            let d = Matrix::new(3, 1, 11, 4)?;
            let mut worst = hom.value(&Matrix::T)?.norm();
            for p in [
                Matrix::new(1, 0, 11, 1)?,
                Matrix::new(1, 0, -22, 1)?,
                d.checked_mul(&Matrix::T)?.checked_mul(&d.inverse())?,
            ] {
                worst = worst.max(hom.value(&p)?.norm());
            }
            Ok((worst, 1e-8, "T, cusp-0 generators and a conjugate".into()))
        }),
    ];
    let series = phi_parabolic(grp, Cusp::Infinity, 4, 1, SECOND_ORDER_BOUND).and_then(|phi| {
        build_second_order(grp, 4, &SeedSpec::Parabolic(Cusp::Infinity), 1, &hom, SECOND_ORDER_BOUND)
            .map(|pl| (phi, pl))
    });
    let (phi, phil) = match series {
        Ok(x) => x,
        Err(e) => {
            out.push(run(s, "law", || Err(e)));
            return out;
        }
    };
    out.push(run(s, "law", || {
        let mut worst: f64 = 0.0;
        for [a, b, cc, d] in LAW_ELEMENTS {
            let g = Matrix::new(a, b, cc, d)?;
            let lg = hom.value(&g)?;
            for t in [0.8, 1.0, 1.25] {
                let z = c(-g.d as f64 / g.c as f64 + 0.01, t / g.c as f64);
                let slash = phil.value(g.act(z)?)? / g.j(z).powi(4);
                let first = lg * phi.value(z)?;
                worst = worst.max((slash - phil.value(z)? + first).norm() / first.norm());
            }
        }
        Ok((worst, 1e-4, format!("3 elements x 3 points, bound {SECOND_ORDER_BOUND}")))
    }));
    out.push(run(s, "translation", || {
        let mut worst: f64 = 0.0;
        for z in [c(0.2, 1.5), c(-0.1, 0.3), c(0.25, 0.05)] {
            let v = phil.value(z)?;
            worst = worst.max((phil.value(z + 1.0)? - v).norm() / v.norm());
        }
        Ok((worst, 1e-6, "three points".into()))
    }));
    out.push(run(s, "zero-homomorphism", || {
        let z = PeriodHom::zero(grp);
        let p = build_second_order(grp, 4, &SeedSpec::Parabolic(Cusp::Infinity), 1, &z, 50)?;
        Ok((p.value(c(0.2, 1.5))?.norm(), 0.0, "exact zero".into()))
    }));
    out
}

fn invariants() -> Vec<CheckResult> {
    let s = Suite::Invariants;
    let pts = [c(0.1, 1.1), c(-0.35, 0.6), c(0.45, 2.3), c(0.0, 0.2)];
    let mats: Vec<Matrix> = group_ball(Group::Sl2z, 4);
    vec![
        run(s, "j-cocycle", || {
            let mut worst: f64 = 0.0;
            for g in &mats {
                for h in &mats {
                    let gh = g.checked_mul(h)?;
                    for &z in &pts {
                        let lhs = gh.j(z);
                        let rhs = g.j(h.act(z)?) * h.j(z);
                        worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
                    }
                }
            }
            Ok((worst, 1e-12, format!("{} x {} matrices", mats.len(), mats.len())))
        }),
        run(s, "slash-right-action", || {
            let f = |z: C64| -> Result<C64> { Ok((z + c(0.3, 2.0)).powi(-3) * (c(0.0, 1.7) * z).exp()) };
            let k = 12;
            let mut worst: f64 = 0.0;
            for g in mats.iter().step_by(3) {
                for h in mats.iter().step_by(5) {
                    let gh = g.checked_mul(h)?;
                    let fg = |z: C64| slash_eval(&f, k, &g.to_complex(), z);
                    for &z in &pts {
                        let lhs = slash_eval(&fg, k, &h.to_complex(), z)?;
                        let rhs = slash_eval(&f, k, &gh.to_complex(), z)?;
                        worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1e-300));
                    }
                }
            }
            Ok((worst, 1e-9, "weight 12, non-modular test function".into()))
        }),
        run(s, "a-operators-period-one", || {
            let d = delta_qexp(120)?;
            let f = d.evaluator();
            let mut worst: f64 = 0.0;
            let hd = HyperbolicDatum::new(&Matrix::new(1, 1, 1, 2)?)?;
            let ah = op_a_hyperbolic(&f, 12, &hd);
            let z = c(0.3, 0.4 * hd.strip_height());
            worst = worst.max(rel(ah(z + 1.0)?, ah(z)?));
            for z0 in [c(0.0, 1.0), c(0.5, 3f64.sqrt() / 2.0)] {
                let ed = EllipticDatum::new(PointH::new(z0)?, Group::Sl2z)?;
                let ae = op_a_elliptic(&f, 12, &ed);
                for z in [c(0.2, 0.3), c(-0.7, 1.1)] {
                    worst = worst.max(rel(ae(z + 1.0)?, ae(z)?));
                }
            }
            let x = crate::forms::x11_qexp(400)?;
            let fx = x.evaluator();
            for cusp in [Cusp::Infinity, Cusp::Zero] {
                let pd = ParabolicDatum::new(Group::Gamma0(11), cusp);
                let ap = op_a_parabolic(&fx, 2, &pd);
                let z = c(-0.5, 0.3);
                worst = worst.max(rel(ap(z + 1.0)?, ap(z)?));
            }
            Ok((worst, 1e-10, "hyperbolic D=5, elliptic i and rho, both cusps of level 11".into()))
        }),
        run(s, "elliptic-star", || {
            let i = PointH::new(c(0.0, 1.0))?;
            let datum = EllipticDatum::new(i, Group::Sl2z)?;
            let phi = phi_elliptic(Group::Sl2z, i, 12, 4, 40)?;
            let mut worst: f64 = 0.0;
            for z in [c(0.0, 1.0), c(0.2, 1.3)] {
                let star = phi_elliptic_star(z, 2, 12, &datum, Group::Sl2z, 40)?;
                worst = worst.max(rel(2.0 * phi.value(z)?, star));
                let odd = phi_elliptic_star(z, 3, 12, &datum, Group::Sl2z, 40)?;
                worst = worst.max(odd.norm() / star.norm());
            }
            Ok((worst, 1e-6, "Phi* = 2 Phi_Ell at i; odd index vanishes".into()))
        }),
        run(s, "representative-independence", || {
            let hom = PeriodHom::x11_plus()?;
            let datum = ParabolicDatum::infinity();
            let cos = crate::cosets::cosets_parabolic(Group::Gamma0(11), &datum, 120)?;
            let r = representative_shift_residual(&SeedFunction::parabolic(datum, 1), &hom, &cos, 5)?;
            Ok((r, 1e-10, "twisted terms under left multiplication by the stabilizer".into()))
        }),
    ]
}
