use petersson::cosets::cosets_hyperbolic;
use petersson::expansions::{elliptic_coeffs_contour, elliptic_coeffs_taylor, hyperbolic_coeffs, parabolic_coeffs};
use petersson::forms::delta_qexp;
use petersson::moebius::{EllipticDatum, HyperbolicDatum, ParabolicDatum};
use petersson::poincare::{PoincareSeries, SeedFunction};
use petersson::qforms::{ClassList, KatokTheta, QuadForm, ZagierSum};
use petersson::verify::{run_suite, Suite, DELTA_AT_I};
use petersson::{Group, Matrix, PointH, C64};
use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;
use std::time::Instant;

struct Verdict {
    ok: bool,
    note: String,
}

fn verdict(ok: bool, note: impl Into<String>) -> Verdict {
    Verdict { ok, note: note.into() }
}

fn c(x: f64, y: f64) -> C64 {
    C64::new(x, y)
}

fn i_point() -> PointH {
    PointH::new(c(0.0, 1.0)).unwrap()
}

fn rho_point() -> PointH {
    PointH::new(c(0.5, 3f64.sqrt() / 2.0)).unwrap()
}

fn suite_verdict(suite: Suite, limit_s: Option<f64>) -> Verdict {
    let start = Instant::now();
    let results = run_suite(suite);
    let secs = start.elapsed().as_secs_f64();
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} ({:.2e} > {:.0e}: {})", r.name, r.residual, r.tolerance, r.detail))
        .collect();
    let worst = results
        .iter()
        .filter(|r| r.tolerance > 0.0)
        .map(|r| r.residual / r.tolerance)
        .fold(0.0, f64::max);
    let in_time = limit_s.is_none_or(|l| secs < l);
    let mut note = format!("{} checks, worst residual/tolerance {worst:.1e}, {secs:.1}s", results.len());
    if !failed.is_empty() {
        note.push_str(&format!("; failed: {}", failed.join(", ")));
    }
    if !in_time {
        note.push_str("; over time budget");
    }
    verdict(failed.is_empty() && in_time, note)
}

fn delta_at_i() -> Verdict {
    let start = Instant::now();
    let d = delta_qexp(80).unwrap();
    let datum = EllipticDatum::new(i_point(), Group::Sl2z).unwrap();
    let t = elliptic_coeffs_taylor(&d, &datum, 8).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let mut ok = secs < 5.0;
    let mut worst: f64 = 0.0;
    for (l, want) in DELTA_AT_I {
        let v = t.get(l).unwrap();
        ok &= (v.re * 1000.0).round() / 1000.0 == want;
        worst = worst.max((v.re - want).abs());
    }
    let mut stray: f64 = 0.0;
    for (l, v) in &t.entries {
        stray = stray.max(v.im.abs());
        if l % 2 == 1 {
            stray = stray.max(v.norm());
        }
    }
    ok &= stray < 1e-9;
    verdict(ok, format!("max |c - printed| {worst:.1e}, odd/imaginary {stray:.1e}, {secs:.3}s"))
}

fn chowla_selberg() -> Verdict {
    use statrs::function::gamma::gamma;
    let d = delta_qexp(80).unwrap();
    let datum = EllipticDatum::new(i_point(), Group::Sl2z).unwrap();
    let c0 = elliptic_coeffs_taylor(&d, &datum, 0).unwrap().get(0).unwrap();
    let want = -(4.0 * PI).powi(-6) * (gamma(0.25) / gamma(0.75)).powi(12);
    let r = (c0.re - want).abs() / want.abs();
    verdict(r <= 1e-9 && c0.im.abs() < 1e-12, format!("relative error {r:.1e}"))
}

fn dual_method() -> Verdict {
    let d = delta_qexp(200).unwrap();
    let f = d.evaluator();
    let mut worst: f64 = 0.0;
    for z0 in [i_point(), rho_point()] {
        let datum = EllipticDatum::new(z0, Group::Sl2z).unwrap();
        let t = elliptic_coeffs_taylor(&d, &datum, 8).unwrap();
        let k = elliptic_coeffs_contour(&f, 12, &datum, 8, 0.5).unwrap();
        for l in 0..=8 {
            worst = worst.max((t.get(l).unwrap() - k.get(l).unwrap()).norm());
        }
    }
    verdict(worst <= 1e-8, format!("max |taylor - contour| {worst:.1e} at i and rho"))
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Proper classes of primitive forms of discriminant `d`: connected
/// components of the S, T, T⁻¹ moves on a box of forms, counted through the
/// reduced forms they contain.
fn union_find_class_number(d: i64) -> usize {
    let bound = 50i64;
    let mut forms = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            if a == 0 || (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let cc = (b * b - d) / (4 * a);
            if cc.abs() <= bound && gcd(gcd(a, b), cc) == 1 {
                forms.push((a, b, cc));
            }
        }
    }
    let idx: HashMap<(i64, i64, i64), usize> = forms.iter().enumerate().map(|(i, q)| (*q, i)).collect();
    let mut parent: Vec<usize> = (0..forms.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, &(a, b, cc)) in forms.iter().enumerate() {
        // Q(x+y, y), Q(x-y, y), Q(-y, x)
        for n in [(a, b + 2 * a, a + b + cc), (a, b - 2 * a, a - b + cc), (cc, -b, a)] {
            if let Some(&j) = idx.get(&n) {
                let (x, y) = (find(&mut parent, i), find(&mut parent, j));
                parent[x] = y;
            }
        }
    }
    let s = isqrt(d);
    let mut roots = HashSet::new();
    for (i, &(a, b, _)) in forms.iter().enumerate() {
        if b >= 1 && b <= s && 2 * a.abs() + b > s && 2 * a.abs() - b <= s {
            roots.insert(find(&mut parent, i));
        }
    }
    roots.len()
}

fn quadratic_forms() -> Verdict {
    let g = Matrix::new(1, 1, 1, 2).unwrap();
    let datum = HyperbolicDatum::new(&g).unwrap();
    let cos = cosets_hyperbolic(Group::Sl2z, &datum, 25).unwrap();
    let phi = PoincareSeries::new(SeedFunction::hyperbolic(datum.clone(), 0), 12, &cos).unwrap();
    let theta = KatokTheta::from_cosets(&g, 12, &cos).unwrap();
    let theta_wide = KatokTheta::new(Group::Sl2z, &g, 12, 30).unwrap();
    let class_sum = ZagierSum::new(12, 5, 80, Some(&QuadForm::new(1, 1, -1))).unwrap();
    let scale = (datum.xi - 1.0 / datum.xi).powi(-6);
    let (mut hyp, mut zag): (f64, f64) = (0.0, 0.0);
    for z in [c(0.0, 1.0), c(0.3, 0.9), c(-0.2, 1.4)] {
        let t = theta.eval(z).unwrap();
        hyp = hyp.max((phi.value(z).unwrap() * scale - t).norm() / t.norm());
        let tw = theta_wide.eval(z).unwrap();
        zag = zag.max((class_sum.eval(z).unwrap() - tw).norm() / tw.norm());
    }
    let mut mismatches = Vec::new();
    let mut count = 0;
    for d in 5..=100i64 {
        if d % 4 > 1 || isqrt(d).pow(2) == d {
            continue;
        }
        count += 1;
        let h = ClassList::new(d).unwrap().class_number();
        let oracle = union_find_class_number(d);
        if h != oracle {
            mismatches.push(format!("D={d}: {h} vs {oracle}"));
        }
    }
    verdict(
        hyp <= 1e-6 && zag <= 1e-6 && mismatches.is_empty(),
        format!(
            "theta vs Phi_Hyp {hyp:.1e}, theta vs class sum {zag:.1e}, h(D) agrees for {}/{count} discriminants{}",
            count - mismatches.len(),
            if mismatches.is_empty() { String::new() } else { format!(" ({})", mismatches.join(", ")) }
        ),
    )
}

/// τ(m) from q ∏ (1 − qⁿ)²⁴, multiplying out one factor at a time.
fn tau_oracle(m_max: usize) -> Vec<i128> {
    let mut p = vec![0i128; m_max + 1];
    p[0] = 1;
    for n in 1..=m_max {
        for _ in 0..24 {
            for j in (n..=m_max).rev() {
                p[j] -= p[j - n];
            }
        }
    }
    let mut tau = vec![0i128; m_max + 1];
    tau[1..].copy_from_slice(&p[..m_max]);
    tau
}

fn extraction() -> Verdict {
    let d = delta_qexp(600).unwrap();
    let f = d.evaluator();
    let tau = tau_oracle(20);
    let b = parabolic_coeffs(&f, 12, &ParabolicDatum::infinity(), 20, 0.15).unwrap();
    let mut par: f64 = 0.0;
    for (m, v) in &b.entries {
        let t = tau[*m as usize] as f64;
        par = par.max((v - t).norm() / t.abs());
    }
    let hd = HyperbolicDatum::new(&Matrix::new(1, 1, 1, 2).unwrap()).unwrap();
    let h = hd.strip_height();
    let lo = hyperbolic_coeffs(&f, 12, &hd, 4, 0.3 * h).unwrap();
    let hi = hyperbolic_coeffs(&f, 12, &hd, 4, 0.6 * h).unwrap();
    let hyp = lo
        .entries
        .iter()
        .zip(&hi.entries)
        .map(|((_, x), (_, y))| (x - y).norm() / x.norm().max(1.0))
        .fold(0.0, f64::max);
    let mut ell: f64 = 0.0;
    for z0 in [i_point(), rho_point()] {
        let datum = EllipticDatum::new(z0, Group::Sl2z).unwrap();
        let a = elliptic_coeffs_contour(&f, 12, &datum, 8, 0.4).unwrap();
        let b = elliptic_coeffs_contour(&f, 12, &datum, 8, 0.6).unwrap();
        for ((_, x), (_, y)) in a.entries.iter().zip(&b.entries) {
            ell = ell.max((x - y).norm());
        }
    }
    verdict(
        par <= 1e-9 && hyp <= 1e-8 && ell <= 1e-8,
        format!("tau(m<=20) {par:.1e}, hyperbolic heights {hyp:.1e}, elliptic radii {ell:.1e}"),
    )
}

fn main() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("elliptic coefficients of Delta at i", Box::new(delta_at_i)),
        ("Chowla-Selberg value of c(0)", Box::new(chowla_selberg)),
        ("Taylor and contour extraction agree", Box::new(dual_method)),
        ("integral identities", Box::new(|| suite_verdict(Suite::Identities, Some(30.0)))),
        ("inner-product formulas", Box::new(|| suite_verdict(Suite::InnerProducts, None))),
        ("quadratic-form identities and class numbers", Box::new(quadratic_forms)),
        ("expansion extraction", Box::new(extraction)),
        ("second-order laws on Gamma0(11)", Box::new(|| suite_verdict(Suite::SecondOrder, Some(120.0)))),
        ("algebraic invariants", Box::new(|| suite_verdict(Suite::Invariants, Some(60.0)))),
    ];
    let mut failures = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = f();
        let secs = start.elapsed().as_secs_f64();
        if !v.ok {
            failures += 1;
        }
        println!(
            "{} {}. {name}: {} [{secs:.1}s]",
            if v.ok { "PASS" } else { "FAIL" },
            n + 1,
            v.note
        );
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
