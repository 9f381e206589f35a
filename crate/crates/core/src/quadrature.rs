//! Integration against the hyperbolic measure dμ = dx dy / y², Petersson
//! inner products and the closed-form integrals they are compared with.

use crate::error::{Error, Result};
use crate::forms::Eval;
use crate::moebius::{disc_scaling, CMatrix, HyperbolicDatum, C64};
use crate::special::{binomial, factorial, gamma};
use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

pub const DEFAULT_Y_CAP: f64 = 12.0;
pub const DEFAULT_ORDER: usize = 24;

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussRule {
    pairs: Vec<(f64, f64)>,
}

impl GaussRule {
    pub fn new(n: usize) -> Result<Self> {
        let n = NonZeroUsize::new(n)
            .filter(|n| n.get() >= 2)
            .ok_or_else(|| Error::InvalidInput("quadrature order must be at least 2".into()))?;
        let rule = GaussLegendre::new(n);
        Ok(GaussRule {
            pairs: rule.as_node_weight_pairs().to_vec(),
        })
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.pairs.iter().map(move |&(x, w)| (mid + h * x, h * w))
    }

    /// Nodes over consecutive panels `[p₀, p₁], [p₁, p₂], …`.
    pub fn panels<'a>(&'a self, breaks: &'a [f64]) -> impl Iterator<Item = (f64, f64)> + 'a {
        breaks.windows(2).flat_map(move |w| self.mapped(w[0], w[1]))
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> C64) -> C64 {
        self.mapped(a, b).map(|(x, w)| f(x) * w).sum()
    }
}

#[derive(Clone, Debug)]
pub enum Domain {
    /// |x| ≤ 1/2, |z| ≥ 1, y ≤ y_cap.
    FundamentalSl2z { y_cap: f64 },
    /// 0 ≤ x ≤ 1, y_lo ≤ y ≤ y_cap.
    ParabolicStrip { y_lo: f64, y_cap: f64 },
    /// σ_η of the half annulus 1 ≤ |w| ≤ ξ², Im w > 0.
    HyperbolicAnnulus { datum: HyperbolicDatum },
    /// σ_{z₀} of the disc sector of angle 2π/N centred on the direction θ = π.
    EllipticSector { z0: C64, order: u32 },
    /// σ_{z₀} of the full unit disc, that is all of ℍ.
    Disc { z0: C64 },
    /// Hyperbolic ball of the given radius about the centre.
    Ball { center: C64, radius: f64 },
}

/// Quadrature nodes `z` with weights that already include dμ.
pub fn mu_nodes(domain: &Domain, order: usize) -> Result<Vec<(C64, f64)>> {
    let rule = GaussRule::new(order)?;
    let mut out = Vec::new();
    match domain {
        Domain::FundamentalSl2z { y_cap } => {
            for (x, wx) in rule.mapped(-0.5, 0.5) {
                let y0 = (1.0 - x * x).sqrt();
                if *y_cap <= y0 {
                    return Err(Error::InvalidInput("y_cap below the fundamental domain".into()));
                }
                let breaks = y_breaks(y0, *y_cap);
                for (y, wy) in rule.panels(&breaks) {
                    out.push((C64::new(x, y), wx * wy / (y * y)));
                }
            }
        }
        Domain::ParabolicStrip { y_lo, y_cap } => {
            if !(*y_lo > 0.0 && y_cap > y_lo) {
                return Err(Error::InvalidInput("strip needs 0 < y_lo < y_cap".into()));
            }
            let breaks = y_breaks(*y_lo, *y_cap);
            for (x, wx) in rule.mapped(0.0, 1.0) {
                for (y, wy) in rule.panels(&breaks) {
                    out.push((C64::new(x, y), wx * wy / (y * y)));
                }
            }
        }
        Domain::HyperbolicAnnulus { datum } => {
            let top = 2.0 * datum.log_xi();
            let th_breaks = [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI];
            for (u, wu) in rule.mapped(0.0, top) {
                for (th, wt) in rule.panels(&th_breaks) {
                    let w = C64::from_polar(u.exp(), th);
                    let z = datum.scaling.act(w)?;
                    // dμ(w) = dρ dθ / (ρ sin²θ) = du dθ / sin²θ with ρ = e^u
                    out.push((z, wu * wt / th.sin().powi(2)));
                }
            }
        }
        Domain::EllipticSector { z0, order: n } => {
            let (s, _) = disc_scaling(*z0);
            let half = PI / *n as f64;
            disc_polar(&rule, &s, 1.0, PI - half, PI + half, false, &mut out)?;
        }
        Domain::Disc { z0 } => {
            let (s, _) = disc_scaling(*z0);
            disc_polar(&rule, &s, 1.0, 0.0, 2.0 * PI, true, &mut out)?;
        }
        Domain::Ball { center, radius } => {
            let (s, _) = disc_scaling(*center);
            let r = (radius / 2.0).tanh();
            disc_polar(&rule, &s, r, 0.0, 2.0 * PI, true, &mut out)?;
        }
    }
    Ok(out)
}

/// Geometric panel breaks from `lo` to `hi`.
fn y_breaks(lo: f64, hi: f64) -> Vec<f64> {
    let mut b = vec![lo];
    let mut next = 2.0 * lo;
    while next < hi / 1.25 {
        b.push(next);
        next *= 2.0;
    }
    b.push(hi);
    b
}

fn disc_polar(
    rule: &GaussRule,
    scaling: &CMatrix,
    r_max: f64,
    th0: f64,
    th1: f64,
    periodic: bool,
    out: &mut Vec<(C64, f64)>,
) -> Result<()> {
    let mut breaks: Vec<f64> = [0.0, 0.5, 0.8, 0.95, 0.99, 1.0]
        .iter()
        .map(|x| x * r_max)
        .collect();
    breaks.dedup();
    let n_theta = 2 * rule.order();
    let thetas: Vec<(f64, f64)> = if periodic {
        let h = (th1 - th0) / n_theta as f64;
        (0..n_theta).map(|j| (th0 + h * j as f64, h)).collect()
    } else {
        rule.mapped(th0, th1).collect()
    };
    for (rho, wr) in rule.panels(&breaks) {
        let jac = 4.0 * rho / (1.0 - rho * rho).powi(2);
        for &(th, wt) in &thetas {
            let z = scaling.act(C64::from_polar(rho, th))?;
            out.push((z, wr * wt * jac));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub struct Integral {
    pub value: C64,
    pub error_estimate: f64,
}

fn sum_nodes(f: &Eval, nodes: &[(C64, f64)]) -> Result<C64> {
    let vals: Vec<C64> = nodes
        .par_iter()
        .map(|&(z, w)| {
            let v = f(z)?;
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite(z));
            }
            Ok(v * w)
        })
        .collect::<Result<_>>()?;
    Ok(vals.into_iter().sum())
}

/// `∫ F dμ` over the domain; the estimate compares `order` with `2·order`.
pub fn mu_integrate(f: &Eval, domain: &Domain, order: usize) -> Result<Integral> {
    let coarse = sum_nodes(f, &mu_nodes(domain, order)?)?;
    let fine = sum_nodes(f, &mu_nodes(domain, 2 * order)?)?;
    Ok(Integral {
        value: fine,
        error_estimate: (fine - coarse).norm(),
    })
}

/// `⟨f, g⟩ = ∫_{SL₂(ℤ)\ℍ} f ḡ y^k dμ`, truncated at `y_cap`.
pub fn petersson_inner(
    f: &Eval,
    kf: i32,
    g: &Eval,
    kg: i32,
    y_cap: f64,
    order: usize,
) -> Result<Integral> {
    if kf != kg {
        return Err(Error::InvalidInput(format!("weight mismatch: {kf} vs {kg}")));
    }
    let integrand = |z: C64| -> Result<C64> { Ok(f(z)? * g(z)?.conj() * z.im.powi(kf)) };
    mu_integrate(&integrand, &Domain::FundamentalSl2z { y_cap }, order)
}

/// `(k−2)! / (4πm)^{k−1}`, the parabolic inner-product constant.
pub fn parabolic_inner_constant(k: i32, m: i64) -> f64 {
    factorial((k - 2) as u64) / (4.0 * PI * m as f64).powi(k - 1)
}

/// `π (k−2)! (Nm−k/2)! / (2^{k−2} N (Nm+k/2−1)!)`, the elliptic one.
pub fn elliptic_inner_constant(k: i32, order: u32, m: i64) -> Result<f64> {
    let e = order as i64 * m - (k / 2) as i64;
    if e < 0 {
        return Err(Error::InvalidInput("need Nm - k/2 >= 0".into()));
    }
    let top = e + k as i64 - 1;
    Ok(PI * factorial((k - 2) as u64) * factorial(e as u64)
        / (2f64.powi(k - 2) * order as f64 * factorial(top as u64)))
}

#[derive(Clone, Copy, Debug)]
pub struct IabValues {
    /// Binomial form for a = 0, Γ-function form otherwise.
    pub closed_form: C64,
    /// `I_{a,0} b! / ∏ (a² + (2j)²)`.
    pub recurrence: C64,
    pub quadrature: C64,
}

/// `I_{a,b} = ∫₀^π e^{aθ} sin^b θ dθ`.
pub fn i_ab(a: C64, b: u32) -> Result<IabValues> {
    if b % 2 != 0 {
        return Err(Error::InvalidInput("b must be even".into()));
    }
    let rule = GaussRule::new(48)?;
    let breaks: Vec<f64> = (0..=8).map(|j| PI * j as f64 / 8.0).collect();
    let quadrature: C64 = rule
        .panels(&breaks)
        .map(|(t, w)| (a * t).exp() * t.sin().powi(b as i32) * w)
        .sum();
    let zero = a == C64::new(0.0, 0.0);
    let i_a0 = if zero {
        C64::new(PI, 0.0)
    } else {
        ((a * PI).exp() - 1.0) / a
    };
    let mut recurrence = i_a0 * factorial(b as u64);
    for j in 1..=b / 2 {
        recurrence /= a * a + (2.0 * j as f64).powi(2);
    }
    let closed_form = if zero {
        C64::new(PI / 2f64.powi(b as i32) * binomial(b as u64, (b / 2) as u64), 0.0)
    } else {
        let two_i = C64::new(0.0, 2.0);
        let s = a / two_i;
        let v = i_a0 * a * factorial(b as u64) * gamma(s - b as f64 / 2.0)
            / (two_i.powi(b as i32 + 1) * gamma(s + b as f64 / 2.0 + 1.0));
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            recurrence
        }
    };
    Ok(IabValues {
        closed_form,
        recurrence,
        quadrature,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct HyperbolicConstant {
    /// `2 log ξ · I_{−2πm/log ξ, k−2}` by direct quadrature.
    pub integral: C64,
    /// The Γ-function (m ≠ 0) or binomial (m = 0) display.
    pub closed_form: C64,
}

/// The factor multiplying `b_η(m)` in `⟨f, Φ_Hyp(·, m, η)⟩`.
pub fn hyperbolic_inner_constant(k: i32, m: i64, xi: f64) -> Result<HyperbolicConstant> {
    let lx = xi.ln();
    let a = C64::new(-2.0 * PI * m as f64 / lx, 0.0);
    let integral = i_ab(a, (k - 2) as u32)?.quadrature * (2.0 * lx);
    let closed_form = if m == 0 {
        C64::new(
            2.0 * PI * lx / 2f64.powi(k - 2)
                * binomial((k - 2) as u64, (k / 2 - 1) as u64),
            0.0,
        )
    } else {
        let s = C64::new(0.0, PI * m as f64 / lx);
        let two_i = C64::new(0.0, 2.0);
        (2.0 * lx) / two_i.powi(k - 1)
            * ((-2.0 * PI * PI * m as f64 / lx).exp() - 1.0)
            * gamma(s - (k / 2) as f64 + 1.0)
            * factorial((k - 2) as u64)
            / gamma(s + (k / 2) as f64)
    };
    Ok(HyperbolicConstant {
        integral,
        closed_form,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct ClosedVsQuadrature {
    pub closed_form: f64,
    pub quadrature: C64,
    pub error_estimate: f64,
}

fn disc_integrand(z0: C64, a: u32, b: u32, k: i32) -> impl Fn(C64) -> Result<C64> + Sync {
    let (_, s_inv) = disc_scaling(z0);
    move |z: C64| {
        let (w, j) = s_inv.act_with_j(z)?;
        Ok(w.powi(a as i32) * w.conj().powi(b as i32) * z.im.powi(k) / j.norm_sqr().powi(k))
    }
}

/// `∫_ℍ (σ⁻¹z)^a conj(σ⁻¹z)^b |j(σ⁻¹, z)|^{−2k} y^k dμ` for σ = σ_{iβ}.
pub fn lemma_disc_integral(a: u32, b: u32, k: i32, beta: f64, order: usize) -> Result<ClosedVsQuadrature> {
    let z0 = C64::new(0.0, beta);
    let closed_form = if a == b {
        4.0 * PI * factorial((k - 2) as u64) * factorial(a as u64)
            / ((4.0 * beta).powi(k) * factorial((a as i64 + k as i64 - 1) as u64))
    } else {
        0.0
    };
    let q = mu_integrate(&disc_integrand(z0, a, b, k), &Domain::Disc { z0 }, order)?;
    Ok(ClosedVsQuadrature {
        closed_form,
        quadrature: q.value,
        error_estimate: q.error_estimate,
    })
}

/// The same integrand over the elliptic sector, exponents `Nl−k/2`, `Nm−k/2`.
pub fn lemma_sector_integral(
    l: i64,
    m: i64,
    order: u32,
    k: i32,
    beta: f64,
    quad_order: usize,
) -> Result<ClosedVsQuadrature> {
    let n = order as i64;
    let (el, em) = (n * l - (k / 2) as i64, n * m - (k / 2) as i64);
    if el < 0 || em < 0 {
        return Err(Error::InvalidInput("need Nl - k/2 >= 0 and Nm - k/2 >= 0".into()));
    }
    let z0 = C64::new(0.0, beta);
    let closed_form = if l == m {
        4.0 * PI * factorial((k - 2) as u64) * factorial(em as u64)
            / (n as f64 * (4.0 * beta).powi(k) * factorial((em + k as i64 - 1) as u64))
    } else {
        0.0
    };
    let q = mu_integrate(
        &disc_integrand(z0, el as u32, em as u32, k),
        &Domain::EllipticSector { z0, order },
        quad_order,
    )?;
    Ok(ClosedVsQuadrature {
        closed_form,
        quadrature: q.value,
        error_estimate: q.error_estimate,
    })
}

/// `∫_{B(z,r)} w^{k/2}`-weighted ball average constant, from the disc
/// integral of `4·2^{−k}(1−|u|²)^{k/2−2}` over |u| < tanh(r/2).
pub fn mean_value_constant(r: f64, k: i32) -> f64 {
    let big_r = (r / 2.0).tanh();
    let s = 1.0 - big_r * big_r;
    if k == 2 {
        -PI * s.ln()
    } else {
        8.0 * PI * (1.0 - s.powi(k / 2 - 1)) / (2f64.powi(k) * (k - 2) as f64)
    }
}

/// The constant `4π(1−(1−R²)^{k−1}) / (2^{k/2}(k−1))` as printed alongside
/// the mean-value identity; kept for comparison with [`mean_value_constant`].
pub fn mean_value_constant_as_printed(r: f64, k: i32) -> f64 {
    let big_r = (r / 2.0).tanh();
    4.0 * PI / (2f64.powf(k as f64 / 2.0) * (k - 1) as f64)
        * (1.0 - (1.0 - big_r * big_r).powi(k - 1))
}

/// `∫_{B(z,r)} f(w) Im(w)^{k/2} |w − z̄|^{−k} dμ(w)`.
pub fn ball_integral(f: &Eval, k: i32, z: C64, r: f64, order: usize) -> Result<Integral> {
    let zb = z.conj();
    let integrand = |w: C64| -> Result<C64> {
        Ok(f(w)? * w.im.powf(k as f64 / 2.0) / (w - zb).norm().powi(k))
    };
    mu_integrate(&integrand, &Domain::Ball { center: z, radius: r }, order)
}

#[derive(Clone, Copy, Debug)]
pub struct MeanValue {
    pub lhs: C64,
    pub rhs: C64,
    pub residual: f64,
}

/// Compares `y^{−k/2} f(z)` with the normalized ball integral.
pub fn mean_value_check(f: &Eval, k: i32, z: C64, r: f64, y_floor: f64, order: usize) -> Result<MeanValue> {
    let lowest = z.im * (-r).exp();
    if lowest < y_floor {
        return Err(Error::BelowHeightFloor {
            y: lowest,
            floor: y_floor,
        });
    }
    let lhs = f(z)? * z.im.powf(-(k as f64) / 2.0);
    let rhs = ball_integral(f, k, z, r, order)?.value / mean_value_constant(r, k);
    Ok(MeanValue {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::delta_qexp;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rule_integrates_polynomials() {
        let r = GaussRule::new(10).unwrap();
        let v = r.integrate(0.0, 2.0, |x| c(x.powi(19), 0.0));
        assert!((v.re - 2f64.powi(20) / 20.0).abs() < 1e-9);
        assert!(GaussRule::new(1).is_err());
    }

    #[test]
    fn truncated_fundamental_domain_area() {
        let one = |_: C64| -> Result<C64> { Ok(c(1.0, 0.0)) };
        let a = mu_integrate(&one, &Domain::FundamentalSl2z { y_cap: 10.0 }, 24).unwrap();
        assert!((a.value.re - (PI / 3.0 - 0.1)).abs() < 1e-8, "{:?}", a);
    }

    #[test]
    fn parabolic_strip_gamma_integral() {
        let k = 12;
        let f = |z: C64| -> Result<C64> { Ok(c((-2.0 * PI * z.im).exp() * z.im.powi(k / 2), 0.0)) };
        let dom = Domain::ParabolicStrip { y_lo: 1e-6, y_cap: 12.0 };
        let v = mu_integrate(&f, &dom, 24).unwrap();
        let expect = 24.0 / (2.0 * PI).powi(5);
        assert!((v.value.re - expect).abs() < 1e-8 * expect);
    }

    #[test]
    fn zero_integrand() {
        let z = |_: C64| -> Result<C64> { Ok(c(0.0, 0.0)) };
        let v = mu_integrate(&z, &Domain::Disc { z0: c(0.0, 1.0) }, 8).unwrap();
        assert_eq!(v.value, c(0.0, 0.0));
    }

    #[test]
    fn non_finite_integrand_reports_location() {
        let bad = |z: C64| -> Result<C64> { Ok(if z.re > 0.0 { c(f64::NAN, 0.0) } else { c(1.0, 0.0) }) };
        let e = mu_integrate(&bad, &Domain::FundamentalSl2z { y_cap: 3.0 }, 8).unwrap_err();
        assert!(matches!(e, Error::NonFinite(z) if z.re > 0.0));
    }

    #[test]
    fn iab_examples() {
        let v = i_ab(c(0.0, 0.0), 2).unwrap();
        assert!((v.closed_form.re - PI / 2.0).abs() < 1e-15);
        assert!((v.quadrature.re - PI / 2.0).abs() < 1e-13);
        let a = c(1.0, 1.0);
        let v = i_ab(a, 0).unwrap();
        let direct = ((a * PI).exp() - 1.0) / a;
        assert!((v.quadrature - direct).norm() <= 1e-12 * direct.norm());
        let v = i_ab(a, 4).unwrap();
        assert!((v.closed_form - v.quadrature).norm() <= 1e-10 * v.quadrature.norm());
    }

    #[test]
    fn iab_grid() {
        for a in [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 1.0), c(3.0, -2.0)] {
            for b in [0, 2, 4, 8] {
                let v = i_ab(a, b).unwrap();
                let s = v.quadrature.norm();
                assert!((v.closed_form - v.quadrature).norm() <= 1e-10 * s, "{a} {b}");
                assert!((v.recurrence - v.quadrature).norm() <= 1e-10 * s, "{a} {b}");
            }
        }
    }

    #[test]
    fn hyperbolic_constant_displays_agree() {
        let xi = (3.0 + 5f64.sqrt()) / 2.0;
        for m in -3..=3 {
            let h = hyperbolic_inner_constant(12, m, xi).unwrap();
            assert!(
                (h.integral - h.closed_form).norm() <= 1e-10 * h.integral.norm(),
                "m={m}: {:?}",
                h
            );
        }
    }

    #[test]
    fn lemma_disc_examples() {
        let v = lemma_disc_integral(0, 0, 12, 1.0, 24).unwrap();
        let expect = 4.0 * PI * factorial(10) / (4f64.powi(12) * factorial(11));
        assert!((v.closed_form - expect).abs() < 1e-15 * expect);
        assert!((v.quadrature.re - expect).abs() <= 1e-9 * expect);
        let v = lemma_disc_integral(2, 4, 12, 1.0, 24).unwrap();
        assert!(v.quadrature.norm() <= 1e-10);
        let v = lemma_sector_integral(4, 4, 2, 12, 1.0, 24).unwrap();
        assert!((v.quadrature.re - v.closed_form).abs() <= 1e-9 * v.closed_form);
    }

    #[test]
    fn mean_value_identity() {
        let d = delta_qexp(80).unwrap();
        let f = d.evaluator();
        let mv = mean_value_check(&f, 12, c(0.0, 1.0), 0.5, 0.05, 24).unwrap();
        assert!(mv.residual <= 1e-8 * mv.lhs.norm(), "{:?}", mv);
        let one = |_: C64| -> Result<C64> { Ok(c(1.0, 0.0)) };
        let z = c(0.3, 1.7);
        let v = ball_integral(&one, 12, z, 0.5, 24).unwrap();
        let expect = mean_value_constant(0.5, 12) * z.im.powi(-6);
        assert!((v.value.re - expect).abs() <= 1e-9 * expect);
        let (_, s_inv) = disc_scaling(z);
        let cube = move |w: C64| -> Result<C64> { Ok(s_inv.act(w)?.powi(3)) };
        assert!(ball_integral(&cube, 12, z, 0.5, 24).unwrap().value.norm() <= 1e-10);
    }

    #[test]
    fn ball_floor_is_enforced() {
        let one = |_: C64| -> Result<C64> { Ok(c(1.0, 0.0)) };
        assert!(mean_value_check(&one, 12, c(0.0, 0.06), 0.5, 0.05, 8).is_err());
    }

    #[test]
    fn petersson_inner_properties() {
        let d = delta_qexp(80).unwrap();
        let f = d.evaluator();
        let two = |z: C64| -> Result<C64> { Ok(d.value(z)? * c(2.0, 1.0)) };
        let dd = petersson_inner(&f, 12, &f, 12, DEFAULT_Y_CAP, 16).unwrap();
        assert!(dd.value.re > 0.0 && dd.value.im.abs() < 1e-18);
        // ⟨Δ, Δ⟩ ≈ 1.035362e-6
        assert!((dd.value.re - 1.035_362_056_804_3e-6).abs() < 1e-12, "{}", dd.value.re);
        let ab = petersson_inner(&f, 12, &two, 12, DEFAULT_Y_CAP, 16).unwrap().value;
        let ba = petersson_inner(&two, 12, &f, 12, DEFAULT_Y_CAP, 16).unwrap().value;
        assert!((ab - ba.conj()).norm() < 1e-18);
        assert!(petersson_inner(&f, 12, &f, 4, 12.0, 8).is_err());
    }

    #[test]
    fn order_doubling_shrinks_estimates() {
        let d = delta_qexp(80).unwrap();
        let f = d.evaluator();
        let e8 = petersson_inner(&f, 12, &f, 12, 12.0, 8).unwrap().error_estimate;
        let e16 = petersson_inner(&f, 12, &f, 12, 12.0, 16).unwrap().error_estimate;
        assert!(e16 < e8);
    }
}
