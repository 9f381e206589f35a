//! q-expansions of Δ and of eta products, with evaluation of the form and
//! its derivatives.

use crate::error::{Error, Result};
use crate::moebius::{reduce_to_fundamental_domain, Group, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_Y_MIN: f64 = 0.05;
pub const DERIVATIVE_CAP: u32 = 40;

/// Relative size (against |q|) at which the majorant tail stops the sum.
const TAIL_STOP: f64 = 1e-18;

/// A function on ℍ handed to the numerical routines.
pub type Eval<'a> = dyn Fn(C64) -> Result<C64> + Sync + 'a;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QExpansion {
    pub label: String,
    pub weight: i32,
    pub group: Group,
    /// `coeffs[n]` is the coefficient of qⁿ for `0 ≤ n ≤ M`.
    pub coeffs: Vec<C64>,
    #[serde(skip, default = "default_y_min")]
    pub y_min: f64,
}

fn default_y_min() -> f64 {
    DEFAULT_Y_MIN
}

/// A value together with the majorant bound on the discarded tail.
#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub value: C64,
    pub tail_bound: f64,
}

impl QExpansion {
    pub fn new(label: impl Into<String>, weight: i32, group: Group, coeffs: Vec<C64>) -> Self {
        QExpansion {
            label: label.into(),
            weight,
            group,
            coeffs,
            y_min: DEFAULT_Y_MIN,
        }
    }

    pub fn zero(weight: i32, group: Group) -> Self {
        QExpansion::new("zero", weight, group, vec![C64::new(0.0, 0.0); 2])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, n: usize) -> C64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == C64::new(0.0, 0.0))
    }

    pub fn scaled(&self, s: C64) -> QExpansion {
        QExpansion {
            label: format!("({s})*{}", self.label),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            ..self.clone()
        }
    }

    pub fn with_y_min(mut self, y_min: f64) -> Self {
        self.y_min = y_min;
        self
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        self.eval_with_bound(z).map(|e| e.value)
    }

    pub fn eval_with_bound(&self, z: C64) -> Result<Evaluation> {
        self.series(z, 0)
    }

    /// `f^{(r)}(z) = Σ a(n) (2πin)^r qⁿ`.
    pub fn eval_deriv(&self, r: u32, z: C64) -> Result<C64> {
        if r > DERIVATIVE_CAP {
            return Err(Error::DerivativeCap {
                order: r,
                cap: DERIVATIVE_CAP,
            });
        }
        self.series(z, r).map(|e| e.value)
    }

    /// Evaluates anywhere in ℍ. Level-one forms are first moved into the
    /// fundamental domain; other forms fall back to [`QExpansion::eval`].
    pub fn value(&self, z: C64) -> Result<C64> {
        if self.group == Group::Sl2z && z.im < 0.8 {
            let (g, w) = reduce_to_fundamental_domain(z)?;
            return Ok(self.eval(w)? / g.j(z).powi(self.weight));
        }
        self.eval(z)
    }

    fn series(&self, z: C64, r: u32) -> Result<Evaluation> {
        if !(z.im >= self.y_min) {
            return Err(Error::BelowHeightFloor {
                y: z.im,
                floor: self.y_min,
            });
        }
        let rad = (-2.0 * PI * z.im).exp();
        let p = self.weight.max(0) as f64 + r as f64;
        let log_scale = r as f64 * (2.0 * PI).ln();
        let m = self.order();
        let stop = TAIL_STOP * rad;
        let mut n_eff = m;
        for n in 1..=m {
            if tail_majorant(n, rad, p, log_scale) <= stop {
                n_eff = n;
                break;
            }
        }
        let q = C64::from_polar(1.0, 2.0 * PI * z.re) * rad;
        let two_pi_i = C64::new(0.0, 2.0 * PI);
        let mut acc = C64::new(0.0, 0.0);
        for n in (0..=n_eff).rev() {
            let mut a = self.coeffs[n];
            if r > 0 {
                a *= (two_pi_i * n as f64).powi(r as i32);
            }
            acc = acc * q + a;
        }
        Ok(Evaluation {
            value: acc,
            tail_bound: tail_majorant(n_eff, rad, p, log_scale),
        })
    }

    pub fn evaluator(&self) -> impl Fn(C64) -> Result<C64> + Sync + '_ {
        move |z| self.value(z)
    }
}

/// Bound on `Σ_{n>n0} e^{log_scale} n^p rⁿ` from a geometric majorant.
fn tail_majorant(n0: usize, r: f64, p: f64, log_scale: f64) -> f64 {
    let n1 = (n0 + 1) as f64;
    let ratio = (1.0 + 1.0 / n1).powf(p) * r;
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    (log_scale + p * n1.ln() + n1 * r.ln()).exp() / (1.0 - ratio)
}

/// Multiplies `s` in place by `∏_{n≥1} (1 − q^{step·n})`, or divides when
/// `invert` is set. Euler's pentagonal theorem keeps the factor sparse.
fn euler_factor(s: &mut [i128], step: usize, invert: bool) -> Result<()> {
    let len = s.len();
    let mut terms: Vec<(usize, i128)> = Vec::new();
    for j in 1i64.. {
        let sign = if j % 2 == 1 { -1 } else { 1 };
        let e1 = (j * (3 * j - 1) / 2) as usize * step;
        let e2 = (j * (3 * j + 1) / 2) as usize * step;
        if e1 >= len {
            break;
        }
        terms.push((e1, sign));
        if e2 < len {
            terms.push((e2, sign));
        }
    }
    let ovf = || Error::Overflow("q-series product");
    if invert {
        for n in 0..len {
            let mut v = s[n];
            for &(e, sg) in &terms {
                if e > n {
                    break;
                }
                v = v.checked_sub(sg.checked_mul(s[n - e]).ok_or_else(ovf)?).ok_or_else(ovf)?;
            }
            s[n] = v;
        }
    } else {
        for n in (0..len).rev() {
            let mut v = s[n];
            for &(e, sg) in &terms {
                if e > n {
                    break;
                }
                v = v.checked_add(sg.checked_mul(s[n - e]).ok_or_else(ovf)?).ok_or_else(ovf)?;
            }
            s[n] = v;
        }
    }
    Ok(())
}

/// Exact coefficients of `q^offset ∏ ∏_n (1 − q^{δn})^{r_δ}` up to `q^m`.
pub fn eta_product_integers(spec: &[(u32, i32)], m: usize) -> Result<(Vec<i128>, usize)> {
    let lead: i64 = spec.iter().map(|&(d, r)| d as i64 * r as i64).sum();
    if lead % 24 != 0 || lead < 0 {
        return Err(Error::InvalidInput(format!(
            "leading exponent {lead}/24 is not a nonnegative integer"
        )));
    }
    if spec.iter().any(|&(d, _)| d == 0) {
        return Err(Error::InvalidInput("eta level must be positive".into()));
    }
    let offset = (lead / 24) as usize;
    let mut s = vec![0i128; m + 1];
    if offset > m {
        return Ok((s, offset));
    }
    let len = m + 1 - offset;
    let mut prod = vec![0i128; len];
    prod[0] = 1;
    for &(d, r) in spec {
        for _ in 0..r.unsigned_abs() {
            euler_factor(&mut prod, d as usize, r < 0)?;
        }
    }
    s[offset..].copy_from_slice(&prod);
    Ok((s, offset))
}

/// τ(0..=m) with τ(0) = 0.
pub fn delta_integers(m: usize) -> Result<Vec<i128>> {
    eta_product_integers(&[(1, 24)], m).map(|(s, _)| s)
}

pub fn delta_qexp(m: usize) -> Result<QExpansion> {
    let c = delta_integers(m)?;
    Ok(QExpansion::new(
        "delta",
        12,
        Group::Sl2z,
        c.iter().map(|&x| C64::new(x as f64, 0.0)).collect(),
    ))
}

pub fn eta_product_qexp(spec: &[(u32, i32)], m: usize) -> Result<QExpansion> {
    let total: i32 = spec.iter().map(|&(_, r)| r).sum();
    if total % 2 != 0 {
        return Err(Error::InvalidInput("odd total exponent gives a half-integral weight".into()));
    }
    let (c, _) = eta_product_integers(spec, m)?;
    let level = spec
        .iter()
        .map(|&(d, _)| d as i64)
        .fold(1i64, |l, d| l / crate::cosets::gcd(l, d) * d);
    let group = if level == 1 { Group::Sl2z } else { Group::Gamma0(level as u32) };
    let label = spec
        .iter()
        .map(|(d, r)| format!("{d}^{r}"))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(QExpansion::new(
        format!("eta[{label}]"),
        total / 2,
        group,
        c.iter().map(|&x| C64::new(x as f64, 0.0)).collect(),
    ))
}

/// The weight-two newform of level 11, `η(z)²η(11z)²`.
pub fn x11_qexp(m: usize) -> Result<QExpansion> {
    let mut f = eta_product_qexp(&[(1, 2), (11, 2)], m)?;
    f.label = "x11".into();
    Ok(f)
}
