//! The operators `A_𝔞`, `A_η`, `A_{z₀}` that turn a cusp form into a
//! period-1 function, their inverses, and extraction of the parabolic,
//! hyperbolic and elliptic expansion coefficients.

use crate::error::{Error, Result};
use crate::forms::{Eval, QExpansion};
use crate::moebius::{slash_eval, EllipticDatum, FixedPointDatum, HyperbolicDatum, ParabolicDatum, C64};
use crate::special::{binomial, factorial};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

pub const DEFAULT_RADIUS: f64 = 0.5;
pub const DEFAULT_HYPERBOLIC_WINDOW: i64 = 8;

pub fn default_nodes(m_max: u64) -> usize {
    64.max(8 * m_max as usize)
}

fn check_nodes(nodes: usize, m_max: u64) -> Result<()> {
    if (nodes as u64) < 4 * m_max.max(1) {
        return Err(Error::InvalidInput(format!(
            "{nodes} nodes cannot resolve modes up to {m_max} (need at least {})",
            4 * m_max.max(1)
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExpansionKind {
    Par,
    Hyp,
    Ell,
}

impl ExpansionKind {
    pub fn tag(self) -> &'static str {
        match self {
            ExpansionKind::Par => "par",
            ExpansionKind::Hyp => "hyp",
            ExpansionKind::Ell => "ell",
        }
    }
}

/// How the coefficients were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Sampling {
    Height { y: f64, nodes: usize },
    Radius { r: f64, nodes: usize },
    Taylor,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoeffRow {
    pub tag: &'static str,
    pub index: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug)]
pub struct ExpansionCoeffs {
    pub kind: ExpansionKind,
    pub datum: FixedPointDatum,
    pub weight: i32,
    /// `(m, b(m))` for Par and Hyp, `(l, c(l))` for Ell.
    pub entries: Vec<(i64, C64)>,
    pub sampling: Sampling,
}

impl ExpansionCoeffs {
    pub fn get(&self, index: i64) -> Option<C64> {
        self.entries.iter().find(|(i, _)| *i == index).map(|(_, v)| *v)
    }

    pub fn rows(&self) -> Vec<CoeffRow> {
        self.entries
            .iter()
            .map(|&(index, v)| CoeffRow {
                tag: self.kind.tag(),
                index,
                re: v.re,
                im: v.im,
            })
            .collect()
    }

    fn elliptic_order(&self) -> Result<i64> {
        match &self.datum {
            FixedPointDatum::Elliptic(e) if self.kind == ExpansionKind::Ell => Ok(e.order as i64),
            _ => Err(Error::InvalidInput("not an elliptic expansion".into())),
        }
    }

    /// `b_{z₀}(m) = c_{z₀}(Nm − k/2)` for every stored `l ≡ −k/2 mod N`.
    pub fn elliptic_b(&self) -> Result<Vec<(i64, C64)>> {
        let n = self.elliptic_order()?;
        let h = (self.weight / 2) as i64;
        Ok(self
            .entries
            .iter()
            .filter(|(l, _)| (l + h).rem_euclid(n) == 0)
            .map(|&(l, v)| ((l + h) / n, v))
            .collect())
    }

    /// Inverse of [`ExpansionCoeffs::elliptic_b`]: `l = Nm − k/2`.
    pub fn elliptic_c_from_b(&self, b: &[(i64, C64)]) -> Result<Vec<(i64, C64)>> {
        let n = self.elliptic_order()?;
        let h = (self.weight / 2) as i64;
        Ok(b.iter().map(|&(m, v)| (n * m - h, v)).collect())
    }
}

/// `A_𝔞 f = f|_k σ_𝔞`.
pub fn op_a_parabolic<'a>(f: &'a Eval<'a>, k: i32, datum: &'a ParabolicDatum) -> impl Fn(C64) -> Result<C64> + Sync + 'a {
    move |z| {
        if !(z.im > 0.0) {
            return Err(Error::NotInUpperHalfPlane(z));
        }
        slash_eval(f, k, &datum.scaling, z)
    }
}

/// `A_𝔞⁻¹ g = g|_k σ_𝔞⁻¹`.
pub fn op_a_parabolic_inv<'a>(
    g: &'a Eval<'a>,
    k: i32,
    datum: &'a ParabolicDatum,
) -> impl Fn(C64) -> Result<C64> + Sync + 'a {
    move |z| slash_eval(g, k, &datum.scaling_inv, z)
}

/// `A_η f(z) = ξ^{kz} (f|_k σ_η)(ξ^{2z})` on `0 < Im z < π/(2 log ξ)`.
pub fn op_a_hyperbolic<'a>(
    f: &'a Eval<'a>,
    k: i32,
    datum: &'a HyperbolicDatum,
) -> impl Fn(C64) -> Result<C64> + Sync + 'a {
    move |z| {
        let h = datum.strip_height();
        if !(z.im > 0.0 && z.im < h) {
            return Err(Error::InvalidInput(format!("{z} is outside the strip 0 < Im z < {h}")));
        }
        let lx = datum.log_xi();
        let w = (2.0 * lx * z).exp();
        Ok((k as f64 * lx * z).exp() * slash_eval(f, k, &datum.scaling, w)?)
    }
}

/// `A_η⁻¹ g = (B g)|_k σ_η⁻¹` with `B g(w) = w^{−k/2} g(log w / 2 log ξ)`.
pub fn op_a_hyperbolic_inv<'a>(
    g: &'a Eval<'a>,
    k: i32,
    datum: &'a HyperbolicDatum,
) -> impl Fn(C64) -> Result<C64> + Sync + 'a {
    move |z| {
        let lx = datum.log_xi();
        let b = move |w: C64| -> Result<C64> { Ok(w.powi(-k / 2) * g(w.ln() / (2.0 * lx))?) };
        slash_eval(&b, k, &datum.scaling_inv, z)
    }
}

/// `A_{z₀} f(z) = ζ^{kz} (f|_k σ_{z₀})(ζ^{2z})` with `ζ = e^{iπ/N}`, on `Im z > 0`.
pub fn op_a_elliptic<'a>(f: &'a Eval<'a>, k: i32, datum: &'a EllipticDatum) -> impl Fn(C64) -> Result<C64> + Sync + 'a {
    move |z| {
        if !(z.im > 0.0) {
            return Err(Error::NotInUpperHalfPlane(z));
        }
        let n = datum.order as f64;
        let rot = |e: f64| (C64::new(0.0, PI * e / n) * z).exp();
        Ok(rot(k as f64) * slash_eval(f, k, &datum.scaling, rot(2.0))?)
    }
}

/// `A_{z₀}⁻¹ g = (B g)|_k σ_{z₀}⁻¹` with `B g(w) = w^{−k/2} g(N log w / 2πi)`.
pub fn op_a_elliptic_inv<'a>(
    g: &'a Eval<'a>,
    k: i32,
    datum: &'a EllipticDatum,
) -> impl Fn(C64) -> Result<C64> + Sync + 'a {
    move |z| {
        let n = datum.order as f64;
        let b = move |w: C64| -> Result<C64> {
            if w.norm() == 0.0 {
                return Err(Error::Pole);
            }
            Ok(w.powi(-k / 2) * g(w.ln() * n / C64::new(0.0, 2.0 * PI))?)
        };
        slash_eval(&b, k, &datum.scaling_inv, z)
    }
}

fn sample(g: &(dyn Fn(C64) -> Result<C64> + Sync), pts: &[C64]) -> Result<Vec<C64>> {
    pts.par_iter()
        .map(|&z| {
            let v = g(z)?;
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite(z));
            }
            Ok(v)
        })
        .collect()
}

/// `e^{2πmy} (1/K) Σ_j g(x_j + iy) e^{−2πimx_j}` for each requested `m`.
fn dft_on_line(g: &(dyn Fn(C64) -> Result<C64> + Sync), y: f64, nodes: usize, modes: &[i64]) -> Result<Vec<C64>> {
    let pts: Vec<C64> = (0..nodes).map(|j| C64::new(j as f64 / nodes as f64, y)).collect();
    let vals = sample(g, &pts)?;
    Ok(modes
        .iter()
        .map(|&m| {
            let s: C64 = vals
                .iter()
                .enumerate()
                .map(|(j, v)| v * C64::from_polar(1.0, -2.0 * PI * ((m * j as i64).rem_euclid(nodes as i64)) as f64 / nodes as f64))
                .sum();
            s / nodes as f64 * (2.0 * PI * m as f64 * y).exp()
        })
        .collect())
}

/// Fourier coefficients of `A_𝔞 f` at the given modes (any sign).
pub fn parabolic_fourier(
    f: &Eval,
    k: i32,
    datum: &ParabolicDatum,
    modes: &[i64],
    y_sample: f64,
    nodes: usize,
) -> Result<Vec<C64>> {
    if !(y_sample > 0.0) {
        return Err(Error::InvalidInput(format!("sample height {y_sample} must be positive")));
    }
    let m_max = modes.iter().map(|m| m.unsigned_abs()).max().unwrap_or(1);
    check_nodes(nodes, m_max)?;
    let g = op_a_parabolic(f, k, datum);
    dft_on_line(&g, y_sample, nodes, modes)
}

/// `b_𝔞(m)` for `1 ≤ m ≤ m_max`.
pub fn parabolic_coeffs(f: &Eval, k: i32, datum: &ParabolicDatum, m_max: u64, y_sample: f64) -> Result<ExpansionCoeffs> {
    parabolic_coeffs_with_nodes(f, k, datum, m_max, y_sample, default_nodes(m_max))
}

pub fn parabolic_coeffs_with_nodes(
    f: &Eval,
    k: i32,
    datum: &ParabolicDatum,
    m_max: u64,
    y_sample: f64,
    nodes: usize,
) -> Result<ExpansionCoeffs> {
    if m_max < 1 {
        return Err(Error::InvalidInput("m_max must be at least 1".into()));
    }
    let modes: Vec<i64> = (1..=m_max as i64).collect();
    let vals = parabolic_fourier(f, k, datum, &modes, y_sample, nodes)?;
    Ok(ExpansionCoeffs {
        kind: ExpansionKind::Par,
        datum: FixedPointDatum::Parabolic(datum.clone()),
        weight: k,
        entries: modes.into_iter().zip(vals).collect(),
        sampling: Sampling::Height { y: y_sample, nodes },
    })
}

/// `b_η(m)` for `|m| ≤ m_window`.
pub fn hyperbolic_coeffs(
    f: &Eval,
    k: i32,
    datum: &HyperbolicDatum,
    m_window: u64,
    y_sample: f64,
) -> Result<ExpansionCoeffs> {
    hyperbolic_coeffs_with_nodes(f, k, datum, m_window, y_sample, default_nodes(m_window))
}

pub fn hyperbolic_coeffs_with_nodes(
    f: &Eval,
    k: i32,
    datum: &HyperbolicDatum,
    m_window: u64,
    y_sample: f64,
    nodes: usize,
) -> Result<ExpansionCoeffs> {
    let h = datum.strip_height();
    if !(y_sample > 0.0 && y_sample < h) {
        return Err(Error::InvalidInput(format!("sample height {y_sample} is outside (0, {h})")));
    }
    check_nodes(nodes, m_window)?;
    let w = m_window as i64;
    let modes: Vec<i64> = (-w..=w).collect();
    let g = op_a_hyperbolic(f, k, datum);
    let vals = dft_on_line(&g, y_sample, nodes, &modes)?;
    Ok(ExpansionCoeffs {
        kind: ExpansionKind::Hyp,
        datum: FixedPointDatum::Hyperbolic(datum.clone()),
        weight: k,
        entries: modes.into_iter().zip(vals).collect(),
        sampling: Sampling::Height { y: y_sample, nodes },
    })
}

/// `Σ_m b_η(m) w^{−k/2 + πim/log ξ}`.
pub fn hyperbolic_series(coeffs: &ExpansionCoeffs, w: C64) -> Result<C64> {
    let FixedPointDatum::Hyperbolic(d) = &coeffs.datum else {
        return Err(Error::InvalidInput("not a hyperbolic expansion".into()));
    };
    let lw = w.ln();
    let h = -(coeffs.weight / 2) as f64;
    Ok(coeffs
        .entries
        .iter()
        .map(|&(m, b)| b * (C64::new(h, PI * m as f64 / d.log_xi()) * lw).exp())
        .sum())
}

/// `c_{z₀}(m) = Σ_{r≤m} C(m+k−1, r+k−1) (z₀ − z̄₀)^{r+k/2} f^{(r)}(z₀) / r!`.
pub fn elliptic_coeffs_taylor(f: &QExpansion, datum: &EllipticDatum, m_max: u32) -> Result<ExpansionCoeffs> {
    let k = f.weight;
    let z0 = datum.z0;
    let derivs: Vec<C64> = (0..=m_max)
        .into_par_iter()
        .map(|r| f.eval_deriv(r, z0))
        .collect::<Result<_>>()?;
    let two_i_beta = C64::new(0.0, 2.0 * datum.beta());
    let entries = (0..=m_max as u64)
        .map(|m| {
            let c: C64 = (0..=m)
                .map(|r| {
                    binomial(m + k as u64 - 1, r + k as u64 - 1) * two_i_beta.powi((r as i32) + k / 2)
                        * derivs[r as usize]
                        / factorial(r)
                })
                .sum();
            (m as i64, c)
        })
        .collect();
    Ok(ExpansionCoeffs {
        kind: ExpansionKind::Ell,
        datum: FixedPointDatum::Elliptic(datum.clone()),
        weight: k,
        entries,
        sampling: Sampling::Taylor,
    })
}

/// Cauchy coefficients of `(f|_k σ_{z₀})(w)` on the circle `|w| = r`.
pub fn elliptic_coeffs_contour(
    f: &Eval,
    k: i32,
    datum: &EllipticDatum,
    m_max: u32,
    r: f64,
) -> Result<ExpansionCoeffs> {
    elliptic_coeffs_contour_with_nodes(f, k, datum, m_max, r, default_nodes(m_max as u64))
}

pub fn elliptic_coeffs_contour_with_nodes(
    f: &Eval,
    k: i32,
    datum: &EllipticDatum,
    m_max: u32,
    r: f64,
    nodes: usize,
) -> Result<ExpansionCoeffs> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidInput(format!("contour radius {r} must lie in (0, 1)")));
    }
    check_nodes(nodes, m_max as u64)?;
    let pts: Vec<C64> = (0..nodes)
        .map(|j| C64::from_polar(r, 2.0 * PI * j as f64 / nodes as f64))
        .collect();
    let g = |w: C64| slash_eval(f, k, &datum.scaling, w);
    let vals = sample(&g, &pts)?;
    let entries = (0..=m_max as i64)
        .map(|m| {
            let s: C64 = vals
                .iter()
                .enumerate()
                .map(|(j, v)| v * C64::from_polar(1.0, -2.0 * PI * ((m * j as i64) % nodes as i64) as f64 / nodes as f64))
                .sum();
            (m, s / nodes as f64 / r.powi(m as i32))
        })
        .collect();
    Ok(ExpansionCoeffs {
        kind: ExpansionKind::Ell,
        datum: FixedPointDatum::Elliptic(datum.clone()),
        weight: k,
        entries,
        sampling: Sampling::Radius { r, nodes },
    })
}
