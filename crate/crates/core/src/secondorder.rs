//! Homomorphisms `L ∈ Hom₀(Γ, ℂ)` built from periods of weight-two cusp
//! forms, the Eichler integrals `Λ^±`, second-order Poincaré series
//! `Σ L(γ) φ|_kγ`, and a numerical rank for spanning experiments.

use crate::cosets::{cosets_elliptic, cosets_hyperbolic, cosets_parabolic, group_ball};
use crate::error::{Error, Result};
use crate::forms::{x11_qexp, Eval, QExpansion};
use crate::moebius::{
    Cusp, EllipticDatum, ElementKind, Group, HyperbolicDatum, Matrix, ParabolicDatum, PointH, C64,
};
use crate::poincare::{PoincareSeries, SeedFunction, Twist};
use crate::quadrature::GaussRule;
use nalgebra::DMatrix;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

/// q-order used for the level-11 newform in period computations.
pub const DEFAULT_PERIOD_ORDER: usize = 40_000;

/// Stop once `n e^{−2πny}` falls below this.
const EICHLER_STOP: f64 = 1e-18;

/// `E(z) = Σ_{n≥1} a(n) qⁿ / (2πin)`, an antiderivative of a cusp form of
/// weight two.
#[derive(Clone, Debug)]
pub struct EichlerIntegral {
    coeffs: Vec<C64>,
    zero: bool,
}

impl EichlerIntegral {
    pub fn new(f: &QExpansion) -> Result<Self> {
        if f.weight != 2 {
            return Err(Error::InvalidInput(format!("Eichler integrals need weight 2, got {}", f.weight)));
        }
        if f.coeff(0).norm() != 0.0 {
            return Err(Error::InvalidInput("form has a nonzero constant term".into()));
        }
        let coeffs: Vec<C64> = (0..=f.order())
            .map(|n| {
                if n == 0 {
                    C64::new(0.0, 0.0)
                } else {
                    f.coeff(n) / C64::new(0.0, 2.0 * PI * n as f64)
                }
            })
            .collect();
        Ok(EichlerIntegral {
            zero: f.is_zero(),
            coeffs,
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn terms_needed(y: f64) -> f64 {
        let t = EICHLER_STOP.ln().abs();
        let mut n = t / (2.0 * PI * y);
        for _ in 0..4 {
            n = (t + n.max(1.0).ln()) / (2.0 * PI * y);
        }
        n.ceil()
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        if !(z.im > 0.0) {
            return Err(Error::NotInUpperHalfPlane(z));
        }
        if self.zero {
            return Ok(C64::new(0.0, 0.0));
        }
        let need = Self::terms_needed(z.im);
        if need > self.order() as f64 {
            return Err(Error::Tolerance(format!(
                "q-order {} is too small at Im z = {:e} (needs {need})",
                self.order(),
                z.im
            )));
        }
        let n_eff = need as usize;
        let q = C64::from_polar((-2.0 * PI * z.im).exp(), 2.0 * PI * z.re);
        let mut acc = C64::new(0.0, 0.0);
        for n in (1..=n_eff).rev() {
            acc = (acc + self.coeffs[n]) * q;
        }
        Ok(acc)
    }
}

/// `L(γ) = ∫_z^{γz} f⁺ + conj ∫_z^{γz} f⁻`.
#[derive(Debug)]
pub struct PeriodHom {
    pub f_plus: QExpansion,
    pub f_minus: QExpansion,
    pub group: Group,
    e_plus: EichlerIntegral,
    e_minus: EichlerIntegral,
    memo: Mutex<HashMap<Matrix, C64>>,
}

impl PeriodHom {
    pub fn new(f_plus: QExpansion, f_minus: QExpansion, group: Group) -> Result<Self> {
        for f in [&f_plus, &f_minus] {
            if !f.is_zero() && f.group != group {
                return Err(Error::InvalidInput(format!("{} is not a form on {group}", f.label)));
            }
        }
        Ok(PeriodHom {
            e_plus: EichlerIntegral::new(&f_plus)?,
            e_minus: EichlerIntegral::new(&f_minus)?,
            f_plus,
            f_minus,
            group,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn zero(group: Group) -> Self {
        let z = QExpansion::zero(2, group);
        PeriodHom::new(z.clone(), z, group).expect("zero forms are admissible")
    }

    /// `(f, 0)` with `f` the level-11 newform.
    pub fn x11_plus() -> Result<Self> {
        let f = x11_qexp(DEFAULT_PERIOD_ORDER)?;
        PeriodHom::new(f, QExpansion::zero(2, Group::Gamma0(11)), Group::Gamma0(11))
    }

    /// `(0, f)` with `f` the level-11 newform.
    pub fn x11_minus() -> Result<Self> {
        let f = x11_qexp(DEFAULT_PERIOD_ORDER)?;
        PeriodHom::new(QExpansion::zero(2, Group::Gamma0(11)), f, Group::Gamma0(11))
    }

    pub fn is_zero(&self) -> bool {
        self.f_plus.is_zero() && self.f_minus.is_zero()
    }

    /// Computes `L(γ)` from the Eichler integrals at `z* = (−d + i)/c`,
    /// where `γz* = (a + i)/c`.
    fn compute(&self, g: &Matrix) -> Result<C64> {
        if g.c == 0 || self.is_zero() {
            return Ok(C64::new(0.0, 0.0));
        }
        let g = if g.c < 0 { g.neg() } else { *g };
        let c = g.c as f64;
        let z = C64::new(-g.d as f64 / c, 1.0 / c);
        let gz = C64::new(g.a as f64 / c, 1.0 / c);
        let plus = self.e_plus.eval(gz)? - self.e_plus.eval(z)?;
        let minus = self.e_minus.eval(gz)? - self.e_minus.eval(z)?;
        Ok(plus + minus.conj())
    }

    pub fn value(&self, g: &Matrix) -> Result<C64> {
        self.group.check(g)?;
        let key = g.sign_normalized();
        if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(*v);
        }
        let v = self.compute(&key)?;
        self.memo.lock().expect("memo lock").entry(key).or_insert(v);
        Ok(v)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().expect("memo lock").len()
    }

    /// `L(γ)` by Gauss–Legendre along `z → Re z + iT → Re γz + iT → γz`.
    pub fn value_by_quadrature(&self, g: &Matrix, start: C64, elevation: f64, order: usize) -> Result<C64> {
        self.group.check(g)?;
        let end = g.act(start)?;
        let plus = path_integral(&self.f_plus, start, end, elevation, order)?;
        let minus = path_integral(&self.f_minus, start, end, elevation, order)?;
        Ok(plus + minus.conj())
    }

    pub fn lambda_pair(&self) -> LambdaPair<'_> {
        LambdaPair { hom: self }
    }
}

impl Twist for PeriodHom {
    fn value(&self, g: &Matrix) -> Result<C64> {
        PeriodHom::value(self, g)
    }
}

pub fn period_hom(f_plus: QExpansion, f_minus: QExpansion, group: Group) -> Result<PeriodHom> {
    PeriodHom::new(f_plus, f_minus, group)
}

fn log_breaks(lo: f64, hi: f64) -> Vec<f64> {
    let (lo, hi, flip) = if lo <= hi { (lo, hi, false) } else { (hi, lo, true) };
    let mut b = vec![lo];
    let mut y = lo * 2.0;
    while y < hi {
        b.push(y);
        y *= 2.0;
    }
    b.push(hi);
    if flip {
        b.reverse();
    }
    b
}

/// `∫ f(w) dw` along the three-leg path from `a` to `b` through height `top`.
fn path_integral(f: &QExpansion, a: C64, b: C64, top: f64, order: usize) -> Result<C64> {
    if f.is_zero() {
        return Ok(C64::new(0.0, 0.0));
    }
    let rule = GaussRule::new(order)?;
    let i = C64::new(0.0, 1.0);
    let mut acc = C64::new(0.0, 0.0);
    // a signed panel list integrates in the direction of travel
    let up = log_breaks(a.im, top);
    for w in up.windows(2) {
        for (y, wt) in rule.mapped(w[0], w[1]) {
            acc += f.eval(C64::new(a.re, y))? * i * wt;
        }
    }
    let pieces = ((b.re - a.re).abs() / 0.25).ceil().max(1.0) as usize;
    for j in 0..pieces {
        let x0 = a.re + (b.re - a.re) * j as f64 / pieces as f64;
        let x1 = a.re + (b.re - a.re) * (j + 1) as f64 / pieces as f64;
        for (x, wt) in rule.mapped(x0, x1) {
            acc += f.eval(C64::new(x, top))? * wt;
        }
    }
    let down = log_breaks(top, b.im);
    for w in down.windows(2) {
        for (y, wt) in rule.mapped(w[0], w[1]) {
            acc += f.eval(C64::new(b.re, y))? * i * wt;
        }
    }
    Ok(acc)
}

/// `Λ^±(z) = ∫_i^z f^±`.
#[derive(Clone, Copy, Debug)]
pub struct LambdaPair<'a> {
    hom: &'a PeriodHom,
}

impl LambdaPair<'_> {
    pub fn plus(&self, z: C64) -> Result<C64> {
        let i = C64::new(0.0, 1.0);
        Ok(self.hom.e_plus.eval(z)? - self.hom.e_plus.eval(i)?)
    }

    pub fn minus(&self, z: C64) -> Result<C64> {
        let i = C64::new(0.0, 1.0);
        Ok(self.hom.e_minus.eval(z)? - self.hom.e_minus.eval(i)?)
    }

    /// `Λ⁺(γz) − Λ⁺(z) + conj(Λ⁻(γz) − Λ⁻(z))`.
    pub fn difference(&self, g: &Matrix, z: C64) -> Result<C64> {
        let gz = g.act(z)?;
        Ok(self.plus(gz)? - self.plus(z)? + (self.minus(gz)? - self.minus(z)?).conj())
    }

    /// `max |Λ⁺(x + iy)| / (1 + |log y|)` over the heights.
    pub fn log_growth_constant(&self, x: f64, ys: &[f64]) -> Result<f64> {
        let mut c: f64 = 0.0;
        for &y in ys {
            c = c.max(self.plus(C64::new(x, y))?.norm() / (1.0 + y.ln().abs()));
        }
        Ok(c)
    }
}

pub fn lambda_pair(hom: &PeriodHom) -> LambdaPair<'_> {
    hom.lambda_pair()
}

#[derive(Clone, Debug)]
pub enum SeedSpec {
    Parabolic(Cusp),
    Hyperbolic(Matrix),
    Elliptic(PointH),
}

/// `Σ L(γ) (A⁻¹e^{2πim·})|_kγ` over the coset list matching the seed.
pub fn build_second_order(
    group: Group,
    k: i32,
    seed: &SeedSpec,
    m: i64,
    hom: &PeriodHom,
    bound: u64,
) -> Result<PoincareSeries> {
    match seed {
        SeedSpec::Parabolic(cusp) => {
            let datum = ParabolicDatum::new(group, *cusp);
            let cosets = cosets_parabolic(group, &datum, bound)?;
            PoincareSeries::twisted(SeedFunction::parabolic(datum, m), k, &cosets, hom)
        }
        SeedSpec::Hyperbolic(g) => {
            group.check(g)?;
            let datum = HyperbolicDatum::new(g)?;
            let cosets = cosets_hyperbolic(group, &datum, bound)?;
            PoincareSeries::twisted(SeedFunction::hyperbolic(datum, m), k, &cosets, hom)
        }
        SeedSpec::Elliptic(z0) => {
            let datum = EllipticDatum::new(*z0, group)?;
            if (datum.order as i64) * m < (k / 2) as i64 {
                return Err(Error::InvalidInput(format!("need Nm - k/2 >= 0, got N={} m={m} k={k}", datum.order)));
            }
            let cosets = cosets_elliptic(group, &datum, bound)?;
            PoincareSeries::twisted(SeedFunction::elliptic(datum, m), k, &cosets, hom)
        }
    }
}

#[derive(Clone, Debug)]
pub struct GramRank {
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

/// Numerical rank of `[f_i(z_j)]`: singular values above `tol · σ_max`.
pub fn gram_rank(functions: &[&Eval], points: &[C64], tol: f64) -> Result<GramRank> {
    if functions.is_empty() {
        return Ok(GramRank {
            rank: 0,
            singular_values: vec![],
        });
    }
    if points.len() < functions.len() {
        return Err(Error::InvalidInput(format!(
            "{} sample points cannot separate {} functions",
            points.len(),
            functions.len()
        )));
    }
    let mut data = Vec::with_capacity(points.len() * functions.len());
    for f in functions {
        for &z in points {
            data.push(f(z)?);
        }
    }
    let m = DMatrix::from_vec(points.len(), functions.len(), data);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = if top == 0.0 {
        0
    } else {
        sv.iter().filter(|s| **s > tol * top).count()
    };
    Ok(GramRank {
        rank,
        singular_values: sv,
    })
}

/// `max |f|_k(ε − 1)(z)|` over the points.
pub fn elliptic_invariance_check(f: &Eval, k: i32, eps: &Matrix, points: &[C64]) -> Result<f64> {
    if eps.classify() != ElementKind::Elliptic {
        return Err(Error::InvalidInput(format!("{eps} is not elliptic")));
    }
    let mut worst: f64 = 0.0;
    for &z in points {
        let a = f(eps.act(z)?)? / eps.j(z).powi(k);
        worst = worst.max((a - f(z)?).norm());
    }
    Ok(worst)
}

/// Elliptic elements of the group with entries ≤ `bound`; empty for
/// torsion-free groups such as Γ₀(11).
pub fn elliptic_elements(group: Group, bound: u64) -> Vec<Matrix> {
    group_ball(group, bound)
        .into_iter()
        .filter(|g| g.classify() == ElementKind::Elliptic)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::delta_qexp;
    use crate::poincare::phi_parabolic;
    use std::sync::OnceLock;

    fn c(x: f64, y: f64) -> C64 {
        C64::new(x, y)
    }

    fn hom_plus() -> &'static PeriodHom {
        static H: OnceLock<PeriodHom> = OnceLock::new();
        H.get_or_init(|| PeriodHom::x11_plus().unwrap())
    }

    fn hom_both() -> &'static PeriodHom {
        static H: OnceLock<PeriodHom> = OnceLock::new();
        H.get_or_init(|| {
            let f = x11_qexp(DEFAULT_PERIOD_ORDER).unwrap();
            PeriodHom::new(f.clone(), f.scaled(c(0.5, 0.25)), Group::Gamma0(11)).unwrap()
        })
    }

    fn m(a: i64, b: i64, cc: i64, d: i64) -> Matrix {
        Matrix::new(a, b, cc, d).unwrap()
    }

    #[test]
    fn trivial_values() {
        let h = hom_plus();
        assert_eq!(h.value(&Matrix::IDENTITY).unwrap(), c(0.0, 0.0));
        assert!(h.value(&Matrix::T).unwrap().norm() <= 1e-10);
        let g = m(4, -1, 33, -8);
        let a = h.value(&g).unwrap();
        let b = h.value(&g.inverse()).unwrap();
        assert!((a + b).norm() <= 1e-8, "{a} {b}");
        assert!(a.norm() > 1e-3);
        assert!(h.value(&Matrix::S).is_err());
    }

    #[test]
    fn vanishes_on_parabolics() {
        let h = hom_both();
        for g in [Matrix::T, m(1, 0, -11, 1), m(1, 0, 11, 1), m(1, 0, 22, 1)] {
            assert!(h.value(&g).unwrap().norm() <= 1e-8, "{g}");
        }
        // a conjugate of T
        let d = m(3, 1, 11, 4);
        let p = d * Matrix::T * d.inverse();
        assert!(h.value(&p).unwrap().norm() <= 1e-8);
    }

    #[test]
    fn homomorphism_property() {
        let h = hom_both();
        let ball: Vec<Matrix> = group_ball(Group::Gamma0(11), 40)
            .into_iter()
            .filter(|g| g.c != 0)
            .collect();
        let step = ball.len() / 23;
        for i in 0..10 {
            let g1 = ball[(i * step) % ball.len()];
            let g2 = ball[(i * step * 7 + 13) % ball.len()];
            let lhs = h.value(&(g1 * g2)).unwrap();
            let rhs = h.value(&g1).unwrap() + h.value(&g2).unwrap();
            assert!((lhs - rhs).norm() <= 1e-8, "{g1} {g2}: {lhs} {rhs}");
        }
    }

    #[test]
    fn quadrature_route_agrees_and_is_path_independent() {
        let h = hom_both();
        for g in [m(3, 1, 11, 4), m(2, 1, 11, 6), m(5, -1, 11, -2)] {
            let start = c(-g.d as f64 / g.c as f64, 1.0 / g.c as f64);
            let t2 = h.value_by_quadrature(&g, start, 2.0, 24).unwrap();
            let t4 = h.value_by_quadrature(&g, start, 4.0, 24).unwrap();
            assert!((t2 - t4).norm() <= 1e-10, "{g}: {t2} {t4}");
            let e = h.value(&g).unwrap();
            assert!((t2 - e).norm() <= 1e-10, "{g}: {t2} {e}");
        }
    }

    #[test]
    fn lambda_pair_identities() {
        let h = hom_both();
        let lp = h.lambda_pair();
        assert_eq!(lp.plus(c(0.0, 1.0)).unwrap(), c(0.0, 0.0));
        let hp = hom_plus().lambda_pair();
        assert!(hp.plus(c(1.0, 1.0)).unwrap().norm() <= 1e-10);
        let gs = [m(4, -1, 33, -8), m(3, 1, 11, 4), m(2, 1, 11, 6), m(5, -1, 11, -2), m(1, 0, 11, 1)];
        let zs = [c(0.1, 0.3), c(-0.2, 0.5)];
        for g in &gs {
            for &z in &zs {
                let a = lp.difference(g, z).unwrap();
                let b = h.value(g).unwrap();
                assert!((a - b).norm() <= 1e-7, "{g} {z}: {a} {b}");
            }
        }
        let cst = hp.log_growth_constant(0.3, &[1.0, 0.1, 0.01]).unwrap();
        assert!(cst.is_finite() && cst > 0.0);
    }

    #[test]
    fn zero_hom_gives_zero_series() {
        let z = PeriodHom::zero(Group::Gamma0(11));
        let p = build_second_order(Group::Gamma0(11), 4, &SeedSpec::Parabolic(Cusp::Infinity), 1, &z, 50).unwrap();
        assert_eq!(p.value(c(0.2, 1.5)).unwrap(), c(0.0, 0.0));
        assert!(p.is_empty());
    }

    #[test]
    fn side_conditions() {
        let h = hom_plus();
        // L(γ) ≠ 0 for this hyperbolic generator
        let g = m(4, -1, 33, -8);
        let err = build_second_order(Group::Gamma0(11), 4, &SeedSpec::Hyperbolic(g), 0, h, 10).unwrap_err();
        assert!(matches!(err, Error::TwistOnStabilizer(_)));
        let sl = PeriodHom::zero(Group::Sl2z);
        let i = PointH::new(c(0.0, 1.0)).unwrap();
        assert!(build_second_order(Group::Sl2z, 12, &SeedSpec::Elliptic(i), 2, &sl, 10).is_err());
        assert!(build_second_order(Group::Sl2z, 12, &SeedSpec::Elliptic(i), 3, &sl, 10).is_ok());
    }

    #[test]
    fn representative_independence() {
        let h = hom_plus();
        let datum = ParabolicDatum::infinity();
        let cos = cosets_parabolic(Group::Gamma0(11), &datum, 120).unwrap();
        let seed = SeedFunction::parabolic(datum, 1);
        let r = crate::poincare::representative_shift_residual(&seed, h, &cos, 5).unwrap();
        assert!(r <= 1e-10, "{r}");
    }

    #[test]
    fn second_order_law_small_bound() {
        // z = (−d + it)/c keeps both z and γz at height ~ 1/c
        let h = hom_plus();
        let phi = phi_parabolic(Group::Gamma0(11), Cusp::Infinity, 4, 1, 600).unwrap();
        let phil = build_second_order(Group::Gamma0(11), 4, &SeedSpec::Parabolic(Cusp::Infinity), 1, h, 600).unwrap();
        let g = m(3, 1, 11, 4);
        let lg = h.value(&g).unwrap();
        for t in [0.8, 1.0, 1.25] {
            let z = c(-g.d as f64 / g.c as f64 + 0.01, t / g.c as f64);
            let gz = g.act(z).unwrap();
            let slash = phil.value(gz).unwrap() / g.j(z).powi(4);
            let lhs = slash - phil.value(z).unwrap() + lg * phi.value(z).unwrap();
            let scale = (lg * phi.value(z).unwrap()).norm();
            assert!(lhs.norm() <= 1e-4 * scale, "t={t}: {} vs {scale}", lhs.norm());
            let tz = phil.value(z + 1.0).unwrap() - phil.value(z).unwrap();
            assert!(tz.norm() <= 1e-6 * phil.value(z).unwrap().norm());
        }
    }

    #[test]
    fn gram_rank_examples() {
        let d = delta_qexp(80).unwrap();
        let f1 = d.evaluator();
        let d2 = d.scaled(c(2.0, 0.0));
        let f2 = d2.evaluator();
        let pts: Vec<C64> = (0..5).map(|j| c(-0.4 + 0.2 * j as f64, 0.9 + 0.1 * j as f64)).collect();
        assert_eq!(gram_rank(&[&f1, &f2], &pts, 1e-6).unwrap().rank, 1);
        assert!(gram_rank(&[&f1, &f2], &pts[..1], 1e-6).is_err());
        let p1 = phi_parabolic(Group::Sl2z, Cusp::Infinity, 12, 1, 30).unwrap();
        let p2 = phi_parabolic(Group::Sl2z, Cusp::Infinity, 12, 2, 30).unwrap();
        let e1 = p1.evaluator();
        let e2 = p2.evaluator();
        let pts: Vec<C64> = (0..6).map(|j| c(-0.3 + 0.1 * j as f64, 0.9 + 0.15 * j as f64)).collect();
        assert_eq!(gram_rank(&[&e1, &e2], &pts, 1e-6).unwrap().rank, 1);
    }

    #[test]
    fn elliptic_checks() {
        assert!(elliptic_elements(Group::Gamma0(11), 30).is_empty());
        assert!(!elliptic_elements(Group::Sl2z, 2).is_empty());
        let d = delta_qexp(80).unwrap();
        let f = d.evaluator();
        let pts: Vec<C64> = (0..5).map(|j| c(-0.3 + 0.15 * j as f64, 0.9 + 0.1 * j as f64)).collect();
        assert!(elliptic_invariance_check(&f, 12, &Matrix::S, &pts).unwrap() <= 1e-10);
        let i = PointH::new(c(0.0, 1.0)).unwrap();
        let phi = crate::poincare::phi_elliptic(Group::Sl2z, i, 12, 4, 20).unwrap();
        let e = phi.evaluator();
        let eps = EllipticDatum::new(i, Group::Sl2z).unwrap().generator;
        let r = elliptic_invariance_check(&e, 12, &eps, &pts).unwrap();
        let scale = phi.value(pts[0]).unwrap().norm();
        assert!(r <= 1e-6 * scale.max(1.0), "{r}");
    }
}
