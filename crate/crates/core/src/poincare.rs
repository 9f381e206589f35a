//! Relative Poincaré series `P[φ] = Σ φ|_kγ` over stabilizer cosets, their
//! twisted versions `P[φ, L] = Σ L(γ) φ|_kγ`, and the parabolic,
//! hyperbolic and elliptic specializations.

use crate::cosets::{
    cosets_elliptic, cosets_hyperbolic, cosets_parabolic, group_ball, parabolic_row, CosetList, Orbit,
    StabilizerKind,
};
use crate::error::{Error, Result};
use crate::moebius::{
    CMatrix, Cusp, EllipticDatum, FixedPointDatum, Group, HyperbolicDatum, Matrix, ParabolicDatum, PointH,
    C64,
};
use rayon::prelude::*;
use std::f64::consts::PI;

const CHUNK: usize = 256;
const STABILIZER_TOL: f64 = 1e-8;

/// An even weight `k ≥ 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weight(i32);

impl Weight {
    pub fn new(k: i32) -> Result<Self> {
        if k < 4 || k % 2 != 0 {
            return Err(Error::InvalidWeight(k));
        }
        Ok(Weight(k))
    }

    pub fn get(self) -> i32 {
        self.0
    }
}

fn stabilizer_kind(d: &FixedPointDatum) -> StabilizerKind {
    match d {
        FixedPointDatum::Parabolic(_) => StabilizerKind::Parabolic,
        FixedPointDatum::Hyperbolic(_) => StabilizerKind::Hyperbolic,
        FixedPointDatum::Elliptic(_) => StabilizerKind::Elliptic,
    }
}

/// `φ = A⁻¹(Σ c_m e^{2πim·})` for the fixed-point datum: a finite
/// combination of modes `m` with coefficients `c_m`.
#[derive(Clone, Debug)]
pub struct SeedFunction {
    pub datum: FixedPointDatum,
    pub modes: Vec<(i64, C64)>,
}

impl SeedFunction {
    pub fn new(datum: FixedPointDatum, m: i64) -> Self {
        SeedFunction {
            datum,
            modes: vec![(m, C64::new(1.0, 0.0))],
        }
    }

    pub fn parabolic(datum: ParabolicDatum, m: i64) -> Self {
        Self::new(FixedPointDatum::Parabolic(datum), m)
    }

    pub fn hyperbolic(datum: HyperbolicDatum, m: i64) -> Self {
        Self::new(FixedPointDatum::Hyperbolic(datum), m)
    }

    pub fn elliptic(datum: EllipticDatum, m: i64) -> Self {
        Self::new(FixedPointDatum::Elliptic(datum), m)
    }

    pub fn zero(datum: FixedPointDatum) -> Self {
        SeedFunction { datum, modes: vec![] }
    }

    pub fn kind(&self) -> StabilizerKind {
        stabilizer_kind(&self.datum)
    }

    /// `α·self + other`; both seeds must share the datum kind.
    pub fn combine(&self, alpha: C64, other: &SeedFunction) -> Result<SeedFunction> {
        if self.kind() != other.kind() {
            return Err(Error::StabilizerMismatch {
                seed: self.kind().to_string(),
                cosets: other.kind().to_string(),
            });
        }
        let mut modes: Vec<(i64, C64)> = self.modes.iter().map(|&(m, c)| (m, c * alpha)).collect();
        modes.extend_from_slice(&other.modes);
        Ok(SeedFunction {
            datum: self.datum.clone(),
            modes,
        })
    }

    /// `σ⁻¹` for the datum.
    pub fn scaling_inv(&self) -> CMatrix {
        match &self.datum {
            FixedPointDatum::Parabolic(p) => p.scaling_inv,
            FixedPointDatum::Hyperbolic(h) => h.scaling_inv,
            FixedPointDatum::Elliptic(e) => e.scaling_inv,
        }
    }

    pub fn generator(&self) -> Matrix {
        match &self.datum {
            FixedPointDatum::Parabolic(p) => p.generator,
            FixedPointDatum::Hyperbolic(h) => h.generator,
            FixedPointDatum::Elliptic(e) => e.generator,
        }
    }

    /// The model function `h` on the normal form: `e(mw)`,
    /// `w^{−k/2 + πim/log ξ}` or `w^{Nm − k/2}`.
    fn model(&self, k: i32, w: C64) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        match &self.datum {
            FixedPointDatum::Parabolic(_) => {
                for &(m, c) in &self.modes {
                    acc += c * (C64::new(0.0, 2.0 * PI * m as f64) * w).exp();
                }
            }
            FixedPointDatum::Hyperbolic(h) => {
                let lw = w.ln();
                for &(m, c) in &self.modes {
                    let v = if m == 0 {
                        w.powi(-k / 2)
                    } else {
                        (C64::new(-(k / 2) as f64, PI * m as f64 / h.log_xi()) * lw).exp()
                    };
                    acc += c * v;
                }
            }
            FixedPointDatum::Elliptic(e) => {
                for &(m, c) in &self.modes {
                    let ex = e.order as i64 * m - (k / 2) as i64;
                    if ex < 0 && w.norm() == 0.0 {
                        return Err(Error::Pole);
                    }
                    acc += c * w.powi(ex as i32);
                }
            }
        }
        Ok(acc)
    }

    /// `det(M)^{k/2} h(Mz) / j(M, z)^k` for `M = σ⁻¹γ`.
    fn term(&self, k: i32, m: &CMatrix, z: C64) -> Result<C64> {
        let (w, j) = m.act_with_j(z)?;
        Ok(m.det().powi(k / 2) * self.model(k, w)? / j.powi(k))
    }

    /// `φ(z)` itself.
    pub fn eval(&self, k: i32, z: C64) -> Result<C64> {
        self.term(k, &self.scaling_inv(), z)
    }

    /// `max |φ|_k ε − φ|` over the points, for the stabilizer generator ε.
    pub fn invariance_residual(&self, k: i32, points: &[C64]) -> Result<f64> {
        let g = self.generator().to_complex();
        let s = self.scaling_inv();
        let mut worst: f64 = 0.0;
        for &z in points {
            let a = self.term(k, &s.mul(&g), z)?;
            let b = self.term(k, &s, z)?;
            worst = worst.max((a - b).norm() / b.norm().max(1e-300).max(1.0));
        }
        Ok(worst)
    }
}

/// A function on group elements used to twist a series.
pub trait Twist: Sync {
    fn value(&self, g: &Matrix) -> Result<C64>;
}

impl<F> Twist for F
where
    F: Fn(&Matrix) -> Result<C64> + Sync,
{
    fn value(&self, g: &Matrix) -> Result<C64> {
        self(g)
    }
}

#[derive(Clone, Debug)]
struct Prepared {
    matrix: Matrix,
    m: CMatrix,
    translates: bool,
    uv: (i64, i64),
    shell: u64,
    twist: Option<C64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: C64,
    /// Σ |term| over the outermost truncation shell.
    pub last_shell: f64,
    pub terms: usize,
}

/// A truncated relative Poincaré series, ready to evaluate.
#[derive(Clone, Debug)]
pub struct PoincareSeries {
    pub seed: SeedFunction,
    pub weight: i32,
    pub bound: u64,
    window: i64,
    max_shell: u64,
    terms: Vec<Prepared>,
}

impl PoincareSeries {
    pub fn new(seed: SeedFunction, k: i32, cosets: &CosetList) -> Result<Self> {
        Self::build(seed, k, cosets, None)
    }

    /// `Σ L(γ) φ|_kγ`. `L` must vanish on the stabilizer generator.
    pub fn twisted(seed: SeedFunction, k: i32, cosets: &CosetList, twist: &dyn Twist) -> Result<Self> {
        let on_gen = twist.value(&seed.generator())?.norm();
        if on_gen > STABILIZER_TOL {
            return Err(Error::TwistOnStabilizer(on_gen));
        }
        Self::build(seed, k, cosets, Some(twist))
    }

    fn build(seed: SeedFunction, k: i32, cosets: &CosetList, twist: Option<&dyn Twist>) -> Result<Self> {
        Weight::new(k)?;
        if seed.kind() != cosets.kind {
            return Err(Error::StabilizerMismatch {
                seed: seed.kind().to_string(),
                cosets: cosets.kind.to_string(),
            });
        }
        let cusp = match &seed.datum {
            FixedPointDatum::Parabolic(p) => Some(p.cusp),
            _ => None,
        };
        let s = seed.scaling_inv();
        let values: Vec<Option<C64>> = match twist {
            None => vec![None; cosets.len()],
            Some(t) => cosets
                .reps
                .par_iter()
                .map(|r| t.value(&r.matrix).map(Some))
                .collect::<Result<_>>()?,
        };
        let mut terms = Vec::with_capacity(cosets.len());
        for (r, tw) in cosets.reps.iter().zip(values) {
            if tw == Some(C64::new(0.0, 0.0)) {
                continue;
            }
            let translates = r.orbit == Orbit::Translates;
            let uv = match (translates, cusp) {
                (true, Some(c)) => parabolic_row(c, &r.matrix),
                _ => (0, 1),
            };
            terms.push(Prepared {
                matrix: r.matrix,
                m: s.mul(&r.matrix.to_complex()),
                translates,
                uv,
                shell: r.shell,
                twist: tw,
            });
        }
        let max_shell = cosets.reps.iter().map(|r| r.shell).max().unwrap_or(0);
        Ok(PoincareSeries {
            seed,
            weight: k,
            bound: cosets.bound,
            window: cosets.translate_window as i64,
            max_shell,
            terms,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn representatives(&self) -> impl Iterator<Item = &Matrix> {
        self.terms.iter().map(|t| &t.matrix)
    }

    fn rep_sum(&self, p: &Prepared, z: C64) -> Result<(C64, usize)> {
        let k = self.weight;
        let mut acc = C64::new(0.0, 0.0);
        let mut n_terms = 0;
        if p.translates && p.uv.0 != 0 {
            let (u, v) = p.uv;
            let n0 = (-z.re - v as f64 / u as f64).round() as i64;
            for n in n0 - self.window..=n0 + self.window {
                acc += self.seed.term(k, &p.m, z + n as f64)?;
                n_terms += 1;
            }
        } else {
            acc = self.seed.term(k, &p.m, z)?;
            n_terms = 1;
        }
        if let Some(t) = p.twist {
            acc *= t;
        }
        Ok((acc, n_terms))
    }

    pub fn eval(&self, z: C64) -> Result<SeriesValue> {
        if !(z.im > 0.0) {
            return Err(Error::NotInUpperHalfPlane(z));
        }
        let partial: Vec<(C64, f64, usize)> = self
            .terms
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut s = C64::new(0.0, 0.0);
                let mut mass = 0.0;
                let mut n = 0;
                for p in chunk {
                    let (v, c) = self.rep_sum(p, z)?;
                    s += v;
                    n += c;
                    if p.shell == self.max_shell {
                        mass += v.norm();
                    }
                }
                Ok((s, mass, n))
            })
            .collect::<Result<_>>()?;
        let mut out = SeriesValue {
            value: C64::new(0.0, 0.0),
            last_shell: 0.0,
            terms: 0,
        };
        for (s, m, n) in partial {
            out.value += s;
            out.last_shell += m;
            out.terms += n;
        }
        if !out.value.re.is_finite() || !out.value.im.is_finite() {
            return Err(Error::NonFinite(z));
        }
        Ok(out)
    }

    pub fn value(&self, z: C64) -> Result<C64> {
        self.eval(z).map(|v| v.value)
    }

    pub fn evaluator(&self) -> impl Fn(C64) -> Result<C64> + Sync + '_ {
        move |z| self.value(z)
    }
}

pub fn relative_poincare(seed: &SeedFunction, cosets: &CosetList, k: i32, z: PointH) -> Result<SeriesValue> {
    PoincareSeries::new(seed.clone(), k, cosets)?.eval(z.z())
}

pub fn relative_poincare_twisted(
    seed: &SeedFunction,
    twist: &dyn Twist,
    cosets: &CosetList,
    k: i32,
    z: PointH,
) -> Result<SeriesValue> {
    PoincareSeries::twisted(seed.clone(), k, cosets, twist)?.eval(z.z())
}

/// `max |L(γ₀γ) − L(γ)|` over the first `n` representatives, with γ₀ the
/// stabilizer generator.
pub fn representative_shift_residual(
    seed: &SeedFunction,
    twist: &dyn Twist,
    cosets: &CosetList,
    n: usize,
) -> Result<f64> {
    let g0 = seed.generator();
    let mut worst: f64 = 0.0;
    for r in cosets.reps.iter().filter(|r| r.matrix != Matrix::IDENTITY).take(n) {
        let a = twist.value(&g0.checked_mul(&r.matrix)?)?;
        let b = twist.value(&r.matrix)?;
        worst = worst.max((a - b).norm());
    }
    Ok(worst)
}

/// `Φ_Par(·, m, 𝔞)` with parabolic cosets `|c| ≤ c_max` (resp. `|a|` at 0).
pub fn phi_parabolic(group: Group, cusp: Cusp, k: i32, m: i64, c_max: u64) -> Result<PoincareSeries> {
    let datum = ParabolicDatum::new(group, cusp);
    let cosets = cosets_parabolic(group, &datum, c_max)?;
    PoincareSeries::new(SeedFunction::parabolic(datum, m), k, &cosets)
}

pub fn phi_hyperbolic(group: Group, g: &Matrix, k: i32, m: i64, entry_max: u64) -> Result<PoincareSeries> {
    let datum = HyperbolicDatum::new(g)?;
    let cosets = cosets_hyperbolic(group, &datum, entry_max)?;
    PoincareSeries::new(SeedFunction::hyperbolic(datum, m), k, &cosets)
}

pub fn phi_elliptic(group: Group, z0: PointH, k: i32, m: i64, entry_max: u64) -> Result<PoincareSeries> {
    let datum = EllipticDatum::new(z0, group)?;
    let cosets = cosets_elliptic(group, &datum, entry_max)?;
    PoincareSeries::new(SeedFunction::elliptic(datum, m), k, &cosets)
}

/// `Φ*(z, l) = Σ_{γ ∈ Γ} (2iβ)^{k/2} (σ⁻¹γz)^l / j(σ⁻¹γ, z)^k` over the whole
/// ball of entries ≤ `bound`, one element per ± pair.
pub fn phi_elliptic_star(z: C64, l: u32, k: i32, datum: &EllipticDatum, group: Group, bound: u64) -> Result<C64> {
    Weight::new(k)?;
    if !(z.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane(z));
    }
    let s = datum.scaling_inv;
    let ball = group_ball(group, bound);
    let det = s.det().powi(k / 2);
    let partial: Vec<C64> = ball
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = C64::new(0.0, 0.0);
            for g in chunk {
                let (w, j) = s.mul(&g.to_complex()).act_with_j(z)?;
                acc += w.powi(l as i32) / j.powi(k);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(det * partial.into_iter().sum::<C64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::delta_qexp;
    use crate::qforms::KatokTheta;

    fn c(x: f64, y: f64) -> C64 {
        C64::new(x, y)
    }

    fn slash(p: &PoincareSeries, g: &Matrix, z: C64) -> C64 {
        p.value(g.act(z).unwrap()).unwrap() / g.j(z).powi(p.weight)
    }

    #[test]
    fn weight_validation() {
        assert!(Weight::new(12).is_ok());
        for k in [2, 3, 5, 0, -4] {
            assert_eq!(Weight::new(k), Err(Error::InvalidWeight(k)));
        }
    }

    #[test]
    fn seeds_are_stabilizer_invariant() {
        let pts = [c(0.1, 1.1), c(-0.3, 0.7), c(0.4, 2.0), c(0.0, 0.9), c(0.25, 1.3)];
        let par = SeedFunction::parabolic(ParabolicDatum::new(Group::Gamma0(11), Cusp::Zero), 2);
        assert!(par.invariance_residual(4, &pts).unwrap() < 1e-10);
        let hyp = SeedFunction::hyperbolic(HyperbolicDatum::new(&Matrix::new(1, 1, 1, 2).unwrap()).unwrap(), 3);
        assert!(hyp.invariance_residual(12, &pts).unwrap() < 1e-10);
        for (z0, m) in [(c(0.0, 1.0), 4), (c(0.5, 3f64.sqrt() / 2.0), 2)] {
            let d = EllipticDatum::new(PointH::new(z0).unwrap(), Group::Sl2z).unwrap();
            let ell = SeedFunction::elliptic(d, m);
            assert!(ell.invariance_residual(12, &pts).unwrap() < 1e-10);
        }
    }

    #[test]
    fn parabolic_series_is_proportional_to_delta() {
        let p = phi_parabolic(Group::Sl2z, Cusp::Infinity, 12, 1, 40).unwrap();
        let d = delta_qexp(60).unwrap();
        let z1 = c(0.0, 1.0);
        let z2 = c(0.3, 1.4);
        let r1 = p.value(z1).unwrap() / d.eval(z1).unwrap();
        let r2 = p.value(z2).unwrap() / d.eval(z2).unwrap();
        assert!((r1 - r2).norm() <= 1e-5 * r1.norm(), "{r1} {r2}");
    }

    #[test]
    fn zero_seed_and_zero_twist() {
        let datum = ParabolicDatum::infinity();
        let cos = cosets_parabolic(Group::Sl2z, &datum, 10).unwrap();
        let z = SeedFunction::zero(FixedPointDatum::Parabolic(datum.clone()));
        assert_eq!(PoincareSeries::new(z, 12, &cos).unwrap().value(c(0.1, 1.0)).unwrap(), c(0.0, 0.0));
        let zero = |_: &Matrix| -> Result<C64> { Ok(C64::new(0.0, 0.0)) };
        let p = PoincareSeries::twisted(SeedFunction::parabolic(datum, 1), 12, &cos, &zero).unwrap();
        assert_eq!(p.value(c(0.1, 1.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn mismatched_cosets_rejected() {
        let datum = ParabolicDatum::infinity();
        let g = Matrix::new(1, 1, 1, 2).unwrap();
        let hd = HyperbolicDatum::new(&g).unwrap();
        let cos = cosets_hyperbolic(Group::Sl2z, &hd, 5).unwrap();
        let err = PoincareSeries::new(SeedFunction::parabolic(datum, 1), 12, &cos).unwrap_err();
        assert!(matches!(err, Error::StabilizerMismatch { .. }));
        let cos2 = cosets_parabolic(Group::Sl2z, &ParabolicDatum::infinity(), 5).unwrap();
        let bad = |_: &Matrix| -> Result<C64> { Ok(C64::new(1.0, 0.0)) };
        let err = PoincareSeries::twisted(SeedFunction::parabolic(ParabolicDatum::infinity(), 1), 12, &cos2, &bad)
            .unwrap_err();
        assert!(matches!(err, Error::TwistOnStabilizer(_)));
    }

    #[test]
    fn hyperbolic_series_matches_katok_theta() {
        let g = Matrix::new(1, 1, 1, 2).unwrap();
        let datum = HyperbolicDatum::new(&g).unwrap();
        let cos = cosets_hyperbolic(Group::Sl2z, &datum, 25).unwrap();
        let phi = PoincareSeries::new(SeedFunction::hyperbolic(datum.clone(), 0), 12, &cos).unwrap();
        let theta = KatokTheta::from_cosets(&g, 12, &cos).unwrap();
        let scale = (datum.xi - 1.0 / datum.xi).powi(-6);
        for z in [c(0.0, 1.0), c(0.3, 0.9), c(-0.2, 1.4)] {
            let a = phi.value(z).unwrap() * scale;
            let b = theta.eval(z).unwrap();
            assert!((a - b).norm() <= 1e-10 * b.norm(), "{a} {b}");
        }
    }

    #[test]
    fn untwisted_series_are_modular() {
        let gs = [Matrix::S, Matrix::T, Matrix::new(2, 1, 1, 1).unwrap()];
        let pts = [c(0.1, 1.2), c(-0.35, 0.95), c(0.2, 0.8)];
        let i = PointH::new(c(0.0, 1.0)).unwrap();
        let series = [
            phi_parabolic(Group::Sl2z, Cusp::Infinity, 12, 2, 40).unwrap(),
            phi_hyperbolic(Group::Sl2z, &Matrix::new(1, 1, 1, 2).unwrap(), 12, 1, 30).unwrap(),
            phi_elliptic(Group::Sl2z, i, 12, 4, 30).unwrap(),
        ];
        for p in &series {
            for g in &gs {
                for &z in &pts {
                    let a = slash(p, g, z);
                    let b = p.value(z).unwrap();
                    assert!((a - b).norm() <= 1e-5 * b.norm(), "{g} {z}: {a} {b}");
                }
            }
        }
    }

    #[test]
    fn gamma0_parabolic_series_at_both_cusps_are_modular() {
        let grp = Group::Gamma0(11);
        let gs = [Matrix::T, Matrix::new(4, -1, 33, -8).unwrap(), Matrix::new(3, 1, 11, 4).unwrap()];
        for cusp in [Cusp::Infinity, Cusp::Zero] {
            let p = phi_parabolic(grp, cusp, 12, 1, 150).unwrap();
            for g in &gs {
                let z = c(-0.3, 0.4);
                let a = slash(&p, g, z);
                let b = p.value(z).unwrap();
                assert!((a - b).norm() <= 1e-6 * b.norm(), "{cusp:?} {g}: {a} {b}");
            }
        }
    }

    #[test]
    fn bound_doubling_shrinks_differences() {
        let z = c(0.1, 1.1);
        let vals: Vec<C64> = [10, 20, 40]
            .iter()
            .map(|&b| phi_parabolic(Group::Sl2z, Cusp::Infinity, 12, 1, b).unwrap().value(z).unwrap())
            .collect();
        let d1 = (vals[1] - vals[0]).norm();
        let d2 = (vals[2] - vals[1]).norm();
        assert!(d2 * 2.0 <= d1, "{d1} {d2}");
        let vals: Vec<C64> = [8, 16, 32]
            .iter()
            .map(|&b| {
                phi_hyperbolic(Group::Sl2z, &Matrix::new(1, 1, 1, 2).unwrap(), 12, 0, b)
                    .unwrap()
                    .value(z)
                    .unwrap()
            })
            .collect();
        let d1 = (vals[1] - vals[0]).norm();
        let d2 = (vals[2] - vals[1]).norm();
        assert!(d2 * 2.0 <= d1, "{d1} {d2}");
    }

    #[test]
    fn linear_in_the_seed() {
        let datum = ParabolicDatum::infinity();
        let cos = cosets_parabolic(Group::Sl2z, &datum, 20).unwrap();
        let s1 = SeedFunction::parabolic(datum.clone(), 1);
        let s2 = SeedFunction::parabolic(datum, 3);
        let alpha = c(0.7, -1.3);
        let comb = s1.combine(alpha, &s2).unwrap();
        let z = c(0.2, 0.9);
        let lhs = PoincareSeries::new(comb, 12, &cos).unwrap().value(z).unwrap();
        let a = PoincareSeries::new(s1, 12, &cos).unwrap().value(z).unwrap();
        let b = PoincareSeries::new(s2, 12, &cos).unwrap().value(z).unwrap();
        assert!((lhs - (alpha * a + b)).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn elliptic_star_relation() {
        let i = PointH::new(c(0.0, 1.0)).unwrap();
        let datum = EllipticDatum::new(i, Group::Sl2z).unwrap();
        let phi = phi_elliptic(Group::Sl2z, i, 12, 4, 40).unwrap();
        for z in [c(0.0, 1.0), c(0.2, 1.3)] {
            let star = phi_elliptic_star(z, 2, 12, &datum, Group::Sl2z, 40).unwrap();
            let ell = phi.value(z).unwrap();
            assert!((star - 2.0 * ell).norm() <= 1e-6 * star.norm(), "{star} {ell}");
            let odd = phi_elliptic_star(z, 3, 12, &datum, Group::Sl2z, 40).unwrap();
            assert!(odd.norm() <= 1e-6 * star.norm(), "{odd}");
        }
    }

    #[test]
    fn deterministic_evaluation() {
        let p = phi_parabolic(Group::Gamma0(11), Cusp::Infinity, 4, 1, 120).unwrap();
        let z = c(0.2, 1.5);
        let a = p.eval(z).unwrap();
        let b = p.eval(z).unwrap();
        assert_eq!(a, b);
        assert!(a.last_shell > 0.0 && a.terms > p.len());
    }
}
