//! Indefinite binary quadratic forms: reduction, cycles and classes,
//! fundamental automorphs, the theta series attached to a hyperbolic
//! element and the lattice sums over forms of a given discriminant.

use crate::cosets::{cosets_hyperbolic, gcd, CosetList};
use crate::error::{Error, Result};
use crate::forms::QExpansion;
use crate::moebius::{ElementKind, Group, HyperbolicDatum, Matrix, C64};
use crate::quadrature::GaussRule;
use crate::special::binomial;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

/// `a x² + b xy + c y²`, or `a z² + b z + c` on ℍ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn is_square(n: i64) -> bool {
    n >= 0 && isqrt(n).pow(2) == n
}

pub fn check_discriminant(d: i64) -> Result<()> {
    if d <= 0 || is_square(d) || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::InvalidDiscriminant(d));
    }
    Ok(())
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    pub fn eval(&self, z: C64) -> C64 {
        (z * self.a as f64 + self.b as f64) * z + self.c as f64
    }

    pub fn max_coeff(&self) -> u64 {
        self.a.unsigned_abs().max(self.b.unsigned_abs()).max(self.c.unsigned_abs())
    }

    /// `Q ∘ γ`, the form with matrix `γᵗ M_Q γ`; `(Q∘γ)(z) = Q(γz) j(γ,z)²`.
    pub fn act(&self, g: &Matrix) -> Result<QuadForm> {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (p, q, r, s) = (g.a as i128, g.b as i128, g.c as i128, g.d as i128);
        let na = a * p * p + b * p * r + c * r * r;
        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let nc = a * q * q + b * q * s + c * s * s;
        let cv = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("form action"));
        Ok(QuadForm::new(cv(na)?, cv(nb)?, cv(nc)?))
    }

    /// Reduced means 0 < b < √D and √D − b < 2|a| < √D + b.
    pub fn is_reduced(&self) -> bool {
        let d = self.disc();
        let s = isqrt(d);
        let a2 = 2 * self.a.abs();
        self.b >= 1 && self.b <= s && a2 + self.b > s && a2 - self.b <= s
    }

    /// One reduction step `(a,b,c) ↦ (c, r, (r²−D)/4c)` and its matrix.
    pub fn rho(&self) -> Result<(QuadForm, Matrix)> {
        let d = self.disc();
        let s = isqrt(d);
        let c = self.c;
        if c == 0 {
            return Err(Error::InvalidDiscriminant(d));
        }
        let m = 2 * c.abs();
        let r = if c.abs() <= s {
            s - (s + self.b).rem_euclid(m)
        } else {
            let r0 = (-self.b).rem_euclid(m);
            if r0 > c.abs() {
                r0 - m
            } else {
                r0
            }
        };
        let t = (r + self.b) / (2 * c);
        let next = QuadForm::new(c, r, (r * r - d) / (4 * c));
        Ok((next, Matrix::new(0, -1, 1, t)?))
    }

    /// A reduced form equivalent to `self` and `γ` with `self ∘ γ` equal to it.
    pub fn reduce(&self) -> Result<(QuadForm, Matrix)> {
        check_discriminant(self.disc())?;
        let mut q = *self;
        let mut g = Matrix::IDENTITY;
        for _ in 0..100_000 {
            if q.is_reduced() {
                return Ok((q, g));
            }
            let (n, m) = q.rho()?;
            q = n;
            g = g.checked_mul(&m)?;
        }
        Err(Error::InvalidInput(format!("reduction of {self} did not terminate")))
    }

    /// The cycle of a reduced form under `rho`, starting at `self`.
    pub fn cycle(&self) -> Result<Vec<QuadForm>> {
        if !self.is_reduced() {
            return Err(Error::InvalidInput(format!("{self} is not reduced")));
        }
        let mut out = vec![*self];
        let mut q = self.rho()?.0;
        while q != *self {
            out.push(q);
            if out.len() > 100_000 {
                return Err(Error::InvalidInput("cycle too long".into()));
            }
            q = q.rho()?.0;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormClass {
    pub representative: QuadForm,
    pub cycle: Vec<QuadForm>,
}

/// Proper SL₂(ℤ) classes of primitive forms of discriminant `d`.
#[derive(Clone, Debug)]
pub struct ClassList {
    pub disc: i64,
    pub classes: Vec<FormClass>,
    index: HashMap<QuadForm, usize>,
}

impl ClassList {
    pub fn new(d: i64) -> Result<Self> {
        check_discriminant(d)?;
        let s = isqrt(d);
        let mut reduced = Vec::new();
        for b in 1..=s {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            for a_abs in 1..=s {
                if 2 * a_abs + b <= s || 2 * a_abs - b > s {
                    continue;
                }
                for a in [a_abs, -a_abs] {
                    if num % (4 * a) != 0 {
                        continue;
                    }
                    let q = QuadForm::new(a, b, num / (4 * a));
                    if q.is_primitive() && q.is_reduced() {
                        reduced.push(q);
                    }
                }
            }
        }
        reduced.sort();
        let mut index = HashMap::new();
        let mut classes = Vec::new();
        for q in reduced {
            if index.contains_key(&q) {
                continue;
            }
            let cyc = q.cycle()?;
            let rep = *cyc.iter().min().expect("non-empty cycle");
            let start = cyc.iter().position(|x| *x == rep).expect("rep in cycle");
            let mut cycle = cyc[start..].to_vec();
            cycle.extend_from_slice(&cyc[..start]);
            for f in &cycle {
                index.insert(*f, classes.len());
            }
            classes.push(FormClass {
                representative: rep,
                cycle,
            });
        }
        Ok(ClassList {
            disc: d,
            classes,
            index,
        })
    }

    pub fn class_number(&self) -> usize {
        self.classes.len()
    }

    /// Index of the class containing `q`.
    pub fn class_of(&self, q: &QuadForm) -> Result<usize> {
        if q.disc() != self.disc {
            return Err(Error::InvalidDiscriminant(q.disc()));
        }
        let (r, _) = q.reduce()?;
        self.index
            .get(&r)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("{q} is not primitive")))
    }
}

pub fn class_list(d: i64) -> Result<Vec<FormClass>> {
    ClassList::new(d).map(|c| c.classes)
}

/// `(c, d − a, −b)` for `γ = (a, b; c, d)`.
pub fn form_of(g: &Matrix) -> Result<QuadForm> {
    if g.classify() != ElementKind::Hyperbolic {
        return Err(Error::NotHyperbolic(g.to_string()));
    }
    Ok(QuadForm::new(g.c, g.d - g.a, -g.b))
}

/// Least `(t, u)` with `u > 0` and `t² − D u² = 4`, read off the fundamental
/// automorph.
pub fn pell_minimal(d: i64) -> Result<(i64, i64)> {
    check_discriminant(d)?;
    let q = if d % 4 == 0 {
        QuadForm::new(1, 0, -d / 4)
    } else {
        QuadForm::new(1, 1, -(d - 1) / 4)
    };
    let g = automorph(&q)?;
    Ok((g.trace(), g.c))
}

/// Fundamental automorph `((t−bu)/2, −cu; au, (t+bu)/2)` of a primitive form:
/// the product of the reduction-step matrices once around its cycle,
/// conjugated back to `q`.
pub fn automorph(q: &QuadForm) -> Result<Matrix> {
    if !q.is_primitive() {
        return Err(Error::InvalidInput(format!("{q} is not primitive")));
    }
    let (r, h) = q.reduce()?;
    let mut g = Matrix::IDENTITY;
    let mut cur = r;
    loop {
        let (next, m) = cur.rho()?;
        g = g.checked_mul(&m)?;
        cur = next;
        if cur == r {
            break;
        }
    }
    let mut a = h.checked_mul(&g)?.checked_mul(&h.inverse())?;
    if a.trace() < 0 {
        a = a.neg();
    }
    // u = c_γ / a_Q must be positive
    if (a.c as i128) * (q.a as i128) < 0 || (q.a == 0 && (a.b as i128) * (q.c as i128) > 0) {
        a = a.inverse();
    }
    let t = a.trace() as i128;
    let u = if q.a != 0 { a.c as i128 / q.a as i128 } else { -(a.b as i128) / q.c as i128 };
    let expect = Matrix::new(
        i64::try_from((t - q.b as i128 * u) / 2).map_err(|_| Error::Overflow("automorph"))?,
        i64::try_from(-(q.c as i128) * u).map_err(|_| Error::Overflow("automorph"))?,
        i64::try_from(q.a as i128 * u).map_err(|_| Error::Overflow("automorph"))?,
        i64::try_from((t + q.b as i128 * u) / 2).map_err(|_| Error::Overflow("automorph"))?,
    )?;
    if expect != a || q.act(&a)? != *q || t * t - (q.disc() as i128) * u * u != 4 || t <= 2 {
        return Err(Error::InvalidInput(format!("automorph check failed for {q}")));
    }
    Ok(a)
}

/// `C_{k,γ} = D^{(k−1)/2} (−sgn tr γ / π) C(k−2, k/2−1)^{−1} 2^{k/2−2}`.
pub fn katok_constant(k: i32, g: &Matrix) -> Result<f64> {
    let q = form_of(g)?;
    let d = q.disc() as f64;
    let sgn = g.trace().signum() as f64;
    Ok(d.powf((k - 1) as f64 / 2.0) * (-sgn / PI) / binomial((k - 2) as u64, (k / 2 - 1) as u64)
        * 2f64.powi(k / 2 - 2))
}

fn inv_power(v: C64, half_k: i32) -> C64 {
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..half_k {
        p *= v;
    }
    1.0 / p
}

/// `θ_{k,γ}(z) = Σ_{Γ_γ\Γ} (Q_γ∘δ)(z)^{−k/2}` over a truncated coset list.
#[derive(Clone, Debug)]
pub struct KatokTheta {
    pub k: i32,
    pub generator: Matrix,
    pub forms: Vec<QuadForm>,
}

impl KatokTheta {
    pub fn new(group: Group, g: &Matrix, k: i32, entry_max: u64) -> Result<Self> {
        crate::poincare::Weight::new(k)?;
        let datum = HyperbolicDatum::new(g)?;
        let list = cosets_hyperbolic(group, &datum, entry_max)?;
        Self::from_cosets(g, k, &list)
    }

    pub fn from_cosets(g: &Matrix, k: i32, list: &CosetList) -> Result<Self> {
        let q = form_of(g)?;
        let forms = list
            .matrices()
            .map(|m| q.act(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(KatokTheta {
            k,
            generator: *g,
            forms,
        })
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        if !(z.im > 0.0) {
            return Err(Error::NotInUpperHalfPlane(z));
        }
        Ok(self.forms.iter().map(|f| inv_power(f.eval(z), self.k / 2)).sum())
    }
}

pub fn theta_katok(z: C64, k: i32, g: &Matrix, entry_max: u64) -> Result<C64> {
    KatokTheta::new(Group::Sl2z, g, k, entry_max)?.eval(z)
}

/// `Σ Q(z)^{−k/2}` over primitive forms of discriminant `D` with
/// max(|a|,|b|,|c|) ≤ B, optionally restricted to the class of one form.
#[derive(Clone, Debug)]
pub struct ZagierSum {
    pub k: i32,
    pub disc: i64,
    pub forms: Vec<QuadForm>,
}

impl ZagierSum {
    pub fn new(k: i32, d: i64, bound: u64, class_of: Option<&QuadForm>) -> Result<Self> {
        crate::poincare::Weight::new(k)?;
        let classes = ClassList::new(d)?;
        let target = class_of.map(|q| classes.class_of(q)).transpose()?;
        let b_max = bound as i64;
        let mut forms = Vec::new();
        for a in -b_max..=b_max {
            if a == 0 {
                continue;
            }
            for b in -b_max..=b_max {
                let num = b * b - d;
                if num % (4 * a) != 0 {
                    continue;
                }
                let q = QuadForm::new(a, b, num / (4 * a));
                if q.c.abs() > b_max || !q.is_primitive() {
                    continue;
                }
                if let Some(t) = target {
                    if classes.class_of(&q)? != t {
                        continue;
                    }
                }
                forms.push(q);
            }
        }
        Ok(ZagierSum { k, disc: d, forms })
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        if !(z.im > 0.0) {
            return Err(Error::NotInUpperHalfPlane(z));
        }
        Ok(self.forms.iter().map(|f| inv_power(f.eval(z), self.k / 2)).sum())
    }
}

pub fn zagier_f(z: C64, k: i32, d: i64, bound: u64, class_of: Option<&QuadForm>) -> Result<C64> {
    ZagierSum::new(k, d, bound, class_of)?.eval(z)
}

#[derive(Clone, Copy, Debug)]
pub struct PeriodValue {
    pub value: C64,
    pub error_estimate: f64,
}

/// `r_k(f, γ) = ∫_w^{γw} f(z) Q_γ(z)^{k/2−1} dz` along w → w + iT →
/// γw + iT → γw with T raised so the horizontal leg sits at height ≥ 1.
pub fn hyperbolic_period(f: &QExpansion, g: &Matrix, w: C64, order: usize) -> Result<PeriodValue> {
    let q = form_of(g)?;
    let k = f.weight;
    let gw = g.act(w)?;
    let top = 1f64.max(w.im).max(gw.im);
    let integrand = |z: C64| -> Result<C64> { Ok(f.value(z)? * q.eval(z).powi(k / 2 - 1)) };
    let run = |n: usize| -> Result<C64> {
        let rule = GaussRule::new(n)?;
        let mut acc = C64::new(0.0, 0.0);
        // up from w
        for (y, wt) in rule.panels(&log_breaks(w.im, top)) {
            acc += integrand(C64::new(w.re, y))? * C64::new(0.0, wt);
        }
        // across
        let len = gw.re - w.re;
        let pieces = (len.abs() / 0.5).ceil().max(1.0) as usize;
        let xb: Vec<f64> = (0..=pieces).map(|j| w.re + len * j as f64 / pieces as f64).collect();
        for (x, wt) in rule.panels(&xb) {
            acc += integrand(C64::new(x, top))? * wt;
        }
        // down to γw
        for (y, wt) in rule.panels(&log_breaks(gw.im, top)) {
            acc -= integrand(C64::new(gw.re, y))? * C64::new(0.0, wt);
        }
        Ok(acc)
    };
    let coarse = run(order)?;
    let fine = run(2 * order)?;
    Ok(PeriodValue {
        value: fine,
        error_estimate: (fine - coarse).norm(),
    })
}

fn log_breaks(lo: f64, hi: f64) -> Vec<f64> {
    if hi <= lo {
        return vec![lo, lo];
    }
    let mut b = vec![lo];
    let mut y = lo * 2.0;
    while y < hi {
        b.push(y);
        y *= 2.0;
    }
    b.push(hi);
    b
}
