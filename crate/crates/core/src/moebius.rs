//! Möbius action of 2×2 matrices on the upper half-plane, the weight-k slash
//! operator and the scaling matrices attached to cusps, geodesics and
//! elliptic points.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub type C64 = Complex64;

/// Relative size of `c z + d` below which the action is treated as a pole.
const POLE_TOL: f64 = 1e-14;

/// Integer matrix of determinant one. The sign is kept, so `g` and `-g` are
/// different values; use [`Matrix::psl_eq`] where only the PSL₂ class matters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    Identity,
    Parabolic,
    Elliptic,
    Hyperbolic,
}

impl Matrix {
    pub const IDENTITY: Matrix = Matrix::new_unchecked(1, 0, 0, 1);
    pub const S: Matrix = Matrix::new_unchecked(0, -1, 1, 0);
    pub const T: Matrix = Matrix::new_unchecked(1, 1, 0, 1);

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::BadDeterminant(det));
        }
        Ok(Matrix { a, b, c, d })
    }

    pub const fn new_unchecked(a: i64, b: i64, c: i64, d: i64) -> Self {
        Matrix { a, b, c, d }
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Matrix {
        Matrix::new_unchecked(self.d, -self.b, -self.c, self.a)
    }

    pub fn neg(&self) -> Matrix {
        Matrix::new_unchecked(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::new_unchecked(self.a, self.c, self.b, self.d)
    }

    pub fn checked_mul(&self, o: &Matrix) -> Result<Matrix> {
        let f = |x: i64, y: i64, z: i64, w: i64| -> Result<i64> {
            let v = x as i128 * y as i128 + z as i128 * w as i128;
            i64::try_from(v).map_err(|_| Error::Overflow("matrix product"))
        };
        Ok(Matrix {
            a: f(self.a, o.a, self.b, o.c)?,
            b: f(self.a, o.b, self.b, o.d)?,
            c: f(self.c, o.a, self.d, o.c)?,
            d: f(self.c, o.b, self.d, o.d)?,
        })
    }

    /// `self^n`, with negative `n` meaning powers of the inverse.
    pub fn pow(&self, n: i64) -> Result<Matrix> {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Matrix::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn psl_eq(&self, o: &Matrix) -> bool {
        self == o || *self == o.neg()
    }

    /// Representative of `±self` whose first nonzero entry is positive.
    pub fn sign_normalized(&self) -> Matrix {
        let first = [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|&x| x != 0)
            .unwrap_or(1);
        if first < 0 {
            self.neg()
        } else {
            *self
        }
    }

    pub fn max_entry(&self) -> u64 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|x| x.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn classify(&self) -> ElementKind {
        if self.b == 0 && self.c == 0 && self.a == self.d && self.a.abs() == 1 {
            return ElementKind::Identity;
        }
        match self.trace().unsigned_abs() {
            0 | 1 => ElementKind::Elliptic,
            2 => ElementKind::Parabolic,
            _ => ElementKind::Hyperbolic,
        }
    }

    pub fn to_complex(&self) -> CMatrix {
        CMatrix::new(
            C64::new(self.a as f64, 0.0),
            C64::new(self.b as f64, 0.0),
            C64::new(self.c as f64, 0.0),
            C64::new(self.d as f64, 0.0),
        )
    }

    pub fn j(&self, z: C64) -> C64 {
        self.c as f64 * z + self.d as f64
    }

    /// Image of `z` without any domain check.
    pub fn act(&self, z: C64) -> Result<C64> {
        self.to_complex().act(z)
    }

    /// `(γz, j(γ, z))` for a point of ℍ.
    pub fn apply(&self, z: PointH) -> Result<(PointH, C64)> {
        let (w, j) = self.to_complex().act_with_j(z.z())?;
        Ok((PointH::new(w)?, j))
    }

    pub fn apply_ext(&self, p: ExtPoint) -> ExtPoint {
        match p {
            ExtPoint::Infinity => {
                if self.c == 0 {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite(C64::new(self.a as f64 / self.c as f64, 0.0))
                }
            }
            ExtPoint::Finite(z) => {
                let j = self.j(z);
                if j.norm() <= POLE_TOL * (1.0 + z.norm()) * (self.c.abs() + self.d.abs()) as f64 {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite((self.a as f64 * z + self.b as f64) / j)
                }
            }
        }
    }
}

impl std::ops::Mul for Matrix {
    type Output = Matrix;
    fn mul(self, o: Matrix) -> Matrix {
        self.checked_mul(&o).expect("integer overflow in matrix product")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Matrix {
    type Err = Error;
    /// Parses `a,b;c,d`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse matrix '{s}', expected a,b;c,d"));
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return Err(bad());
        }
        let mut v = Vec::with_capacity(4);
        for r in rows {
            for x in r.split(',') {
                v.push(x.trim().parse::<i64>().map_err(|_| bad())?);
            }
        }
        if v.len() != 4 {
            return Err(bad());
        }
        Matrix::new(v[0], v[1], v[2], v[3])
    }
}

/// Complex 2×2 matrix, used for scaling matrices. The determinant is not
/// assumed to be one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl CMatrix {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        CMatrix { a, b, c, d }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        CMatrix::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        CMatrix::real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        CMatrix::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn inverse(&self) -> CMatrix {
        let det = self.det();
        CMatrix::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn j(&self, z: C64) -> C64 {
        self.c * z + self.d
    }

    pub fn act_with_j(&self, z: C64) -> Result<(C64, C64)> {
        let j = self.j(z);
        let scale = (self.c.norm() * z.norm() + self.d.norm()).max(f64::MIN_POSITIVE);
        if j.norm() <= POLE_TOL * scale {
            return Err(Error::Pole);
        }
        Ok(((self.a * z + self.b) / j, j))
    }

    pub fn act(&self, z: C64) -> Result<C64> {
        self.act_with_j(z).map(|(w, _)| w)
    }

    pub fn max_abs_diff(&self, o: &CMatrix) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }
}

impl From<Matrix> for CMatrix {
    fn from(m: Matrix) -> Self {
        m.to_complex()
    }
}

/// A point of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointH(C64);

impl PointH {
    pub fn new(z: C64) -> Result<Self> {
        if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NotInUpperHalfPlane(z));
        }
        Ok(PointH(z))
    }

    pub fn from_xy(x: f64, y: f64) -> Result<Self> {
        PointH::new(C64::new(x, y))
    }

    pub fn z(&self) -> C64 {
        self.0
    }
}

impl FromStr for PointH {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PointH::new(parse_complex(s)?)
    }
}

/// Parses `x+yi`, `x-yi`, `yi`, `i`, `x` and the tags `rho`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let bad = || Error::InvalidInput(format!("cannot parse point '{s}', expected x+yi"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t == "rho" {
        return Ok(C64::new(0.5, 3f64.sqrt() / 2.0));
    }
    if let Some(body) = t.strip_suffix('i') {
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| {
                (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E')
            })
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => x.parse::<f64>().map_err(|_| bad())?,
        };
        let re = re.parse::<f64>().map_err(|_| bad())?;
        Ok(C64::new(re, im))
    } else {
        Ok(C64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0))
    }
}

/// A point of ℍ ∪ ℝ ∪ {∞}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtPoint {
    Finite(C64),
    Infinity,
}

/// `det(γ)^{k/2} f(γz) / j(γ,z)^k`.
pub fn slash_eval<F>(f: &F, k: i32, g: &CMatrix, z: C64) -> Result<C64>
where
    F: Fn(C64) -> Result<C64> + ?Sized,
{
    let (w, j) = g.act_with_j(z)?;
    Ok(g.det().powi(k / 2) * f(w)? / j.powi(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Group {
    Sl2z,
    Gamma0(u32),
}

impl Group {
    pub fn level(&self) -> i64 {
        match self {
            Group::Sl2z => 1,
            Group::Gamma0(n) => *n as i64,
        }
    }

    pub fn contains(&self, g: &Matrix) -> bool {
        g.det() == 1 && g.c % self.level() == 0
    }

    pub fn check(&self, g: &Matrix) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::NotInGroup(g.to_string(), self.to_string()))
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Sl2z => write!(f, "sl2z"),
            Group::Gamma0(n) => write!(f, "gamma0:{n}"),
        }
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "sl2z" || t == "gamma0:1" {
            return Ok(Group::Sl2z);
        }
        if let Some(n) = t.strip_prefix("gamma0:") {
            let n: u32 = n
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad level in '{s}'")))?;
            if n == 0 {
                return Err(Error::InvalidInput("level must be positive".into()));
            }
            return Ok(Group::Gamma0(n));
        }
        Err(Error::InvalidInput(format!(
            "unknown group '{s}', expected sl2z or gamma0:N"
        )))
    }
}

impl From<Group> for String {
    fn from(g: Group) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for Group {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Maps `z` into the standard fundamental domain of SL₂(ℤ); returns `(γ, γz)`.
pub fn reduce_to_fundamental_domain(z: C64) -> Result<(Matrix, C64)> {
    if !(z.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane(z));
    }
    let mut g = Matrix::IDENTITY;
    let mut w = z;
    for _ in 0..10_000 {
        let n = (w.re + 0.5).floor();
        if n != 0.0 {
            let t = Matrix::new_unchecked(1, -(n as i64), 0, 1);
            g = t.checked_mul(&g)?;
            w.re -= n;
        }
        if w.norm_sqr() < 1.0 - 1e-15 {
            g = Matrix::S.checked_mul(&g)?;
            w = -1.0 / w;
        } else {
            return Ok((g, w));
        }
    }
    Err(Error::InvalidInput("fundamental domain reduction did not terminate".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cusp {
    Infinity,
    Zero,
}

#[derive(Clone, Debug)]
pub struct ParabolicDatum {
    pub cusp: Cusp,
    pub scaling: CMatrix,
    pub scaling_inv: CMatrix,
    pub generator: Matrix,
}

impl ParabolicDatum {
    pub fn infinity() -> Self {
        ParabolicDatum {
            cusp: Cusp::Infinity,
            scaling: CMatrix::identity(),
            scaling_inv: CMatrix::identity(),
            generator: Matrix::T,
        }
    }

    /// Scaling data for ∞ or for the cusp 0 of Γ₀(N).
    pub fn new(group: Group, cusp: Cusp) -> Self {
        match cusp {
            Cusp::Infinity => Self::infinity(),
            Cusp::Zero => {
                let n = group.level();
                let r = (n as f64).sqrt();
                let scaling = CMatrix::real(0.0, -1.0 / r, r, 0.0);
                ParabolicDatum {
                    cusp,
                    scaling,
                    scaling_inv: scaling.inverse(),
                    generator: Matrix::new_unchecked(1, 0, -n, 1),
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct HyperbolicDatum {
    pub generator: Matrix,
    pub xi: f64,
    pub scaling: CMatrix,
    pub scaling_inv: CMatrix,
    /// `(σ(0), σ(∞))`.
    pub fixed_points: (f64, f64),
}

impl HyperbolicDatum {
    pub fn new(g: &Matrix) -> Result<Self> {
        if g.classify() != ElementKind::Hyperbolic || g.det() != 1 {
            return Err(Error::NotHyperbolic(g.to_string()));
        }
        let t = g.trace() as f64;
        let s = t.signum();
        let xi = (t.abs() + (t * t - 4.0).sqrt()) / 2.0;
        let (a, b, c, d) = (g.a as f64, g.b as f64, g.c as f64, g.d as f64);
        let eigvec = |lambda: f64| -> (f64, f64) {
            let u = (b, lambda - a);
            let v = (lambda - d, c);
            let (x, y) = if u.0.hypot(u.1) >= v.0.hypot(v.1) { u } else { v };
            let n = x.hypot(y);
            (x / n, y / n)
        };
        let v1 = eigvec(s * xi);
        let mut v2 = eigvec(s / xi);
        let mut det = v1.0 * v2.1 - v2.0 * v1.1;
        if det < 0.0 {
            v2 = (-v2.0, -v2.1);
            det = -det;
        }
        let r = det.sqrt();
        let scaling = CMatrix::real(v1.0 / r, v2.0 / r, v1.1 / r, v2.1 / r);
        Ok(HyperbolicDatum {
            generator: *g,
            xi,
            scaling,
            scaling_inv: scaling.inverse(),
            fixed_points: (v2.0 / v2.1, v1.0 / v1.1),
        })
    }

    pub fn log_xi(&self) -> f64 {
        self.xi.ln()
    }

    /// Upper edge of the strip on which `A_η f` lives.
    pub fn strip_height(&self) -> f64 {
        std::f64::consts::PI / (2.0 * self.log_xi())
    }
}

/// `(σ, σ⁻¹)` with σ = (1/2iβ)(−z̄₀, z₀; −1, 1) carrying the unit disc onto ℍ
/// and 0 to z₀.
pub fn disc_scaling(z0: C64) -> (CMatrix, CMatrix) {
    let zb = z0.conj();
    let two_i_beta = C64::new(0.0, 2.0 * z0.im);
    let one = C64::new(1.0, 0.0);
    let scaling = CMatrix::new(-zb, z0, -one, one).scale(1.0 / two_i_beta);
    let scaling_inv = CMatrix::new(one, -z0, one, -zb);
    (scaling, scaling_inv)
}

#[derive(Clone, Debug)]
pub struct EllipticDatum {
    pub z0: C64,
    pub generator: Matrix,
    pub order: u32,
    pub zeta: C64,
    pub scaling: CMatrix,
    pub scaling_inv: CMatrix,
}

impl EllipticDatum {
    pub fn new(z0: PointH, group: Group) -> Result<Self> {
        let z0 = z0.z();
        let not_elliptic = || Error::NotEllipticPoint(z0, group.to_string());
        let tol = 1e-10 * (1.0 + z0.norm());
        let mut best: Option<Matrix> = None;
        'search: for c in 0..=12i64 {
            for d in -12..=12i64 {
                for a in -12..=12i64 {
                    if a + d == 0 || (a + d).abs() == 1 {
                        if c == 0 {
                            continue;
                        }
                        let num = a * d - 1;
                        if num % c != 0 {
                            continue;
                        }
                        let g = Matrix::new_unchecked(a, num / c, c, d);
                        if !group.contains(&g) {
                            continue;
                        }
                        let w = match g.act(z0) {
                            Ok(w) => w,
                            Err(_) => continue,
                        };
                        if (w - z0).norm() <= tol {
                            let better = match best {
                                None => true,
                                Some(h) => h.trace() == 0 && g.trace().abs() == 1,
                            };
                            if better {
                                best = Some(g);
                            }
                            if g.trace().abs() == 1 {
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        let mut e0 = best.ok_or_else(not_elliptic)?;
        if e0.trace() == -1 {
            e0 = e0.neg();
        }
        let order: u32 = if e0.trace() == 0 { 2 } else { 3 };
        let zeta = C64::from_polar(1.0, std::f64::consts::PI / order as f64);
        let zb = z0.conj();
        let mut generator = None;
        for p in 1..(4 * order as i64) {
            let cand = e0.pow(p)?;
            if (cand.j(zb) - zeta).norm() < 1e-9 {
                generator = Some(cand);
                break;
            }
        }
        let generator = generator.ok_or_else(not_elliptic)?;
        let (scaling, scaling_inv) = disc_scaling(z0);
        Ok(EllipticDatum {
            z0,
            generator,
            order,
            zeta,
            scaling,
            scaling_inv,
        })
    }

    pub fn beta(&self) -> f64 {
        self.z0.im
    }
}

#[derive(Clone, Debug)]
pub enum FixedPointDatum {
    Parabolic(ParabolicDatum),
    Hyperbolic(HyperbolicDatum),
    Elliptic(EllipticDatum),
}
