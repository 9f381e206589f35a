//! Truncated coset enumeration for the stabilizer of a cusp, of a geodesic
//! and of an elliptic point.

use crate::error::{Error, Result};
use crate::moebius::{Cusp, EllipticDatum, Group, HyperbolicDatum, Matrix, ParabolicDatum, C64};
use std::collections::{BTreeMap, HashSet};

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StabilizerKind {
    Parabolic,
    Hyperbolic,
    Elliptic,
}

impl std::fmt::Display for StabilizerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StabilizerKind::Parabolic => "parabolic",
            StabilizerKind::Hyperbolic => "hyperbolic",
            StabilizerKind::Elliptic => "elliptic",
        };
        f.write_str(s)
    }
}

/// How a representative contributes to a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orbit {
    /// The matrix itself is one coset.
    Single,
    /// The matrix stands for the cosets of `γ Tⁿ` for every integer `n`.
    /// Parabolic lists store one entry per double coset `Γ_𝔞 \ Γ / ⟨T⟩`.
    Translates,
}

#[derive(Clone, Debug)]
pub struct CosetRep {
    pub matrix: Matrix,
    pub orbit: Orbit,
    /// Truncation shell the coset was found in (|c| for parabolic lists,
    /// smallest max-entry within the ball otherwise).
    pub shell: u64,
}

#[derive(Clone, Debug)]
pub struct CosetList {
    pub kind: StabilizerKind,
    pub group: Group,
    pub bound: u64,
    /// Half-width of the window of translates summed for each
    /// [`Orbit::Translates`] entry.
    pub translate_window: u64,
    pub reps: Vec<CosetRep>,
}

pub const DEFAULT_TRANSLATE_WINDOW: u64 = 40;

impl CosetList {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn matrices(&self) -> impl Iterator<Item = &Matrix> {
        self.reps.iter().map(|r| &r.matrix)
    }

    pub fn with_translate_window(mut self, w: u64) -> Self {
        self.translate_window = w;
        self
    }
}

/// The pair `(u, v)` that determines the double coset of `γ` for the cusp:
/// the bottom row `(c, d)` at ∞ and the top row `(a, b)` at 0, up to sign.
pub fn parabolic_row(cusp: Cusp, g: &Matrix) -> (i64, i64) {
    match cusp {
        Cusp::Infinity => (g.c, g.d),
        Cusp::Zero => (g.a, g.b),
    }
}

/// One representative per double coset `Γ_𝔞 \ Γ / ⟨T⟩` with `|u| ≤ u_max`.
/// Each entry is summed over its translates by the series engine.
pub fn cosets_parabolic(group: Group, datum: &ParabolicDatum, u_max: u64) -> Result<CosetList> {
    let n = group.level();
    let mut reps = Vec::new();
    let u_max = u_max as i64;
    match datum.cusp {
        Cusp::Infinity => {
            reps.push(CosetRep {
                matrix: Matrix::IDENTITY,
                orbit: Orbit::Single,
                shell: 0,
            });
            for c in 1..=u_max {
                if c % n != 0 {
                    continue;
                }
                for d in 0..c {
                    let (g, x, y) = ext_gcd(d, c);
                    if g != 1 {
                        continue;
                    }
                    // x d + y c = 1
                    let m = Matrix::new(x, -y, c, d)?;
                    reps.push(CosetRep {
                        matrix: m,
                        orbit: Orbit::Translates,
                        shell: c as u64,
                    });
                }
            }
        }
        Cusp::Zero => {
            for a in 0..=u_max {
                if gcd(a, n) != 1 {
                    continue;
                }
                if a == 0 {
                    // only possible when n = 1: top row (0, 1)
                    reps.push(CosetRep {
                        matrix: Matrix::S.neg(),
                        orbit: Orbit::Single,
                        shell: 0,
                    });
                    continue;
                }
                for b in 0..a {
                    if gcd(a, b) != 1 {
                        continue;
                    }
                    // a d - b (n c') = 1
                    let (g, x, y) = ext_gcd(a, b * n);
                    if g != 1 {
                        continue;
                    }
                    let m = Matrix::new(a, b, -y * n, x)?;
                    reps.push(CosetRep {
                        matrix: m,
                        orbit: Orbit::Translates,
                        shell: a as u64,
                    });
                }
            }
        }
    }
    Ok(CosetList {
        kind: StabilizerKind::Parabolic,
        group,
        bound: u_max as u64,
        translate_window: DEFAULT_TRANSLATE_WINDOW,
        reps,
    })
}

/// All group elements with max |entry| ≤ `e`, one per ± pair, sign-normalized.
pub fn group_ball(group: Group, e: u64) -> Vec<Matrix> {
    let e = e as i64;
    let n = group.level();
    let mut out = Vec::new();
    for b in -e..=e {
        out.push(Matrix::new_unchecked(1, b, 0, 1));
    }
    for c in 1..=e {
        if c % n != 0 {
            continue;
        }
        for d in -e..=e {
            let (g, x, y) = ext_gcd(d, c);
            if g != 1 {
                continue;
            }
            let (a0, b0) = (x, -y);
            // a = a0 + t c, b = b0 + t d, both within [-e, e]
            let mut lo = ((-e - a0) as f64 / c as f64).ceil() as i64;
            let mut hi = ((e - a0) as f64 / c as f64).floor() as i64;
            if d != 0 {
                let (p, q) = (
                    (-e - b0) as f64 / d as f64,
                    (e - b0) as f64 / d as f64,
                );
                lo = lo.max(p.min(q).ceil() as i64);
                hi = hi.min(p.max(q).floor() as i64);
            } else if b0.abs() > e {
                continue;
            }
            for t in lo..=hi {
                let m = Matrix::new_unchecked(a0 + t * c, b0 + t * d, c, d);
                if m.max_entry() as i64 <= e {
                    out.push(m.sign_normalized());
                }
            }
        }
    }
    out
}

/// Canonical representative of `Γ_η γ`.
pub fn canonical_hyperbolic(datum: &HyperbolicDatum, base: C64, g: &Matrix) -> Result<Matrix> {
    let p = g.act(base)?;
    let w = datum.scaling_inv.act(p)?;
    let l = w.norm().ln() / (2.0 * datum.log_xi());
    let n0 = -(l.floor() as i64);
    let mut best: Option<Matrix> = None;
    for n in n0 - 1..=n0 + 1 {
        let scaled = l + n as f64;
        if !(-1e-9..1.0 + 1e-9).contains(&scaled) {
            continue;
        }
        let cand = datum.generator.pow(n)?.checked_mul(g)?.sign_normalized();
        best = Some(match best {
            Some(b) if b <= cand => b,
            _ => cand,
        });
    }
    best.ok_or_else(|| Error::InvalidInput("hyperbolic canonicalization failed".into()))
}

/// Canonical representative of `Γ_{z₀} γ`.
pub fn canonical_elliptic(datum: &EllipticDatum, g: &Matrix) -> Result<Matrix> {
    let mut best = g.sign_normalized();
    let mut cur = *g;
    for _ in 1..datum.order {
        cur = datum.generator.checked_mul(&cur)?;
        best = best.min(cur.sign_normalized());
    }
    Ok(best)
}

fn collect_ball(
    group: Group,
    e: u64,
    canon: impl Fn(&Matrix) -> Result<Matrix>,
) -> Result<Vec<CosetRep>> {
    let mut shells: BTreeMap<Matrix, u64> = BTreeMap::new();
    for m in group_ball(group, e) {
        let key = canon(&m)?;
        let s = m.max_entry();
        shells
            .entry(key)
            .and_modify(|v| *v = (*v).min(s))
            .or_insert(s);
    }
    let mut reps: Vec<CosetRep> = shells
        .into_iter()
        .map(|(matrix, shell)| CosetRep {
            matrix,
            orbit: Orbit::Single,
            shell,
        })
        .collect();
    reps.sort_by(|x, y| {
        (x.shell, x.matrix.max_entry(), x.matrix).cmp(&(y.shell, y.matrix.max_entry(), y.matrix))
    });
    Ok(reps)
}

pub fn cosets_hyperbolic(group: Group, datum: &HyperbolicDatum, entry_max: u64) -> Result<CosetList> {
    let base = datum.scaling.act(C64::new(0.0, 1.0))?;
    cosets_hyperbolic_with_base(group, datum, entry_max, base)
}

pub fn cosets_hyperbolic_with_base(
    group: Group,
    datum: &HyperbolicDatum,
    entry_max: u64,
    base: C64,
) -> Result<CosetList> {
    group.check(&datum.generator)?;
    let reps = collect_ball(group, entry_max, |m| canonical_hyperbolic(datum, base, m))?;
    Ok(CosetList {
        kind: StabilizerKind::Hyperbolic,
        group,
        bound: entry_max,
        translate_window: 0,
        reps,
    })
}

pub fn cosets_elliptic(group: Group, datum: &EllipticDatum, entry_max: u64) -> Result<CosetList> {
    group.check(&datum.generator)?;
    let reps = collect_ball(group, entry_max, |m| canonical_elliptic(datum, m))?;
    Ok(CosetList {
        kind: StabilizerKind::Elliptic,
        group,
        bound: entry_max,
        translate_window: 0,
        reps,
    })
}

/// Checks that no two representatives share a coset. Parabolic lists are
/// compared by double coset, elliptic lists exactly, hyperbolic lists by
/// canonical form.
pub fn reps_are_distinct(list: &CosetList, datum: &crate::moebius::FixedPointDatum) -> Result<bool> {
    use crate::moebius::FixedPointDatum as F;
    match datum {
        F::Parabolic(p) => {
            let mut seen = HashSet::new();
            for r in &list.reps {
                let (u, v) = parabolic_row(p.cusp, &r.matrix);
                let key = if u == 0 { (0, 1) } else { (u.abs(), (v * u.signum()).rem_euclid(u.abs())) };
                if !seen.insert(key) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        F::Elliptic(e) => {
            let stab: Vec<Matrix> = (0..2 * e.order as i64)
                .map(|i| e.generator.pow(i))
                .collect::<Result<_>>()?;
            for (i, g) in list.reps.iter().enumerate() {
                for h in &list.reps[i + 1..] {
                    let q = g.matrix.checked_mul(&h.matrix.inverse())?;
                    if stab.contains(&q) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        F::Hyperbolic(_) => {
            let set: HashSet<Matrix> = list.reps.iter().map(|r| r.matrix).collect();
            Ok(set.len() == list.reps.len())
        }
    }
}
