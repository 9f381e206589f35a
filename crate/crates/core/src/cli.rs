//! Command-line front end: argument parsing, table assembly and emission.

use crate::cosets::{cosets_hyperbolic, cosets_parabolic};
use crate::error::{Error, Result};
use crate::expansions::{
    default_nodes, elliptic_coeffs_contour_with_nodes, elliptic_coeffs_taylor, hyperbolic_coeffs_with_nodes,
    parabolic_coeffs_with_nodes, ExpansionCoeffs, DEFAULT_HYPERBOLIC_WINDOW, DEFAULT_RADIUS,
};
use crate::forms::{delta_qexp, x11_qexp, QExpansion};
use crate::moebius::{parse_complex, Cusp, EllipticDatum, HyperbolicDatum, Matrix, ParabolicDatum, PointH, C64};
use crate::poincare::{phi_elliptic, PoincareSeries, SeedFunction};
use crate::qforms::{automorph, form_of, ClassList, KatokTheta, ZagierSum};
use crate::quadrature::{elliptic_inner_constant, parabolic_inner_constant, petersson_inner, DEFAULT_ORDER, DEFAULT_Y_CAP};
use crate::secondorder::{build_second_order, PeriodHom, SeedSpec};
use crate::verify::{run_suites, Suite, SECOND_ORDER_BOUND};
use crate::Group;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::ffi::OsString;
use std::path::PathBuf;

pub const DEFAULT_QORDER: usize = 200;

#[derive(Parser, Debug)]
#[command(name = "petersson", version, about = "Expansions and Poincaré series of holomorphic cusp forms")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// sl2z or gamma0:N [default: the form's group, else sl2z]
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Even weight [default: the form's weight, else 12]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub weight: Option<i32>,
    /// Number of q-expansion coefficients
    #[arg(long, global = true, default_value_t = DEFAULT_QORDER)]
    pub qorder: usize,
    /// Truncation bound for coset sums [default depends on the series]
    #[arg(long, global = true)]
    pub coset_bound: Option<u64>,
    /// Gauss–Legendre nodes per panel
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER)]
    pub quad_order: usize,
    /// Height at which the fundamental domain is cut off
    #[arg(long, global = true, default_value_t = DEFAULT_Y_CAP)]
    pub ycap: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parabolic, hyperbolic or elliptic expansion coefficients of a form
    Expand(ExpandArgs),
    /// Evaluate a first- or second-order Poincaré series
    Poincare(PoincareArgs),
    /// Class list, automorphs and theta series for a discriminant
    Qform(QformArgs),
    /// Petersson product of Δ with a Poincaré series against its closed form
    Inner(InnerArgs),
    /// Run named check suites
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Par,
    Hyp,
    Ell,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormName {
    /// Δ on SL₂(ℤ), weight 12
    Delta,
    /// The newform η(z)²η(11z)² on Γ₀(11), weight 2
    X11,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Taylor,
    Contour,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomName {
    /// Periods of f(z)dz
    Plus,
    /// Periods of the conjugate differential
    Minus,
    Zero,
}

#[derive(Args, Debug, Clone)]
pub struct DatumArgs {
    /// Cusp for parabolic data: inf or 0
    #[arg(long, default_value = "inf")]
    pub cusp: String,
    /// Discriminant; the automorph of its principal form is used
    #[arg(long)]
    pub disc: Option<i64>,
    /// Hyperbolic element as a,b;c,d (overrides --disc)
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    /// Elliptic point: i, rho or x+yi
    #[arg(long, default_value = "i", allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = FormName::Delta)]
    pub form: FormName,
    #[command(flatten)]
    pub datum: DatumArgs,
    /// Largest index for par and ell
    #[arg(long, default_value_t = 8)]
    pub mmax: u64,
    /// Half-width of the hyperbolic index window
    #[arg(long, default_value_t = DEFAULT_HYPERBOLIC_WINDOW as u64)]
    pub mwin: u64,
    /// Sampling height [default: 0.8 for par, half the strip for hyp]
    #[arg(long)]
    pub height: Option<f64>,
    /// Contour radius in the disc model
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = Method::Taylor)]
    pub method: Method,
    /// Sample count [default: max(64, 8·index bound)]
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Args, Debug)]
pub struct PoincareArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub order: u8,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub m: i64,
    /// Evaluation point x+yi; repeat for several
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub at: Vec<String>,
    #[command(flatten)]
    pub datum: DatumArgs,
    /// Homomorphism twisting a second-order series
    #[arg(long, value_enum, default_value_t = HomName::Plus)]
    pub hom: HomName,
}

#[derive(Args, Debug)]
pub struct QformArgs {
    #[arg(long, default_value_t = 5)]
    pub disc: i64,
    /// Evaluation point x+yi; repeat for several
    #[arg(long, default_values_t = vec!["i".to_string()], allow_hyphen_values = true)]
    pub at: Vec<String>,
    /// Bound on |a|, |b|, |c| in the class sum
    #[arg(long, default_value_t = 80)]
    pub bound: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerKind {
    Par,
    Ell,
}

#[derive(Args, Debug)]
pub struct InnerArgs {
    #[arg(value_enum)]
    pub kind: InnerKind,
    /// Series index [default: 1 for par, the least admissible for ell]
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long, default_value = "i")]
    pub point: String,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// identities, expansions, inner-products, qform, second-order, invariants or all
    #[arg(default_value = "all")]
    pub suite: String,
}

/// Resolved knobs shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub group: Group,
    pub weight: i32,
    pub qorder: usize,
    pub coset_bound: Option<u64>,
    pub quad_order: usize,
    pub ycap: f64,
    pub format: Format,
}

impl RunConfig {
    fn resolve(c: &CommonArgs, group: Group, weight: i32) -> Result<Self> {
        if c.qorder == 0 || c.quad_order == 0 || c.coset_bound == Some(0) || !(c.ycap > 1.0) {
            return Err(Error::InvalidInput("truncation knobs must be positive (ycap > 1)".into()));
        }
        Ok(RunConfig {
            group,
            weight,
            qorder: c.qorder,
            coset_bound: c.coset_bound,
            quad_order: c.quad_order,
            ycap: c.ycap,
            format: c.format,
        })
    }

    fn meta(&self, t: &mut Table) {
        t.meta("group", self.group);
        t.meta("weight", self.weight);
        t.meta("qorder", self.qorder);
        t.meta("quad_order", self.quad_order);
        t.meta("ycap", self.ycap);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:e}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Num(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Metadata, a header and rows. CSV puts the metadata on `# key=value` lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            ..Default::default()
        }
    }

    fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            s.push_str(&format!("# {k}={v}\n"));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> = self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&json!({ "meta": meta, "rows": rows })).expect("json");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Tolerance(_) | Error::NonFinite(_) => 3,
        _ => 2,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let format = cli.common.format;
    let out = cli.common.out.clone();
    let (table, ok) = match execute(&cli) {
        Ok(x) => x,
        Err(e) => {
            return Outcome {
                code: exit_code(&e),
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let text = table.render(format);
    let code = if ok { 0 } else { 1 };
    match out {
        Some(path) => match std::fs::write(&path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}

/// Builds the table; the flag is false when a verification check failed.
pub fn execute(cli: &Cli) -> Result<(Table, bool)> {
    match &cli.command {
        Command::Expand(a) => cmd_expand(&cli.common, a).map(|t| (t, true)),
        Command::Poincare(a) => cmd_poincare(&cli.common, a).map(|t| (t, true)),
        Command::Qform(a) => cmd_qform(&cli.common, a).map(|t| (t, true)),
        Command::Inner(a) => cmd_inner(&cli.common, a).map(|t| (t, true)),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn parse_group(c: &CommonArgs) -> Result<Option<Group>> {
    c.group.as_deref().map(str::parse).transpose()
}

fn parse_cusp(s: &str) -> Result<Cusp> {
    match s {
        "inf" | "infinity" | "oo" => Ok(Cusp::Infinity),
        "0" | "zero" => Ok(Cusp::Zero),
        _ => Err(Error::InvalidInput(format!("unknown cusp '{s}', expected inf or 0"))),
    }
}

fn parse_point(s: &str) -> Result<C64> {
    let z = parse_complex(s)?;
    PointH::new(z).map(|p| p.z())
}

fn fmt_point(z: C64) -> String {
    if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn load_form(name: FormName, qorder: usize) -> Result<QExpansion> {
    match name {
        FormName::Delta => delta_qexp(qorder),
        FormName::X11 => x11_qexp(qorder),
    }
}

/// The element given by `--matrix`, or the least power of the principal
/// form's automorph that lies in `group`.
fn hyperbolic_element(group: Group, d: &DatumArgs) -> Result<Matrix> {
    if let Some(s) = &d.matrix {
        let g: Matrix = s.parse()?;
        group.check(&g)?;
        HyperbolicDatum::new(&g)?;
        return Ok(g);
    }
    let disc = d.disc.unwrap_or(5);
    let classes = ClassList::new(disc)?;
    let a = automorph(&classes.classes[0].representative)?;
    let mut g = a;
    for _ in 0..64 {
        if group.contains(&g) {
            return Ok(g);
        }
        g = g.checked_mul(&a)?;
    }
    Err(Error::InvalidInput(format!("no small power of {a} lies in {group}")))
}

fn datum_meta(t: &mut Table, kind: Kind, group: Group, d: &DatumArgs) -> Result<()> {
    match kind {
        Kind::Par => t.meta("cusp", &d.cusp),
        Kind::Hyp => t.meta("matrix", hyperbolic_element(group, d)?),
        Kind::Ell => t.meta("point", fmt_point(parse_point(&d.point)?)),
    }
    Ok(())
}

fn coeff_table(meta_kind: &str, coeffs: &ExpansionCoeffs) -> Table {
    let mut t = Table::new(&["tag", "index", "re", "im"]);
    t.meta("command", "expand");
    t.meta("kind", meta_kind);
    for r in coeffs.rows() {
        t.push(vec![r.tag.into(), r.index.into(), r.re.into(), r.im.into()]);
    }
    t
}

pub fn cmd_expand(c: &CommonArgs, a: &ExpandArgs) -> Result<Table> {
    let form = load_form(a.form, c.qorder)?;
    if let Some(g) = parse_group(c)? {
        if g != form.group {
            return Err(Error::InvalidInput(format!("{} lives on {}, not {g}", form.label, form.group)));
        }
    }
    if let Some(k) = c.weight {
        if k != form.weight {
            return Err(Error::InvalidInput(format!("{} has weight {}, not {k}", form.label, form.weight)));
        }
    }
    let cfg = RunConfig::resolve(c, form.group, form.weight)?;
    let k = cfg.weight;
    let f = form.evaluator();
    let (coeffs, sampling) = match a.kind {
        Kind::Par => {
            let datum = ParabolicDatum::new(cfg.group, parse_cusp(&a.datum.cusp)?);
            let y = a.height.unwrap_or(0.8);
            let nodes = a.nodes.unwrap_or_else(|| default_nodes(a.mmax));
            let co = parabolic_coeffs_with_nodes(&f, k, &datum, a.mmax, y, nodes)?;
            (co, format!("height {y}, {nodes} nodes"))
        }
        Kind::Hyp => {
            let g = hyperbolic_element(cfg.group, &a.datum)?;
            let datum = HyperbolicDatum::new(&g)?;
            let y = a.height.unwrap_or(0.5 * datum.strip_height());
            let nodes = a.nodes.unwrap_or_else(|| default_nodes(a.mwin));
            let co = hyperbolic_coeffs_with_nodes(&f, k, &datum, a.mwin, y, nodes)?;
            (co, format!("height {y}, {nodes} nodes"))
        }
        Kind::Ell => {
            let z0 = PointH::new(parse_point(&a.datum.point)?)?;
            let datum = EllipticDatum::new(z0, cfg.group)?;
            let m = u32::try_from(a.mmax).map_err(|_| Error::InvalidInput("--mmax too large".into()))?;
            match a.method {
                Method::Taylor => (elliptic_coeffs_taylor(&form, &datum, m)?, "taylor".to_string()),
                Method::Contour => {
                    let nodes = a.nodes.unwrap_or_else(|| default_nodes(a.mmax));
                    let co = elliptic_coeffs_contour_with_nodes(&f, k, &datum, m, a.radius, nodes)?;
                    (co, format!("contour radius {}, {nodes} nodes", a.radius))
                }
            }
        }
    };
    let mut t = coeff_table(coeffs.kind.tag(), &coeffs);
    t.meta("form", &form.label);
    cfg.meta(&mut t);
    datum_meta(&mut t, a.kind, cfg.group, &a.datum)?;
    t.meta("sampling", sampling);
    Ok(t)
}

fn default_bound(kind: Kind, order: u8, group: Group) -> u64 {
    match (order, kind, group) {
        (2, _, _) => SECOND_ORDER_BOUND,
        (_, Kind::Par, Group::Sl2z) => 40,
        (_, Kind::Par, _) => 150,
        (_, Kind::Hyp, _) => 25,
        (_, Kind::Ell, _) => 30,
    }
}

fn first_order_series(group: Group, k: i32, kind: Kind, m: i64, d: &DatumArgs, bound: u64) -> Result<PoincareSeries> {
    match kind {
        Kind::Par => {
            let datum = ParabolicDatum::new(group, parse_cusp(&d.cusp)?);
            let cos = cosets_parabolic(group, &datum, bound)?;
            PoincareSeries::new(SeedFunction::parabolic(datum, m), k, &cos)
        }
        Kind::Hyp => {
            let g = hyperbolic_element(group, d)?;
            let datum = HyperbolicDatum::new(&g)?;
            let cos = cosets_hyperbolic(group, &datum, bound)?;
            PoincareSeries::new(SeedFunction::hyperbolic(datum, m), k, &cos)
        }
        Kind::Ell => phi_elliptic(group, PointH::new(parse_point(&d.point)?)?, k, m, bound),
    }
}

fn period_hom(name: HomName, group: Group) -> Result<PeriodHom> {
    match (name, group) {
        (HomName::Zero, g) => Ok(PeriodHom::zero(g)),
        (HomName::Plus, Group::Gamma0(11)) => PeriodHom::x11_plus(),
        (HomName::Minus, Group::Gamma0(11)) => PeriodHom::x11_minus(),
        (_, g) => Err(Error::InvalidInput(format!(
            "period homomorphisms are available on gamma0:11 only, not {g}; use --hom zero"
        ))),
    }
}

pub fn cmd_poincare(c: &CommonArgs, a: &PoincareArgs) -> Result<Table> {
    let group = parse_group(c)?.unwrap_or(Group::Sl2z);
    let cfg = RunConfig::resolve(c, group, c.weight.unwrap_or(12))?;
    crate::poincare::Weight::new(cfg.weight)?;
    let bound = cfg.coset_bound.unwrap_or(default_bound(a.kind, a.order, group));
    let half = (bound / 2).max(1);
    let points: Vec<C64> = a.at.iter().map(|s| parse_point(s)).collect::<Result<_>>()?;
    let (full, coarse) = if a.order == 1 {
        (
            first_order_series(group, cfg.weight, a.kind, a.m, &a.datum, bound)?,
            first_order_series(group, cfg.weight, a.kind, a.m, &a.datum, half)?,
        )
    } else {
        let hom = period_hom(a.hom, group)?;
        let seed = match a.kind {
            Kind::Par => SeedSpec::Parabolic(parse_cusp(&a.datum.cusp)?),
            Kind::Hyp => SeedSpec::Hyperbolic(hyperbolic_element(group, &a.datum)?),
            Kind::Ell => SeedSpec::Elliptic(PointH::new(parse_point(&a.datum.point)?)?),
        };
        (
            build_second_order(group, cfg.weight, &seed, a.m, &hom, bound)?,
            build_second_order(group, cfg.weight, &seed, a.m, &hom, half)?,
        )
    };
    let mut t = Table::new(&["point", "re", "im", "last_shell_rel", "halving_rel", "terms"]);
    t.meta("command", "poincare");
    t.meta("kind", format!("{:?}", a.kind).to_lowercase());
    t.meta("order", a.order);
    t.meta("m", a.m);
    cfg.meta(&mut t);
    datum_meta(&mut t, a.kind, group, &a.datum)?;
    if a.order == 2 {
        t.meta("hom", format!("{:?}", a.hom).to_lowercase());
    }
    t.meta("coset_bound", bound);
    t.meta("halving_bound", half);
    for z in points {
        let v = full.eval(z)?;
        let w = coarse.value(z)?;
        let norm = v.value.norm();
        let (shell, halving) = if norm == 0.0 {
            (0.0, 0.0)
        } else {
            (v.last_shell / norm, (v.value - w).norm() / norm)
        };
        if !v.value.re.is_finite() || !v.value.im.is_finite() {
            return Err(Error::NonFinite(z));
        }
        t.push(vec![
            fmt_point(z).into(),
            v.value.re.into(),
            v.value.im.into(),
            shell.into(),
            halving.into(),
            (v.terms as i64).into(),
        ]);
    }
    Ok(t)
}

pub fn cmd_qform(c: &CommonArgs, a: &QformArgs) -> Result<Table> {
    let group = parse_group(c)?.unwrap_or(Group::Sl2z);
    if group != Group::Sl2z {
        return Err(Error::InvalidInput("quadratic-form sums are implemented for sl2z".into()));
    }
    let cfg = RunConfig::resolve(c, group, c.weight.unwrap_or(12))?;
    crate::poincare::Weight::new(cfg.weight)?;
    let bound = cfg.coset_bound.unwrap_or(30);
    let points: Vec<C64> = a.at.iter().map(|s| parse_point(s)).collect::<Result<_>>()?;
    let classes = ClassList::new(a.disc)?;
    let mut t = Table::new(&[
        "class",
        "representative",
        "cycle_length",
        "automorph",
        "u",
        "point",
        "theta_re",
        "theta_im",
        "class_sum_re",
        "class_sum_im",
        "rel_diff",
    ]);
    t.meta("command", "qform");
    t.meta("disc", a.disc);
    t.meta("class_number", classes.class_number());
    cfg.meta(&mut t);
    t.meta("coset_bound", bound);
    t.meta("class_sum_bound", a.bound);
    for (n, cls) in classes.classes.iter().enumerate() {
        let q = cls.representative;
        let g = automorph(&q)?;
        let theta = KatokTheta::new(group, &g, cfg.weight, bound)?;
        let sum = ZagierSum::new(cfg.weight, a.disc, a.bound, Some(&q))?;
        // the class of Q_γ = u·Q, so its sum is u^{−k/2} times the primitive one
        let u = form_of(&g)?.a / q.a;
        let scale = (u as f64).powi(-cfg.weight / 2);
        for &z in &points {
            let th = theta.eval(z)?;
            let zs = sum.eval(z)? * scale;
            t.push(vec![
                (n as i64).into(),
                q.to_string().into(),
                (cls.cycle.len() as i64).into(),
                g.to_string().into(),
                u.into(),
                fmt_point(z).into(),
                th.re.into(),
                th.im.into(),
                zs.re.into(),
                zs.im.into(),
                ((th - zs).norm() / th.norm()).into(),
            ]);
        }
    }
    Ok(t)
}

pub fn cmd_inner(c: &CommonArgs, a: &InnerArgs) -> Result<Table> {
    let group = parse_group(c)?.unwrap_or(Group::Sl2z);
    if group != Group::Sl2z {
        return Err(Error::InvalidInput("inner products are implemented on sl2z".into()));
    }
    if c.weight.is_some_and(|k| k != 12) {
        return Err(Error::InvalidInput("inner products use Δ, weight 12".into()));
    }
    let cfg = RunConfig::resolve(c, group, 12)?;
    let k = cfg.weight;
    let d = delta_qexp(cfg.qorder)?;
    let f = d.evaluator();
    let mut t = Table::new(&["coset_bound", "re", "im", "closed_form_re", "closed_form_im", "rel_err"]);
    t.meta("command", "inner");
    t.meta("kind", format!("{:?}", a.kind).to_lowercase());
    cfg.meta(&mut t);
    let (m, expect, bound, point) = match a.kind {
        InnerKind::Par => {
            let m = a.m.unwrap_or(1);
            if m < 1 || m as usize > d.order() {
                return Err(Error::InvalidInput(format!("need 1 <= m <= qorder, got {m}")));
            }
            let want = parabolic_inner_constant(k, m) * d.coeff(m as usize);
            (m, want, cfg.coset_bound.unwrap_or(20), None)
        }
        InnerKind::Ell => {
            let z0 = PointH::new(parse_point(&a.point)?)?;
            let datum = EllipticDatum::new(z0, group)?;
            let n = datum.order as i64;
            let m = a.m.unwrap_or((k as i64 / 2 + n - 1) / n);
            let l = n * m - (k / 2) as i64;
            if l < 0 {
                return Err(Error::InvalidInput(format!("need Nm - k/2 >= 0, got N={n} m={m}")));
            }
            let cst = elliptic_inner_constant(k, datum.order, m)?;
            let b = elliptic_coeffs_taylor(&d, &datum, l as u32)?.get(l).unwrap_or_default();
            (m, cst * b, cfg.coset_bound.unwrap_or(32), Some(z0))
        }
    };
    t.meta("m", m);
    if let Some(z0) = point {
        t.meta("point", fmt_point(z0.z()));
    }
    let bounds = [(bound / 4).max(1), (bound / 2).max(1), bound];
    t.meta("coset_bounds", format!("{}/{}/{}", bounds[0], bounds[1], bounds[2]));
    for b in bounds {
        let p = match point {
            None => first_order_series(group, k, Kind::Par, m, &default_datum(), b)?,
            Some(z0) => phi_elliptic(group, z0, k, m, b)?,
        };
        let g = p.evaluator();
        let v = petersson_inner(&f, k, &g, k, cfg.ycap, cfg.quad_order)?.value;
        let err = if expect.norm() == 0.0 { v.norm() } else { (v - expect).norm() / expect.norm() };
        t.push(vec![(b as i64).into(), v.re.into(), v.im.into(), expect.re.into(), expect.im.into(), err.into()]);
    }
    Ok(t)
}

fn default_datum() -> DatumArgs {
    DatumArgs {
        cusp: "inf".into(),
        disc: None,
        matrix: None,
        point: "i".into(),
    }
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<(Table, bool)> {
    let suites = Suite::parse_list(&a.suite)?;
    let results = run_suites(&suites);
    let mut t = Table::new(&["suite", "name", "passed", "residual", "tolerance", "detail"]);
    t.meta("command", "verify");
    t.meta("suite", &a.suite);
    let failed = results.iter().filter(|r| !r.passed).count();
    t.meta("checks", results.len());
    t.meta("failed", failed);
    for r in results {
        t.push(vec![
            r.suite.into(),
            r.name.into(),
            r.passed.into(),
            r.residual.into(),
            r.tolerance.into(),
            r.detail.into(),
        ]);
    }
    Ok((t, failed == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &str) -> Outcome {
        run(std::iter::once("petersson").chain(args.split_whitespace()))
    }

    fn data_rows(csv: &str) -> Vec<Vec<String>> {
        csv.lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect()
    }

    #[test]
    fn expand_par_gives_tau() {
        let o = cli("expand par --form delta --mmax 5");
        assert_eq!(o.code, 0, "{}", o.stderr);
        let rows = data_rows(&o.stdout);
        let tau = [1.0, -24.0, 252.0, -1472.0, 4830.0];
        assert_eq!(rows.len(), 5);
        for (r, t) in rows.iter().zip(tau) {
            let v: f64 = r[2].parse().unwrap();
            assert!((v - t).abs() <= 1e-9 * t.abs(), "{r:?}");
        }
        assert!(o.stdout.starts_with("# command=expand\n"));
        assert!(o.stdout.contains("\n# sampling=height 0.8, 64 nodes\n"));
    }

    #[test]
    fn expand_ell_and_hyp_shapes() {
        let o = cli("expand ell --form delta --point i --mmax 8");
        assert_eq!(o.code, 0, "{}", o.stderr);
        let rows = data_rows(&o.stdout);
        assert_eq!(rows.len(), 9);
        let v: f64 = rows[8][2].parse().unwrap();
        assert!((v - 37.787).abs() < 5e-4);
        let o = cli("expand hyp --form delta --disc 5 --mwin 4");
        assert_eq!(o.code, 0, "{}", o.stderr);
        let idx: Vec<i64> = data_rows(&o.stdout).iter().map(|r| r[1].parse().unwrap()).collect();
        assert_eq!(idx, (-4..=4).collect::<Vec<_>>());
    }

    #[test]
    fn bad_input_exits_with_two() {
        assert_eq!(cli("expand ell --point 0.3+0.9i").code, 2);
        assert_eq!(cli("expand par --group gamma0:11").code, 2);
        assert_eq!(cli("poincare par --at i --weight 5").code, 2);
        assert_eq!(cli("poincare par --order 3 --at i").code, 2);
        assert_eq!(cli("poincare par --at 0.1-0.5i").code, 2);
        assert_eq!(cli("poincare par --order 2 --at i").code, 2);
        assert_eq!(cli("verify nonsense").code, 2);
        assert_eq!(cli("frobnicate").code, 2);
        assert_eq!(cli("--help").code, 0);
    }

    #[test]
    fn poincare_smoke_and_determinism() {
        let a = cli("poincare par --order 1 --m 1 --at i");
        assert_eq!(a.code, 0, "{}", a.stderr);
        let rows = data_rows(&a.stdout);
        let v: f64 = rows[0][1].parse().unwrap();
        let shell: f64 = rows[0][3].parse().unwrap();
        let halving: f64 = rows[0][4].parse().unwrap();
        assert!(v.is_finite() && v != 0.0);
        assert!(shell < 1e-8 && halving < 1e-8, "{rows:?}");
        let b = cli("poincare par --order 1 --m 1 --at i");
        assert_eq!(a, b);
    }

    #[test]
    fn zero_homomorphism_rows_are_exact_zeros() {
        let o = cli("poincare par --order 2 --group gamma0:11 --weight 4 --hom zero --coset-bound 40 --at 0.2+1.5i --at -0.1+0.4i");
        assert_eq!(o.code, 0, "{}", o.stderr);
        for r in data_rows(&o.stdout) {
            assert_eq!(r[1].parse::<f64>().unwrap(), 0.0);
            assert_eq!(r[2].parse::<f64>().unwrap(), 0.0);
        }
    }

    #[test]
    fn json_tables_are_well_formed() {
        let o = cli("qform --disc 5 --at i --at 0.3+0.9i --format json");
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["meta"]["class_number"], "1");
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 2);
        for r in rows {
            assert!(r["rel_diff"].as_f64().unwrap() < 1e-6);
            assert_eq!(r["representative"], "(-1,1,1)");
        }
        for d in ["8", "13", "12"] {
            let o = cli(&format!("qform --disc {d} --at 0.2+1.1i"));
            assert_eq!(o.code, 0, "{}", o.stderr);
            for r in data_rows(&o.stdout) {
                assert!(r.last().unwrap().parse::<f64>().unwrap() < 1e-6, "D={d}: {r:?}");
            }
        }
    }

    #[test]
    fn csv_quotes_text_with_commas() {
        let mut t = Table::new(&["a", "b"]);
        t.meta("k", "v");
        t.push(vec!["(1,2,3)".into(), 1.5.into()]);
        assert_eq!(t.to_csv(), "# k=v\na,b\n\"(1,2,3)\",1.5e0\n");
    }

    #[test]
    fn out_flag_writes_file() {
        let dir = std::env::temp_dir().join(format!("petersson-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        let o = run(["petersson", "expand", "par", "--mmax", "2", "--out", path.to_str().unwrap()]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.is_empty());
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(data_rows(&text).len(), 2);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
