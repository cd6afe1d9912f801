//! Command-line front end: dataset lookup, check reports and exit codes.
//!
//! Exit code 0 when every check passes, 1 when a check fails, 2 on data errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num::rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::C64;
use crate::full_field::{
    build_diagonal_ffa, check_s_invariance, check_t_invariance, single_valuedness_check, BasisChoice, DKey,
    FullFieldAlgebraSpec,
};
use crate::fusion::{validate_fusion_ring, verlinde_fusion_from_s, Real};
use crate::io::constexpr::{parse_const, parse_real};
use crate::io::format::parse_character_file;
use crate::io::format::parse_category_file;
use crate::modular::{check_s_squared, check_salpha_betas, check_symmetry, check_vacuum_column, s_matrix};
use crate::qseries::{
    a_b_mismatches, b_roundtrip_residual, compute_a_coeffs, compute_b_coeffs, eval_qseries, free_fermion_characters,
    load_characters, partition_function, s_transform_residual, t_termwise_defects, t_transform_residual, QSeries,
};
use crate::symbols::{hexagon_check, pentagon_check, triv_f_coef_check, CategoryData, FData, SymbolData};

/// Environment variable holding a `:`-separated list of dataset directories.
pub const DATA_PATH_ENV: &str = "FULLFIELD_DATA_PATH";

pub const BUNDLED: &[(&str, &str)] = &[
    ("trivial", include_str!("../data/trivial.json")),
    ("ising", include_str!("../data/ising.json")),
    ("fibonacci", include_str!("../data/fibonacci.json")),
];

pub const BUNDLED_CHARS: &[(&str, &str)] = &[("fibonacci", include_str!("../data/fibonacci.chars.json"))];

#[derive(Parser, Debug)]
#[command(name = "fullfield", version, about = "Verify fusion data, S-matrices and genus-one modular invariance")]
pub struct Cli {
    /// Emit a JSON report instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Override the tolerance of every check
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Args, Debug)]
pub struct Dataset {
    /// Bundled name (trivial, ising, fibonacci), a name on the data path, or a file
    pub category: String,
}

#[derive(Args, Debug)]
pub struct CharOpts {
    /// Character file; defaults to built-in or bundled characters
    #[arg(long)]
    pub chars: Option<PathBuf>,
    /// Number of terms per character
    #[arg(long, default_value_t = 400)]
    pub order: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fusion rules, pentagon, hexagon and normalization
    Validate(Dataset),
    /// One-point S-matrix
    Smatrix {
        #[command(flatten)]
        data: Dataset,
        #[arg(long)]
        insertion: Option<String>,
    },
    /// S alpha = beta S for every middle label
    CheckSalphaBetas(Dataset),
    /// Symmetry of S under the dual frame, for every insertion
    CheckSymmetry(Dataset),
    /// Genus-one criteria for a full field algebra
    CheckModularInvariance {
        #[command(flatten)]
        data: Dataset,
        #[arg(long, conflicts_with = "d")]
        diagonal: bool,
        /// Sector and coefficient file
        #[arg(long)]
        d: Option<PathBuf>,
    },
    /// c^L = c^R mod 24
    CheckT {
        #[arg(long)]
        cl: String,
        #[arg(long)]
        cr: String,
    },
    /// Derivation coefficients A_j and B_j
    Coeffs {
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Leading character terms and offset consistency
    Characters {
        #[command(flatten)]
        data: Dataset,
        #[command(flatten)]
        chars: CharOpts,
    },
    /// Character S and T transform residuals
    TransformCheck {
        #[command(flatten)]
        data: Dataset,
        #[command(flatten)]
        chars: CharOpts,
        #[arg(long, default_value = "i")]
        tau: String,
    },
    /// Diagonal torus partition function
    Partition {
        #[command(flatten)]
        data: Dataset,
        #[command(flatten)]
        chars: CharOpts,
        #[arg(long, default_value = "i")]
        tau: String,
    },
}

/// One line of a report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub check_id: String,
    pub paper_tag: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    /// free-form output such as matrices or coefficient lists
    pub info: Vec<String>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report { command: command.into(), ..Default::default() }
    }

    fn push(&mut self, id: impl Into<String>, tag: &str, residual: f64, tol: f64) {
        let pass = residual.is_finite() && residual < tol;
        self.checks.push(Check { check_id: id.into(), paper_tag: tag.into(), residual, tolerance: tol, pass });
    }

    /// A check whose residual is exact: passes only at zero.
    fn push_exact(&mut self, id: impl Into<String>, tag: &str, residual: f64) {
        self.checks.push(Check { check_id: id.into(), paper_tag: tag.into(), residual, tolerance: 0.0, pass: residual == 0.0 });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for l in &self.info {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.checks {
            out.push_str(&format!(
                "{}: {:.1e} (tol {:.1e}) {}\n",
                c.check_id,
                c.residual,
                c.tolerance,
                if c.pass { "ok" } else { "FAIL" }
            ));
        }
        out
    }
}

fn tol(cli_tol: Option<f64>, default: f64) -> f64 {
    cli_tol.unwrap_or(default)
}

/// Resolve a dataset argument to file contents: an existing path, then
/// `<name>.json` on the data path, then the bundled sets.
pub fn load_dataset_text(name: &str) -> Result<String> {
    let p = Path::new(name);
    if p.is_file() {
        return Ok(std::fs::read_to_string(p)?);
    }
    if let Some(found) = search_data_path(&format!("{}.json", name)) {
        return Ok(std::fs::read_to_string(found)?);
    }
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| Error::Format(format!("no dataset named '{}'", name)))
}

fn search_data_path(file: &str) -> Option<PathBuf> {
    let dirs = std::env::var(DATA_PATH_ENV).ok()?;
    dirs.split(':').filter(|d| !d.is_empty()).map(|d| Path::new(d).join(file)).find(|p| p.is_file())
}

pub fn load_category(name: &str) -> Result<CategoryData> {
    parse_category_file(load_dataset_text(name)?.as_bytes())
}

/// Characters for a category, ordered by label id.
pub fn load_category_characters(name: &str, cat: &CategoryData, file: Option<&Path>, order: usize) -> Result<Vec<QSeries>> {
    let raw: Vec<(String, QSeries)> = if let Some(f) = file {
        parse_character_file(&std::fs::read(f)?)?
    } else if let Some(f) = search_data_path(&format!("{}.chars.json", name)) {
        parse_character_file(&std::fs::read(f)?)?
    } else if cat.name == "ising" {
        free_fermion_characters(order)
    } else if cat.name == "trivial" {
        {
        // χ = 1 exactly; pad with zeros so the truncation is explicit
        let mut c = vec![num::Zero::zero(); order.max(1)];
        c[0] = num::One::one();
        vec![("e".to_string(), QSeries::new(Rational64::from_integer(0), c))]
    }
    } else if let Some((_, t)) = BUNDLED_CHARS.iter().find(|(n, _)| *n == cat.name) {
        parse_character_file(t.as_bytes())?
    } else {
        return Err(Error::Incomplete(format!("characters for '{}'", name)));
    };
    let chars = load_characters(&cat.ring, &raw)?;
    Ok(chars.into_iter().map(|s| s.truncate(order)).collect())
}

/// Parse `a+bi`, `bi`, `a` or `i`-style complex literals such as `0.3+0.8i`.
pub fn parse_tau(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse { col: 0, msg: format!("cannot read '{}' as a complex number", s) };
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not an exponent sign or the leading sign
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
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

/// Sector/coefficient file for `check-modular-invariance --d`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DFile {
    /// `[left label, right label]` per sector
    pub sectors: Vec<[String; 2]>,
    pub entries: Vec<DEntry>,
    #[serde(default = "canonical")]
    pub left_basis: String,
    #[serde(default = "dual")]
    pub right_basis: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DEntry {
    /// sector indices `[l, m, n]`
    pub sectors: [usize; 3],
    /// 1-based multiplicity indices `[i, j]`
    #[serde(default)]
    pub mult: Option<[usize; 2]>,
    pub value: String,
}

fn canonical() -> String {
    "canonical".into()
}

fn dual() -> String {
    "dual".into()
}

fn basis_choice(s: &str) -> Result<BasisChoice> {
    match s {
        "canonical" => Ok(BasisChoice::Canonical),
        "dual" => Ok(BasisChoice::Dual),
        o => Err(Error::Format(format!("unknown basis '{}'", o))),
    }
}

pub fn parse_d_file(bytes: &[u8], cat: &CategoryData) -> Result<FullFieldAlgebraSpec> {
    let f: DFile = serde_json::from_slice(bytes)?;
    let mut sectors = Vec::new();
    for [l, r] in &f.sectors {
        sectors.push((cat.ring.label(l)?, cat.ring.label(r)?));
    }
    let mut d = BTreeMap::new();
    for e in &f.entries {
        if e.sectors.iter().any(|&s| s >= sectors.len()) {
            return Err(Error::Format(format!("sector index out of range in {:?}", e.sectors)));
        }
        let [i, j] = e.mult.unwrap_or([1, 1]);
        if i == 0 || j == 0 {
            return Err(Error::Format("multiplicity indices start at 1".into()));
        }
        let [l, m, n] = e.sectors;
        d.insert(DKey { l, m, n, i: i - 1, j: j - 1 }, parse_const(&e.value)?.c());
    }
    Ok(FullFieldAlgebraSpec {
        sectors,
        d,
        left_basis: basis_choice(&f.left_basis)?,
        right_basis: basis_choice(&f.right_basis)?,
    })
}

fn fmt_c(z: C64) -> String {
    format!("{:+.12}{:+.12}i", z.re, z.im)
}

fn validate(cat: &CategoryData, t: Option<f64>, r: &mut Report) -> Result<()> {
    let v = validate_fusion_ring(&cat.ring);
    for x in &v.violations {
        r.info.push(format!("fusion ring: {}", x));
    }
    r.push_exact("fusion-ring", "fusion-rules", v.violations.len() as f64);
    let fd = FData::new(cat)?;
    r.push("pentagon", "pentagon", pentagon_check(cat)?, tol(t, 1e-12));
    r.push("hexagon", "hexagon", hexagon_check(cat)?, tol(t, 1e-12));
    let (exact, resid) = triv_f_coef_check(cat, &fd);
    match exact {
        Some(ok) => r.push_exact("normalization", "trivial-f-coefficient", if ok { 0.0 } else { resid.max(f64::MIN_POSITIVE) }),
        None => r.push("normalization", "trivial-f-coefficient", resid, tol(t, 1e-12)),
    }
    Ok(())
}

fn run_inner(cli: &Cli) -> Result<Report> {
    let t = cli.tol;
    let mut rep;
    match &cli.cmd {
        Command::Validate(d) => {
            rep = Report::new("validate");
            let cat = load_category(&d.category)?;
            validate(&cat, t, &mut rep)?;
        }
        Command::Smatrix { data, insertion } => {
            rep = Report::new("smatrix");
            let sd = SymbolData::new(load_category(&data.category)?)?;
            let a3 = match insertion {
                Some(l) => sd.ring().label(l)?,
                None => sd.e(),
            };
            let s = s_matrix(&sd, a3)?;
            let names: Vec<String> = s
                .basis
                .iter()
                .map(|b| if b.mult == 0 { sd.ring().name(b.channel).to_string() } else { format!("{}#{}", sd.ring().name(b.channel), b.mult + 1) })
                .collect();
            rep.info.push(format!("basis: {}", names.join(" ")));
            for i in 0..s.entries.nrows() {
                let row: Vec<String> = (0..s.entries.ncols()).map(|j| fmt_c(s.entries[(i, j)])).collect();
                rep.info.push(row.join("  "));
            }
            if a3 == sd.e() {
                rep.push("s-squared", "s-squared-charge-conjugation", check_s_squared(&sd)?, tol(t, 1e-9));
                rep.push("vacuum-column", "vacuum-column", check_vacuum_column(&sd)?, tol(t, 1e-9));
                let rounding = match verlinde_fusion_from_s(&s.entries, tol(t, 1e-9)) {
                    Ok((n, res)) => {
                        let k = sd.ring().rank();
                        let same = (0..k * k * k).all(|x| n[x] == sd.ring().n(x / (k * k), (x / k) % k, x % k));
                        if same { res } else { f64::INFINITY }
                    }
                    Err(Error::NotFusionCompatible(x)) => x,
                    Err(e) => return Err(e),
                };
                rep.push("verlinde", "verlinde-round-trip", rounding, tol(t, 1e-9));
            }
        }
        Command::CheckSalphaBetas(d) => {
            rep = Report::new("check-salpha-betas");
            let sd = SymbolData::new(load_category(&d.category)?)?;
            for a2 in 0..sd.ring().rank() {
                let res = check_salpha_betas(&sd, a2)?;
                rep.push(format!("s-alpha-beta[{}]", sd.ring().name(a2)), "s-alpha-equals-beta-s", res, tol(t, 1e-10));
            }
        }
        Command::CheckSymmetry(d) => {
            rep = Report::new("check-symmetry");
            let sd = SymbolData::new(load_category(&d.category)?)?;
            for a3 in 0..sd.ring().rank() {
                let res = check_symmetry(&sd, a3)?;
                rep.push(format!("s-symmetry[{}]", sd.ring().name(a3)), "s-symmetry", res, tol(t, 1e-10));
            }
        }
        Command::CheckModularInvariance { data, diagonal, d } => {
            rep = Report::new("check-modular-invariance");
            let sd = SymbolData::new(load_category(&data.category)?)?;
            let ffa = match (diagonal, d) {
                (_, Some(path)) => parse_d_file(&std::fs::read(path)?, &sd.cat)?,
                _ => build_diagonal_ffa(&sd),
            };
            rep.push("s-invariance", "s-modular-invariance", check_s_invariance(&ffa, &sd, &sd)?, tol(t, 1e-10));
            let c = sd.ring().central_charge;
            let tc = check_t_invariance(c, c);
            rep.push_exact("t-invariance", "central-charge-mod-24", tc.defect.f64());
            let bad = single_valuedness_check(&ffa, &sd, &sd);
            for n in &bad {
                let (a, b) = ffa.sectors[*n];
                rep.info.push(format!("sector {} ({}, {}) has non-integer spin", n, sd.ring().name(a), sd.ring().name(b)));
            }
            rep.push_exact("single-valuedness", "integer-spin", bad.len() as f64);
        }
        Command::CheckT { cl, cr } => {
            rep = Report::new("check-t");
            let tc = check_t_invariance(parse_real(cl)?, parse_real(cr)?);
            rep.info.push(format!("defect: {}", tc.defect));
            match tc.defect {
                Real::Exact(_) => rep.push_exact("t-invariance", "central-charge-mod-24", tc.defect.f64()),
                Real::Approx(x) => rep.push("t-invariance", "central-charge-mod-24", x.min(24.0 - x), tol(t, 1e-9)),
            }
        }
        Command::Coeffs { order } => {
            rep = Report::new("coeffs");
            if *order == 0 {
                return Err(Error::Domain("order must be at least 1".into()));
            }
            let b = compute_b_coeffs(*order);
            let a = compute_a_coeffs(*order);
            for (j, (bj, aj)) in b.iter().zip(&a).enumerate() {
                rep.info.push(format!("B_{} = {}    A_{} = {}", j + 1, bj, j + 1, fmt_c(aj.eval())));
            }
            rep.push_exact("a-equals-scaled-b", "a-b-relation", a_b_mismatches(&a, &b).len() as f64);
            let rt = b_roundtrip_residual(order + 1).iter().filter(|x| !num::Zero::is_zero(*x)).count();
            rep.push_exact("exp-roundtrip", "log-one-plus-y", rt as f64);
        }
        Command::Characters { data, chars } => {
            rep = Report::new("characters");
            let cat = load_category(&data.category)?;
            let ch = load_category_characters(&data.category, &cat, chars.chars.as_deref(), chars.order)?;
            for (a, s) in ch.iter().enumerate() {
                let lead: Vec<String> = s.coeffs.iter().take(8).map(|x| x.to_string()).collect();
                rep.info.push(format!("{}: q^({}) [{} ...] ({} terms)", cat.ring.name(a), s.offset, lead.join(", "), s.trunc));
            }
            rep.push_exact("offsets", "weight-offset", 0.0);
        }
        Command::TransformCheck { data, chars, tau } => {
            rep = Report::new("transform-check");
            let tau = parse_tau(tau)?;
            let cat = load_category(&data.category)?;
            let ch = load_category_characters(&data.category, &cat, chars.chars.as_deref(), chars.order)?;
            let ring = cat.ring.clone();
            let sd = SymbolData::new(cat)?;
            let s = s_matrix(&sd, sd.e())?;
            rep.push("s-transform", "character-s-transform", s_transform_residual(&ch, &s.entries, tau)?, tol(t, 1e-8));
            rep.push("t-transform", "character-t-transform", t_transform_residual(&ch, &ring, tau)?, tol(t, 1e-12));
            let defects = t_termwise_defects(&ch, &ring)?;
            let worst = defects.iter().map(|d| num::ToPrimitive::to_f64(d).unwrap_or(f64::NAN)).fold(0.0, f64::max);
            rep.push_exact("t-termwise", "character-t-transform", worst);
            let tail = ch.iter().map(|s| eval_qseries(s, tau).map(|e| e.tail)).collect::<Result<Vec<_>>>()?;
            rep.info.push(format!("tail bound at tau: {:.1e}", tail.iter().cloned().fold(0.0, f64::max)));
        }
        Command::Partition { data, chars, tau } => {
            rep = Report::new("partition");
            let tau = parse_tau(tau)?;
            let cat = load_category(&data.category)?;
            let ch = load_category_characters(&data.category, &cat, chars.chars.as_deref(), chars.order)?;
            let sd = SymbolData::new(cat)?;
            let ffa = build_diagonal_ffa(&sd);
            let p = partition_function(&ffa, &ch, &ch, tau)?;
            rep.info.push(format!("Z = {}", fmt_c(p.z)));
            rep.push("z-s-invariance", "partition-s", p.s_residual, tol(t, 1e-8));
            rep.push("z-t-invariance", "partition-t", p.t_residual, tol(t, 1e-12));
            rep.push_exact("z-t-termwise", "partition-t", if p.t_termwise_exact { 0.0 } else { 1.0 });
        }
    }
    rep.sort();
    Ok(rep)
}

/// Run a parsed command line; returns the exit code and the printed output.
pub fn run(cli: &Cli) -> (i32, String) {
    match run_inner(cli) {
        Ok(rep) => {
            let out = if cli.json { serde_json::to_string_pretty(&rep).expect("report serializes") + "\n" } else { rep.text() };
            (if rep.pass() { 0 } else { 1 }, out)
        }
        Err(e) => {
            let out = if cli.json { format!("{{\"error\": {}}}\n", serde_json::to_string(&e.to_string()).unwrap()) } else { format!("error: {}\n", e) };
            (2, out)
        }
    }
}

/// Parse `argv` (including the program name) and run.
pub fn run_command<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            (code, e.to_string())
        }
    }
}
