//! JSON category files and character files.
//!
//! A category file is a JSON object with one F or R entry per line. Numeric
//! constants are strings in the constant-expression grammar of
//! [`crate::io::constexpr`]; multiplicity indices are 1-based and default to 1.

use std::collections::BTreeMap;

use num::rational::{BigRational, Rational64};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::FusionRing;
use crate::io::constexpr::{parse_const, parse_rational, parse_real};
use crate::qseries::QSeries;
use crate::symbols::{CategoryData, FKey, RKey, Sigma23Convention};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabelEntry {
    pub name: String,
    pub dual: String,
    pub h: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FEntry {
    /// `[a1, a2, a3, a4, M, N]`
    pub labels: [String; 6],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<[usize; 4]>,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct REntry {
    /// `[y, x, z]` for `R^{yx}_z`
    pub labels: [String; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<[usize; 2]>,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SigmaEntry {
    /// source space `[a1, a2, a3]`
    pub space: [String; 3],
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Conventions {
    #[serde(default = "default_sigma23")]
    pub sigma23: String,
    #[serde(default = "default_basis")]
    pub basis: String,
}

fn default_sigma23() -> String {
    "solve".into()
}

fn default_basis() -> String {
    "canonical".into()
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions { sigma23: default_sigma23(), basis: default_basis() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CategoryFile {
    pub name: String,
    pub unit: String,
    pub central_charge: String,
    pub labels: Vec<LabelEntry>,
    /// nonzero fusion coefficients `[a, b, c, N_{ab}^c]`
    pub fusion: Vec<(String, String, String, u32)>,
    #[serde(rename = "F")]
    pub f: Vec<FEntry>,
    #[serde(rename = "R")]
    pub r: Vec<REntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma23: Option<Vec<SigmaEntry>>,
    #[serde(default)]
    pub conventions: Conventions,
}

fn ctx<T>(what: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Format(format!("{}: {}", what, e)))
}

fn one_based(m: usize, what: &str) -> Result<usize> {
    m.checked_sub(1).ok_or_else(|| Error::Format(format!("{}: multiplicity indices start at 1", what)))
}

/// Parse a category file into validated-shape category data.
pub fn parse_category_file(bytes: &[u8]) -> Result<CategoryData> {
    let file: CategoryFile = serde_json::from_slice(bytes)?;
    category_from_file(&file)
}

pub fn category_from_file(file: &CategoryFile) -> Result<CategoryData> {
    let names: Vec<&str> = file.labels.iter().map(|l| l.name.as_str()).collect();
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::Format(format!("duplicate label '{}'", n)));
        }
    }
    let id = |n: &str| names.iter().position(|m| *m == n).ok_or_else(|| Error::UnknownLabel(n.to_string()));
    let unit = id(&file.unit)?;
    let mut dual = Vec::new();
    let mut weights = Vec::new();
    for l in &file.labels {
        dual.push(id(&l.dual)?);
        weights.push(ctx(&format!("h of '{}'", l.name), parse_real(&l.h))?);
    }
    let c = ctx("central_charge", parse_real(&file.central_charge))?;
    let mut ring = FusionRing::new(&names, unit, dual, weights, c);
    for (a, b, cc, n) in &file.fusion {
        ring.set_n(id(a)?, id(b)?, id(cc)?, *n);
    }
    let mut f = BTreeMap::new();
    for (i, ent) in file.f.iter().enumerate() {
        let what = format!("F entry {}", i + 1);
        let mut labels = [0; 6];
        for (k, n) in ent.labels.iter().enumerate() {
            labels[k] = id(n)?;
        }
        let m = ent.mult.unwrap_or([1; 4]);
        let mults = [one_based(m[0], &what)?, one_based(m[1], &what)?, one_based(m[2], &what)?, one_based(m[3], &what)?];
        let v = ctx(&what, parse_const(&ent.value))?;
        if f.insert(FKey { labels, mults }, v).is_some() {
            return Err(Error::Format(format!("{} duplicates an earlier entry", what)));
        }
    }
    let mut r = BTreeMap::new();
    for (i, ent) in file.r.iter().enumerate() {
        let what = format!("R entry {}", i + 1);
        let labels = [id(&ent.labels[0])?, id(&ent.labels[1])?, id(&ent.labels[2])?];
        let m = ent.mult.unwrap_or([1; 2]);
        let mults = [one_based(m[0], &what)?, one_based(m[1], &what)?];
        let v = ctx(&what, parse_const(&ent.value))?;
        if r.insert(RKey { labels, mults }, v).is_some() {
            return Err(Error::Format(format!("{} duplicates an earlier entry", what)));
        }
    }
    let sigma23_convention = match file.conventions.sigma23.as_str() {
        "solve" => Sigma23Convention::Solve,
        "explicit" => Sigma23Convention::Explicit,
        other => return Err(Error::Format(format!("unknown sigma23 convention '{}'", other))),
    };
    let sigma23 = match &file.sigma23 {
        None => None,
        Some(entries) => {
            let mut m = BTreeMap::new();
            for (i, ent) in entries.iter().enumerate() {
                let key = [id(&ent.space[0])?, id(&ent.space[1])?, id(&ent.space[2])?];
                let mut rows = Vec::new();
                for row in &ent.matrix {
                    let mut out = Vec::new();
                    for s in row {
                        out.push(ctx(&format!("sigma23 entry {}", i + 1), parse_const(s))?);
                    }
                    rows.push(out);
                }
                m.insert(key, rows);
            }
            Some(m)
        }
    };
    Ok(CategoryData { name: file.name.clone(), ring, f, r, sigma23, sigma23_convention, basis_tag: file.conventions.basis.clone() })
}

fn mult_opt<const N: usize>(m: [usize; N]) -> Option<[usize; N]> {
    if m.iter().all(|&x| x == 0) {
        None
    } else {
        Some(m.map(|x| x + 1))
    }
}

pub fn category_to_file(cat: &CategoryData) -> CategoryFile {
    let n = |a: usize| cat.ring.name(a).to_string();
    let k = cat.ring.rank();
    let mut fusion = Vec::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let v = cat.ring.n(a, b, c);
                if v > 0 {
                    fusion.push((n(a), n(b), n(c), v));
                }
            }
        }
    }
    CategoryFile {
        name: cat.name.clone(),
        unit: n(cat.ring.unit),
        central_charge: cat.ring.central_charge.to_string(),
        labels: (0..k).map(|a| LabelEntry { name: n(a), dual: n(cat.dual(a)), h: cat.ring.weights[a].to_string() }).collect(),
        fusion,
        f: cat
            .f
            .iter()
            .map(|(key, v)| FEntry { labels: key.labels.map(n), mult: mult_opt(key.mults), value: v.to_string() })
            .collect(),
        r: cat
            .r
            .iter()
            .map(|(key, v)| REntry { labels: key.labels.map(n), mult: mult_opt(key.mults), value: v.to_string() })
            .collect(),
        sigma23: cat.sigma23.as_ref().map(|m| {
            m.iter()
                .map(|(key, rows)| SigmaEntry {
                    space: key.map(n),
                    matrix: rows.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect(),
                })
                .collect()
        }),
        conventions: Conventions {
            sigma23: match cat.sigma23_convention {
                Sigma23Convention::Solve => "solve".into(),
                Sigma23Convention::Explicit => "explicit".into(),
            },
            basis: cat.basis_tag.clone(),
        },
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn push_list<T: Serialize>(out: &mut String, key: &str, items: &[T], last: bool) {
    out.push_str(&format!("  {}: [\n", json(&key)));
    for (i, it) in items.iter().enumerate() {
        let sep = if i + 1 < items.len() { "," } else { "" };
        out.push_str(&format!("    {}{}\n", json(it), sep));
    }
    out.push_str(if last { "  ]\n" } else { "  ],\n" });
}

/// Serialize with one label, fusion, F or R entry per line.
pub fn serialize_category(cat: &CategoryData) -> String {
    let f = category_to_file(cat);
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"name\": {},\n", json(&f.name)));
    out.push_str(&format!("  \"unit\": {},\n", json(&f.unit)));
    out.push_str(&format!("  \"central_charge\": {},\n", json(&f.central_charge)));
    out.push_str(&format!("  \"conventions\": {},\n", json(&f.conventions)));
    push_list(&mut out, "labels", &f.labels, false);
    push_list(&mut out, "fusion", &f.fusion, false);
    if let Some(s) = &f.sigma23 {
        push_list(&mut out, "sigma23", s, false);
    }
    push_list(&mut out, "F", &f.f, false);
    push_list(&mut out, "R", &f.r, true);
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterEntry {
    pub label: String,
    pub offset: String,
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterFile {
    pub name: String,
    pub characters: Vec<CharacterEntry>,
}

/// Parse a character file into `(label name, series)` records.
pub fn parse_character_file(bytes: &[u8]) -> Result<Vec<(String, QSeries)>> {
    let file: CharacterFile = serde_json::from_slice(bytes)?;
    let mut out = Vec::new();
    for ch in &file.characters {
        let offset = ctx(&format!("offset of '{}'", ch.label), parse_rational(&ch.offset))?;
        let offset = to_r64(&offset).ok_or_else(|| Error::Format(format!("offset of '{}' overflows", ch.label)))?;
        let mut coeffs: Vec<BigRational> = Vec::with_capacity(ch.coeffs.len());
        for (n, s) in ch.coeffs.iter().enumerate() {
            coeffs.push(ctx(&format!("coefficient {} of '{}'", n, ch.label), parse_rational(s))?);
        }
        let trunc = coeffs.len();
        out.push((ch.label.clone(), QSeries { offset, coeffs, trunc }));
    }
    Ok(out)
}

pub fn to_r64(r: &BigRational) -> Option<Rational64> {
    use num::ToPrimitive;
    Some(Rational64::new(r.numer().to_i64()?, r.denom().to_i64()?))
}
