//! F and R symbols, braiding moves, the S₃ action on intertwiner spaces,
//! the F_a factors, the bilinear pairing and dual bases.
//!
//! Conventions. A vertex `Vertex { src1: a1, src2: a2, dst: a3, mult }` is the
//! intertwiner 𝒴_{a1 a2; mult}^{a3}. Its triple is `T = (a1, a2, a3')`, and a
//! permutation acts on triples by `(σT)_i = T_{σ⁻¹(i)}`.
//!
//! F entries are stored as `F(P(Y1,Y2) → I(Y3,Y4))` with
//! `Y1: a1⊗M → a4`, `Y2: a2⊗a3 → M`, `Y3: N⊗a3 → a4`, `Y4: a1⊗a2 → N`,
//! keyed by `(a1, a2, a3, a4, M, N)` and the four multiplicity indices.
//!
//! R entries follow `𝒴_{xy;μ}^z ∘ c_{y,x} = Σ_ν R^{yx}_z[μ][ν] 𝒴_{yx;ν}^z`.
//!
//! Matrices act on row vectors: entry `[i][j]` is the coefficient of target
//! basis element `j` in the image of source element `i`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use nalgebra::{DMatrix, RowDVector};
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{Value, C64};
use crate::fusion::FusionRing;

pub type Triple = [usize; 3];

/// Linear combination of basis vertices.
pub type Lin = Vec<(Vertex, C64)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub src1: usize,
    pub src2: usize,
    pub dst: usize,
    /// 0-based multiplicity index
    pub mult: usize,
}

impl Vertex {
    pub fn new(src1: usize, src2: usize, dst: usize, mult: usize) -> Self {
        Vertex { src1, src2, dst, mult }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Perm {
    Id,
    S12,
    S23,
    S13,
    S123,
    S132,
}

impl Perm {
    pub const ALL: [Perm; 6] = [Perm::Id, Perm::S12, Perm::S23, Perm::S13, Perm::S123, Perm::S132];

    /// `p[i] = σ(i)`, 0-based slots.
    pub fn images(self) -> [usize; 3] {
        match self {
            Perm::Id => [0, 1, 2],
            Perm::S12 => [1, 0, 2],
            Perm::S23 => [0, 2, 1],
            Perm::S13 => [2, 1, 0],
            Perm::S123 => [1, 2, 0],
            Perm::S132 => [2, 0, 1],
        }
    }

    pub fn from_images(p: [usize; 3]) -> Perm {
        *Perm::ALL.iter().find(|g| g.images() == p).expect("not a permutation")
    }

    /// `self ∘ h`: apply `h` first.
    pub fn compose(self, h: Perm) -> Perm {
        let g = self.images();
        let h = h.images();
        Perm::from_images([g[h[0]], g[h[1]], g[h[2]]])
    }

    pub fn inverse(self) -> Perm {
        let p = self.images();
        let mut q = [0; 3];
        for i in 0..3 {
            q[p[i]] = i;
        }
        Perm::from_images(q)
    }

    pub fn act(self, t: Triple) -> Triple {
        let inv = self.inverse().images();
        [t[inv[0]], t[inv[1]], t[inv[2]]]
    }

    pub fn name(self) -> &'static str {
        match self {
            Perm::Id => "id",
            Perm::S12 => "s12",
            Perm::S23 => "s23",
            Perm::S13 => "s13",
            Perm::S123 => "s123",
            Perm::S132 => "s132",
        }
    }

    pub fn parse(s: &str) -> Option<Perm> {
        Perm::ALL.iter().copied().find(|p| p.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FKey {
    /// `(a1, a2, a3, a4, M, N)`
    pub labels: [usize; 6],
    /// multiplicities of `(Y1, Y2, Y3, Y4)`
    pub mults: [usize; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RKey {
    /// `(y, x, z)` for `R^{yx}_z`
    pub labels: [usize; 3],
    /// `(μ, ν)`: μ indexes 𝒱_{xy}^z, ν indexes 𝒱_{yx}^z
    pub mults: [usize; 2],
}

pub type FSymbols = BTreeMap<FKey, Value>;
pub type RSymbols = BTreeMap<RKey, Value>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sigma23Convention {
    /// Determine σ₂₃ from the pairing invariance and the braid relation.
    Solve,
    /// Use the matrices listed in the data file.
    Explicit,
}

#[derive(Clone, Debug)]
pub struct CategoryData {
    pub name: String,
    pub ring: FusionRing,
    pub f: FSymbols,
    pub r: RSymbols,
    /// σ₂₃ matrices keyed by the source space `(a1, a2, a3)`.
    pub sigma23: Option<BTreeMap<Triple, Vec<Vec<Value>>>>,
    pub sigma23_convention: Sigma23Convention,
    pub basis_tag: String,
}

impl CategoryData {
    pub fn dual(&self, a: usize) -> usize {
        self.ring.dual[a]
    }

    /// Basis of 𝒱_{a1 a2}^{a3}.
    pub fn space(&self, a1: usize, a2: usize, a3: usize) -> Vec<Vertex> {
        (0..self.ring.n(a1, a2, a3) as usize).map(|m| Vertex::new(a1, a2, a3, m)).collect()
    }

    pub fn triple_of(&self, a1: usize, a2: usize, a3: usize) -> Triple {
        [a1, a2, self.dual(a3)]
    }

    /// Space `(a1, a2, a3)` addressed by a triple.
    pub fn space_of(&self, t: Triple) -> (usize, usize, usize) {
        (t[0], t[1], self.dual(t[2]))
    }

    pub fn admissible(&self, t: Triple) -> bool {
        let (a, b, c) = self.space_of(t);
        self.ring.n(a, b, c) > 0
    }

    pub fn triples(&self) -> Vec<Triple> {
        let k = self.ring.rank();
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if self.admissible([a, b, c]) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    fn fmt_f(&self, key: &FKey) -> String {
        let n: Vec<&str> = key.labels.iter().map(|&a| self.ring.name(a)).collect();
        format!("F({}) mults {:?}", n.join(","), key.mults.map(|m| m + 1))
    }

    fn fmt_r(&self, key: &RKey) -> String {
        let n: Vec<&str> = key.labels.iter().map(|&a| self.ring.name(a)).collect();
        format!("R({}) mults {:?}", n.join(","), key.mults.map(|m| m + 1))
    }
}

/// One associativity block `(a1, a2, a3, a4)`.
#[derive(Clone, Debug)]
pub struct FBlock {
    /// product basis `(Y1, Y2)`
    pub rows: Vec<(Vertex, Vertex)>,
    /// iterate basis `(Y3, Y4)`
    pub cols: Vec<(Vertex, Vertex)>,
    pub mat: DMatrix<C64>,
    pub inv: DMatrix<C64>,
    pub exact: Vec<Vec<Value>>,
    row_ix: HashMap<(Vertex, Vertex), usize>,
    col_ix: HashMap<(Vertex, Vertex), usize>,
}

impl FBlock {
    pub fn row(&self, y1: Vertex, y2: Vertex) -> Option<usize> {
        self.row_ix.get(&(y1, y2)).copied()
    }

    pub fn col(&self, y3: Vertex, y4: Vertex) -> Option<usize> {
        self.col_ix.get(&(y3, y4)).copied()
    }
}

fn product_basis(cat: &CategoryData, a1: usize, a2: usize, a3: usize, a4: usize) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::new();
    for m in 0..cat.ring.rank() {
        for y1 in cat.space(a1, m, a4) {
            for y2 in cat.space(a2, a3, m) {
                out.push((y1, y2));
            }
        }
    }
    out
}

fn iterate_basis(cat: &CategoryData, a1: usize, a2: usize, a3: usize, a4: usize) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::new();
    for n in 0..cat.ring.rank() {
        for y3 in cat.space(n, a3, a4) {
            for y4 in cat.space(a1, a2, n) {
                out.push((y3, y4));
            }
        }
    }
    out
}

/// All F blocks of a category, indexed by `(a1, a2, a3, a4)`.
#[derive(Clone, Debug)]
pub struct FData {
    pub blocks: HashMap<[usize; 4], FBlock>,
}

impl FData {
    pub fn new(cat: &CategoryData) -> Result<FData> {
        let k = cat.ring.rank();
        for key in cat.f.keys() {
            let [a1, a2, a3, a4, m, n] = key.labels;
            let [m1, m2, m3, m4] = key.mults;
            let ok = (m1 as u32) < cat.ring.n(a1, m, a4)
                && (m2 as u32) < cat.ring.n(a2, a3, m)
                && (m3 as u32) < cat.ring.n(n, a3, a4)
                && (m4 as u32) < cat.ring.n(a1, a2, n);
            if !ok {
                return Err(Error::Inadmissible(cat.fmt_f(key)));
            }
        }
        let mut blocks = HashMap::new();
        for a1 in 0..k {
            for a2 in 0..k {
                for a3 in 0..k {
                    for a4 in 0..k {
                        let rows = product_basis(cat, a1, a2, a3, a4);
                        let cols = iterate_basis(cat, a1, a2, a3, a4);
                        if rows.is_empty() && cols.is_empty() {
                            continue;
                        }
                        if rows.len() != cols.len() {
                            return Err(Error::Inconsistent(format!(
                                "block ({},{},{},{}) has {} product and {} iterate basis elements",
                                cat.ring.name(a1),
                                cat.ring.name(a2),
                                cat.ring.name(a3),
                                cat.ring.name(a4),
                                rows.len(),
                                cols.len()
                            )));
                        }
                        let d = rows.len();
                        let mut exact = vec![vec![Value::zero(); d]; d];
                        let mut mat = DMatrix::<C64>::zeros(d, d);
                        for (i, (y1, y2)) in rows.iter().enumerate() {
                            for (j, (y3, y4)) in cols.iter().enumerate() {
                                let key = FKey {
                                    labels: [a1, a2, a3, a4, y2.dst, y4.dst],
                                    mults: [y1.mult, y2.mult, y3.mult, y4.mult],
                                };
                                let v = cat.f.get(&key).ok_or_else(|| Error::Incomplete(cat.fmt_f(&key)))?;
                                mat[(i, j)] = v.c();
                                exact[i][j] = v.clone();
                            }
                        }
                        let inv = mat.clone().try_inverse().ok_or_else(|| {
                            Error::Singular(format!(
                                "F block ({},{},{},{})",
                                cat.ring.name(a1),
                                cat.ring.name(a2),
                                cat.ring.name(a3),
                                cat.ring.name(a4)
                            ))
                        })?;
                        let row_ix = rows.iter().enumerate().map(|(i, p)| (*p, i)).collect();
                        let col_ix = cols.iter().enumerate().map(|(i, p)| (*p, i)).collect();
                        blocks.insert([a1, a2, a3, a4], FBlock { rows, cols, mat, inv, exact, row_ix, col_ix });
                    }
                }
            }
        }
        Ok(FData { blocks })
    }

    pub fn block(&self, a1: usize, a2: usize, a3: usize, a4: usize) -> Result<&FBlock> {
        self.blocks
            .get(&[a1, a2, a3, a4])
            .ok_or_else(|| Error::Inadmissible(format!("F block ({},{},{},{})", a1, a2, a3, a4)))
    }

    /// `F(P(y1,y2) → I(y3,y4))`, zero when the tuple is not a valid pair of bases.
    pub fn coef(&self, y1: Vertex, y2: Vertex, y3: Vertex, y4: Vertex) -> C64 {
        self.coef_exact(y1, y2, y3, y4).c()
    }

    pub fn coef_exact(&self, y1: Vertex, y2: Vertex, y3: Vertex, y4: Vertex) -> Value {
        let key = [y1.src1, y2.src1, y2.src2, y1.dst];
        let key2 = [y4.src1, y4.src2, y3.src2, y3.dst];
        if key != key2 || y1.src2 != y2.dst || y3.src1 != y4.dst {
            return Value::zero();
        }
        match self.blocks.get(&key) {
            Some(b) => match (b.row(y1, y2), b.col(y3, y4)) {
                (Some(i), Some(j)) => b.exact[i][j].clone(),
                _ => Value::zero(),
            },
            None => Value::zero(),
        }
    }
}

fn rmatrix(cat: &CategoryData, y: usize, x: usize, z: usize) -> Result<DMatrix<C64>> {
    let rows = cat.ring.n(x, y, z) as usize;
    let cols = cat.ring.n(y, x, z) as usize;
    let mut m = DMatrix::<C64>::zeros(rows, cols);
    for mu in 0..rows {
        for nu in 0..cols {
            let key = RKey { labels: [y, x, z], mults: [mu, nu] };
            let v = cat.r.get(&key).ok_or_else(|| Error::Incomplete(cat.fmt_r(&key)))?;
            m[(mu, nu)] = v.c();
        }
    }
    Ok(m)
}

fn check_r_keys(cat: &CategoryData) -> Result<()> {
    for key in cat.r.keys() {
        let [y, x, z] = key.labels;
        if key.mults[0] as u32 >= cat.ring.n(x, y, z) || key.mults[1] as u32 >= cat.ring.n(y, x, z) {
            return Err(Error::Inadmissible(cat.fmt_r(key)));
        }
    }
    Ok(())
}

/// Braiding coefficients `R^{yx}_z` as a matrix, or those of the inverse
/// braiding when `inverse` is set.
fn braid(cat: &CategoryData, y: usize, x: usize, z: usize, inverse: bool) -> Result<DMatrix<C64>> {
    if !inverse {
        return rmatrix(cat, y, x, z);
    }
    rmatrix(cat, x, y, z)?
        .try_inverse()
        .ok_or_else(|| Error::Singular(format!("R block ({},{},{})", x, y, z)))
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn phase(turns: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * turns)
}

/// Maximum pentagon residual over all admissible index tuples.
pub fn pentagon_check(cat: &CategoryData) -> Result<f64> {
    let fd = FData::new(cat)?;
    let k = cat.ring.rank();
    let mut worst: f64 = 0.0;
    for x in 0..k {
        for a1 in 0..k {
            for a2 in 0..k {
                for a3 in 0..k {
                    for a4 in 0..k {
                        worst = worst.max(pentagon_at(cat, &fd, [a1, a2, a3, a4, x]));
                    }
                }
            }
        }
    }
    Ok(worst)
}

fn pentagon_at(cat: &CategoryData, fd: &FData, t: [usize; 5]) -> f64 {
    let [a1, a2, a3, a4, x] = t;
    let k = cat.ring.rank();
    let mut worst: f64 = 0.0;
    let mut pp = Vec::new();
    for m1 in 0..k {
        for m2 in 0..k {
            for y1 in cat.space(a1, m1, x) {
                for y2 in cat.space(a2, m2, m1) {
                    for y3 in cat.space(a3, a4, m2) {
                        pp.push((y1, y2, y3));
                    }
                }
            }
        }
    }
    let mut ii = Vec::new();
    for l in 0..k {
        for j in 0..k {
            for x3 in cat.space(l, a4, x) {
                for x4 in cat.space(j, a3, l) {
                    for x2 in cat.space(a1, a2, j) {
                        ii.push((x3, x4, x2));
                    }
                }
            }
        }
    }
    for &(y1, y2, y3) in &pp {
        let m1 = y1.src2;
        let m2 = y2.src2;
        for &(x3, x4, x2) in &ii {
            let (l, j) = (x3.src1, x2.dst);
            let mut lhs = Value::zero();
            for x1 in cat.space(j, m2, x) {
                let t = fd.coef_exact(y1, y2, x1, x2).mul(&fd.coef_exact(x1, y3, x3, x4));
                lhs = lhs.add(&t);
            }
            let mut rhs = Value::zero();
            for kk in 0..k {
                for z1 in cat.space(kk, a4, m1) {
                    for z2 in cat.space(a2, a3, kk) {
                        for z4 in cat.space(a1, kk, l) {
                            let t = fd
                                .coef_exact(y2, y3, z1, z2)
                                .mul(&fd.coef_exact(y1, z1, x3, z4))
                                .mul(&fd.coef_exact(z4, z2, x4, x2));
                            rhs = rhs.add(&t);
                        }
                    }
                }
            }
            let d = lhs.sub(&rhs);
            let r = match &d {
                Value::Exact(p) if p.is_zero() => 0.0,
                _ => d.c().norm(),
            };
            worst = worst.max(r);
        }
    }
    worst
}

/// Maximum residual of both hexagons and of the ribbon relation
/// `R^{ba}_c R^{ab}_c = e^{2πi(h_c − h_a − h_b)}`.
pub fn hexagon_check(cat: &CategoryData) -> Result<f64> {
    check_r_keys(cat)?;
    let fd = FData::new(cat)?;
    let k = cat.ring.rank();
    let mut worst: f64 = 0.0;
    for inverse in [false, true] {
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for d in 0..k {
                        worst = worst.max(hexagon_at(cat, &fd, [a, b, c, d], inverse)?);
                    }
                }
            }
        }
    }
    Ok(worst.max(ribbon_check(cat)?))
}

pub fn ribbon_check(cat: &CategoryData) -> Result<f64> {
    let k = cat.ring.rank();
    let mut worst: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let n = cat.ring.n(a, b, c) as usize;
                if n == 0 {
                    continue;
                }
                // R^{ba}_c maps 𝒱_{ab} → 𝒱_{ba}, R^{ab}_c maps back
                let m = rmatrix(cat, b, a, c)? * rmatrix(cat, a, b, c)?;
                let th = phase(cat.ring.h(c) - cat.ring.h(a) - cat.ring.h(b));
                let target = DMatrix::<C64>::identity(n, n) * th;
                worst = worst.max(max_abs(&(m - target)));
            }
        }
    }
    Ok(worst)
}

fn hexagon_at(cat: &CategoryData, fd: &FData, t: [usize; 4], inverse: bool) -> Result<f64> {
    let [a, b, c, d] = t;
    let (Some(f_abcd), Some(f_bacd), Some(f_bcad)) =
        (fd.blocks.get(&[a, b, c, d]), fd.blocks.get(&[b, a, c, d]), fd.blocks.get(&[b, c, a, d]))
    else {
        return Ok(0.0);
    };
    let n = f_abcd.rows.len();
    // outer braiding: P(Z1,Z2) in (a,b,c,d) → I(Z1',Z2) in (b,c,a,d)
    let mut theta = DMatrix::<C64>::zeros(n, n);
    for (i, &(z1, z2)) in f_abcd.rows.iter().enumerate() {
        let r = braid(cat, z1.src2, a, d, inverse)?;
        for nu in 0..r.ncols() {
            let j = f_bcad.col(Vertex::new(z1.src2, a, d, nu), z2).expect("iterate basis");
            theta[(i, j)] += r[(z1.mult, nu)];
        }
    }
    // inner braiding on the iterate side: W4 ∈ 𝒱_{ab}^L → 𝒱_{ba}^L
    let mut om_i = DMatrix::<C64>::zeros(n, n);
    for (i, &(w3, w4)) in f_abcd.cols.iter().enumerate() {
        let r = braid(cat, b, a, w4.dst, inverse)?;
        for nu in 0..r.ncols() {
            let j = f_bacd.col(w3, Vertex::new(b, a, w4.dst, nu)).expect("iterate basis");
            om_i[(i, j)] += r[(w4.mult, nu)];
        }
    }
    // inner braiding on the product side: U2 ∈ 𝒱_{ac}^M → 𝒱_{ca}^M
    let mut om_p = DMatrix::<C64>::zeros(n, n);
    for (i, &(u1, u2)) in f_bacd.rows.iter().enumerate() {
        let r = braid(cat, c, a, u2.dst, inverse)?;
        for nu in 0..r.ncols() {
            let j = f_bcad.row(u1, Vertex::new(c, a, u2.dst, nu)).expect("product basis");
            om_p[(i, j)] += r[(u2.mult, nu)];
        }
    }
    let rhs = &f_abcd.mat * om_i * &f_bacd.inv * om_p * &f_bcad.mat;
    Ok(max_abs(&(theta - rhs)))
}

/// Data derived from a category: F blocks, the S₃ action and the F_a factors.
#[derive(Clone, Debug)]
pub struct SymbolData {
    pub cat: CategoryData,
    pub fdata: FData,
    sigma: HashMap<(Perm, Triple), DMatrix<C64>>,
    fa: Vec<C64>,
    /// residual of the σ₂₃ determination (0 for explicit data)
    pub sigma23_residual: f64,
}

impl SymbolData {
    pub fn new(cat: CategoryData) -> Result<SymbolData> {
        check_r_keys(&cat)?;
        let fdata = FData::new(&cat)?;
        let k = cat.ring.rank();
        let e = cat.ring.unit;
        let mut fa = Vec::with_capacity(k);
        for a in 0..k {
            let ad = cat.dual(a);
            let v = fdata.coef(
                Vertex::new(a, e, a, 0),
                Vertex::new(ad, a, e, 0),
                Vertex::new(e, a, a, 0),
                Vertex::new(a, ad, e, 0),
            );
            if v.norm() < 1e-12 {
                return Err(Error::Degenerate(format!("F_{} = 0", cat.ring.name(a))));
            }
            fa.push(v);
        }
        let mut sd = SymbolData { cat, fdata, sigma: HashMap::new(), fa, sigma23_residual: 0.0 };
        for t in sd.cat.triples() {
            let (a1, a2, a3) = sd.cat.space_of(t);
            let delta = sd.cat.ring.h(a3) - sd.cat.ring.h(a1) - sd.cat.ring.h(a2);
            let m = rmatrix(&sd.cat, a2, a1, a3)? * phase(-delta / 2.0);
            sd.sigma.insert((Perm::S12, t), m);
            let d = m_dim(&sd.cat, t);
            sd.sigma.insert((Perm::Id, t), DMatrix::identity(d, d));
        }
        match (&sd.cat.sigma23, &sd.cat.sigma23_convention) {
            (Some(explicit), _) => {
                for t in sd.cat.triples() {
                    let (a1, a2, a3) = sd.cat.space_of(t);
                    let rows = m_dim(&sd.cat, t);
                    let cols = m_dim(&sd.cat, Perm::S23.act(t));
                    let m = explicit.get(&[a1, a2, a3]).ok_or_else(|| {
                        Error::Incomplete(format!(
                            "sigma23 on ({},{};{})",
                            sd.cat.ring.name(a1),
                            sd.cat.ring.name(a2),
                            sd.cat.ring.name(a3)
                        ))
                    })?;
                    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
                        return Err(Error::Format(format!(
                            "sigma23 matrix on ({},{};{}) must be {}x{}",
                            sd.cat.ring.name(a1),
                            sd.cat.ring.name(a2),
                            sd.cat.ring.name(a3),
                            rows,
                            cols
                        )));
                    }
                    let dm = DMatrix::from_fn(rows, cols, |i, j| m[i][j].c());
                    sd.sigma.insert((Perm::S23, t), dm);
                }
            }
            (None, Sigma23Convention::Explicit) => {
                return Err(Error::Format("sigma23 convention is 'explicit' but no matrices are given".into()))
            }
            (None, Sigma23Convention::Solve) => {
                if !sd.cat.ring.is_multiplicity_free() {
                    return Err(Error::Unsupported("S₃ action data required for fusion multiplicities above 1".into()));
                }
                let (u, resid) = sd.solve_sigma23()?;
                sd.sigma23_residual = resid;
                for (t, z) in u {
                    sd.sigma.insert((Perm::S23, t), DMatrix::from_element(1, 1, z));
                }
            }
        }
        for t in sd.cat.triples() {
            let s123 = sd.compose_at(Perm::S12, Perm::S23, t);
            let s132 = sd.compose_at(Perm::S23, Perm::S12, t);
            sd.sigma.insert((Perm::S123, t), s123);
            sd.sigma.insert((Perm::S132, t), s132);
        }
        for t in sd.cat.triples() {
            let s13 = sd.compose_at(Perm::S12, Perm::S132, t);
            sd.sigma.insert((Perm::S13, t), s13);
        }
        Ok(sd)
    }

    /// The σ₂₃ matrices in use, keyed by source space, as explicit data.
    pub fn sigma23_table(&self) -> BTreeMap<[usize; 3], Vec<Vec<Value>>> {
        let mut out = BTreeMap::new();
        for t in self.cat.triples() {
            let (a1, a2, a3) = self.cat.space_of(t);
            let m = &self.sigma[&(Perm::S23, t)];
            let rows = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| Value::Float(m[(i, j)])).collect()).collect();
            out.insert([a1, a2, a3], rows);
        }
        out
    }

    /// Matrix of `g ∘ h` on the space of `t`, from the stored tables of `g` and `h`.
    fn compose_at(&self, g: Perm, h: Perm, t: Triple) -> DMatrix<C64> {
        &self.sigma[&(h, t)] * &self.sigma[&(g, h.act(t))]
    }

    pub fn ring(&self) -> &FusionRing {
        &self.cat.ring
    }

    pub fn dual(&self, a: usize) -> usize {
        self.cat.dual(a)
    }

    pub fn e(&self) -> usize {
        self.cat.ring.unit
    }

    /// Matrix of σ on the space of `t`, rows its basis, columns the basis of σt.
    pub fn sigma_matrix(&self, g: Perm, t: Triple) -> Result<&DMatrix<C64>> {
        self.sigma.get(&(g, t)).ok_or_else(|| Error::Inadmissible(format!("triple {:?}", t)))
    }

    fn triple(&self, v: &Vertex) -> Triple {
        self.cat.triple_of(v.src1, v.src2, v.dst)
    }

    pub fn vertex_of(&self, t: Triple, mult: usize) -> Vertex {
        let (a, b, c) = self.cat.space_of(t);
        Vertex::new(a, b, c, mult)
    }

    /// Image of a basis vertex under σ, as coefficients in the canonical basis.
    pub fn sigma_action(&self, g: Perm, el: &Vertex) -> Result<Lin> {
        let t = self.triple(el);
        if el.mult >= m_dim(&self.cat, t) {
            return Err(Error::Inadmissible(format!("{:?}", el)));
        }
        let m = self.sigma_matrix(g, t)?;
        let gt = g.act(t);
        Ok((0..m.ncols()).map(|j| (self.vertex_of(gt, j), m[(el.mult, j)])).collect())
    }

    pub fn sigma_lin(&self, g: Perm, x: &Lin) -> Result<Lin> {
        let mut out: Lin = Vec::new();
        for (v, c) in x {
            for (w, d) in self.sigma_action(g, v)? {
                match out.iter_mut().find(|(u, _)| *u == w) {
                    Some(slot) => slot.1 += c * d,
                    None => out.push((w, c * d)),
                }
            }
        }
        Ok(out)
    }

    /// Coefficients of `P(x1, x2)` in the product basis of `blk`.
    pub fn prod_vec(&self, blk: &FBlock, x1: &Lin, x2: &Lin) -> Result<RowDVector<C64>> {
        let mut v = RowDVector::<C64>::zeros(blk.rows.len());
        for (y1, c1) in x1 {
            for (y2, c2) in x2 {
                let i = blk.row(*y1, *y2).ok_or_else(|| Error::Inadmissible(format!("product of {:?} and {:?}", y1, y2)))?;
                v[i] += c1 * c2;
            }
        }
        Ok(v)
    }

    /// Coefficients of `I(x3, x4)` in the iterate basis of `blk`.
    pub fn iter_vec(&self, blk: &FBlock, x3: &Lin, x4: &Lin) -> Result<RowDVector<C64>> {
        let mut v = RowDVector::<C64>::zeros(blk.cols.len());
        for (y3, c3) in x3 {
            for (y4, c4) in x4 {
                let i = blk.col(*y3, *y4).ok_or_else(|| Error::Inadmissible(format!("iterate of {:?} and {:?}", y3, y4)))?;
                v[i] += c3 * c4;
            }
        }
        Ok(v)
    }

    /// `B^{(r)}` on block `(a1,a2,a3,a4)`: product basis of `(a1,a2,a3,a4)` to
    /// product basis of `(a2,a1,a3,a4)`.
    pub fn braiding_move(&self, r: i32, a1: usize, a2: usize, a3: usize, a4: usize) -> Result<DMatrix<C64>> {
        if r != 1 && r != -1 {
            return Err(Error::Domain("braiding index must be +1 or -1".into()));
        }
        let f = self.fdata.block(a1, a2, a3, a4)?;
        let f2 = self.fdata.block(a2, a1, a3, a4)?;
        let n = f.cols.len();
        let mut om = DMatrix::<C64>::zeros(n, n);
        for (i, &(y3, y4)) in f.cols.iter().enumerate() {
            let delta = self.ring().h(y4.dst) - self.ring().h(a1) - self.ring().h(a2);
            let pre = phase(r as f64 * delta / 2.0);
            for (w, c) in self.sigma_action(Perm::S12, &y4)? {
                let j = f2.col(y3, w).expect("iterate basis");
                om[(i, j)] += pre * c;
            }
        }
        Ok(&f.mat * om * &f2.inv)
    }

    /// `(B^{(-1)})²` on block `(a1,a2,a3,a4)`, mapping its product basis to itself.
    pub fn braiding_squared_inverse(&self, a1: usize, a2: usize, a3: usize, a4: usize) -> Result<DMatrix<C64>> {
        Ok(self.braiding_move(-1, a1, a2, a3, a4)? * self.braiding_move(-1, a2, a1, a3, a4)?)
    }

    /// `F_a` and its principal square root `sqrt|F_a| e^{i arg(F_a)/2}`.
    pub fn fa_factor(&self, a: usize) -> (C64, C64) {
        let f = self.fa[a];
        (f, principal_sqrt(f))
    }

    /// `√F_{a3} / (√F_{a1} √F_{a2})` for the space `(a1, a2, a3)`.
    pub fn nu(&self, a1: usize, a2: usize, a3: usize) -> C64 {
        self.fa_factor(a3).1 / (self.fa_factor(a1).1 * self.fa_factor(a2).1)
    }

    /// `⟨y1, y2⟩` realized as
    /// `F(P(σ₂₃ y1, y2) → I(𝒴_{e a2'}^{a2'}, 𝒴_{a1 a1'}^{e}))`.
    pub fn pairing(&self, y1: &Vertex, y2: &Vertex) -> Result<C64> {
        let (a1, a2, a3) = (y1.src1, y1.src2, y1.dst);
        if (y2.src1, y2.src2, y2.dst) != (self.dual(a1), self.dual(a2), self.dual(a3)) {
            return Err(Error::Domain(format!("pairing of incompatible types {:?} and {:?}", y1, y2)));
        }
        let e = self.e();
        let y3 = Vertex::new(e, self.dual(a2), self.dual(a2), 0);
        let y4 = Vertex::new(a1, self.dual(a1), e, 0);
        let mut s = C64::zero();
        for (w, c) in self.sigma_action(Perm::S23, y1)? {
            s += c * self.fdata.coef(w, *y2, y3, y4);
        }
        Ok(s)
    }

    /// Gram matrix `⟨𝒴_i, 𝒴_j⟩` between the bases of `(a1,a2;a3)` and `(a1',a2';a3')`.
    pub fn gram(&self, a1: usize, a2: usize, a3: usize) -> Result<DMatrix<C64>> {
        let b1 = self.cat.space(a1, a2, a3);
        let b2 = self.cat.space(self.dual(a1), self.dual(a2), self.dual(a3));
        let mut g = DMatrix::<C64>::zeros(b1.len(), b2.len());
        for (i, y1) in b1.iter().enumerate() {
            for (j, y2) in b2.iter().enumerate() {
                g[(i, j)] = self.pairing(y1, y2)?;
            }
        }
        Ok(g)
    }

    /// Dual basis of `(a1,a2;a3)` in `(a1',a2';a3')`: row `j` holds the
    /// coefficients of `𝒴'_j` in the canonical basis.
    pub fn dual_basis(&self, a1: usize, a2: usize, a3: usize) -> Result<DMatrix<C64>> {
        let g = self.gram(a1, a2, a3)?;
        let inv = g.try_inverse().ok_or_else(|| {
            Error::Singular(format!(
                "pairing on ({},{};{})",
                self.ring().name(a1),
                self.ring().name(a2),
                self.ring().name(a3)
            ))
        })?;
        Ok(inv.transpose())
    }

    /// Dual element `𝒴'_j` as a linear combination.
    pub fn dual_element(&self, a1: usize, a2: usize, a3: usize, j: usize) -> Result<Lin> {
        let c = self.dual_basis(a1, a2, a3)?;
        let b = self.cat.space(self.dual(a1), self.dual(a2), self.dual(a3));
        Ok(b.iter().enumerate().map(|(k, v)| (*v, c[(j, k)])).collect())
    }

    /// Multiplicity-free σ₂₃ from `σ₂₃² = 1`, unit normalizations, invariance
    /// of the normalized pairing under σ₁₂ and the braid relation.
    fn solve_sigma23(&self) -> Result<(HashMap<Triple, C64>, f64)> {
        let cat = &self.cat;
        let e = cat.ring.unit;
        let phi12 = |t: Triple| self.sigma[&(Perm::S12, t)][(0, 0)];
        let dual_t = |t: Triple| [cat.dual(t[0]), cat.dual(t[1]), cat.dual(t[2])];
        // ⟨Y_T, Y_T*⟩ = u(T) G(T)
        let g_of = |t: Triple| -> C64 {
            let [t1, t2, t3] = t;
            let (d1, d2) = (cat.dual(t1), cat.dual(t2));
            self.fdata.coef(
                Vertex::new(t1, t3, d2, 0),
                Vertex::new(d1, d2, t3, 0),
                Vertex::new(e, d2, d2, 0),
                Vertex::new(t1, d1, e, 0),
            )
        };
        let nu_t = |t: Triple| {
            let (a, b, c) = cat.space_of(t);
            self.nu(a, b, c)
        };
        let mut value: HashMap<Triple, (C64, i32)> = HashMap::new();
        let mut out = HashMap::new();
        let mut worst: f64 = 0.0;
        for start in cat.triples() {
            if value.contains_key(&start) {
                continue;
            }
            // equations z^m = w collected along the orbit
            let mut eqs: Vec<(i32, C64)> = Vec::new();
            let mut orbit = vec![start];
            value.insert(start, (C64::one(), 1));
            let mut queue = VecDeque::from([start]);
            let relate = |value: &mut HashMap<Triple, (C64, i32)>,
                          orbit: &mut Vec<Triple>,
                          queue: &mut VecDeque<Triple>,
                          eqs: &mut Vec<(i32, C64)>,
                          t: Triple,
                          cand: (C64, i32)| {
                match value.get(&t) {
                    Some(&(c, k)) => eqs.push((cand.1 - k, c / cand.0)),
                    None => {
                        value.insert(t, cand);
                        orbit.push(t);
                        queue.push_back(t);
                    }
                }
            };
            while let Some(t) = queue.pop_front() {
                let (c, k) = value[&t];
                let s23 = Perm::S23.act(t);
                relate(&mut value, &mut orbit, &mut queue, &mut eqs, s23, (C64::one() / c, -k));
                let s12 = Perm::S12.act(t);
                let gt = g_of(t);
                let gs = g_of(s12);
                if gt.norm() < 1e-14 || gs.norm() < 1e-14 {
                    return Err(Error::Singular(format!("pairing vanishes on triple {:?}", t)));
                }
                let rho = nu_t(t) * gt / (phi12(t) * phi12(dual_t(t)) * nu_t(s12) * gs);
                relate(&mut value, &mut orbit, &mut queue, &mut eqs, s12, (c * rho, k));
            }
            for &t in &orbit {
                if t.contains(&e) {
                    let (c, k) = value[&t];
                    eqs.push((k, C64::one() / c));
                }
                // σ12 σ23 σ12 = σ23 σ12 σ23 on the space of t
                let a = Perm::S12.act(t);
                let b = Perm::S23.act(a);
                let lhs_c = phi12(t) * value[&a].0 * phi12(b);
                let lhs_k = value[&a].1;
                let a2 = Perm::S23.act(t);
                let b2 = Perm::S12.act(a2);
                let rhs_c = value[&t].0 * phi12(a2) * value[&b2].0;
                let rhs_k = value[&t].1 + value[&b2].1;
                eqs.push((lhs_k - rhs_k, rhs_c / lhs_c));
            }
            let resid = |z: C64| eqs.iter().fold(0.0f64, |acc, &(m, w)| acc.max((z.powi(m) - w).norm()));
            let Some(&(m0, w0)) = eqs.iter().filter(|(m, _)| *m != 0).min_by_key(|(m, _)| m.abs()) else {
                return Err(Error::Unsupported(format!(
                    "sigma23 phases on the orbit of {:?} are not fixed by the data; supply explicit sigma23 matrices",
                    self.names(start)
                )));
            };
            let (m0, w0) = if m0 < 0 { (-m0, C64::one() / w0) } else { (m0, w0) };
            let base = principal_root(w0, m0 as u32);
            let good: Vec<(C64, f64)> = (0..m0)
                .map(|j| base * phase(j as f64 / m0 as f64))
                .map(|z| (z, resid(z)))
                .filter(|(_, r)| *r < 1e-8)
                .collect();
            match good.len() {
                0 => {
                    return Err(Error::Inconsistent(format!(
                        "no sigma23 phase on the orbit of {:?} satisfies the pairing invariance and braid relation",
                        self.names(start)
                    )))
                }
                1 => {
                    let (z, r) = good[0];
                    worst = worst.max(r);
                    for &t in &orbit {
                        let (c, k) = value[&t];
                        out.insert(t, c * z.powi(k));
                    }
                }
                _ => {
                    return Err(Error::Unsupported(format!(
                        "sigma23 phases on the orbit of {:?} admit {} solutions; supply explicit sigma23 matrices",
                        self.names(start),
                        good.len()
                    )))
                }
            }
        }
        Ok((out, worst))
    }

    fn names(&self, t: Triple) -> Vec<&str> {
        t.iter().map(|&a| self.ring().name(a)).collect()
    }

    /// Max deviation from `σ₁₂² = σ₂₃² = 1`, the braid relation and
    /// `σ₁₂₃ σ₁₃₂ = 1` over all canonical elements.
    pub fn group_law_check(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for t in self.cat.triples() {
            let d = m_dim(&self.cat, t);
            let id = DMatrix::<C64>::identity(d, d);
            for (g, h) in [(Perm::S12, Perm::S12), (Perm::S23, Perm::S23), (Perm::S123, Perm::S132), (Perm::S13, Perm::S13)] {
                worst = worst.max(max_abs(&(self.compose_at(g, h, t) - &id)));
            }
            // σ13 = σ23 σ12 σ23
            let alt = &self.sigma[&(Perm::S23, t)]
                * &self.sigma[&(Perm::S12, Perm::S23.act(t))]
                * &self.sigma[&(Perm::S23, Perm::S123.act(t))];
            worst = worst.max(max_abs(&(alt - &self.sigma[&(Perm::S13, t)])));
        }
        worst
    }

    /// Invariance of the normalized pairing under every element of S₃.
    pub fn pairing_invariance_check(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for t in self.cat.triples() {
            let (a1, a2, a3) = self.cat.space_of(t);
            let g0 = self.gram(a1, a2, a3)? * self.nu(a1, a2, a3);
            let td = [self.dual(t[0]), self.dual(t[1]), self.dual(t[2])];
            for g in Perm::ALL {
                let gt = g.act(t);
                let (b1, b2, b3) = self.cat.space_of(gt);
                let gn = self.gram(b1, b2, b3)? * self.nu(b1, b2, b3);
                let lhs = &self.sigma[&(g, t)] * gn * self.sigma[&(g, td)].transpose();
                worst = worst.max(max_abs(&(lhs - &g0)));
            }
        }
        Ok(worst)
    }

    /// `F(P(σ₁₂ 𝒴_{a3 a2;r}^{a2}, σ₁₂ 𝒴_{a2 a2';q}^{a3}) → I(𝒴_{e a2}^{a2}, 𝒴_{a2 a2'}^{e})) = (F_{a2}/F_{a3}) δ_{rq}`
    /// with `𝒴_{a2 a2';q}^{a3} = σ₁₃(𝒴'_q)`.
    pub fn fcoef2_chain_check(&self) -> Result<f64> {
        let k = self.ring().rank();
        let e = self.e();
        let mut worst: f64 = 0.0;
        for a2 in 0..k {
            let a2d = self.dual(a2);
            for a3 in 0..k {
                let n = self.ring().n(a3, a2, a2) as usize;
                if n == 0 {
                    continue;
                }
                let blk = self.fdata.block(a2, a2d, a2, a2)?;
                let target = blk
                    .col(Vertex::new(e, a2, a2, 0), Vertex::new(a2, a2d, e, 0))
                    .ok_or_else(|| Error::Inadmissible("unit iterate element".into()))?;
                let ratio = self.fa[a2] / self.fa[a3];
                for r in 0..n {
                    let x1 = self.sigma_action(Perm::S12, &Vertex::new(a3, a2, a2, r))?;
                    for q in 0..n {
                        let yq = self.sigma_lin(Perm::S13, &self.dual_element(a3, a2, a2, q)?)?;
                        let x2 = self.sigma_lin(Perm::S12, &yq)?;
                        let v = self.prod_vec(blk, &x1, &x2)? * &blk.mat;
                        let want = if r == q { ratio } else { C64::zero() };
                        worst = worst.max((v[target] - want).norm());
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Deviations from the canonical normalizations: the unit F entries
    /// `F(𝒴_{aa'}^e ⊗ 𝒴_{a'e}^{a'}; 𝒴_{ee}^e ⊗ 𝒴_{aa'}^e) = 1` and unit
    /// coefficients of σ on every triple containing `e`. The first component
    /// is `Some(true)` when every unit F entry is exactly 1.
    pub fn canonical_check(&self) -> (Option<bool>, f64) {
        let (exact, mut worst) = triv_f_coef_check(&self.cat, &self.fdata);
        let e = self.e();
        for t in self.cat.triples() {
            if !t.contains(&e) {
                continue;
            }
            for g in Perm::ALL {
                worst = worst.max((self.sigma[&(g, t)][(0, 0)] - C64::one()).norm());
            }
        }
        (exact, worst)
    }
}

/// Unit normalization `F(𝒴_{aa'}^e ⊗ 𝒴_{a'e}^{a'}; 𝒴_{ee}^e ⊗ 𝒴_{aa'}^e) = 1`.
/// Returns whether all entries are exact ones (None if some are floats) and the max deviation.
pub fn triv_f_coef_check(cat: &CategoryData, fd: &FData) -> (Option<bool>, f64) {
    let e = cat.ring.unit;
    let mut all_exact = true;
    let mut all_one = true;
    let mut worst: f64 = 0.0;
    for a in 0..cat.ring.rank() {
        let ad = cat.dual(a);
        let v = fd.coef_exact(Vertex::new(a, ad, e, 0), Vertex::new(ad, e, ad, 0), Vertex::new(e, e, e, 0), Vertex::new(a, ad, e, 0));
        if v.is_exact() {
            all_one &= v.is_exact_one();
        } else {
            all_exact = false;
        }
        worst = worst.max((v.c() - C64::one()).norm());
    }
    (if all_exact { Some(all_one) } else { None }, worst)
}

fn m_dim(cat: &CategoryData, t: Triple) -> usize {
    let (a, b, c) = cat.space_of(t);
    cat.ring.n(a, b, c) as usize
}

/// `sqrt|z| e^{i arg(z)/2}` with `arg` in `(-π, π]`.
pub fn principal_sqrt(z: C64) -> C64 {
    let arg = if z.im == 0.0 && z.re < 0.0 { std::f64::consts::PI } else { z.arg() };
    C64::from_polar(z.norm().sqrt(), arg / 2.0)
}

fn principal_root(z: C64, m: u32) -> C64 {
    C64::from_polar(z.norm().powf(1.0 / m as f64), z.arg() / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_table() {
        assert_eq!(Perm::S12.compose(Perm::S23), Perm::S123);
        assert_eq!(Perm::S23.compose(Perm::S12), Perm::S132);
        assert_eq!(Perm::S12.compose(Perm::S23).compose(Perm::S12), Perm::S13);
        assert_eq!(Perm::S23.compose(Perm::S12).compose(Perm::S23), Perm::S13);
        assert_eq!(Perm::S123.inverse(), Perm::S132);
        for g in Perm::ALL {
            for h in Perm::ALL {
                let t = [0, 1, 2];
                assert_eq!(g.compose(h).act(t), g.act(h.act(t)));
            }
        }
        assert_eq!(Perm::S123.act([10, 20, 30]), [30, 10, 20]);
    }
}
