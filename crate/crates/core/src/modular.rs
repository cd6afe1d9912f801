//! One-point S-matrices, the α and β matrices on two-point genus-one spaces,
//! and the identities relating them.

use nalgebra::{DMatrix, RowDVector};
use num::One;

use crate::error::{Error, Result};
use crate::exact::C64;
use crate::symbols::{Lin, Perm, SymbolData, Vertex};

/// Basis element 𝒴_{a3 a1; p}^{a1} of the one-point space with insertion a3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OnePointIndex {
    pub insertion: usize,
    pub channel: usize,
    pub mult: usize,
}

/// Basis element `(𝒴_{a a1; p}^{a1}, 𝒴_{a2 a2'; q}^{a})` of the two-point space for `a2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TwoPointIndex {
    pub middle: usize,
    pub channel: usize,
    pub p: usize,
    pub q: usize,
}

#[derive(Clone, Debug)]
pub struct SMatrix {
    pub insertion: usize,
    pub basis: Vec<OnePointIndex>,
    pub entries: DMatrix<C64>,
}

impl SMatrix {
    pub fn index(&self, channel: usize, mult: usize) -> Option<usize> {
        self.basis.iter().position(|b| b.channel == channel && b.mult == mult)
    }
}

fn phase(turns: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * turns)
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Ordered by channel id, then multiplicity.
pub fn one_point_basis(sd: &SymbolData, a3: usize) -> Vec<OnePointIndex> {
    let mut out = Vec::new();
    for a1 in 0..sd.ring().rank() {
        for p in 0..sd.ring().n(a3, a1, a1) as usize {
            out.push(OnePointIndex { insertion: a3, channel: a1, mult: p });
        }
    }
    out
}

/// Ordered by channel, middle label, then `p`, `q`.
pub fn two_point_basis(sd: &SymbolData, a2: usize) -> Vec<TwoPointIndex> {
    let k = sd.ring().rank();
    let a2d = sd.dual(a2);
    let mut out = Vec::new();
    for a1 in 0..k {
        for a in 0..k {
            for p in 0..sd.ring().n(a, a1, a1) as usize {
                for q in 0..sd.ring().n(a2, a2d, a) as usize {
                    out.push(TwoPointIndex { middle: a, channel: a1, p, q });
                }
            }
        }
    }
    out
}

fn single(v: Vertex) -> Lin {
    vec![(v, C64::one())]
}

/// Unnormalized S entries: the formula without the `S_e^e` factor.
fn s_raw(sd: &SymbolData, a3: usize) -> Result<(Vec<OnePointIndex>, DMatrix<C64>)> {
    let basis = one_point_basis(sd, a3);
    let n = basis.len();
    let e = sd.e();
    let mut s = DMatrix::<C64>::zeros(n, n);
    for (i, bi) in basis.iter().enumerate() {
        let a1 = bi.channel;
        let x1 = sd.sigma_action(Perm::S12, &Vertex::new(a3, a1, a1, bi.mult))?;
        for (j, bj) in basis.iter().enumerate() {
            let a2 = bj.channel;
            let a2d = sd.dual(a2);
            let dual = sd.dual_element(a3, a2, a2, bj.mult)?;
            let x2 = sd.sigma_lin(Perm::S132, &dual)?;
            let blk = sd.fdata.block(a1, a2d, a2, a1)?;
            let v = sd.prod_vec(blk, &x1, &x2)?;
            let w = v * sd.braiding_squared_inverse(a1, a2d, a2, a1)?;
            let t = blk
                .row(Vertex::new(a1, e, a1, 0), Vertex::new(a2d, a2, e, 0))
                .ok_or_else(|| Error::Inadmissible("unit product element".into()))?;
            let (f3, f1, f2) = (sd.fa_factor(a3).0, sd.fa_factor(a1).0, sd.fa_factor(a2).0);
            s[(i, j)] = f3 / (f1 * f2) * w[t];
        }
    }
    Ok((basis, s))
}

/// `S_e^e`, fixed by `S(e)² = C` with the vacuum column made positive.
pub fn s_ee(sd: &SymbolData) -> Result<C64> {
    let (basis, s0) = s_raw(sd, sd.e())?;
    let sq = &s0 * &s0;
    let ie = basis.iter().position(|b| b.channel == sd.e()).expect("vacuum channel");
    let ss = sq[(ie, ie)];
    if ss.norm() < 1e-14 {
        return Err(Error::Degenerate("S_e^e normalization is undetermined (S² vanishes at the vacuum)".into()));
    }
    let mut see = C64::one() / ss.sqrt();
    if (see * s0[(ie, ie)]).re < 0.0 {
        see = -see;
    }
    Ok(see)
}

pub fn s_matrix(sd: &SymbolData, a3: usize) -> Result<SMatrix> {
    let see = s_ee(sd)?;
    let (basis, s) = s_raw(sd, a3)?;
    Ok(SMatrix { insertion: a3, basis, entries: s * see })
}

/// Inverse of `s_matrix(a3)` and the residual `‖S·S⁻¹ − I‖_max`.
pub fn s_inverse(sd: &SymbolData, a3: usize) -> Result<(SMatrix, f64)> {
    let s = s_matrix(sd, a3)?;
    let n = s.entries.nrows();
    if n == 0 {
        return Ok((s, 0.0));
    }
    let sv = s.entries.clone().svd(false, false).singular_values;
    let (mx, mn) = sv.iter().fold((0.0f64, f64::INFINITY), |(a, b), &x| (a.max(x), b.min(x)));
    if mn == 0.0 || mx / mn > 1e12 {
        return Err(Error::Singular(format!("S matrix condition number {:.3e}", mx / mn)));
    }
    let inv = s.entries.clone().try_inverse().ok_or_else(|| Error::Singular("S matrix".into()))?;
    let resid = max_abs(&(&s.entries * &inv - DMatrix::<C64>::identity(n, n)));
    Ok((SMatrix { insertion: a3, basis: s.basis, entries: inv }, resid))
}

/// Matrix expressing `P(σ₁₂ 𝒴_{a a1;p}^{a1}, σ₁₂ 𝒴_{a2 a2';q}^{a})` in the
/// product basis of block `(a1, a2', a2, a1)`, one row per two-point index.
fn alpha_frame(sd: &SymbolData, a2: usize, a1: usize, idx: &[TwoPointIndex]) -> Result<DMatrix<C64>> {
    let a2d = sd.dual(a2);
    let blk = sd.fdata.block(a1, a2d, a2, a1)?;
    let mut m = DMatrix::<C64>::zeros(idx.len(), blk.rows.len());
    for (r, t) in idx.iter().enumerate() {
        let x1 = sd.sigma_action(Perm::S12, &Vertex::new(t.middle, a1, a1, t.p))?;
        let x2 = sd.sigma_action(Perm::S12, &Vertex::new(a2, a2d, t.middle, t.q))?;
        let v = sd.prod_vec(blk, &x1, &x2)?;
        m.set_row(r, &v);
    }
    Ok(m)
}

pub fn alpha_matrix(sd: &SymbolData, a2: usize) -> Result<(Vec<TwoPointIndex>, DMatrix<C64>)> {
    let basis = two_point_basis(sd, a2);
    let n = basis.len();
    let a2d = sd.dual(a2);
    let mut out = DMatrix::<C64>::zeros(n, n);
    let pre = phase(-sd.ring().h(a2));
    for a1 in 0..sd.ring().rank() {
        let pos: Vec<usize> = (0..n).filter(|&i| basis[i].channel == a1).collect();
        if pos.is_empty() {
            continue;
        }
        let idx: Vec<TwoPointIndex> = pos.iter().map(|&i| basis[i]).collect();
        let frame = alpha_frame(sd, a2, a1, &idx)?;
        if frame.nrows() != frame.ncols() {
            return Err(Error::Inconsistent("two-point frame is not square".into()));
        }
        let finv = frame.clone().try_inverse().ok_or_else(|| Error::Singular("σ₁₂-transformed product basis".into()))?;
        let b2 = sd.braiding_squared_inverse(a1, a2d, a2, a1)?;
        let m = &frame * b2 * finv;
        for (r, &i) in pos.iter().enumerate() {
            for (c, &j) in pos.iter().enumerate() {
                out[(i, j)] = pre * m[(r, c)];
            }
        }
    }
    Ok((basis, out))
}

pub fn beta_matrix(sd: &SymbolData, a2: usize) -> Result<(Vec<TwoPointIndex>, DMatrix<C64>)> {
    let basis = two_point_basis(sd, a2);
    let n = basis.len();
    let k = sd.ring().rank();
    let a2d = sd.dual(a2);
    let mut out = DMatrix::<C64>::zeros(n, n);
    let pre = phase(-sd.ring().h(a2));
    for (i, src) in basis.iter().enumerate() {
        let a1 = src.channel;
        let a1d = sd.dual(a1);
        let blk = sd.fdata.block(a1, a2d, a2, a1)?;
        let x1 = sd.sigma_action(Perm::S12, &Vertex::new(src.middle, a1, a1, src.p))?;
        let x2 = sd.sigma_action(Perm::S12, &Vertex::new(a2, a2d, src.middle, src.q))?;
        let iter_coeffs: RowDVector<C64> = sd.prod_vec(blk, &x1, &x2)? * &blk.mat;
        // iterate basis transformed by σ₁₂₃ ⊗ σ₁₃₂, rows (a3, s, t)
        let mut labels = Vec::new();
        let mut tm = DMatrix::<C64>::zeros(blk.cols.len(), blk.cols.len());
        for a3 in 0..k {
            let a3d = sd.dual(a3);
            for w3 in sd.cat.space(a2, a1d, a3d) {
                for w4 in sd.cat.space(a3d, a1, a2) {
                    let r = labels.len();
                    if r >= tm.nrows() {
                        return Err(Error::Inconsistent("transformed iterate basis has the wrong size".into()));
                    }
                    let y3 = sd.sigma_action(Perm::S123, &w3)?;
                    let y4 = sd.sigma_action(Perm::S132, &w4)?;
                    tm.set_row(r, &sd.iter_vec(blk, &y3, &y4)?);
                    labels.push((a3, w3, w4));
                }
            }
        }
        if labels.len() != tm.nrows() {
            return Err(Error::Inconsistent("transformed iterate basis has the wrong size".into()));
        }
        let tinv = tm.try_inverse().ok_or_else(|| Error::Singular("σ-transformed iterate basis".into()))?;
        let f1 = iter_coeffs * tinv;
        for (r, &(a3, w3, w4)) in labels.iter().enumerate() {
            if f1[r].norm() == 0.0 {
                continue;
            }
            let a3d = sd.dual(a3);
            let blk2 = sd.fdata.block(a2, a2d, a3d, a3d)?;
            let y2 = sd.sigma_action(Perm::S123, &w4)?;
            let f2: RowDVector<C64> = sd.prod_vec(blk2, &single(w3), &y2)? * &blk2.mat;
            for (c, &(z3, z4)) in blk2.cols.iter().enumerate() {
                // z3 = 𝒴_{a4 a3'; k}^{a3'}, z4 = 𝒴_{a2 a2'; l}^{a4}
                let a4 = z4.dst;
                let amp = pre * phase(sd.ring().h(a4) / 2.0) * f1[r] * f2[c];
                for (v, kappa) in sd.sigma_action(Perm::S23, &z3)? {
                    let j = basis
                        .iter()
                        .position(|b| b.middle == a4 && b.channel == a3 && b.p == v.mult && b.q == z4.mult)
                        .ok_or_else(|| Error::Inconsistent("β target outside the two-point basis".into()))?;
                    out[(i, j)] += amp * kappa;
                }
            }
        }
    }
    Ok((basis, out))
}

/// S on the two-point space of `a2`: `S^{(a)}` on the first factor, identity on `q`.
fn s_two_point(sd: &SymbolData, basis: &[TwoPointIndex]) -> Result<DMatrix<C64>> {
    let n = basis.len();
    let mut out = DMatrix::<C64>::zeros(n, n);
    let mut cache = std::collections::HashMap::new();
    for (i, bi) in basis.iter().enumerate() {
        if !cache.contains_key(&bi.middle) {
            cache.insert(bi.middle, s_matrix(sd, bi.middle)?);
        }
        let s = &cache[&bi.middle];
        let si = s.index(bi.channel, bi.p).expect("one-point index");
        for (j, bj) in basis.iter().enumerate() {
            if bj.middle == bi.middle && bj.q == bi.q {
                let sj = s.index(bj.channel, bj.p).expect("one-point index");
                out[(i, j)] = s.entries[(si, sj)];
            }
        }
    }
    Ok(out)
}

/// `‖α S − S β‖_max` on the two-point space of `a2`, i.e. the operator
/// identity `S∘α = β∘S` written for row-convention matrices.
pub fn check_salpha_betas(sd: &SymbolData, a2: usize) -> Result<f64> {
    let (basis, alpha) = alpha_matrix(sd, a2)?;
    let (_, beta) = beta_matrix(sd, a2)?;
    let s = s_two_point(sd, &basis)?;
    Ok(max_abs(&(&alpha * &s - &s * &beta)))
}

/// Block-diagonal change of basis from the dual elements of the one-point
/// basis of `a3` to the canonical one-point basis of `a3'`.
pub fn dual_one_point_frame(sd: &SymbolData, a3: usize) -> Result<DMatrix<C64>> {
    let a3d = sd.dual(a3);
    let target = one_point_basis(sd, a3d);
    let n = target.len();
    let mut d = DMatrix::<C64>::zeros(n, n);
    for (i, t) in target.iter().enumerate() {
        // t.channel = a2', element 𝒴'_{t.mult} of the dual basis of (a3, a2; a2)
        let a2 = sd.dual(t.channel);
        for (v, c) in sd.dual_element(a3, a2, a2, t.mult)? {
            let j = target.iter().position(|u| u.channel == v.src2 && u.mult == v.mult).expect("dual target");
            d[(i, j)] = c;
        }
    }
    Ok(d)
}

/// `S(𝒴'_{a3'a2';r}; 𝒴'_{a3'a1';p}) = S(𝒴_{a3a1;p}; 𝒴_{a3a2;r})`, max deviation.
pub fn check_symmetry(sd: &SymbolData, a3: usize) -> Result<f64> {
    let s = s_matrix(sd, a3)?;
    let sd3 = s_matrix(sd, sd.dual(a3))?;
    let d = dual_one_point_frame(sd, a3)?;
    let dinv = d.clone().try_inverse().ok_or_else(|| Error::Singular("dual one-point frame".into()))?;
    let sp = &d * &sd3.entries * dinv;
    let mut worst: f64 = 0.0;
    for (i, bi) in s.basis.iter().enumerate() {
        for (j, bj) in s.basis.iter().enumerate() {
            let r = sd3.index(sd.dual(bj.channel), bj.mult).expect("dual index");
            let c = sd3.index(sd.dual(bi.channel), bi.mult).expect("dual index");
            worst = worst.max((sp[(r, c)] - s.entries[(i, j)]).norm());
        }
    }
    Ok(worst)
}

/// `S(e)[a1][e] = S_e^e / F_{a1}` for every channel.
pub fn check_vacuum_column(sd: &SymbolData) -> Result<f64> {
    let s = s_matrix(sd, sd.e())?;
    let ie = s.index(sd.e(), 0).expect("vacuum");
    let see = s.entries[(ie, ie)];
    let mut worst: f64 = 0.0;
    for (i, b) in s.basis.iter().enumerate() {
        worst = worst.max((s.entries[(i, ie)] - see / sd.fa_factor(b.channel).0).norm());
    }
    Ok(worst)
}

/// `‖S(e)² − C‖_max`.
pub fn check_s_squared(sd: &SymbolData) -> Result<f64> {
    let s = s_matrix(sd, sd.e())?;
    let c = crate::fusion::charge_conjugation(sd.ring()).map(|x| C64::new(x, 0.0));
    Ok(max_abs(&(&s.entries * &s.entries - c)))
}

impl SMatrix {
    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}
