//! Exponential-derivation coefficients, truncated q-series characters and
//! their modular transforms.
//!
//! Fractional powers are taken on the branch `q^r = e^{2πirτ}`; conjugate
//! series use `e^{-2πir·conj(τ)}`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num::bigint::BigInt;
use num::rational::{BigRational, Rational64};
use num::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::C64;
use crate::full_field::{is_diagonal, FullFieldAlgebraSpec};
use crate::fusion::FusionRing;

/// Coefficient ring for the formal exponential of a derivation.
pub trait Coeff: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, r: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, r: &BigRational) -> Self {
        self * r
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Polynomial in `w = 2πi` with rational coefficients, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WPoly(pub BTreeMap<u32, BigRational>);

impl WPoly {
    pub fn monomial(c: BigRational, k: u32) -> Self {
        let mut m = BTreeMap::new();
        if !Zero::is_zero(&c) {
            m.insert(k, c);
        }
        WPoly(m)
    }

    /// Numeric value at `w = 2πi`.
    pub fn eval(&self) -> C64 {
        let w = C64::new(0.0, 2.0 * std::f64::consts::PI);
        self.0.iter().map(|(k, c)| w.powu(*k) * c.to_f64().unwrap_or(f64::NAN)).sum()
    }
}

impl Coeff for WPoly {
    fn zero() -> Self {
        WPoly::default()
    }
    fn one() -> Self {
        WPoly::monomial(One::one(), 0)
    }
    fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            let v = m.remove(k).unwrap_or_else(<BigRational as Zero>::zero) + c;
            if !Zero::is_zero(&v) {
                m.insert(*k, v);
            }
        }
        WPoly(m)
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = WPoly::default();
        for (i, a) in &self.0 {
            for (j, b) in &o.0 {
                out = out.add(&WPoly::monomial(a * b, i + j));
            }
        }
        out
    }
    fn scale(&self, r: &BigRational) -> Self {
        if Zero::is_zero(r) {
            return WPoly::default();
        }
        WPoly(self.0.iter().map(|(k, c)| (*k, c * r)).collect())
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `exp(Σ_j c_j y^{j+1} ∂_y) y` through degree `deg`; entry `m` is the `y^m` coefficient
/// and `c[0]` is `c_1`.
pub fn exp_derivation_on_y<T: Coeff>(c: &[T], deg: usize) -> Vec<T> {
    let mut term = vec![T::zero(); deg + 1];
    if deg >= 1 {
        term[1] = T::one();
    }
    let mut total = term.clone();
    for k in 1..deg {
        // D(y^m) = m Σ_j c_j y^{m+j}
        let mut next = vec![T::zero(); deg + 1];
        for m in 1..=deg {
            if term[m].is_zero() {
                continue;
            }
            let tm = term[m].scale(&rat(m as i64, 1));
            for (j, cj) in c.iter().enumerate() {
                let d = m + j + 1;
                if d > deg {
                    break;
                }
                next[d] = next[d].add(&tm.mul(cj));
            }
        }
        let inv = rat(1, k as i64);
        term = next.iter().map(|t| t.scale(&inv)).collect();
        if term.iter().all(|t| t.is_zero()) {
            break;
        }
        for m in 0..=deg {
            total[m] = total[m].add(&term[m]);
        }
    }
    total
}

/// Solve `exp(Σ c_j y^{j+1}∂_y) y = target` degree by degree.
///
/// With `g_k = D^k y / k!`, the degree-`d` coefficient of `g_k` only needs lower
/// coefficients of `g_{k-1}`, and `c_n` enters degree `n+1` only through `g_1`
/// with coefficient 1, so each step adds one new degree to every `g_k`.
fn solve_coeffs<T: Coeff>(order: usize, target: &[T]) -> Vec<T> {
    let mut c: Vec<T> = Vec::with_capacity(order);
    // h[k][d] = d·g[k][d]
    let mut h: Vec<Vec<T>> = vec![vec![T::zero(), T::one()]];
    for n in 1..=order {
        let d = n + 1;
        let mut total = T::zero();
        let mut fresh = Vec::with_capacity(n);
        for k in 1..=n {
            let mut acc = T::zero();
            for m in 1..d.min(h[k - 1].len()) {
                let j = d - m;
                if j > c.len() || h[k - 1][m].is_zero() {
                    continue;
                }
                acc = acc.add(&h[k - 1][m].mul(&c[j - 1]));
            }
            let v = acc.scale(&rat(1, k as i64));
            total = total.add(&v);
            fresh.push(v);
        }
        let cn = target[d].add(&total.scale(&rat(-1, 1)));
        fresh[0] = fresh[0].add(&cn);
        h.push(Vec::new());
        for (k, v) in fresh.into_iter().enumerate() {
            let k = k + 1;
            h[k].resize(d, T::zero());
            h[k].push(v.scale(&rat(d as i64, 1)));
        }
        c.push(cn);
    }
    c
}

/// `log(1+y)` through degree `deg`.
pub fn log1p_series(deg: usize) -> Vec<BigRational> {
    (0..=deg).map(|m| if m == 0 { <BigRational as Zero>::zero() } else { rat(if m % 2 == 1 { 1 } else { -1 }, m as i64) }).collect()
}

/// `B_1, …, B_order` with `exp(Σ B_j y^{j+1}∂_y) y = log(1+y)`.
pub fn compute_b_coeffs(order: usize) -> Vec<BigRational> {
    solve_coeffs(order, &log1p_series(order + 1))
}

/// `A_1, …, A_order` as polynomials in `w = 2πi`, from
/// `exp(Σ A_j y^{j+1}∂_y) y = w⁻¹ log(1 + w y)`.
pub fn compute_a_coeffs(order: usize) -> Vec<WPoly> {
    let target: Vec<WPoly> = log1p_series(order + 1)
        .into_iter()
        .enumerate()
        .map(|(m, c)| if m == 0 { WPoly::default() } else { WPoly::monomial(c, m as u32 - 1) })
        .collect();
    solve_coeffs(order, &target)
}

/// Coefficients of `exp(Σ B_j y^{j+1}∂_y) y − log(1+y)` through `deg`.
pub fn b_roundtrip_residual(deg: usize) -> Vec<BigRational> {
    let b = compute_b_coeffs(deg.saturating_sub(1).max(1));
    let got = exp_derivation_on_y(&b, deg);
    got.iter().zip(log1p_series(deg)).map(|(g, t)| g - t).collect()
}

/// Indices `j` (1-based) where `A_j ≠ (2πi)^j B_j` as polynomials.
pub fn a_b_mismatches(a: &[WPoly], b: &[BigRational]) -> Vec<usize> {
    (0..a.len().min(b.len())).filter(|&i| a[i] != WPoly::monomial(b[i].clone(), i as u32 + 1)).map(|i| i + 1).collect()
}

/// `Σ_{n < trunc} coeffs[n] q^{offset+n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    pub offset: Rational64,
    pub coeffs: Vec<BigRational>,
    pub trunc: usize,
}

fn int_part(r: Rational64) -> Option<usize> {
    if r.is_integer() && *r.numer() >= 0 {
        Some(*r.numer() as usize)
    } else {
        None
    }
}

impl QSeries {
    pub fn new(offset: Rational64, coeffs: Vec<BigRational>) -> Self {
        let trunc = coeffs.len();
        QSeries { offset, coeffs, trunc }
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(<BigRational as Zero>::zero)
    }

    /// Product; truncation is the smaller of the two.
    pub fn mul(&self, o: &QSeries) -> QSeries {
        let trunc = self.trunc.min(o.trunc);
        let mut coeffs = vec![<BigRational as Zero>::zero(); trunc];
        for (i, a) in self.coeffs.iter().enumerate().take(trunc) {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(trunc - i) {
                coeffs[i + j] += a * b;
            }
        }
        QSeries { offset: self.offset + o.offset, coeffs, trunc }
    }

    /// Sum of series whose offsets differ by an integer.
    pub fn add(&self, o: &QSeries) -> Result<QSeries> {
        let (lo, hi) = if self.offset <= o.offset { (self, o) } else { (o, self) };
        let shift = int_part(hi.offset - lo.offset)
            .ok_or_else(|| Error::Domain("offsets differ by a non-integer".into()))?;
        let trunc = lo.trunc.min(hi.trunc + shift);
        let mut coeffs: Vec<BigRational> = (0..trunc).map(|n| lo.coeff(n)).collect();
        for n in shift..trunc {
            coeffs[n] += hi.coeff(n - shift);
        }
        Ok(QSeries { offset: lo.offset, coeffs, trunc })
    }

    pub fn truncate(&self, n: usize) -> QSeries {
        let trunc = self.trunc.min(n);
        QSeries { offset: self.offset, coeffs: self.coeffs.iter().take(trunc).cloned().collect(), trunc }
    }
}

/// Value of a truncated series with an estimate of the neglected tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: C64,
    pub tail: f64,
}

fn qpow(r: f64, tau: C64) -> C64 {
    (C64::new(0.0, 2.0 * std::f64::consts::PI * r) * tau).exp()
}

/// Evaluate at `τ` with `q^r = e^{2πirτ}`.
pub fn eval_qseries(s: &QSeries, tau: C64) -> Result<Evaluation> {
    if tau.im <= 0.0 {
        return Err(Error::Domain(format!("Im tau must be positive, got {}", tau.im)));
    }
    let off = s.offset.to_f64().unwrap_or(f64::NAN);
    let q = qpow(1.0, tau);
    let mut value = C64::zero();
    let mut qn = qpow(off, tau);
    let c: Vec<f64> = s.coeffs.iter().take(s.trunc).map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    for x in &c {
        value += qn * *x;
        qn *= q;
    }
    Ok(Evaluation { value, tail: tail_bound(&c, q.norm(), qn.norm()) })
}

/// Geometric tail bound: with growth ratio `ρ` over the last ten coefficients,
/// the tail is at most `|c_last| |q^{offset+N}| ρ / (1 − ρ|q|)` (infinite if `ρ|q| ≥ 1`).
fn tail_bound(c: &[f64], qabs: f64, next_qabs: f64) -> f64 {
    let n = c.len();
    if n == 0 {
        return f64::INFINITY;
    }
    let k = n.min(11);
    let window = &c[n - k..];
    let mut rho: f64 = 0.0;
    for w in window.windows(2) {
        if w[0] != 0.0 {
            rho = rho.max((w[1] / w[0]).abs());
        } else if w[1] != 0.0 {
            rho = rho.max(2.0);
        }
    }
    let last = window.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if last == 0.0 {
        return 0.0;
    }
    let rho = rho.max(1.0);
    if rho * qabs >= 1.0 {
        return f64::INFINITY;
    }
    last * next_qabs * rho / (1.0 - rho * qabs)
}

fn prod_one_pm(deg: usize, sign: i64, odd: bool) -> Vec<BigInt> {
    // ∏_{n≥1} (1 + sign·x^{k_n}) with k_n = 2n−1 (odd) or n, through x^deg
    let mut p = vec![BigInt::zero(); deg + 1];
    p[0] = BigInt::one();
    let mut n = 1;
    loop {
        let k = if odd { 2 * n - 1 } else { n };
        if k > deg {
            break;
        }
        for i in (k..=deg).rev() {
            let t = &p[i - k] * sign;
            p[i] += t;
        }
        n += 1;
    }
    p
}

fn big(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Ising characters `(χ_e, χ_ε, χ_σ)` truncated to `order` terms each.
pub fn free_fermion_characters(order: usize) -> Vec<(String, QSeries)> {
    // work in x = q^{1/2}
    let deg = 2 * order + 1;
    let plus = prod_one_pm(deg, 1, true);
    let minus = prod_one_pm(deg, -1, true);
    let two = BigInt::from(2);
    let even: Vec<BigRational> = (0..order).map(|k| big(&((&plus[2 * k] + &minus[2 * k]) / &two))).collect();
    let oddc: Vec<BigRational> = (0..order).map(|k| big(&((&plus[2 * k + 1] - &minus[2 * k + 1]) / &two))).collect();
    let sig: Vec<BigRational> = prod_one_pm(order.saturating_sub(1), 1, false).iter().map(big).collect();
    vec![
        ("e".to_string(), QSeries::new(Rational64::new(-1, 48), even)),
        ("eps".to_string(), QSeries::new(Rational64::new(1, 2) - Rational64::new(1, 48), oddc)),
        ("sigma".to_string(), QSeries::new(Rational64::new(1, 24), sig)),
    ]
}

/// `h_a − c/24` for every label, exact when the ring data is.
pub fn expected_offsets(ring: &FusionRing) -> Vec<Option<Rational64>> {
    let c = ring.central_charge.exact();
    (0..ring.rank()).map(|a| Some(ring.weights[a].exact()? - c? / 24)).collect()
}

/// Order loaded characters by label id, checking each offset against `h − c/24`.
pub fn load_characters(ring: &FusionRing, data: &[(String, QSeries)]) -> Result<Vec<QSeries>> {
    let want = expected_offsets(ring);
    let mut out: Vec<Option<QSeries>> = vec![None; ring.rank()];
    for (name, s) in data {
        let a = ring.label(name)?;
        let ok = match want[a] {
            Some(w) => w == s.offset,
            None => (ring.h(a) - ring.c() / 24.0 - s.offset.to_f64().unwrap_or(f64::NAN)).abs() < 1e-12,
        };
        if !ok {
            return Err(Error::Inconsistent(format!(
                "character of '{}' has offset {} but h - c/24 = {}",
                name,
                s.offset,
                want[a].map(|w| w.to_string()).unwrap_or_else(|| format!("{}", ring.h(a) - ring.c() / 24.0))
            )));
        }
        out[a] = Some(s.clone());
    }
    out.into_iter()
        .enumerate()
        .map(|(a, s)| s.ok_or_else(|| Error::Incomplete(format!("character of '{}'", ring.name(a)))))
        .collect()
}

fn eval_all(chars: &[QSeries], tau: C64) -> Result<Vec<C64>> {
    chars.iter().map(|s| eval_qseries(s, tau).map(|e| e.value)).collect()
}

/// `max_a |χ_a(−1/τ) − Σ_b S_ab χ_b(τ)|`.
pub fn s_transform_residual(chars: &[QSeries], s: &DMatrix<C64>, tau: C64) -> Result<f64> {
    let x = eval_all(chars, tau)?;
    let y = eval_all(chars, -tau.inv())?;
    let mut worst: f64 = 0.0;
    for a in 0..chars.len() {
        let mut sum = C64::zero();
        for b in 0..chars.len() {
            sum += s[(a, b)] * x[b];
        }
        worst = worst.max((y[a] - sum).norm());
    }
    Ok(worst)
}

/// Numeric `max_a |χ_a(τ+1) − e^{2πi(h_a − c/24)} χ_a(τ)|`.
pub fn t_transform_residual(chars: &[QSeries], ring: &FusionRing, tau: C64) -> Result<f64> {
    let x = eval_all(chars, tau)?;
    let y = eval_all(chars, tau + 1.0)?;
    let mut worst: f64 = 0.0;
    for a in 0..chars.len() {
        let ph = qpow(ring.h(a) - ring.c() / 24.0, C64::new(1.0, 0.0));
        worst = worst.max((y[a] - ph * x[a]).norm());
    }
    Ok(worst)
}

/// Termwise T check: every term `q^{offset+n}` picks up `e^{2πi(offset+n)}`, so the
/// defect against `e^{2πi(h_a − c/24)}` is `offset − (h_a − c/24)` mod 1.
pub fn t_termwise_defects(chars: &[QSeries], ring: &FusionRing) -> Result<Vec<Rational64>> {
    let want = expected_offsets(ring);
    chars
        .iter()
        .enumerate()
        .map(|(a, s)| {
            let w = want[a].ok_or_else(|| Error::Unsupported("termwise check needs exact weights".into()))?;
            let d = s.offset - w;
            Ok(d - d.floor())
        })
        .collect()
}

/// Least-squares `S` from `χ(−1/τ_k) = S χ(τ_k)` over the sample points.
pub fn fit_s_matrix(chars: &[QSeries], taus: &[C64]) -> Result<(DMatrix<C64>, f64)> {
    let k = chars.len();
    if taus.len() < k {
        return Err(Error::Domain("need at least as many sample points as characters".into()));
    }
    let mut x = DMatrix::<C64>::zeros(taus.len(), k);
    let mut y = DMatrix::<C64>::zeros(taus.len(), k);
    for (r, t) in taus.iter().enumerate() {
        let a = eval_all(chars, *t)?;
        let b = eval_all(chars, -t.inv())?;
        for c in 0..k {
            x[(r, c)] = a[c];
            y[(r, c)] = b[c];
        }
    }
    let svd = x.clone().svd(true, true);
    let sv = &svd.singular_values;
    let cond = sv.max() / sv.min();
    if !cond.is_finite() || cond > 1e12 {
        return Err(Error::Singular(format!("sample matrix condition number {:.3e}", cond)));
    }
    // X Sᵀ = Y
    let st = svd.solve(&y, 0.0).map_err(|e| Error::Singular(e.to_string()))?;
    let s = st.transpose();
    let fit = (&x * &st - &y).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    Ok((s, fit))
}

/// Default sample points for the transform fit.
pub fn default_fit_points() -> Vec<C64> {
    [(0.0, 1.0), (0.3, 0.8), (-0.25, 0.9), (0.1, 1.3), (-0.4, 1.1), (0.45, 1.0)]
        .iter()
        .map(|&(r, i)| C64::new(r, i))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionReport {
    pub z: C64,
    /// `|Z(−1/τ) − Z(τ)|`
    pub s_residual: f64,
    /// `|Z(τ+1) − Z(τ)|`
    pub t_residual: f64,
    /// every sector has `offset^L − offset^R ∈ ℤ`
    pub t_termwise_exact: bool,
}

fn z_at(ffa: &FullFieldAlgebraSpec, l: &[QSeries], r: &[QSeries], tau: C64) -> Result<C64> {
    let mut z = C64::zero();
    for &(a, b) in &ffa.sectors {
        let x = eval_qseries(&l[a], tau)?.value;
        let y = eval_qseries(&r[b], tau)?.value;
        z += x * y.conj();
    }
    Ok(z)
}

/// Torus partition function `Z = Σ_n χ_{r^L(n)} conj(χ_{r^R(n)})` for diagonal `d`.
pub fn partition_function(ffa: &FullFieldAlgebraSpec, left: &[QSeries], right: &[QSeries], tau: C64) -> Result<PartitionReport> {
    if !is_diagonal(ffa) {
        return Err(Error::Unsupported("non-diagonal d is not supported at character level".into()));
    }
    let z = z_at(ffa, left, right, tau)?;
    let zs = z_at(ffa, left, right, -tau.inv())?;
    let zt = z_at(ffa, left, right, tau + 1.0)?;
    let t_termwise_exact = ffa.sectors.iter().all(|&(a, b)| (left[a].offset - right[b].offset).is_integer());
    Ok(PartitionReport { z, s_residual: (zs - z).norm(), t_residual: (zt - z).norm(), t_termwise_exact })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_b_coeffs() {
        let b = compute_b_coeffs(3);
        assert_eq!(b[0], rat(-1, 2));
        assert_eq!(b[1], rat(1, 12));
    }

    #[test]
    fn first_a_coeffs_numeric() {
        let a = compute_a_coeffs(2);
        let pi = std::f64::consts::PI;
        assert!((a[0].eval() - C64::new(0.0, -pi)).norm() < 1e-12);
        assert!((a[1].eval() - C64::new(-pi * pi / 3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn ising_leading_terms() {
        let ch = free_fermion_characters(6);
        assert_eq!(ch[0].1.coeff(0), rat(1, 1));
        assert_eq!(ch[1].1.offset, Rational64::new(23, 48));
        assert_eq!(ch[1].1.coeff(0), rat(1, 1));
        assert_eq!(ch[2].1.offset, Rational64::new(1, 24));
        // brute-force expansion of (1/2)(∏(1+x^{2n-1}) - ∏(1-x^{2n-1})) = x + x^3 + x^5 + x^7 + 2x^9 + ...
        let odd: Vec<i64> = (0..5).map(|k| ch[1].1.coeff(k).to_integer().to_i64().unwrap()).collect();
        assert_eq!(odd, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn eval_simple() {
        let one = QSeries::new(Rational64::from_integer(0), vec![rat(1, 1)]);
        let v = eval_qseries(&one, C64::new(0.0, 1.0)).unwrap();
        assert!((v.value - C64::new(1.0, 0.0)).norm() < 1e-15);
        let q = QSeries::new(Rational64::from_integer(1), vec![rat(1, 1)]);
        let v = eval_qseries(&q, C64::new(0.0, 1.0)).unwrap();
        assert!((v.value.re - (-2.0 * std::f64::consts::PI).exp()).abs() < 1e-16);
        assert!(matches!(eval_qseries(&q, C64::new(0.0, 0.0)), Err(Error::Domain(_))));
    }
}
