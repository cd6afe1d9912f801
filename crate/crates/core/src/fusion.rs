//! Labels, fusion rings and their structural checks, plus the Verlinde oracle.

use std::fmt;

use nalgebra::DMatrix;
use num::rational::Rational64;
use num::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::C64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    pub id: usize,
    pub name: String,
}

/// A real number kept exact when the input allows it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Real {
    Exact(Rational64),
    Approx(f64),
}

impl Real {
    pub fn f64(&self) -> f64 {
        match self {
            Real::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Real::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<Rational64> {
        match self {
            Real::Exact(r) => Some(*r),
            Real::Approx(_) => None,
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) => write!(f, "{}", r),
            Real::Approx(x) => write!(f, "{:?}", x),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FusionRing {
    pub labels: Vec<Label>,
    pub unit: usize,
    pub dual: Vec<usize>,
    n: Vec<u32>,
    pub weights: Vec<Real>,
    pub central_charge: Real,
}

impl FusionRing {
    /// Ring with all fusion coefficients zero; fill with [`FusionRing::set_n`].
    pub fn new(names: &[&str], unit: usize, dual: Vec<usize>, weights: Vec<Real>, central_charge: Real) -> Self {
        let k = names.len();
        let labels = names.iter().enumerate().map(|(id, n)| Label { id, name: n.to_string() }).collect();
        FusionRing { labels, unit, dual, n: vec![0; k * k * k], weights, central_charge }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        let k = self.rank();
        (a * k + b) * k + c
    }

    /// N_{ab}^c
    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        self.n[self.idx(a, b, c)]
    }

    pub fn set_n(&mut self, a: usize, b: usize, c: usize, v: u32) {
        let i = self.idx(a, b, c);
        self.n[i] = v;
    }

    pub fn h(&self, a: usize) -> f64 {
        self.weights[a].f64()
    }

    pub fn c(&self) -> f64 {
        self.central_charge.f64()
    }

    /// True when some weight or the central charge is a float.
    pub fn approximate_mode(&self) -> bool {
        self.weights.iter().any(|w| matches!(w, Real::Approx(_))) || matches!(self.central_charge, Real::Approx(_))
    }

    pub fn label(&self, name: &str) -> Result<usize> {
        self.labels.iter().position(|l| l.name == name).ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn name(&self, a: usize) -> &str {
        &self.labels[a].name
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.n.iter().all(|&v| v <= 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    DualNotInvolution { a: usize },
    UnitNotSelfDual,
    UnitLeft { a: usize, b: usize },
    DualPairing { a: usize, b: usize },
    Associativity { a: usize, b: usize, c: usize, d: usize, lhs: u32, rhs: u32 },
    WeightNotDualInvariant { a: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DualNotInvolution { a } => write!(f, "dual(dual({})) != {}", a, a),
            Violation::UnitNotSelfDual => write!(f, "dual(e) != e"),
            Violation::UnitLeft { a, b } => write!(f, "N_(e,{})^{} != delta", a, b),
            Violation::DualPairing { a, b } => write!(f, "N_({},{})^e != delta_(b,a')", a, b),
            Violation::Associativity { a, b, c, d, lhs, rhs } => {
                write!(f, "associativity fails at ({},{},{},{}): {} != {}", a, b, c, d, lhs, rhs)
            }
            Violation::WeightNotDualInvariant { a } => write!(f, "h_{} != h_{}'", a, a),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_fusion_ring(ring: &FusionRing) -> ValidationReport {
    let k = ring.rank();
    let e = ring.unit;
    let mut v = Vec::new();
    for a in 0..k {
        if ring.dual[ring.dual[a]] != a {
            v.push(Violation::DualNotInvolution { a });
        }
    }
    if ring.dual[e] != e {
        v.push(Violation::UnitNotSelfDual);
    }
    for a in 0..k {
        for b in 0..k {
            if ring.n(e, a, b) != (a == b) as u32 {
                v.push(Violation::UnitLeft { a, b });
            }
            if ring.n(a, b, e) != (b == ring.dual[a]) as u32 {
                v.push(Violation::DualPairing { a, b });
            }
        }
    }
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for d in 0..k {
                    let lhs: u32 = (0..k).map(|x| ring.n(a, b, x) * ring.n(x, c, d)).sum();
                    let rhs: u32 = (0..k).map(|y| ring.n(b, c, y) * ring.n(a, y, d)).sum();
                    if lhs != rhs {
                        v.push(Violation::Associativity { a, b, c, d, lhs, rhs });
                    }
                }
            }
        }
    }
    for a in 0..k {
        let ad = ring.dual[a];
        let same = match (ring.weights[a], ring.weights[ad]) {
            (Real::Exact(x), Real::Exact(y)) => x == y,
            (x, y) => (x.f64() - y.f64()).abs() < 1e-12,
        };
        if !same {
            v.push(Violation::WeightNotDualInvariant { a });
        }
    }
    ValidationReport { violations: v }
}

/// Perron–Frobenius dimensions by power iteration on the sum of fusion matrices.
pub fn quantum_dimensions(ring: &FusionRing) -> Result<Vec<f64>> {
    let k = ring.rank();
    let mut m = DMatrix::<f64>::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                m[(b, c)] += ring.n(a, b, c) as f64;
            }
        }
    }
    // shift by the identity so that periodic components die out
    let m = m + DMatrix::<f64>::identity(k, k);
    let mut v = nalgebra::DVector::<f64>::from_element(k, 1.0);
    let mut prev = v.clone();
    for _ in 0..10_000 {
        let w = &m * &v;
        let norm = w.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NoConvergence("degenerate fusion matrix".into()));
        }
        v = w / norm;
        if (&v - &prev).amax() < 1e-15 {
            let e = v[ring.unit];
            return Ok(v.iter().map(|x| x / e).collect());
        }
        prev = v.clone();
    }
    Err(Error::NoConvergence("eigenvector iteration exceeded 10000 steps".into()))
}

/// Fusion tensor from the Verlinde formula, with the largest rounding residual.
/// The unit is assumed to be index 0. Entry `(a, b, c)` is at `(a*k + b)*k + c`.
pub fn verlinde_fusion_from_s(s: &DMatrix<C64>, tol: f64) -> Result<(Vec<u32>, f64)> {
    let k = s.nrows();
    if s.ncols() != k || k == 0 {
        return Err(Error::Domain("S must be square and nonempty".into()));
    }
    if s.clone().try_inverse().is_none() {
        return Err(Error::Singular("S is not invertible".into()));
    }
    let mut out = vec![0u32; k * k * k];
    let mut resid: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let mut sum = C64::zero();
                for x in 0..k {
                    if s[(0, x)].norm() == 0.0 {
                        return Err(Error::Domain("first row of S has a zero entry".into()));
                    }
                    sum += s[(a, x)] * s[(b, x)] * s[(c, x)].conj() / s[(0, x)];
                }
                let r = sum.re.round();
                resid = resid.max((sum - C64::new(r, 0.0)).norm());
                out[(a * k + b) * k + c] = if r < 0.0 { u32::MAX } else { r as u32 };
                if r < 0.0 {
                    resid = resid.max(1.0);
                }
            }
        }
    }
    if resid > tol {
        return Err(Error::NotFusionCompatible(resid));
    }
    Ok((out, resid))
}

/// C_{ab} = delta_{a,b'}
pub fn charge_conjugation(ring: &FusionRing) -> DMatrix<f64> {
    let k = ring.rank();
    DMatrix::from_fn(k, k, |a, b| if ring.dual[b] == a { 1.0 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> Real {
        Real::Exact(Rational64::from_integer(n))
    }

    #[test]
    fn ising_ring_and_corruption() {
        let mut r = FusionRing::new(&["e", "eps", "sigma"], 0, vec![0, 1, 2], vec![z(0), z(0), z(0)], z(0));
        let (e, p, s) = (0, 1, 2);
        for a in 0..3 {
            r.set_n(e, a, a, 1);
            r.set_n(a, e, a, 1);
        }
        r.set_n(p, p, e, 1);
        r.set_n(p, s, s, 1);
        r.set_n(s, p, s, 1);
        r.set_n(s, s, e, 1);
        r.set_n(s, s, p, 1);
        assert!(validate_fusion_ring(&r).is_empty());
        r.set_n(s, s, p, 0);
        let rep = validate_fusion_ring(&r);
        // (σσ)εε reaches e only, σ(σε)ε = σσε needs the removed channel
        assert!(rep.violations.contains(&Violation::Associativity { a: s, b: s, c: p, d: p, lhs: 1, rhs: 0 }));
        assert!(!rep.violations.iter().any(|v| matches!(v, Violation::Associativity { a: 2, b: 2, c: 2, d: 2, .. })));
    }
}
