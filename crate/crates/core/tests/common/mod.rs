#![allow(dead_code)]

use fullfield::cli::load_category;
use fullfield::exact::C64;
use fullfield::symbols::{CategoryData, SymbolData};
use nalgebra::DMatrix;

pub fn cat(name: &str) -> CategoryData {
    load_category(name).unwrap()
}

pub fn sd(name: &str) -> SymbolData {
    SymbolData::new(cat(name)).unwrap()
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn phi() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Ising S in the order (e, eps, sigma), written out from the standard formula.
pub fn ising_s() -> DMatrix<C64> {
    let r = 2f64.sqrt();
    DMatrix::from_row_slice(3, 3, &[1.0, 1.0, r, 1.0, 1.0, -r, r, -r, 0.0]).map(|x| c(x / 2.0, 0.0))
}

/// Fibonacci S in the order (e, t).
pub fn fibonacci_s() -> DMatrix<C64> {
    let p = phi();
    let n = (2.0 + p).sqrt();
    DMatrix::from_row_slice(2, 2, &[1.0, p, p, -1.0]).map(|x| c(x / n, 0.0))
}

pub const BUNDLED: [&str; 3] = ["trivial", "ising", "fibonacci"];
