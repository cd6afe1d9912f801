//! Randomized invariants.

mod common;

use std::collections::HashMap;

use common::*;
use fullfield::cli::{load_category, parse_tau};
use fullfield::exact::{Polar, Value};
use fullfield::full_field::{build_diagonal_ffa, check_s_invariance, check_t_invariance, BasisChoice};
use fullfield::fusion::Real;
use fullfield::io::constexpr::parse_const;
use fullfield::qseries::{free_fermion_characters, load_characters, t_transform_residual, QSeries};
use nalgebra::DMatrix;
use num::bigint::BigInt;
use num::rational::{BigRational, Rational64};
use proptest::prelude::*;

fn br(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn polar() -> impl Strategy<Value = Polar> {
    (1i64..50, 1i64..20, 0i64..24, 1i64..24).prop_map(|(a, b, t, u)| Polar { modsq: br(a, b), turn: br(t % u, u) })
}

proptest! {
    #[test]
    fn exact_mul_div_round_trip(x in polar(), y in polar()) {
        let (a, b) = (Value::Exact(x), Value::Exact(y));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a.clone());
        prop_assert!((a.mul(&b).c() - a.c() * b.c()).norm() < 1e-9);
    }

    #[test]
    fn exact_display_parses_back(x in polar()) {
        let v = Value::Exact(x);
        let text = v.to_string();
        let back = parse_const(&text).unwrap();
        prop_assert!((back.c() - v.c()).norm() < 1e-12, "{}", text);
        prop_assert!(back.is_exact(), "{}", text);
        prop_assert_eq!(back, v);
    }

    #[test]
    fn t_defect_is_periodic(n in -200i64..200, d in 1i64..30, k in -5i64..5) {
        let c = Rational64::new(n, d);
        let a = check_t_invariance(Real::Exact(c), Real::Exact(Rational64::new(1, 2)));
        let b = check_t_invariance(Real::Exact(c + 24 * k), Real::Exact(Rational64::new(1, 2)));
        prop_assert_eq!(&a, &b);
        if let Real::Exact(x) = a.defect {
            prop_assert!(x >= Rational64::from_integer(0) && x < Rational64::from_integer(24));
        }
    }

    #[test]
    fn series_product_truncates_at_shorter(xs in prop::collection::vec(-5i64..5, 1..12), ys in prop::collection::vec(-5i64..5, 1..12)) {
        let a = QSeries::new(Rational64::new(1, 3), xs.iter().map(|&v| br(v, 1)).collect());
        let b = QSeries::new(Rational64::new(-1, 7), ys.iter().map(|&v| br(v, 1)).collect());
        let p = a.mul(&b);
        let m = xs.len().min(ys.len());
        prop_assert_eq!(p.trunc, m);
        prop_assert_eq!(p.offset, Rational64::new(1, 3) - Rational64::new(1, 7));
        for k in 0..m {
            let want: i64 = (0..=k).map(|i| xs[i] * ys[k - i]).sum();
            prop_assert_eq!(p.coeff(k), br(want, 1));
        }
    }

    #[test]
    fn tau_literal_round_trip(re in -3.0f64..3.0, im in 0.01f64..5.0) {
        let z = parse_tau(&format!("{}+{}i", re, im)).unwrap();
        prop_assert_eq!((z.re, z.im), (re, im));
        let z = parse_tau(&format!("{}-{}i", re, im)).unwrap();
        prop_assert_eq!((z.re, z.im), (re, -im));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn characters_obey_t(re in -2.0f64..2.0, im in 0.5f64..2.0) {
        let cat = load_category("ising").unwrap();
        let ch = load_characters(&cat.ring, &free_fermion_characters(200)).unwrap();
        prop_assert!(t_transform_residual(&ch, &cat.ring, c(re, im)).unwrap() < 1e-12);
    }

    #[test]
    fn basis_rescaling_is_covariant(r1 in 0.2f64..5.0, t1 in 0.0f64..6.3, r2 in 0.2f64..5.0, t2 in 0.0f64..6.3) {
        let s = sd("ising");
        let (e, eps, sigma) = (0, 1, 2);
        let l1 = c(r1 * t1.cos(), r1 * t1.sin());
        let l2 = c(r2 * t2.cos(), r2 * t2.sin());
        let mut custom = HashMap::new();
        custom.insert((e, sigma, sigma), DMatrix::from_element(1, 1, l1));
        custom.insert((e, eps, eps), DMatrix::from_element(1, 1, l2));
        let mut f = build_diagonal_ffa(&s);
        f.left_basis = BasisChoice::Custom(custom);
        for (k, v) in f.d.iter_mut() {
            match (f.sectors[k.m].0, f.sectors[k.n].0, f.sectors[k.l].0) {
                (m, n, l) if (m, n, l) == (e, sigma, sigma) => *v /= l1,
                (m, n, l) if (m, n, l) == (e, eps, eps) => *v /= l2,
                _ => {}
            }
        }
        prop_assert!(check_s_invariance(&f, &s, &s).unwrap() < 1e-10);
    }
}
