//! Fusion rings, data files, pentagon and hexagon checks.

mod common;

use common::*;
use fullfield::error::Error;
use fullfield::exact::{Value, C64};
use fullfield::fusion::{
    charge_conjugation, quantum_dimensions, validate_fusion_ring, verlinde_fusion_from_s, FusionRing, Real, Violation,
};
use fullfield::io::constexpr::parse_const;
use fullfield::io::format::{parse_category_file, serialize_category};
use fullfield::symbols::{hexagon_check, pentagon_check, triv_f_coef_check, FData, FKey, RKey};
use nalgebra::DMatrix;
use num::rational::Rational64;

fn zero() -> Real {
    Real::Exact(Rational64::from_integer(0))
}

#[test]
fn bundled_rings_validate() {
    for n in BUNDLED {
        assert!(validate_fusion_ring(&cat(n).ring).is_empty(), "{}", n);
    }
}

#[test]
fn ising_ring_missing_channel_breaks_associativity() {
    let mut ring = cat("ising").ring;
    let s = ring.label("sigma").unwrap();
    let p = ring.label("eps").unwrap();
    ring.set_n(s, s, p, 0);
    let rep = validate_fusion_ring(&ring);
    // Σ_x N_σσ^x N_xε^ε = 1 while Σ_y N_σε^y N_σy^ε = 0
    assert!(rep.violations.contains(&Violation::Associativity { a: s, b: s, c: p, d: p, lhs: 1, rhs: 0 }));
    // both sides of the (σ,σ,σ,σ) instance still count only the unit channel
    assert!(!rep.violations.iter().any(|v| matches!(v, Violation::Associativity { a, b, c, d, .. } if [*a, *b, *c, *d] == [s; 4])));
}

#[test]
fn trivial_ring_report_empty() {
    let mut r = FusionRing::new(&["e"], 0, vec![0], vec![zero()], zero());
    r.set_n(0, 0, 0, 1);
    assert!(validate_fusion_ring(&r).is_empty());
    assert_eq!(quantum_dimensions(&r).unwrap(), vec![1.0]);
    assert_eq!(charge_conjugation(&r), DMatrix::from_element(1, 1, 1.0));
}

#[test]
fn quantum_dimensions_match_quadratics() {
    let d = quantum_dimensions(&cat("fibonacci").ring).unwrap();
    // d^2 = 1 + d
    assert!((d[1] - phi()).abs() < 1e-12);
    let d = quantum_dimensions(&cat("ising").ring).unwrap();
    // d_sigma^2 = 2
    assert!((d[2] - 2f64.sqrt()).abs() < 1e-12);
    assert!((d[1] - 1.0).abs() < 1e-12);
    for n in BUNDLED {
        let r = cat(n).ring;
        let d = quantum_dimensions(&r).unwrap();
        for a in 0..r.rank() {
            assert!((d[a] - d[r.dual[a]]).abs() < 1e-12);
            for b in 0..r.rank() {
                let s: f64 = (0..r.rank()).map(|x| r.n(a, b, x) as f64 * d[x]).sum();
                assert!((d[a] * d[b] - s).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn charge_conjugation_z3() {
    let mut r = FusionRing::new(&["0", "1", "2"], 0, vec![0, 2, 1], vec![zero(); 3], zero());
    for a in 0..3 {
        for b in 0..3 {
            r.set_n(a, b, (a + b) % 3, 1);
        }
    }
    assert!(validate_fusion_ring(&r).is_empty());
    let c = charge_conjugation(&r);
    let want = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
    assert_eq!(c, want);
    assert_eq!(&c * &c, DMatrix::identity(3, 3));
    assert_eq!(charge_conjugation(&cat("ising").ring), DMatrix::identity(3, 3));
}

#[test]
fn verlinde_round_trip_and_rejection() {
    let (n, res) = verlinde_fusion_from_s(&DMatrix::from_element(1, 1, c(1.0, 0.0)), 1e-9).unwrap();
    assert_eq!((n, res), (vec![1], 0.0));
    let r = cat("ising").ring;
    let (n, res) = verlinde_fusion_from_s(&ising_s(), 1e-9).unwrap();
    assert!(res < 1e-9);
    for a in 0..3 {
        for b in 0..3 {
            for x in 0..3 {
                assert_eq!(n[(a * 3 + b) * 3 + x], r.n(a, b, x));
            }
        }
    }
    // a unitary with no fusion-ring structure: a generic rotation
    let (t, u) = (0.3f64, 0.7f64);
    let rx = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, t.cos(), -t.sin(), 0.0, t.sin(), t.cos()]);
    let rz = DMatrix::from_row_slice(3, 3, &[u.cos(), -u.sin(), 0.0, u.sin(), u.cos(), 0.0, 0.0, 0.0, 1.0]);
    let q = (&rz * &rx * &rz).map(|x| c(x, 0.0));
    assert!(q.iter().all(|z| z.norm() > 0.05));
    assert!(matches!(verlinde_fusion_from_s(&q, 1e-9), Err(Error::NotFusionCompatible(r)) if r > 1e-3));
}

#[test]
fn parse_bundled_files() {
    let t = cat("trivial");
    assert_eq!(t.ring.rank(), 1);
    let i = cat("ising");
    assert_eq!(i.ring.rank(), 3);
    let h: Vec<Real> = i.ring.weights.clone();
    assert_eq!(h, vec![Real::Exact(Rational64::new(0, 1)), Real::Exact(Rational64::new(1, 2)), Real::Exact(Rational64::new(1, 16))]);
    assert_eq!(i.ring.central_charge, Real::Exact(Rational64::new(1, 2)));
}

#[test]
fn constexpr_sqrt_of_negative() {
    let v = parse_const("sqrt(-2)/2").unwrap();
    assert!((v.c() - c(0.0, 1.0 / 2f64.sqrt())).norm() < 1e-15);
    assert!(v.is_exact());
}

#[test]
fn bundled_round_trip() {
    for n in BUNDLED {
        let a = cat(n);
        let text = serialize_category(&a);
        let b = parse_category_file(text.as_bytes()).unwrap();
        assert_eq!(a.f, b.f, "{}", n);
        assert_eq!(a.r, b.r, "{}", n);
        assert_eq!(a.ring.weights, b.ring.weights);
        assert_eq!(a.ring.central_charge, b.ring.central_charge);
        assert_eq!(serialize_category(&b), text);
        // one entry per line
        assert!(text.lines().filter(|l| l.contains("\"labels\":[")).count() >= a.f.len());
    }
}

#[test]
fn pentagon_hexagon_bundled() {
    for n in BUNDLED {
        let c = cat(n);
        assert!(pentagon_check(&c).unwrap() < 1e-12, "{}", n);
        assert!(hexagon_check(&c).unwrap() < 1e-12, "{}", n);
        let fd = FData::new(&c).unwrap();
        assert_eq!(triv_f_coef_check(&c, &fd).0, Some(true), "{}", n);
    }
    assert_eq!(pentagon_check(&cat("trivial")).unwrap(), 0.0);
    assert_eq!(hexagon_check(&cat("trivial")).unwrap(), 0.0);
    // Ising F and R are all exact, so the pentagon sums are exact
    assert_eq!(pentagon_check(&cat("ising")).unwrap(), 0.0);
}

#[test]
fn fibonacci_negated_entry_breaks_pentagon() {
    let mut c = cat("fibonacci");
    let t = c.ring.label("t").unwrap();
    let key = FKey { labels: [t, t, t, t, t, t], mults: [0; 4] };
    let v = c.f.get(&key).unwrap().neg();
    c.f.insert(key, v);
    assert!(pentagon_check(&c).unwrap() > 0.1);
}

#[test]
fn ising_conjugated_r_breaks_hexagon() {
    let mut c = cat("ising");
    let (e, s) = (c.ring.label("e").unwrap(), c.ring.label("sigma").unwrap());
    let key = RKey { labels: [s, s, e], mults: [0; 2] };
    let v = c.r.get(&key).unwrap().conj();
    c.r.insert(key, v);
    assert!(hexagon_check(&c).unwrap() > 0.1);
}

#[test]
fn missing_f_entry_is_reported() {
    let mut c = cat("fibonacci");
    let t = c.ring.label("t").unwrap();
    c.f.remove(&FKey { labels: [t, t, t, t, t, t], mults: [0; 4] });
    assert!(matches!(FData::new(&c), Err(Error::Incomplete(_))));
    assert!(matches!(pentagon_check(&c), Err(Error::Incomplete(_))));
}

#[test]
fn inadmissible_key_rejected() {
    let mut c = cat("ising");
    let (e, p) = (c.ring.label("e").unwrap(), c.ring.label("eps").unwrap());
    // e ⊗ e does not contain eps
    c.f.insert(FKey { labels: [e, e, e, p, e, e], mults: [0; 4] }, Value::one());
    assert!(matches!(FData::new(&c), Err(Error::Inadmissible(_))));
}

#[test]
fn float_values_are_approximate() {
    let v = parse_const("0.5 + 0.25").unwrap();
    assert!(matches!(v, Value::Float(z) if z == C64::new(0.75, 0.0)));
}
