//! S₃ action, F_a factors, pairings, dual bases and braiding moves.

mod common;

use common::*;
use fullfield::error::Error;
use fullfield::exact::{Value, C64};
use fullfield::fusion::quantum_dimensions;
use fullfield::symbols::{principal_sqrt, Perm, RKey, SymbolData, Vertex};
use nalgebra::DMatrix;

fn coeff_of(lin: &[(Vertex, C64)], v: Vertex) -> C64 {
    lin.iter().filter(|(w, _)| *w == v).map(|(_, c)| *c).sum()
}

#[test]
fn unit_vertices_under_generators() {
    for n in BUNDLED {
        let sd = sd(n);
        let e = sd.e();
        for a in 0..sd.ring().rank() {
            let ad = sd.dual(a);
            let img = sd.sigma_action(Perm::S12, &Vertex::new(e, a, a, 0)).unwrap();
            assert_eq!(img.len(), 1);
            assert!((coeff_of(&img, Vertex::new(a, e, a, 0)) - c(1.0, 0.0)).norm() < 1e-12, "{} {}", n, a);
            let img = sd.sigma_action(Perm::S23, &Vertex::new(a, e, a, 0)).unwrap();
            assert!((coeff_of(&img, Vertex::new(a, ad, e, 0)) - c(1.0, 0.0)).norm() < 1e-12, "{} {}", n, a);
        }
    }
}

#[test]
fn sigma23_is_an_involution() {
    for n in BUNDLED {
        let sd = sd(n);
        for t in sd.cat.triples() {
            let (a1, a2, a3) = sd.cat.space_of(t);
            for v in sd.cat.space(a1, a2, a3) {
                let once = sd.sigma_action(Perm::S23, &v).unwrap();
                let twice = sd.sigma_lin(Perm::S23, &once).unwrap();
                assert!((coeff_of(&twice, v) - c(1.0, 0.0)).norm() < 1e-12);
                assert!(twice.iter().filter(|(w, _)| *w != v).all(|(_, z)| z.norm() < 1e-12));
            }
        }
    }
}

#[test]
fn group_law_and_pairing_invariance() {
    for n in BUNDLED {
        let sd = sd(n);
        assert!(sd.group_law_check() < 1e-12, "{}", n);
        assert!(sd.pairing_invariance_check().unwrap() < 1e-12, "{}", n);
        assert!(sd.fcoef2_chain_check().unwrap() < 1e-10, "{}", n);
        assert!(sd.sigma23_residual < 1e-8, "{}", n);
    }
}

#[test]
fn perm_products() {
    // composition of the generators in the row convention used by the action
    assert_eq!(Perm::S12.compose(Perm::S23), Perm::S123);
    assert_eq!(Perm::S23.compose(Perm::S12), Perm::S132);
    for g in Perm::ALL {
        assert_eq!(g.compose(g.inverse()), Perm::Id);
    }
}

#[test]
fn fa_factors() {
    let sd0 = sd("trivial");
    assert_eq!(sd0.fa_factor(0).0, c(1.0, 0.0));
    for n in BUNDLED {
        let s = sd(n);
        assert!((s.fa_factor(s.e()).0 - c(1.0, 0.0)).norm() < 1e-15);
    }
    let fib = sd("fibonacci");
    let d = quantum_dimensions(fib.ring()).unwrap();
    assert!((fib.fa_factor(1).0 - c(1.0 / d[1], 0.0)).norm() < 1e-12);
    let ising = sd("ising");
    assert!((ising.fa_factor(2).0 - c(1.0 / 2f64.sqrt(), 0.0)).norm() < 1e-12);
    let (f, r) = ising.fa_factor(2);
    assert!((r * r - f).norm() < 1e-15);
}

#[test]
fn principal_branch() {
    assert!((principal_sqrt(c(-4.0, 0.0)) - c(0.0, 2.0)).norm() < 1e-15);
    assert!((principal_sqrt(c(0.0, 1.0)) - c(0.5f64.sqrt(), 0.5f64.sqrt())).norm() < 1e-15);
    // arg just below the cut maps near −i·√r, not +i·√r
    let z = principal_sqrt(c(-1.0, -1e-300));
    assert!(z.im < 0.0);
}

#[test]
fn pairings_and_dual_bases() {
    let t = sd("trivial");
    assert!((t.pairing(&Vertex::new(0, 0, 0, 0), &Vertex::new(0, 0, 0, 0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    assert_eq!(t.dual_basis(0, 0, 0).unwrap(), DMatrix::from_element(1, 1, c(1.0, 0.0)));
    for n in BUNDLED {
        let s = sd(n);
        for tr in s.cat.triples() {
            let (a1, a2, a3) = s.cat.space_of(tr);
            let g = s.gram(a1, a2, a3).unwrap();
            assert!(g.determinant().norm() > 1e-10, "{} {:?}", n, tr);
            // ⟨𝒴_i, 𝒴'_j⟩ = δ_ij
            let d = s.dual_basis(a1, a2, a3).unwrap();
            let k = g.nrows();
            let mut worst: f64 = 0.0;
            for i in 0..k {
                for j in 0..k {
                    let yj = s.dual_element(a1, a2, a3, j).unwrap();
                    let mut p = C64::new(0.0, 0.0);
                    for (w, cw) in &yj {
                        p += cw * s.pairing(&Vertex::new(a1, a2, a3, i), w).unwrap();
                    }
                    let want = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((p - c(want, 0.0)).norm());
                }
            }
            assert!(worst < 1e-12, "{} {:?} {}", n, tr, worst);
            assert_eq!(d.nrows(), k);
        }
    }
    // 1×1 block: the dual coefficient is the reciprocal pairing
    let is = sd("ising");
    let (e, sg) = (0, 2);
    let g = is.gram(sg, sg, e).unwrap();
    let d = is.dual_basis(sg, sg, e).unwrap();
    assert!((d[(0, 0)] - c(1.0, 0.0) / g[(0, 0)]).norm() < 1e-14);
    let fib = sd("fibonacci");
    assert_eq!(fib.gram(1, 1, 1).unwrap().shape(), (1, 1));
}

#[test]
fn incompatible_pairing_is_an_error() {
    let s = sd("ising");
    // (e, e; e) against (σ, σ; e) is not a dual pair
    assert!(s.pairing(&Vertex::new(0, 0, 0, 0), &Vertex::new(2, 2, 0, 0)).is_err());
}

#[test]
fn braiding_moves() {
    let t = sd("trivial");
    assert_eq!(t.braiding_move(1, 0, 0, 0, 0).unwrap(), DMatrix::from_element(1, 1, c(1.0, 0.0)));
    let is = sd("ising");
    let b = is.braiding_move(-1, 2, 2, 2, 2).unwrap();
    assert_eq!(b.shape(), (2, 2));
    assert!((b.determinant().norm() - 1.0).abs() < 1e-12);
    for n in BUNDLED {
        let s = sd(n);
        let k = s.ring().rank();
        for a1 in 0..k {
            for a2 in 0..k {
                for a3 in 0..k {
                    for a4 in 0..k {
                        let Ok(bp) = s.braiding_move(1, a1, a2, a3, a4) else { continue };
                        let bm = s.braiding_move(-1, a2, a1, a3, a4).unwrap();
                        let id = DMatrix::<C64>::identity(bp.nrows(), bp.nrows());
                        assert!(max_abs(&(&bp * &bm - &id)) < 1e-12, "{} {:?}", n, (a1, a2, a3, a4));
                    }
                }
            }
        }
    }
    assert!(matches!(is.braiding_move(1, 0, 0, 0, 2), Err(Error::Inadmissible(_)) | Err(Error::Incomplete(_))));
}

#[test]
fn multiplicity_needs_explicit_action() {
    let mut cat = cat("trivial");
    cat.ring.set_n(0, 0, 0, 2);
    cat.r.insert(RKey { labels: [0, 0, 0], mults: [1, 1] }, Value::one());
    assert!(matches!(SymbolData::new(cat), Err(Error::Unsupported(_)) | Err(Error::Incomplete(_))));
}
