//! Acceptance run: one PASS/FAIL line per criterion, with timings.
//! Runs as a plain binary so the summary is always printed.

mod common;

use std::time::{Duration, Instant};

use common::*;
use fullfield::cli::load_category_characters;
use fullfield::full_field::{build_diagonal_ffa, check_s_invariance, check_t_invariance, single_valuedness_check};
use fullfield::fusion::verlinde_fusion_from_s;
use fullfield::modular::{check_s_squared, check_salpha_betas, check_symmetry, s_matrix};
use fullfield::qseries::*;
use fullfield::symbols::{hexagon_check, pentagon_check, triv_f_coef_check, FData};
use num::rational::BigRational;
use num::{BigInt, Zero};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn coefficients() -> Outcome {
    let b = compute_b_coeffs(30);
    let a = compute_a_coeffs(30);
    let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    let twelfth = BigRational::new(BigInt::from(1), BigInt::from(12));
    let first = b[0] == half && b[1] == twelfth;
    let mism = a_b_mismatches(&a, &b).len();
    let rt = b_roundtrip_residual(20).iter().filter(|x| !Zero::is_zero(*x)).count();
    ensure(first && mism == 0 && rt == 0, format!("B_1,B_2 exact {}, A/B mismatches {}, nonzero round-trip terms {}", first, mism, rt))
}

fn data_consistency() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in BUNDLED {
        let cat = cat(name);
        let p = pentagon_check(&cat).map_err(|e| e.to_string())?;
        let h = hexagon_check(&cat).map_err(|e| e.to_string())?;
        let fd = FData::new(&cat).map_err(|e| e.to_string())?;
        let (exact, resid) = triv_f_coef_check(&cat, &fd);
        let norm = match exact {
            Some(v) => v,
            None => resid < 1e-12,
        };
        ok &= p < 1e-12 && h < 1e-12 && norm;
        let mode = if exact.is_some() { "exact" } else { "float" };
        parts.push(format!("{} pent {:.1e} hex {:.1e} norm {} ({})", name, p, h, norm, mode));
    }
    ensure(ok, parts.join("; "))
}

fn s_alpha_beta() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in BUNDLED {
        let s = sd(name);
        for a2 in 0..s.ring().rank() {
            worst = worst.max(check_salpha_betas(&s, a2).map_err(|e| e.to_string())?);
        }
    }
    ensure(worst < 1e-10, format!("max residual {:.1e}", worst))
}

fn s_formula() -> Outcome {
    let s = sd("ising");
    let sm = s_matrix(&s, 0).map_err(|e| e.to_string())?.entries;
    let ch = load_category_characters("ising", &s.cat, None, 400).map_err(|e| e.to_string())?;
    let (fit, fit_resid) = fit_s_matrix(&ch, &default_fit_points()).map_err(|e| e.to_string())?;
    let entry = max_abs(&(&fit - &sm));
    let mut tr: f64 = 0.0;
    for tau in [c(0.0, 1.0), c(0.3, 0.8)] {
        tr = tr.max(s_transform_residual(&ch, &sm, tau).map_err(|e| e.to_string())?);
    }
    let sq = check_s_squared(&s).map_err(|e| e.to_string())?;
    let k = s.ring().rank();
    let verl = match verlinde_fusion_from_s(&sm, 1e-9) {
        Ok((n, _)) => (0..k * k * k).all(|x| n[x] == s.ring().n(x / (k * k), (x / k) % k, x % k)),
        Err(_) => false,
    };
    ensure(
        entry < 1e-8 && tr < 1e-8 && sq < 1e-9 && verl,
        format!("oracle entrywise {:.1e} (fit {:.1e}), transform {:.1e}, S^2=C {:.1e}, Verlinde {}", entry, fit_resid, tr, sq, verl),
    )
}

fn symmetry() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in BUNDLED {
        let s = sd(name);
        for a3 in 0..s.ring().rank() {
            worst = worst.max(check_symmetry(&s, a3).map_err(|e| e.to_string())?);
        }
    }
    ensure(worst < 1e-10, format!("max residual {:.1e}", worst))
}

fn full_field() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for name in BUNDLED {
        let s = sd(name);
        let f = build_diagonal_ffa(&s);
        worst = worst.max(check_s_invariance(&f, &s, &s).map_err(|e| e.to_string())?);
        let cc = s.ring().central_charge;
        ok &= check_t_invariance(cc, cc).pass && single_valuedness_check(&f, &s, &s).is_empty();
    }
    let s = sd("ising");
    let mut bad = build_diagonal_ffa(&s);
    for (k, v) in bad.d.iter_mut() {
        if k.l == 2 && k.n == 2 {
            *v *= 2.0;
        }
    }
    let corrupted = check_s_invariance(&bad, &s, &s).map_err(|e| e.to_string())?;
    ensure(
        ok && worst < 1e-10 && corrupted > 1e-3,
        format!("diagonal residual {:.1e}, T and spin {}, corrupted residual {:.1e}", worst, ok, corrupted),
    )
}

fn partition() -> Outcome {
    let s = sd("ising");
    let ch = load_category_characters("ising", &s.cat, None, 400).map_err(|e| e.to_string())?;
    let f = build_diagonal_ffa(&s);
    let p = partition_function(&f, &ch, &ch, c(0.0, 1.0)).map_err(|e| e.to_string())?;
    // tau = i is a fixed point of tau -> -1/tau, so also look off the axis
    let q = partition_function(&f, &ch, &ch, c(0.3, 0.8)).map_err(|e| e.to_string())?;
    ensure(
        p.s_residual < 1e-8 && q.s_residual < 1e-8 && p.t_termwise_exact,
        format!(
            "|Z(-1/tau)-Z(tau)| {:.1e} at i, {:.1e} at 0.3+0.8i, T termwise exact {}, Z(i) = {:.12}",
            p.s_residual, q.s_residual, p.t_termwise_exact, p.z.re
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 7] = [
        ("coefficient identities", coefficients, Duration::from_secs(1)),
        ("data consistency", data_consistency, Duration::from_secs(1)),
        ("S alpha = beta S", s_alpha_beta, Duration::from_secs(1)),
        ("S-matrix formula", s_formula, Duration::from_secs(5)),
        ("symmetry", symmetry, Duration::from_secs(1)),
        ("diagonal full field algebra", full_field, Duration::from_secs(1)),
        ("character-level invariance", partition, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (n, (name, f, limit)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = f();
        let dt = t0.elapsed();
        let in_time = dt <= *limit;
        let (pass, msg) = match out {
            Ok(m) => (in_time, m),
            Err(m) => (false, m),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {} [{:.3}s / {}s{}]: {}",
            n + 1,
            if pass { "PASS" } else { "FAIL" },
            name,
            dt.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", over time" },
            msg
        );
    }
    if failed > 0 {
        println!("{} criteria failed", failed);
        std::process::exit(1);
    }
}
