//! Verification suites built from the library checks.

use gkcoh::error::Error;
use gkcoh::exact::{qi, rat, z8, NFElem, NumberField};
use gkcoh::gkcomplex::{
    check_recurrence, cup3_complex, delta_s_complex, psi_intertwine_check, pv_check, pv_check_scaled, CharC, PhiVec,
    WeightPair,
};
use gkcoh::gkreal::{cocycle_c1_real, cocycle_check_real, cup2_report, Sign};
use gkcoh::local::{
    gauss_product_prediction, gauss_sum, twisted_local_integral, ComplexVal, LocalChar, NewformKind, SatakeData,
};
use gkcoh::periods::appendix_a_check;
use gkcoh::quat::{delta_k, invariant_vector, torus_eval, v4, vk_basis, Iota, QuaternionAlgebra};
use gkcoh::rep::VkDual;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{Check, SuiteReport};

fn report(name: &str, checks: Vec<Check>) -> SuiteReport {
    SuiteReport { suite: name.into(), checks, wall_time_ms: None }
}

pub fn gk_real(k: usize) -> SuiteReport {
    let mut checks = Vec::new();
    for (sign, tag) in [(Sign::Plus, "+"), (Sign::Minus, "-")] {
        let c1 = cocycle_c1_real(k, sign);
        let cocycle = c1.as_ref().map(cocycle_check_real).unwrap_or(false);
        checks.push(Check::from_result(&format!("c1-closed-form{tag}"), "real cocycle closed form", c1, |_| {
            (true, format!("k = {k}: direct c1(H^) equals the closed form"))
        }));
        checks.push(Check::new(&format!("cocycle-identity{tag}"), "real cocycle condition", cocycle, format!("k = {k}")));
    }
    let cup = cup2_report(k);
    let (closed, avg) = match &cup {
        Ok(r) => (r.closed_form_holds(), r.same_sign_average_holds()),
        Err(_) => (false, false),
    };
    checks.push(Check::from_result("cup-closed-form", "cup product at a real place", cup, |_| {
        (closed, format!("k = {k}"))
    }));
    checks.push(Check::new("cup-rotation-average", "cup product as a K-average", avg, format!("k = {k}, -8i (ds+ (x) ds+)")));
    report("gk-real", checks)
}

fn random_mu(rng: &mut ChaCha8Rng, k: usize) -> VkDual {
    let coeffs = (0..=k)
        .map(|_| {
            let a = z8::frac(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            let b = z8::frac(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            &a + &(&b * &z8::i())
        })
        .collect();
    VkDual { coeffs }
}

pub fn gk_complex(k_id: usize, k_c: usize, seed: u64) -> SuiteReport {
    let k = match WeightPair::new(k_id, k_c) {
        Ok(k) => k,
        Err(e) => return report("gk-complex", vec![Check::new("weights", "weight pair", false, e.to_string())]),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let chi = k.chi();
    let mut count = 0;
    let rec: Result<(), Error> = (|| {
        for c in [CharC::new(2, 0), CharC::new(3, 1), CharC::new(4, 0), CharC::new(4, 2), chi] {
            for n in c.lambda.abs()..=5 {
                for _ in 0..2 {
                    check_recurrence(&PhiVec::single(c, n, random_mu(&mut rng, 2 * n as usize))?)?;
                    count += 1;
                }
            }
        }
        Ok(())
    })();
    checks.push(Check::from_result("h-recurrence", "H^ on phi_n(mu) against coordinates", rec, |_| {
        (true, format!("{count} random vectors"))
    }));

    let n_max = chi.n + 3;
    checks.push(Check::new(
        "psi-intertwines",
        "psi intertwines H^",
        psi_intertwine_check(k_id, k_c, n_max),
        format!("levels up to {n_max}"),
    ));

    let ds: Result<(), Error> = (0..k.dim()).try_for_each(|i| delta_s_complex(&k.basis(i), k).map(|_| ()));
    checks.push(Check::from_result("delta-s-closed-form", "delta s closed form", ds, |_| {
        (true, format!("{} basis tensors", k.dim()))
    }));

    checks.push(Check::from_result("pv-relation", "H^*c1 - i c2 is a coboundary", pv_check(k), |r| {
        let zero = r.difference.iter().flatten().all(NFElem::is_zero);
        (r.c1_n1_expected && r.c1_relations, format!("difference identically zero: {zero}"))
    }));
    let perturbed = pv_check_scaled(k, &z8::int(2));
    checks.push(Check::new(
        "pv-negative-control",
        "H^*c1 - i c2 is a coboundary",
        matches!(perturbed, Err(Error::PVCheckFailed(_))),
        "c2 scaled by 2 must have no primitive",
    ));

    if (k_id, k_c) == (2, 2) {
        checks.push(Check::from_result("triple-cup", "triple cup as a Haar average", cup3_complex(k), |r| {
            (r.cup == r.haar && r.cup == r.reduced, format!("{} blocks", r.cup.blocks.len()))
        }));
    } else {
        checks.push(Check::skip("triple-cup", "triple cup as a Haar average", "run only at weight (2,2)"));
    }
    report("gk-complex", checks)
}

fn sqrt_field(a: i64) -> Option<NFElem> {
    if a == -1 {
        return Some(NFElem::generator(&qi()));
    }
    let r = (a.unsigned_abs() as f64).sqrt().round() as i64;
    if a >= 0 && r * r == a {
        return None;
    }
    let f = NumberField::with_conjugation(vec![rat(-a), rat(0), rat(1)], "s", Some(vec![rat(0), rat(-1)])).ok()?;
    Some(NFElem::generator(&f))
}

pub fn quat_invariants(a: i64, b: i64, k_max: i64) -> SuiteReport {
    let q = gkcoh::exact::q();
    let setup = QuaternionAlgebra::new(NFElem::from_int(&q, a), NFElem::from_int(&q, b)).and_then(|alg| {
        let s = sqrt_field(a).ok_or_else(|| Error::MissingRoot(format!("{a} is a square")))?;
        let io = Iota::new(&alg, s)?;
        Ok((alg, io))
    });
    let (alg, io) = match setup {
        Ok(x) => x,
        Err(e) => return report("quat-invariants", vec![Check::new("algebra", "quaternion algebra", false, e.to_string())]),
    };
    let field = io.target().clone();
    let mut checks = Vec::new();
    checks.push(Check::from_result("delta4-v4", "v4 is harmonic", delta_k(&v4(&alg)), |d| {
        (d.is_zero(), format!("(a, b) = ({a}, {b})"))
    }));
    let v2 = invariant_vector(&alg, 2, &io).and_then(|v| torus_eval(&v, &io));
    checks.push(Check::from_result("torus-v2", "torus value of v2", v2, |f| {
        let want = io.sqrt_a() * &NFElem::from_int(&field, 2);
        (f.is_constant() && f.coeff(0) == want, format!("f = {}", f.coeff(0)))
    }));
    let v4v = invariant_vector(&alg, 4, &io).and_then(|v| torus_eval(&v, &io));
    checks.push(Check::from_result("torus-v4", "torus value of v4", v4v, |f| {
        let want = NFElem::from_int(&field, -12 * b);
        (f.is_constant() && f.coeff(0) == want, format!("f = {} (-12b)", f.coeff(0)))
    }));
    for k in (2..=k_max).step_by(2) {
        checks.push(Check::from_result(&format!("invariant-unique-{k}"), "torus-invariant vector is unique", invariant_vector(&alg, k, &io), |_| {
            (true, format!("k = {k}"))
        }));
        checks.push(Check::from_result(&format!("dim-vk-{k}"), "dim V_k = k + 1", vk_basis(&alg, k), |v| {
            (v.len() == k as usize + 1, format!("dim = {}", v.len()))
        }));
    }
    report("quat-invariants", checks)
}

pub fn gauss(p: u64, n: u32, count: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let run: Result<(), Error> = (|| {
        for _ in 0..count {
            let chi = LocalChar::random_primitive(p, n, &mut rng)?;
            let y = -(n as i64);
            let g = gauss_sum(&chi, y)? * gauss_sum(&chi.inverse(), y)?;
            worst = worst.max((g - gauss_product_prediction(&chi)).norm());
        }
        Ok(())
    })();
    let check = Check::from_result("gauss-product", "Gauss sum product", run, |_| {
        (worst < 1e-9, format!("p = {p}, n = {n}, {count} characters, max error {worst:.2e}"))
    });
    report("gauss", vec![check])
}

pub fn whittaker(primes: &[u64], seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for &p in primes {
        for (kind, name) in [
            (NewformKind::Spherical, "spherical"),
            (NewformKind::Steinberg, "steinberg"),
            (NewformKind::Supercuspidal, "supercuspidal"),
        ] {
            let alpha = ComplexVal::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::PI));
            let data = SatakeData { kind, p, alpha };
            let mut worst = 0.0f64;
            let run: Result<(), Error> = (|| {
                for n in 0..=2 {
                    let rho = LocalChar::random_primitive(p, n, &mut rng)?;
                    let r = twisted_local_integral(&data, &rho, 60)?;
                    worst = worst.max((r.lhs - r.rhs).norm());
                }
                Ok(())
            })();
            checks.push(Check::from_result(&format!("twisted-integral-{name}-{p}"), "twisted local Whittaker integral", run, |_| {
                (worst < 1e-10, format!("conductor exponents 0..=2, max error {worst:.2e}"))
            }));
        }
    }
    report("whittaker", checks)
}

pub fn appendix_a(samples: usize, seed: u64) -> SuiteReport {
    let r = appendix_a_check(samples, seed);
    let tol = gkcoh::periods::APPENDIX_TOL;
    let checks = vec![
        Check::new("delta2-det", "determinant of delta_2", r.delta2_det_err < tol && r.delta2_closed_form_err < tol, r.log[0].clone()),
        Check::new("det3-block", "3x3 determinant at a complex place", r.det3_rel_err < tol, r.log[2].clone()),
        Check::new("conj-e12", "delta conjugation of e12", r.conj_e12, "symbolic over Q(i)(t, tau, taubar)"),
        Check::new("conj-e21", "delta conjugation of e21", r.conj_e21, "symbolic over Q(i)(t, tau, taubar)"),
        Check::new("conj-h-sigma", "delta conjugation onto H_sigma", r.conj_h_twisted, "image of diag(i, -i)"),
    ];
    report("appendix-a", checks)
}

/// Smallest-weight run of every suite.
pub fn all(seed: u64) -> Vec<SuiteReport> {
    use rayon::prelude::*;
    let jobs: Vec<Box<dyn Fn() -> SuiteReport + Send + Sync>> = vec![
        Box::new(|| gk_real(2)),
        Box::new(move || gk_complex(2, 2, seed)),
        Box::new(|| quat_invariants(-1, -1, 6)),
        Box::new(move || gauss(5, 2, 10, seed)),
        Box::new(move || whittaker(&[5], seed)),
        Box::new(move || appendix_a(20, seed)),
    ];
    jobs.par_iter().map(|j| j()).collect()
}
