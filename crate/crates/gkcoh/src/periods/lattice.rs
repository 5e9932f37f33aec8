use std::f64::consts::PI;

use num_complex::Complex64;

use super::CurveQ;
use crate::error::{Error, Result};

/// `Omega_1` real and `Omega_2 = i omega2_im` generating `Lambda ∩ R` and `Lambda ∩ iR`.
///
/// When the discriminant is negative the lattice is not rectangular and these two
/// span a sublattice of index 2 (`lattice_index`). Quasi-periods belong to the same
/// two periods, so `Omega_2 eta_1 - Omega_1 eta_2 = 2 pi i * lattice_index`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PeriodPair {
    pub omega1: f64,
    pub omega2_im: f64,
    pub eta1: f64,
    pub eta2_im: f64,
    pub lattice_index: u8,
    pub legendre_residual: f64,
}

impl PeriodPair {
    pub fn omega2(&self) -> Complex64 {
        Complex64::new(0.0, self.omega2_im)
    }

    /// `Omega_1 / Omega_2`.
    pub fn tau(&self) -> Complex64 {
        Complex64::new(self.omega1, 0.0) / self.omega2()
    }
}

fn agm(a: f64, b: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    for _ in 0..200 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a.abs() {
            return Ok(a);
        }
        (a, b) = ((a + b) / 2.0, (a * b).sqrt());
    }
    Err(Error::NumericFailure("AGM did not converge".into()))
}

/// Real roots of `4x^3 + b2 x^2 + 2 b4 x + b6`, descending, polished by Newton steps.
fn real_roots(b2: f64, b4: f64, b6: f64) -> Vec<f64> {
    let (a, b, c) = (b2 / 4.0, b4 / 2.0, b6 / 4.0);
    let f = |x: f64| ((x + a) * x + b) * x + c;
    let df = |x: f64| (3.0 * x + 2.0 * a) * x + b;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = q * q / 4.0 + p * p * p / 27.0;
    let mut roots = if disc < 0.0 {
        let r = (-p / 3.0).sqrt();
        let phi = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0).acos();
        (0..3).map(|k| 2.0 * r * ((phi + 2.0 * PI * k as f64) / 3.0).cos() - a / 3.0).collect::<Vec<_>>()
    } else {
        let s = disc.sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt() - a / 3.0]
    };
    for x in &mut roots {
        for _ in 0..4 {
            let d = df(*x);
            if d != 0.0 {
                *x -= f(*x) / d;
            }
        }
    }
    roots.sort_by(|u, v| v.total_cmp(u));
    roots
}

/// `E2(tau) = 1 - 24 sum n q^n / (1 - q^n)`.
fn e2(tau: Complex64) -> Result<Complex64> {
    if tau.im <= 0.0 {
        return Err(Error::NumericFailure("E2 outside the upper half plane".into()));
    }
    let q = (Complex64::i() * 2.0 * PI * tau).exp();
    let mut s = Complex64::new(0.0, 0.0);
    let mut qn = q;
    for n in 1..1_000_000u64 {
        let term = qn * n as f64 / (1.0 - qn);
        s += term;
        if term.norm() < 1e-18 * s.norm().max(1.0) {
            return Ok(1.0 - 24.0 * s);
        }
        qn *= q;
    }
    Err(Error::NumericFailure("E2 series did not converge".into()))
}

/// Quasi-period of `w` for the lattice with oriented basis `(w, partner)`.
fn quasi_period(w: Complex64, partner: Complex64) -> Result<Complex64> {
    Ok(PI * PI * e2(partner / w)? / (3.0 * w))
}

/// Periods of the invariant differential `dx / (2y + a1 x + a3)`.
pub fn periods_agm(e: &CurveQ, precision_bits: u32) -> Result<PeriodPair> {
    let (b2, b4, b6, _) = e.b_invariants();
    let (b2, b4, b6) = (b2 as f64, b4 as f64, b6 as f64);
    let i = Complex64::i();
    let (omega1, omega2_im, eta1, eta2, index) = if e.discriminant() > 0 {
        let r = real_roots(b2, b4, b6);
        if r.len() != 3 {
            return Err(Error::NumericFailure("expected three real roots".into()));
        }
        let (e1, e2r, e3) = (r[0], r[1], r[2]);
        let w1 = PI / agm((e1 - e3).sqrt(), (e1 - e2r).sqrt())?;
        let w2 = PI / agm((e1 - e3).sqrt(), (e2r - e3).sqrt())?;
        let (o1, o2) = (Complex64::new(w1, 0.0), i * w2);
        (w1, w2, quasi_period(o1, o2)?, quasi_period(o2, -o1)?, 1u8)
    } else {
        let e1 = real_roots(b2, b4, b6)[0];
        let a = 3.0 * e1 + b2 / 4.0;
        let b = (3.0 * e1 * e1 + b2 * e1 / 2.0 + b4 / 2.0).sqrt();
        let w1 = 2.0 * PI / agm(2.0 * b.sqrt(), (2.0 * b + a).sqrt())?;
        let w2 = 2.0 * PI / agm(2.0 * b.sqrt(), (2.0 * b - a).sqrt())?;
        let (o1, o2) = (Complex64::new(w1, 0.0), i * w2);
        let half = (o2 - o1) / 2.0;
        let eta1 = quasi_period(o1, half)?;
        let eta_half = quasi_period(half, -o1)?;
        (w1, w2, eta1, 2.0 * eta_half + eta1, 2u8)
    };
    let o2 = i * omega2_im;
    let legendre = o2 * eta1 - omega1 * eta2 - 2.0 * PI * i * index as f64;
    let residual = legendre.norm();
    let tol = 2f64.powf(-(precision_bits.min(52) as f64) / 2.0);
    if residual > tol || !omega1.is_finite() || !omega2_im.is_finite() {
        return Err(Error::NumericFailure(format!("Legendre residual {residual:e} above {tol:e}")));
    }
    Ok(PeriodPair { omega1, omega2_im, eta1: eta1.re, eta2_im: eta2.im, lattice_index: index, legendre_residual: residual })
}
