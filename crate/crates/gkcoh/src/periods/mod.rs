//! Elliptic curves over `Q`: Hasse coefficients, period lattices, central
//! `L`-values of quadratic twists and rationality detection.
//!
//! Everything numeric runs in `f64` with explicit tail bounds.

mod appendix;
mod lattice;
mod lvalue;

pub use appendix::{appendix_a_check, AppendixReport, APPENDIX_TOL};
pub use lattice::{periods_agm, PeriodPair};
pub use lvalue::{
    functional_equation_sign, lvalue_center, lvalue_center_with, oda_bsd_report, oda_bsd_report_scaled,
    root_number, root_number_twist, terms_needed, twist_search, RationalityReport, TwistSpec,
};

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest coefficient bound accepted by [`ap_table`].
pub const MAX_AP_BOUND: usize = 1_000_000;

/// Integral Weierstrass model `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with a
/// user-supplied conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveQ {
    pub a: [i64; 5],
    pub conductor: u64,
}

/// `(label, [a1, a2, a3, a4, a6], conductor)` for a few rank-zero curves.
pub const STANDARD_CURVES: [(&str, [i64; 5], u64); 6] = [
    ("11a1", [0, -1, 1, -10, -20], 11),
    ("14a1", [1, 0, 1, 4, -6], 14),
    ("15a1", [1, 1, 1, -10, -10], 15),
    ("17a1", [1, -1, 1, -1, -14], 17),
    ("19a1", [0, 1, 1, -9, -15], 19),
    ("37b1", [0, 1, 1, -23, -50], 37),
];

fn ovf() -> Error {
    Error::BadModel("coefficients too large".into())
}

/// `b2, b4, b6, b8, c4, c6, discriminant`.
fn invariants(a: &[i64; 5]) -> Option<[i128; 7]> {
    let [a1, a2, a3, a4, a6] = a.map(i128::from);
    let m = |x: i128, y: i128| x.checked_mul(y);
    let b2 = m(a1, a1)?.checked_add(m(4, a2)?)?;
    let b4 = m(2, a4)?.checked_add(m(a1, a3)?)?;
    let b6 = m(a3, a3)?.checked_add(m(4, a6)?)?;
    let b8 = m(m(a1, a1)?, a6)?
        .checked_add(m(m(4, a2)?, a6)?)?
        .checked_sub(m(m(a1, a3)?, a4)?)?
        .checked_add(m(m(a2, a3)?, a3)?)?
        .checked_sub(m(a4, a4)?)?;
    let c4 = m(b2, b2)?.checked_sub(m(24, b4)?)?;
    let c6 = m(m(m(-1, b2)?, b2)?, b2)?.checked_add(m(m(36, b2)?, b4)?)?.checked_sub(m(216, b6)?)?;
    let disc = m(m(m(-1, b2)?, b2)?, b8)?
        .checked_sub(m(m(m(8, b4)?, b4)?, b4)?)?
        .checked_sub(m(m(27, b6)?, b6)?)?
        .checked_add(m(m(m(9, b2)?, b4)?, b6)?)?;
    Some([b2, b4, b6, b8, c4, c6, disc])
}

impl CurveQ {
    pub fn new(a: [i64; 5], conductor: u64) -> Result<Self> {
        let inv = invariants(&a).ok_or_else(ovf)?;
        if inv[6] == 0 {
            return Err(Error::BadModel("singular model (discriminant 0)".into()));
        }
        if conductor == 0 {
            return Err(Error::BadModel("conductor must be positive".into()));
        }
        Ok(CurveQ { a, conductor })
    }

    /// Parses `"a1,a2,a3,a4,a6"` with an optional trailing `",N=<int>"`. Without
    /// `N` the conductor comes from [`STANDARD_CURVES`].
    pub fn parse(spec: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        let mut conductor = None;
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if let Some(n) = part.strip_prefix("N=") {
                conductor = Some(n.parse::<u64>().map_err(|_| Error::BadModel(format!("bad conductor {n:?}")))?);
            } else {
                coeffs.push(part.parse::<i64>().map_err(|_| Error::BadModel(format!("non-integral coefficient {part:?}")))?);
            }
        }
        let a: [i64; 5] = coeffs
            .try_into()
            .map_err(|v: Vec<i64>| Error::BadModel(format!("expected 5 coefficients, got {}", v.len())))?;
        let conductor = match conductor.or_else(|| lookup_conductor(&a)) {
            Some(n) => n,
            None => {
                invariants(&a).ok_or_else(ovf).and_then(|i| {
                    if i[6] == 0 {
                        Err(Error::BadModel("singular model (discriminant 0)".into()))
                    } else {
                        Ok(())
                    }
                })?;
                return Err(Error::BadModel("conductor unknown; pass N=<int>".into()));
            }
        };
        Self::new(a, conductor)
    }

    pub fn standard(label: &str) -> Option<Self> {
        STANDARD_CURVES.iter().find(|c| c.0 == label).map(|c| CurveQ { a: c.1, conductor: c.2 })
    }

    fn inv(&self) -> [i128; 7] {
        invariants(&self.a).expect("checked at construction")
    }

    /// `(b2, b4, b6, b8)`.
    pub fn b_invariants(&self) -> (i128, i128, i128, i128) {
        let i = self.inv();
        (i[0], i[1], i[2], i[3])
    }

    pub fn c4(&self) -> i128 {
        self.inv()[4]
    }

    pub fn c6(&self) -> i128 {
        self.inv()[5]
    }

    pub fn discriminant(&self) -> i128 {
        self.inv()[6]
    }

    pub fn is_square_conductor(&self) -> bool {
        let r = (self.conductor as f64).sqrt().round() as u64;
        (r.saturating_sub(1)..=r + 1).any(|s| s * s == self.conductor)
    }

    /// The model obtained by `(x, y) -> (u^2 x, u^3 y)`: `a_i -> u^i a_i`.
    pub fn scaled(&self, u: i64) -> Result<Self> {
        let pw = [1u32, 2, 3, 4, 6];
        let mut a = [0i64; 5];
        for (k, (&c, &e)) in self.a.iter().zip(&pw).enumerate() {
            a[k] = u.checked_pow(e).and_then(|f| f.checked_mul(c)).ok_or_else(ovf)?;
        }
        Self::new(a, self.conductor)
    }

    fn on_curve_mod(&self, x: u64, y: u64, p: u64) -> bool {
        let p = p as i128;
        let [a1, a2, a3, a4, a6] = self.a.map(|c| (c as i128).rem_euclid(p));
        let (x, y) = (x as i128, y as i128);
        let lhs = (y * y + a1 * x * y + a3 * y) % p;
        let rhs = ((x * x % p) * x + a2 * x % p * x + a4 * x + a6) % p;
        (lhs - rhs).rem_euclid(p) == 0
    }

    /// `#E(F_p)` by brute force, projective point included.
    pub fn count_points_naive(&self, p: u64) -> u64 {
        1 + (0..p).map(|x| (0..p).filter(|&y| self.on_curve_mod(x, y, p)).count() as u64).sum::<u64>()
    }

    /// `#E(F_p)` through the quadratic character of `4x^3 + b2 x^2 + 2 b4 x + b6`, `p` odd.
    fn count_points_odd(&self, p: u64) -> u64 {
        let (b2, b4, b6, _) = self.b_invariants();
        let pi = p as i128;
        let (b2, b4, b6) = (b2.rem_euclid(pi), b4.rem_euclid(pi), b6.rem_euclid(pi));
        let mut square = vec![false; p as usize];
        for y in 1..p {
            square[(y * y % p) as usize] = true;
        }
        let mut s: i64 = 0;
        for x in 0..pi {
            let v = ((4 * x % pi * x % pi * x) + b2 * x % pi * x + 2 * b4 * x + b6).rem_euclid(pi) as usize;
            if v != 0 {
                s += if square[v] { 1 } else { -1 };
            }
        }
        (p as i64 + 1 + s) as u64
    }

    pub fn count_points(&self, p: u64) -> u64 {
        if p == 2 {
            self.count_points_naive(2)
        } else {
            self.count_points_odd(p)
        }
    }

    /// `a_p`; at bad primes decided by the conductor exponent and, for
    /// multiplicative `p >= 5`, by whether `-c6` is a square mod `p`.
    pub fn ap(&self, p: u64) -> i64 {
        let n = self.conductor;
        if n % p != 0 {
            return p as i64 + 1 - self.count_points(p) as i64;
        }
        if n % (p * p) == 0 {
            return 0;
        }
        if p <= 3 {
            // the singular fibre has p (split) or p + 2 (nonsplit) points
            return p as i64 + 1 - self.count_points_naive(p) as i64;
        }
        kronecker_i128(-self.c6(), p)
    }
}

pub fn lookup_conductor(a: &[i64; 5]) -> Option<u64> {
    STANDARD_CURVES.iter().find(|c| &c.1 == a).map(|c| c.2)
}

fn kronecker_i128(a: i128, p: u64) -> i64 {
    kronecker(a.rem_euclid(p as i128) as i64, p) as i64
}

/// Kronecker symbol `(d / n)` for `n >= 1`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut n = n;
    let mut r = 1;
    if n == 0 {
        return i32::from(d.abs() == 1);
    }
    while n % 2 == 0 {
        n /= 2;
        if d % 2 == 0 {
            return 0;
        }
        if matches!(d.rem_euclid(8), 3 | 5) {
            r = -r;
        }
    }
    let mut a = d.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                r = -r;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            r = -r;
        }
        a %= n;
    }
    if n == 1 {
        r
    } else {
        0
    }
}

/// Hasse coefficients `a_n` for `n <= bound` and `a_p` for primes `p <= bound`.
#[derive(Clone, Debug)]
pub struct ApTable {
    pub ap: BTreeMap<u64, i64>,
    an: Vec<i64>,
}

impl ApTable {
    pub fn bound(&self) -> usize {
        self.an.len() - 1
    }

    /// `a_n`, with `a_0 = 0`.
    pub fn an(&self, n: usize) -> i64 {
        self.an[n]
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.an
    }
}

pub fn ap_table(e: &CurveQ, bound: usize) -> Result<ApTable> {
    if bound > MAX_AP_BOUND {
        return Err(Error::TruncationTooSmall(format!("bound {bound} exceeds {MAX_AP_BOUND}")));
    }
    let mut spf: Vec<usize> = (0..=bound).collect();
    let mut i = 2;
    while i * i <= bound {
        if spf[i] == i {
            for j in (i * i..=bound).step_by(i) {
                if spf[j] == j {
                    spf[j] = i;
                }
            }
        }
        i += 1;
    }
    let primes: Vec<u64> = (2..=bound).filter(|&n| spf[n] == n).map(|n| n as u64).collect();
    let ap: BTreeMap<u64, i64> = primes.par_iter().map(|&p| (p, e.ap(p))).collect();
    let mut an = vec![0i64; bound + 1];
    if bound >= 1 {
        an[1] = 1;
    }
    for n in 2..=bound {
        let p = spf[n];
        let (mut m, mut r) = (n, 0);
        while m % p == 0 {
            m /= p;
            r += 1;
        }
        let a_p = ap[&(p as u64)];
        let good = e.conductor % p as u64 != 0;
        let (mut prev, mut cur) = (1i64, a_p);
        for _ in 1..r {
            let next = a_p * cur - if good { p as i64 * prev } else { 0 };
            (prev, cur) = (cur, next);
        }
        an[n] = cur * an[m];
    }
    Ok(ApTable { ap, an })
}
