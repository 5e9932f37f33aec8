use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;

use super::{ap_table, kronecker, periods_agm, ApTable, CurveQ};
use crate::error::{Error, Result};
use crate::exact::rationalize;
use num_rational::BigRational as Rational;
use crate::local::ComplexVal;

/// Quadratic twist by the Kronecker character of a fundamental discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistSpec {
    pub d: i64,
}

fn squarefree(n: u64) -> bool {
    (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
}

impl TwistSpec {
    /// `d = 1`, or `d ≡ 1 (4)` squarefree, or `d = 4m` with `m ≡ 2, 3 (4)` squarefree.
    pub fn is_fundamental(d: i64) -> bool {
        if d == 1 {
            return true;
        }
        if d == 0 {
            return false;
        }
        match d.rem_euclid(4) {
            1 => squarefree(d.unsigned_abs()),
            0 => matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree((d / 4).unsigned_abs()),
            _ => false,
        }
    }

    pub fn new(d: i64) -> Result<Self> {
        if Self::is_fundamental(d) {
            Ok(TwistSpec { d })
        } else {
            Err(Error::BadCharacter(format!("{d} is not a fundamental discriminant")))
        }
    }

    pub fn trivial() -> Self {
        TwistSpec { d: 1 }
    }

    pub fn chi(&self, n: u64) -> i32 {
        kronecker(self.d, n)
    }

    /// Conductor of the twisted curve, `N d^2`.
    pub fn twisted_conductor(&self, n: u64) -> f64 {
        n as f64 * (self.d as f64).powi(2)
    }
}

/// `sum_{n <= T} a_n chi(n) / n * exp(-2 pi n x / sqrt(M))`.
fn smoothed(table: &ApTable, twist: TwistSpec, m: f64, x: f64, terms: usize) -> f64 {
    let c = 2.0 * PI * x / m.sqrt();
    let mut s = 0.0;
    for n in 1..=terms {
        let a = table.an(n);
        if a != 0 {
            s += (a * twist.chi(n as u64) as i64) as f64 / n as f64 * (-c * n as f64).exp();
        }
    }
    s
}

/// `|a_n| <= d(n) sqrt(n) <= 2n`, so the tail past `T` is at most `2 e^{-c(T+1)} / (1 - e^{-c})`.
fn tail_bound(m: f64, x: f64, terms: usize) -> f64 {
    let c = 2.0 * PI * x / m.sqrt();
    2.0 * (-c * (terms as f64 + 1.0)).exp() / (1.0 - (-c).exp())
}

/// Smallest truncation with tail below `tol` at every evaluation point used.
pub fn terms_needed(m: f64, tol: f64) -> usize {
    let mut t = 1;
    while tail_bound(m, X_LOW, t) > tol {
        t = (t as f64 * 1.2) as usize + 1;
    }
    t
}

const X_SIGN: (f64, f64) = (1.1, 1.3);
const X_EVAL: f64 = 1.25;
const X_LOW: f64 = 1.0 / 1.3;
const TAIL_TOL: f64 = 1e-8;

fn check_terms(m: f64, terms: usize, table: &ApTable) -> Result<()> {
    let tail = tail_bound(m, X_LOW, terms);
    if tail > TAIL_TOL || terms > table.bound() {
        return Err(Error::TruncationTooSmall(format!("{terms} terms leave a tail of {tail:e}")));
    }
    Ok(())
}

/// Sign `w` of the functional equation, solved from
/// `L(1) = S(x) + w S(1/x)` at two values of `x`; no assumption on `w`.
pub fn functional_equation_sign(e: &CurveQ, twist: TwistSpec, table: &ApTable, terms: usize) -> Result<f64> {
    let m = twist.twisted_conductor(e.conductor);
    check_terms(m, terms, table)?;
    let s = |x: f64| smoothed(table, twist, m, x, terms);
    let (x, y) = X_SIGN;
    Ok((s(x) - s(y)) / (s(1.0 / y) - s(1.0 / x)))
}

/// Root number of `E`, read off numerically; a wrong conductor shows up as a
/// value away from `±1`.
pub fn root_number(e: &CurveQ) -> Result<i32> {
    let m = e.conductor as f64;
    let terms = terms_needed(m, 1e-14);
    let table = ap_table(e, terms)?;
    let w = functional_equation_sign(e, TwistSpec::trivial(), &table, terms)?;
    let r = w.round();
    if (w - r).abs() > 1e-6 || r.abs() != 1.0 {
        return Err(Error::NumericFailure(format!("functional equation sign {w} is not ±1; check the conductor")));
    }
    Ok(r as i32)
}

/// `w_E sign(d) (d / N)`.
pub fn root_number_twist(w_e: i32, twist: TwistSpec, n: u64) -> Result<i32> {
    if twist.d.unsigned_abs().gcd(&n) != 1 {
        return Err(Error::NotCoprime { d: twist.d, n });
    }
    Ok(w_e * twist.d.signum() as i32 * kronecker(twist.d, n))
}

/// `L(1, E (x) chi_d) = S(x) + w S(1/x)` at `x = 1.25` with the predicted sign `w`.
/// A wrong prediction does not give a consistent value, and a correct `w = -1`
/// gives a value of size the truncation error.
pub fn lvalue_center_with(e: &CurveQ, twist: TwistSpec, w_e: i32, table: &ApTable, terms: usize) -> Result<ComplexVal> {
    let w = root_number_twist(w_e, twist, e.conductor)?;
    let m = twist.twisted_conductor(e.conductor);
    check_terms(m, terms, table)?;
    let v = smoothed(table, twist, m, X_EVAL, terms) + w as f64 * smoothed(table, twist, m, 1.0 / X_EVAL, terms);
    Ok(Complex64::new(v, 0.0))
}

pub fn lvalue_center(e: &CurveQ, twist: Option<TwistSpec>, terms: usize) -> Result<ComplexVal> {
    let twist = twist.unwrap_or(TwistSpec::trivial());
    let table = ap_table(e, terms)?;
    lvalue_center_with(e, twist, root_number(e)?, &table, terms)
}

const NONVANISHING: f64 = 1e-6;

/// Smallest `|d| <= budget` of the given sign with `gcd(d, N) = 1`, predicted root
/// number `+1` and `|L(1, E^d)| > 1e-6`.
pub fn twist_search(e: &CurveQ, sign_at_infinity: i32, budget: u64) -> Result<TwistSpec> {
    if e.is_square_conductor() {
        return Err(Error::HypothesisViolated(format!("conductor {} is a square", e.conductor)));
    }
    if sign_at_infinity.abs() != 1 {
        return Err(Error::HypothesisViolated(format!("sign at infinity must be ±1, got {sign_at_infinity}")));
    }
    let w_e = root_number(e)?;
    let candidates: Vec<TwistSpec> = (1..=budget as i64)
        .map(|k| k * sign_at_infinity as i64)
        .filter(|&d| TwistSpec::is_fundamental(d) && d.unsigned_abs().gcd(&e.conductor) == 1)
        .map(|d| TwistSpec { d })
        .filter(|t| root_number_twist(w_e, *t, e.conductor) == Ok(1))
        .collect();
    let Some(last) = candidates.last() else {
        return Err(Error::SearchExhausted(budget));
    };
    let terms = terms_needed(last.twisted_conductor(e.conductor), 1e-12);
    let table = ap_table(e, terms)?;
    let values: Vec<Result<f64>> = candidates
        .par_iter()
        .map(|t| lvalue_center_with(e, *t, w_e, &table, terms).map(|v| v.re))
        .collect();
    for (t, v) in candidates.iter().zip(values) {
        if v?.abs() > NONVANISHING {
            return Ok(*t);
        }
    }
    Err(Error::SearchExhausted(budget))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalityReport {
    pub name: String,
    pub raw: ComplexVal,
    pub detected: Option<Rational>,
    pub residual: f64,
    pub max_denominator: u64,
}

pub const DETECT_TOL: f64 = 1e-6;

impl RationalityReport {
    pub fn detect(name: &str, raw: f64, max_denominator: u64) -> Result<Self> {
        let detected = rationalize(raw, max_denominator, DETECT_TOL)?;
        let residual = match &detected {
            Some(r) => (raw - crate::exact::field::rat_to_f64(r)).abs(),
            None => f64::NAN,
        };
        Ok(RationalityReport { name: name.into(), raw: Complex64::new(raw, 0.0), detected, residual, max_denominator })
    }
}

pub fn oda_bsd_report(e: &CurveQ, dplus: TwistSpec, dminus: TwistSpec, max_den: u64) -> Result<(RationalityReport, RationalityReport)> {
    oda_bsd_report_scaled(e, dplus, dminus, max_den, 1.0)
}

/// As [`oda_bsd_report`] with `Omega_1` multiplied by `omega1_scale`.
///
/// BSD-type: `L(1, E^{d+}) / (sqrt(d+) Omega_1)`. Oda-type:
/// `[L(1, E^{d+}) / sqrt(d+)] [sqrt|d-| / L(1, E^{d-})] (|Omega_2| / Omega_1)`.
pub fn oda_bsd_report_scaled(
    e: &CurveQ,
    dplus: TwistSpec,
    dminus: TwistSpec,
    max_den: u64,
    omega1_scale: f64,
) -> Result<(RationalityReport, RationalityReport)> {
    if dplus.d <= 0 || dminus.d >= 0 {
        return Err(Error::HypothesisViolated(format!("need d+ > 0 > d-, got {} and {}", dplus.d, dminus.d)));
    }
    let w_e = root_number(e)?;
    for t in [dplus, dminus] {
        if root_number_twist(w_e, t, e.conductor)? != 1 {
            return Err(Error::HypothesisViolated(format!("twist by {} has root number -1", t.d)));
        }
    }
    let m = dplus.twisted_conductor(e.conductor).max(dminus.twisted_conductor(e.conductor));
    let terms = terms_needed(m, 1e-13);
    let table = ap_table(e, terms)?;
    let value = |t: TwistSpec| -> Result<f64> {
        let v = lvalue_center_with(e, t, w_e, &table, terms)?.re;
        if v.abs() <= NONVANISHING {
            return Err(Error::DegenerateTwist(t.d));
        }
        Ok(v)
    };
    let (lp, lm) = (value(dplus)?, value(dminus)?);
    let per = periods_agm(e, 53)?;
    let omega1 = per.omega1 * omega1_scale;
    let sp = (dplus.d as f64).sqrt();
    let sm = (dminus.d.unsigned_abs() as f64).sqrt();
    let bsd = RationalityReport::detect("bsd", lp / (sp * omega1), max_den)?;
    let oda = RationalityReport::detect("oda", (lp / sp) * (sm / lm) * (per.omega2_im / omega1), max_den)?;
    Ok((bsd, oda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;
    use proptest::prelude::*;

    fn e11() -> CurveQ {
        CurveQ::standard("11a1").unwrap()
    }

    #[test]
    fn fundamental_discriminants() {
        let fund: Vec<i64> = (-30..=30).filter(|&d| TwistSpec::is_fundamental(d)).collect();
        assert_eq!(
            fund,
            vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 1, 5, 8, 12, 13, 17, 21, 24, 28, 29]
        );
        assert!(TwistSpec::new(9).is_err());
    }

    #[test]
    fn central_value_of_11a1() {
        let terms = terms_needed(11.0, 1e-14);
        let l = lvalue_center(&e11(), None, terms).unwrap().re;
        assert!((l - 0.253_841_860_855_910_6).abs() < 1e-12);
        let l2 = lvalue_center(&e11(), None, 2 * terms).unwrap().re;
        assert!((l - l2).abs() < 1e-10);
        let p = periods_agm(&e11(), 53).unwrap();
        assert_eq!(rationalize(l / p.omega1, 25, 1e-6).unwrap(), Some(frac(1, 5)));
    }

    #[test]
    fn too_few_terms() {
        assert!(matches!(lvalue_center(&e11(), None, 10), Err(Error::TruncationTooSmall(_))));
    }

    #[test]
    fn root_numbers() {
        for (label, ..) in super::super::STANDARD_CURVES {
            assert_eq!(root_number(&CurveQ::standard(label).unwrap()).unwrap(), 1, "{label}");
        }
        let t = |d| TwistSpec::new(d).unwrap();
        assert_eq!(root_number_twist(1, t(1), 11), Ok(1));
        assert_eq!(root_number_twist(-1, t(1), 11), Ok(-1));
        assert_eq!(root_number_twist(1, t(-7), 11), Ok(-1));
        assert_eq!(root_number_twist(1, t(5), 11), Ok(1));
        assert_eq!(root_number_twist(1, t(-11), 11), Err(Error::NotCoprime { d: -11, n: 11 }));
        // a wrong conductor is flagged
        assert!(root_number(&CurveQ::new([0, -1, 1, -10, -20], 13).unwrap()).is_err());
    }

    #[test]
    fn twisted_values_follow_predicted_signs() {
        let e = e11();
        let terms = terms_needed(11.0 * 40.0 * 40.0, 1e-13);
        let table = ap_table(&e, terms).unwrap();
        for d in (-40..=40).filter(|&d| TwistSpec::is_fundamental(d) && d % 11 != 0) {
            let t = TwistSpec::new(d).unwrap();
            let pred = root_number_twist(1, t, 11).unwrap();
            let w = functional_equation_sign(&e, t, &table, terms).unwrap();
            assert!((w - pred as f64).abs() < 1e-6, "d = {d}: w = {w}");
            let l = lvalue_center_with(&e, t, 1, &table, terms).unwrap().re;
            assert_eq!(l.abs() > 1e-6, pred == 1, "d = {d}: L = {l}");
        }
    }

    #[test]
    fn searches() {
        let e = e11();
        assert_eq!(twist_search(&e, 1, 50).unwrap().d, 1);
        assert_eq!(twist_search(&e, -1, 50).unwrap().d, -3);
        let sq = CurveQ::new([0, -1, 1, -10, -20], 49).unwrap();
        assert!(matches!(twist_search(&sq, 1, 50), Err(Error::HypothesisViolated(_))));
        assert_eq!(twist_search(&e, -1, 2), Err(Error::SearchExhausted(2)));
    }

    #[test]
    fn oda_and_bsd_reports() {
        let e = e11();
        let (bsd, oda) = oda_bsd_report(&e, TwistSpec::trivial(), TwistSpec::new(-3).unwrap(), 1000).unwrap();
        assert_eq!(bsd.detected, Some(frac(1, 5)));
        assert!(bsd.residual < 1e-6);
        assert!(oda.detected.is_some() && oda.residual < 1e-6, "{oda:?}");
        let (bsd2, _) = oda_bsd_report_scaled(&e, TwistSpec::trivial(), TwistSpec::new(-3).unwrap(), 1000, 1.001).unwrap();
        assert_eq!(bsd2.detected, None);
        let bad = oda_bsd_report(&e, TwistSpec::new(5).unwrap(), TwistSpec::new(-7).unwrap(), 1000);
        assert!(matches!(bad, Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn oda_ratio_across_twists_is_rational() {
        let e = e11();
        let t = |d| TwistSpec::new(d).unwrap();
        let (_, a) = oda_bsd_report(&e, t(1), t(-3), 1000).unwrap();
        let (_, b) = oda_bsd_report(&e, t(5), t(-4), 1000).unwrap();
        let (_, c) = oda_bsd_report(&e, t(12), t(-15), 1000).unwrap();
        for (x, y) in [(&a, &b), (&a, &c)] {
            assert!(rationalize(x.raw.re / y.raw.re, 1000, 1e-6).unwrap().is_some());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn kronecker_character_is_multiplicative(d in prop::sample::select(vec![-24i64, -8, -7, -4, -3, 5, 8, 12, 13, 21]), m in 1u64..200, n in 1u64..200) {
            let t = TwistSpec::new(d).unwrap();
            prop_assert_eq!(t.chi(m * n), t.chi(m) * t.chi(n));
            // periodic modulo |d|
            prop_assert_eq!(t.chi(m), t.chi(m + d.unsigned_abs()));
        }
    }
}
