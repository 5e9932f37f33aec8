use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AlgError, Rational};

/// First continued-fraction convergent of `x` within `tolerance`, with denominator at most `max_denominator`.
pub fn rationalize(x: f64, max_denominator: u64, tolerance: f64) -> Result<Option<Rational>, AlgError> {
    if !x.is_finite() {
        return Err(AlgError::BadInput(format!("non-finite value {x}")));
    }
    if max_denominator == 0 || tolerance.is_nan() || tolerance <= 0.0 {
        return Err(AlgError::BadInput("max_denominator >= 1 and tolerance > 0 required".into()));
    }
    let max_den = BigInt::from(max_denominator);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > max_den {
            return Ok(None);
        }
        let cand = Rational::new(h2.clone(), k2.clone());
        if (x - super::field::rat_to_f64(&cand)).abs() <= tolerance {
            return Ok(Some(cand));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a;
        if frac <= 0.0 {
            return Ok(None);
        }
        rest = 1.0 / frac;
        if !rest.is_finite() || rest.abs() > 1e18 {
            return Ok(None);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn simple_fractions() {
        assert_eq!(rationalize(0.2, 100, 1e-9).unwrap(), Some(rat(1, 5)));
        assert_eq!(rationalize(0.333333333333, 100, 1e-9).unwrap(), Some(rat(1, 3)));
        assert_eq!(rationalize(-2.5, 10, 1e-12).unwrap(), Some(rat(-5, 2)));
    }

    #[test]
    fn pi_is_not_detected() {
        // 355/113 is the last admissible convergent and misses by about 2.7e-7
        assert_eq!(rationalize(std::f64::consts::PI, 1000, 1e-9).unwrap(), None);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        assert!(rationalize(f64::NAN, 10, 1e-9).is_err());
        assert!(rationalize(f64::INFINITY, 10, 1e-9).is_err());
    }

    proptest! {
        #[test]
        fn recovers_small_fractions(q in 1i64..=10_000, p in -1_000_000i64..=1_000_000) {
            prop_assume!((p as f64 / q as f64).abs() <= 1e3);
            let x = p as f64 / q as f64;
            prop_assert_eq!(rationalize(x, q as u64, 1e-12).unwrap(), Some(rat(p, q)));
        }
    }
}
