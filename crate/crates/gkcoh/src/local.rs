//! Local arithmetic over `Q_p`: characters, Gauss sums, local zeta and `L`-factors,
//! Kirillov newvectors and the twisted local integral, plus the archimedean
//! constants `C` and `K`.
//!
//! The additive character is `psi(x) = exp(-2 pi i [x]_p)`, where `[x]_p` is the
//! fractional part, and Haar measures give `Z_p^x` volume 1.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

pub type ComplexVal = Complex64;

fn ipow(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("prime power overflow")
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn root_of_unity(num: i64, den: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * num as f64 / den as f64)
}

/// Smallest primitive root modulo `p^2` (hence modulo every `p^n`), `p` odd.
fn primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let factors: Vec<u64> = (2..=phi).filter(|&q| phi % q == 0 && is_prime(q)).collect();
    let powmod = |mut b: u64, mut e: u64, m: u64| {
        let mut r = 1u64;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r
    };
    let g = (2..p).find(|&g| factors.iter().all(|&q| powmod(g, phi / q, p) != 1)).unwrap_or(1);
    if powmod(g, phi, p * p) == 1 {
        g + p
    } else {
        g
    }
}

/// Quasi-character of `Q_p^x`: `chi(p^v u) = value_on_p^v chi_0(u mod p^n)`.
#[derive(Clone, Debug)]
pub struct LocalChar {
    pub p: u64,
    pub cond_exp: u32,
    pub value_on_p: Complex64,
    /// `table[r]` is `chi_0(r)` for units `r` modulo `p^cond_exp`, zero otherwise.
    table: Vec<Complex64>,
}

impl LocalChar {
    pub fn unramified(p: u64, value_on_p: Complex64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadCharacter(format!("{p} is not prime")));
        }
        Ok(LocalChar { p, cond_exp: 0, value_on_p, table: vec![Complex64::new(1.0, 0.0)] })
    }

    /// Character of conductor `p^n` given by exponents on the standard generators:
    /// for odd `p`, `chi(g) = e(exps[0] / phi(p^n))` with `g` a primitive root;
    /// for `p = 2`, `chi(-1) = (-1)^exps[0]` and `chi(5) = e(exps[1] / 2^(n-2))`.
    pub fn from_exponents(p: u64, n: u32, exps: &[i64], value_on_p: Complex64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadCharacter(format!("{p} is not prime")));
        }
        if n == 0 {
            return Self::unramified(p, value_on_p);
        }
        let m = ipow(p, n);
        let mut table = vec![Complex64::new(0.0, 0.0); m as usize];
        if p == 2 {
            let b = *exps.first().unwrap_or(&0);
            let a = *exps.get(1).unwrap_or(&0);
            let ord5 = if n >= 3 { ipow(2, n - 2) } else { 1 };
            for s in 0..2u64 {
                let mut x = if s == 0 { 1 } else { m - 1 };
                for e in 0..ord5 {
                    table[x as usize] = root_of_unity(b * s as i64, 2) * root_of_unity(a * e as i64, ord5);
                    x = x * 5 % m;
                }
            }
            let primitive = match n {
                1 => false,
                2 => b.rem_euclid(2) == 1,
                _ => a.rem_euclid(2) == 1,
            };
            if !primitive {
                return Err(Error::BadCharacter(format!("conductor of character is below 2^{n}")));
            }
        } else {
            let a = *exps.first().unwrap_or(&0);
            let phi = ipow(p, n - 1) * (p - 1);
            let g = primitive_root(p) % m;
            let mut x = 1u64;
            for e in 0..phi {
                table[x as usize] = root_of_unity(a * e as i64, phi);
                x = x * g % m;
            }
            let primitive = if n == 1 { a.rem_euclid(phi as i64) != 0 } else { a.rem_euclid(p as i64) != 0 };
            if !primitive {
                return Err(Error::BadCharacter(format!("conductor of character is below {p}^{n}")));
            }
        }
        Ok(LocalChar { p, cond_exp: n, value_on_p, table })
    }

    /// The Legendre symbol modulo an odd prime, trivial on `p`.
    pub fn quadratic(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::BadCharacter("no tame quadratic character at 2".into()));
        }
        Self::from_exponents(p, 1, &[(p as i64 - 1) / 2], Complex64::new(1.0, 0.0))
    }

    /// Uniformly random primitive character of conductor `p^n` with a random unitary value on `p`.
    pub fn random_primitive<R: Rng>(p: u64, n: u32, rng: &mut R) -> Result<Self> {
        let v = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
        if n == 0 {
            return Self::unramified(p, v);
        }
        for _ in 0..1000 {
            let exps = if p == 2 {
                vec![rng.gen_range(0..2), rng.gen_range(0..ipow(2, n.saturating_sub(2)).max(1) as i64)]
            } else {
                vec![rng.gen_range(0..(ipow(p, n - 1) * (p - 1)) as i64)]
            };
            if let Ok(c) = Self::from_exponents(p, n, &exps, v) {
                return Ok(c);
            }
        }
        Err(Error::BadCharacter(format!("no primitive character of conductor {p}^{n}")))
    }

    pub fn is_unramified(&self) -> bool {
        self.cond_exp == 0
    }

    /// Value on an integer unit `u`.
    pub fn on_unit(&self, u: i64) -> Complex64 {
        let m = self.table.len() as i64;
        self.table[u.rem_euclid(m) as usize]
    }

    /// Value on `p^v u` with `u` a unit.
    pub fn eval(&self, v: i64, u: i64) -> Complex64 {
        self.value_on_p.powi(v as i32) * self.on_unit(u)
    }

    pub fn inverse(&self) -> Self {
        LocalChar {
            p: self.p,
            cond_exp: self.cond_exp,
            value_on_p: self.value_on_p.inv(),
            table: self.table.iter().map(|z| if z.norm() == 0.0 { *z } else { z.inv() }).collect(),
        }
    }

    pub fn sign(&self) -> Complex64 {
        self.on_unit(-1)
    }
}

/// Place type for the local zeta function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ZetaKind {
    Finite(u64),
    Real,
    Complex,
}

pub fn zeta_local(kind: ZetaKind, s: f64) -> Result<ComplexVal> {
    let gamma_pole = |x: f64| x <= 0.0 && (x - x.round()).abs() < 1e-12;
    let v = match kind {
        ZetaKind::Finite(q) => {
            let d = 1.0 - (q as f64).powf(-s);
            if d.abs() < 1e-14 {
                return Err(Error::PoleAtS(s));
            }
            1.0 / d
        }
        ZetaKind::Real => {
            if gamma_pole(s / 2.0) {
                return Err(Error::PoleAtS(s));
            }
            PI.powf(-s / 2.0) * gamma(s / 2.0)
        }
        ZetaKind::Complex => {
            if gamma_pole(s) {
                return Err(Error::PoleAtS(s));
            }
            2.0 * (2.0 * PI).powf(-s) * gamma(s)
        }
    };
    Ok(Complex64::new(v, 0.0))
}

/// `int_{Z_p^x} chi(x)^-1 psi(p^y_exp x) d^x x` for any `y_exp`.
pub fn gauss_integral(chi: &LocalChar, y_exp: i64) -> ComplexVal {
    let p = chi.p;
    let depth = (-y_exp).max(0) as u32;
    let level = depth.max(chi.cond_exp);
    if level == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let m = ipow(p, level);
    let d = ipow(p, depth);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut count = 0u64;
    for u in 1..m {
        if u % p == 0 {
            continue;
        }
        let add = if depth == 0 { Complex64::new(1.0, 0.0) } else { root_of_unity(-((u % d) as i64), d) };
        acc += chi.on_unit(u as i64).conj() * add;
        count += 1;
    }
    acc / count as f64
}

/// Gauss sum `g(chi, y)` with `y = p^y_exp`; `y_exp` must equal minus the conductor exponent.
pub fn gauss_sum(chi: &LocalChar, y_exp: i64) -> Result<ComplexVal> {
    if y_exp != -(chi.cond_exp as i64) {
        return Err(Error::BadConductorShift { y_exp, cond: chi.cond_exp });
    }
    Ok(gauss_integral(chi, y_exp))
}

/// `|c(chi)| zeta_p(1)^2 chi(-1)`, the predicted value of `g(chi, y) g(chi^-1, y)`.
pub fn gauss_product_prediction(chi: &LocalChar) -> ComplexVal {
    let p = chi.p as f64;
    let z = 1.0 / (1.0 - 1.0 / p);
    chi.sign() * (p.powi(-(chi.cond_exp as i32)) * z * z)
}

/// Local representation type carried by the Kirillov newvector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NewformKind {
    Spherical,
    Steinberg,
    Supercuspidal,
}

#[derive(Clone, Copy, Debug)]
pub struct SatakeData {
    pub kind: NewformKind,
    pub p: u64,
    pub alpha: Complex64,
}

/// Kirillov newvector at any `y` of valuation `v`.
pub fn kirillov_newvector(data: &SatakeData, v: i64) -> ComplexVal {
    let zero = Complex64::new(0.0, 0.0);
    let half = (data.p as f64).powf(-(v as f64) / 2.0);
    match data.kind {
        NewformKind::Spherical => {
            if v < 0 {
                return zero;
            }
            let s: Complex64 = (0..=v).map(|k| data.alpha.powi((2 * k - v) as i32)).sum();
            s * half
        }
        NewformKind::Steinberg => {
            if v < 0 {
                zero
            } else {
                data.alpha.powi(v as i32) * half
            }
        }
        NewformKind::Supercuspidal => {
            if v == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                zero
            }
        }
    }
}

/// Local `L`-factor of the representation twisted by `twist`.
pub fn local_l(data: &SatakeData, twist: Option<&LocalChar>, s: f64) -> Result<ComplexVal> {
    let one = Complex64::new(1.0, 0.0);
    let r = match twist {
        Some(t) if !t.is_unramified() => return Ok(one),
        Some(t) => t.value_on_p,
        None => one,
    };
    let q = (data.p as f64).powf(-s);
    let factor = |a: Complex64| -> Result<Complex64> {
        let d = one - r * a * q;
        if d.norm() < 1e-14 {
            Err(Error::PoleAtS(s))
        } else {
            Ok(d.inv())
        }
    };
    match data.kind {
        NewformKind::Spherical => Ok(factor(data.alpha)? * factor(data.alpha.inv())?),
        NewformKind::Steinberg => factor(data.alpha),
        NewformKind::Supercuspidal => Ok(one),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TwistedIntegral {
    pub lhs: ComplexVal,
    pub rhs: ComplexVal,
    pub tail_bound: f64,
}

/// `sum_{n < truncation} rho(p)^n phi0(p^n) int_{Z_p^x} rho(x) psi(y p^n x) d^x x` with
/// `y = p^-cond(rho)`, against `g(rho^-1, y) L(1/2, Pi x rho)`.
pub fn twisted_local_integral(data: &SatakeData, rho: &LocalChar, truncation: u32) -> Result<TwistedIntegral> {
    if truncation == 0 || rho.p != data.p {
        return Err(Error::TruncationTooSmall(format!("truncation {truncation}")));
    }
    let y_exp = -(rho.cond_exp as i64);
    let rinv = rho.inverse();
    let mut lhs = Complex64::new(0.0, 0.0);
    for n in 0..truncation as i64 {
        let shell = gauss_integral(&rinv, y_exp + n);
        if shell.norm() < 1e-15 {
            continue;
        }
        lhs += rho.value_on_p.powi(n as i32) * kirillov_newvector(data, n) * shell;
    }
    let rhs = gauss_sum(&rinv, y_exp)? * local_l(data, Some(rho), 0.5)?;
    // |terms| <= (n+1) r^n
    let a = data.alpha.norm().max(data.alpha.norm().recip());
    let r = a * rho.value_on_p.norm() * (data.p as f64).powf(-0.5);
    let tail_bound = if rho.is_unramified() && data.kind != NewformKind::Supercuspidal {
        if r >= 1.0 {
            return Err(Error::TruncationTooSmall("series does not converge".into()));
        }
        let t = truncation as f64;
        r.powf(t) * ((t + 1.0) / (1.0 - r) + r / ((1.0 - r) * (1.0 - r)))
    } else {
        0.0
    };
    if (lhs - rhs).norm() > tail_bound + 1e-12 {
        return Err(Error::TruncationTooSmall(format!("|lhs - rhs| = {:e} exceeds {tail_bound:e}", (lhs - rhs).norm())));
    }
    Ok(TwistedIntegral { lhs, rhs, tail_bound })
}

/// Archimedean constants `(C(k, m), K)`. Weights are listed as the `r1_split` real places
/// where the algebra splits, then the `r1_ramified` real places where it ramifies, then
/// both embeddings of each of the `r2` complex places.
pub fn constants_ck(
    k: &[i64],
    m: &[i64],
    r1_split: u32,
    r2: u32,
    r1_ramified: u32,
) -> Result<(ComplexVal, ComplexVal)> {
    let total = (r1_split + r1_ramified + 2 * r2) as usize;
    if k.len() != total || m.len() != total {
        return Err(Error::BadIndex(k.len() as i64));
    }
    for (&kv, &mv) in k.iter().zip(m) {
        if kv < 2 || kv % 2 == 1 {
            return Err(Error::BadWeight(kv));
        }
        if mv.abs() > (kv - 2) / 2 {
            return Err(Error::BadIndex(mv));
        }
    }
    let ramified = &k[r1_split as usize..(r1_split + r1_ramified) as usize];
    let sign_exp: i64 = ramified.iter().map(|kv| (kv - 2) / 2).sum();
    let mut c = if sign_exp % 2 == 0 { 1.0 } else { -1.0 };
    c *= 4f64.powi((r1_split + 2 * r2) as i32) * PI.powi(-(r1_ramified as i32));
    for (&kv, &mv) in k.iter().zip(m) {
        let h = kv as f64 / 2.0;
        let sgn = if mv % 2 == 0 { 1.0 } else { -1.0 };
        c *= gamma(h - mv as f64) * gamma(h + mv as f64) / (sgn * (2.0 * PI).powi(kv as i32));
    }
    let two_i = Complex64::new(0.0, 2.0).powi(r1_split as i32);
    let kk = two_i * 3f64.powi(r2 as i32)
        / ((2.0 * PI * PI).powi((r1_ramified + r2) as i32) * PI.powi(r1_split as i32));
    Ok((Complex64::new(c, 0.0), kk))
}
