use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{AlgError, Rational};

/// A number field `Q[x]/(m(x))` with `m` monic.
///
/// `conj_image`, when present, is the image of the generator under complex
/// conjugation, written in the power basis.
#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    minpoly: Vec<Rational>,
    label: String,
    conj_image: Option<Vec<Rational>>,
}

pub type Field = Arc<NumberField>;

impl NumberField {
    /// `minpoly` lists coefficients from the constant term upwards.
    pub fn new(minpoly: Vec<Rational>, label: &str) -> Result<Field, AlgError> {
        Self::with_conjugation(minpoly, label, None)
    }

    pub fn with_conjugation(
        minpoly: Vec<Rational>,
        label: &str,
        conj_image: Option<Vec<Rational>>,
    ) -> Result<Field, AlgError> {
        if minpoly.len() < 2 {
            return Err(AlgError::BadInput("minimal polynomial must have degree >= 1".into()));
        }
        if !minpoly.last().unwrap().is_one() {
            return Err(AlgError::BadInput("minimal polynomial must be monic".into()));
        }
        let d = minpoly.len() - 1;
        if let Some(c) = &conj_image {
            if c.len() != d {
                return Err(AlgError::BadInput("conjugation image has wrong length".into()));
            }
        }
        Ok(Arc::new(NumberField { minpoly, label: label.to_string(), conj_image }))
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[Rational] {
        &self.minpoly
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_conjugation(&self) -> bool {
        self.conj_image.is_some()
    }
}

/// The rationals as a degree-one field.
pub fn q() -> Field {
    static Q: LazyLock<Field> = LazyLock::new(|| {
        NumberField::with_conjugation(
            vec![Rational::zero(), Rational::one()],
            "Q",
            Some(vec![Rational::zero()]),
        )
        .unwrap()
    });
    Q.clone()
}

/// `Q(i)` with minimal polynomial `x^2 + 1`.
pub fn qi() -> Field {
    static QI: LazyLock<Field> = LazyLock::new(|| {
        let r = |n: i64| Rational::from_integer(n.into());
        NumberField::with_conjugation(vec![r(1), r(0), r(1)], "i", Some(vec![r(0), r(-1)])).unwrap()
    });
    QI.clone()
}

/// `Q(zeta8)` with minimal polynomial `x^4 + 1`; contains `i = z^2` and `sqrt2 = z - z^3`.
pub fn qz8() -> Field {
    static QZ8: LazyLock<Field> = LazyLock::new(|| {
        let r = |n: i64| Rational::from_integer(n.into());
        NumberField::with_conjugation(
            vec![r(1), r(0), r(0), r(0), r(1)],
            "z8",
            Some(vec![r(0), r(0), r(0), r(-1)]),
        )
        .unwrap()
    });
    QZ8.clone()
}

/// Element of a [`NumberField`] in the power basis.
#[derive(Clone)]
pub struct NFElem {
    field: Field,
    c: Vec<Rational>,
}

impl PartialEq for NFElem {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.c == other.c
    }
}
impl Eq for NFElem {}

fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || a.minpoly == b.minpoly
}

impl NFElem {
    pub fn zero(field: &Field) -> Self {
        NFElem { field: field.clone(), c: vec![Rational::zero(); field.degree()] }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_rational(field, Rational::one())
    }

    pub fn from_rational(field: &Field, r: Rational) -> Self {
        let mut e = Self::zero(field);
        e.c[0] = r;
        e
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        Self::from_rational(field, Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(field: &Field, n: i64, d: i64) -> Self {
        Self::from_rational(field, Rational::new(n.into(), d.into()))
    }

    /// The power-basis generator `x`.
    pub fn generator(field: &Field) -> Self {
        let mut e = Self::zero(field);
        if field.degree() == 1 {
            e.c[0] = -field.minpoly[0].clone();
        } else {
            e.c[1] = Rational::one();
        }
        e
    }

    /// Builds an element from power-basis coordinates, reducing if the list is long.
    pub fn from_coeffs(field: &Field, coeffs: Vec<Rational>) -> Self {
        let mut c = coeffs;
        reduce(&field.minpoly, &mut c);
        c.resize(field.degree(), Rational::zero());
        NFElem { field: field.clone(), c }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// `Some(r)` when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgError> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(AlgError::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgError> {
        self.check(other)?;
        let c = self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect();
        Ok(NFElem { field: self.field.clone(), c })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgError> {
        self.check(other)?;
        let d = self.field.degree();
        if d == 1 {
            return Ok(NFElem { field: self.field.clone(), c: vec![&self.c[0] * &other.c[0]] });
        }
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        reduce(&self.field.minpoly, &mut prod);
        prod.truncate(d);
        Ok(NFElem { field: self.field.clone(), c: prod })
    }

    /// Multiplicative inverse via the regular representation.
    pub fn inv(&self) -> Result<Self, AlgError> {
        if self.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        let d = self.field.degree();
        if d == 1 {
            return Ok(NFElem { field: self.field.clone(), c: vec![self.c[0].recip()] });
        }
        // column j of the multiplication matrix is self * x^j
        let mut m = vec![vec![Rational::zero(); d]; d];
        let mut col = self.clone();
        let x = NFElem::generator(&self.field);
        for j in 0..d {
            for i in 0..d {
                m[i][j] = col.c[i].clone();
            }
            col = &col * &x;
        }
        let mut rhs = vec![Rational::zero(); d];
        rhs[0] = Rational::one();
        let sol = super::linalg::solve_rational(m, rhs).ok_or(AlgError::DivisionByZero)?;
        Ok(NFElem { field: self.field.clone(), c: sol })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = NFElem::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power, negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<Self, AlgError> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow((-e) as u32))
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        NFElem { field: self.field.clone(), c: self.c.iter().map(|a| a * r).collect() }
    }

    /// Complex conjugation, available when the field declares it.
    pub fn conj(&self) -> Result<Self, AlgError> {
        let img = self
            .field
            .conj_image
            .as_ref()
            .ok_or_else(|| AlgError::BadInput(format!("field {} has no conjugation", self.field.label)))?;
        let g = NFElem { field: self.field.clone(), c: img.clone() };
        // Horner in the image of the generator
        let mut acc = NFElem::zero(&self.field);
        for a in self.c.iter().rev() {
            acc = &acc * &g;
            acc.c[0] += a;
        }
        Ok(acc)
    }

    /// Numerical value under the embedding sending the generator to `gen`.
    pub fn to_complex(&self, gen: (f64, f64)) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        for a in self.c.iter().rev() {
            let (r2, i2) = (re * gen.0 - im * gen.1, re * gen.1 + im * gen.0);
            re = r2 + rat_to_f64(a);
            im = i2;
        }
        (re, im)
    }
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn reduce(minpoly: &[Rational], p: &mut Vec<Rational>) {
    let d = minpoly.len() - 1;
    while p.len() > d {
        let top = p.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = p.len() - d;
        for (i, m) in minpoly[..d].iter().enumerate() {
            if !m.is_zero() {
                p[shift + i] -= &top * m;
            }
        }
    }
}

impl fmt::Debug for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = a.abs();
            let g = &self.field.label;
            let body = match (i, mag.is_one()) {
                (0, _) => format!("{mag}"),
                (1, true) => g.to_string(),
                (1, false) => format!("{mag}*{g}"),
                (_, true) => format!("{g}^{i}"),
                (_, false) => format!("{mag}*{g}^{i}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&NFElem> for &NFElem {
            type Output = NFElem;
            fn $m(self, rhs: &NFElem) -> NFElem {
                let f: fn(&NFElem, &NFElem) -> NFElem = $body;
                f(self, rhs)
            }
        }
        impl $tr<NFElem> for NFElem {
            type Output = NFElem;
            fn $m(self, rhs: NFElem) -> NFElem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&NFElem> for NFElem {
            type Output = NFElem;
            fn $m(self, rhs: &NFElem) -> NFElem {
                (&self).$m(rhs)
            }
        }
        impl $tr<NFElem> for &NFElem {
            type Output = NFElem;
            fn $m(self, rhs: NFElem) -> NFElem {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.try_add(b).expect("field mismatch"));
binop!(Sub, sub, |a, b| {
    a.check(b).expect("field mismatch");
    NFElem { field: a.field.clone(), c: a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect() }
});
binop!(Mul, mul, |a, b| a.try_mul(b).expect("field mismatch"));

impl Neg for &NFElem {
    type Output = NFElem;
    fn neg(self) -> NFElem {
        NFElem { field: self.field.clone(), c: self.c.iter().map(|a| -a).collect() }
    }
}
impl Neg for NFElem {
    type Output = NFElem;
    fn neg(self) -> NFElem {
        -&self
    }
}

impl AddAssign<&NFElem> for NFElem {
    fn add_assign(&mut self, rhs: &NFElem) {
        self.check(rhs).expect("field mismatch");
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a += b;
        }
    }
}
impl SubAssign<&NFElem> for NFElem {
    fn sub_assign(&mut self, rhs: &NFElem) {
        self.check(rhs).expect("field mismatch");
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a -= b;
        }
    }
}
impl MulAssign<&NFElem> for NFElem {
    fn mul_assign(&mut self, rhs: &NFElem) {
        *self = &*self * rhs;
    }
}

/// Constants of `Q(zeta8)` used throughout the symbolic modules.
pub mod z8 {
    use super::*;

    pub fn zeta() -> NFElem {
        NFElem::generator(&qz8())
    }
    pub fn i() -> NFElem {
        zeta().pow(2)
    }
    pub fn sqrt2() -> NFElem {
        let z = zeta();
        &z - &z.pow(3)
    }
    pub fn int(n: i64) -> NFElem {
        NFElem::from_int(&qz8(), n)
    }
    pub fn frac(n: i64, d: i64) -> NFElem {
        NFElem::from_frac(&qz8(), n, d)
    }
    pub fn rat(r: Rational) -> NFElem {
        NFElem::from_rational(&qz8(), r)
    }
    pub fn zero() -> NFElem {
        NFElem::zero(&qz8())
    }
    pub fn one() -> NFElem {
        NFElem::one(&qz8())
    }
    /// `a + b i` with rational parts.
    pub fn gauss(a: Rational, b: Rational) -> NFElem {
        rat(a) + i().scale(&b)
    }
}
