use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::field::{Field, NFElem};
use super::{AlgError, Rational};

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}
impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial over a number field in a fixed, named list of variables.
#[derive(Clone, PartialEq)]
pub struct MultiPoly {
    field: Field,
    vars: Arc<[String]>,
    terms: BTreeMap<Mono, NFElem>,
}

impl MultiPoly {
    pub fn zero(field: &Field, vars: &[&str]) -> Self {
        MultiPoly {
            field: field.clone(),
            vars: vars.iter().map(|s| s.to_string()).collect::<Vec<_>>().into(),
            terms: BTreeMap::new(),
        }
    }

    /// Zero polynomial sharing this one's field and variables.
    pub fn zero_like(&self) -> Self {
        MultiPoly { field: self.field.clone(), vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant_like(&self, c: NFElem) -> Self {
        self.monomial_like(vec![0; self.nvars()], c)
    }

    pub fn monomial_like(&self, exps: Vec<u32>, c: NFElem) -> Self {
        assert_eq!(exps.len(), self.nvars());
        let mut p = self.zero_like();
        p.add_term(Mono(exps), c);
        p
    }

    pub fn var(field: &Field, vars: &[&str], name: &str) -> Result<Self, AlgError> {
        let z = Self::zero(field, vars);
        let idx = z.var_index(name).ok_or_else(|| AlgError::BadVariable(name.into()))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Ok(z.monomial_like(e, NFElem::one(field)))
    }

    /// The `idx`-th variable as a polynomial.
    pub fn gen_like(&self, idx: usize) -> Self {
        let mut e = vec![0; self.nvars()];
        e[idx] = 1;
        self.monomial_like(e, NFElem::one(&self.field))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &NFElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> NFElem {
        self.terms.get(&Mono(exps.to_vec())).cloned().unwrap_or_else(|| NFElem::zero(&self.field))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Mono::degree)
    }

    pub fn add_term(&mut self, m: Mono, c: NFElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) {
        assert!(self.vars == other.vars, "variable lists differ");
    }

    pub fn scale(&self, c: &NFElem) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        let mut p = self.zero_like();
        for (m, a) in &self.terms {
            p.terms.insert(m.clone(), a * c);
        }
        p
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        self.scale(&NFElem::from_rational(&self.field, r.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.constant_like(NFElem::one(&self.field));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative in variable `idx`.
    pub fn diff(&self, idx: usize) -> Self {
        let mut p = self.zero_like();
        for (m, a) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut n = m.0.clone();
            n[idx] -= 1;
            p.add_term(Mono(n), a.scale(&super::rat(e as i64)));
        }
        p
    }

    /// Replaces variable `idx` by `value` (a polynomial in the same variables).
    pub fn substitute(&self, idx: usize, value: &MultiPoly) -> Self {
        self.check(value);
        let mut powers: Vec<MultiPoly> = vec![self.constant_like(NFElem::one(&self.field))];
        let mut out = self.zero_like();
        for (m, a) in &self.terms {
            let e = m.0[idx] as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            let mut rest = m.0.clone();
            rest[idx] = 0;
            let base = self.monomial_like(rest, a.clone());
            out = &out + &(&base * &powers[e]);
        }
        out
    }

    /// Simultaneous substitution: variable `j` becomes `images[j]`.
    pub fn compose(&self, images: &[MultiPoly]) -> Self {
        assert_eq!(images.len(), self.nvars());
        let target = &images[0];
        let one = target.constant_like(NFElem::one(&self.field));
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|_| vec![one.clone()]).collect();
        let mut out = target.zero_like();
        for (m, a) in &self.terms {
            let mut t = one.scale(a);
            for (j, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[j].len() <= e {
                    let next = &powers[j][powers[j].len() - 1] * &images[j];
                    powers[j].push(next);
                }
                if e > 0 {
                    t = &t * &powers[j][e];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&NFElem) -> NFElem) -> Self {
        let mut p = self.zero_like();
        for (m, a) in &self.terms {
            p.add_term(m.clone(), f(a));
        }
        p
    }

    /// Evaluates with every variable replaced by a field element.
    pub fn eval(&self, point: &[NFElem]) -> NFElem {
        assert_eq!(point.len(), self.nvars());
        let mut acc = NFElem::zero(&self.field);
        for (m, a) in &self.terms {
            let mut t = a.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc += &t;
        }
        acc
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, a) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({a})")?;
            for (v, &e) in self.vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check(rhs);
        let mut p = self.clone();
        for (m, a) in &rhs.terms {
            p.add_term(m.clone(), a.clone());
        }
        p
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.check(rhs);
        let mut p = self.clone();
        for (m, a) in &rhs.terms {
            p.add_term(m.clone(), -a);
        }
        p
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check(rhs);
        let mut p = self.zero_like();
        for (m1, a1) in &self.terms {
            for (m2, a2) in &rhs.terms {
                let e: Vec<u32> = m1.0.iter().zip(&m2.0).map(|(x, y)| x + y).collect();
                p.add_term(Mono(e), a1 * a2);
            }
        }
        p
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.map_coeffs(|a| -a)
    }
}

/// Names of the unit-sphere variables `alpha, beta, conj(alpha), conj(beta)`.
pub const SPHERE_VARS: [&str; 4] = ["alpha", "beta", "alpha_bar", "beta_bar"];

/// Normal form modulo `alpha*alpha_bar + beta*beta_bar = 1`: every `beta*beta_bar`
/// is rewritten as `1 - alpha*alpha_bar`, so no monomial keeps both.
pub fn su2_normal_form(p: &MultiPoly) -> Result<MultiPoly, AlgError> {
    let idx: Vec<usize> = SPHERE_VARS
        .iter()
        .map(|v| p.var_index(v).ok_or_else(|| AlgError::BadVariable((*v).into())))
        .collect::<Result<_, _>>()?;
    for (m, _) in p.terms() {
        for (j, &e) in m.0.iter().enumerate() {
            if e > 0 && !idx.contains(&j) {
                return Err(AlgError::BadVariable(p.vars()[j].clone()));
            }
        }
    }
    let (ia, ib, iab, ibb) = (idx[0], idx[1], idx[2], idx[3]);
    let mut out = p.zero_like();
    for (m, c) in p.terms() {
        let k = m.0[ib].min(m.0[ibb]);
        if k == 0 {
            out.add_term(m.clone(), c.clone());
            continue;
        }
        // (1 - a*abar)^k expanded binomially
        for j in 0..=k {
            let mut e = m.0.clone();
            e[ib] -= k;
            e[ibb] -= k;
            e[ia] += j;
            e[iab] += j;
            let s = super::binom(k as i64, j as i64) * super::rat(if j % 2 == 0 { 1 } else { -1 });
            out.add_term(Mono(e), c.scale(&s));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::qz8;
    use crate::exact::{rat, z8};
    use proptest::prelude::*;

    fn sphere() -> MultiPoly {
        MultiPoly::zero(&qz8(), &SPHERE_VARS)
    }

    fn mono(e: [u32; 4], c: i64) -> MultiPoly {
        sphere().monomial_like(e.to_vec(), z8::int(c))
    }

    #[test]
    fn grlex_order() {
        assert!(Mono(vec![0, 2]) > Mono(vec![1, 0]));
        assert!(Mono(vec![2, 0]) > Mono(vec![1, 1]));
    }

    #[test]
    fn sphere_rewrites() {
        let bb = mono([0, 1, 0, 1], 1);
        let expected = &mono([0, 0, 0, 0], 1) - &mono([1, 0, 1, 0], 1);
        assert_eq!(su2_normal_form(&bb).unwrap(), expected);

        let aa = mono([1, 0, 1, 0], 1);
        assert_eq!(su2_normal_form(&aa).unwrap(), aa);

        let b2b = mono([0, 2, 0, 1], 1);
        let expected = &mono([0, 1, 0, 0], 1) - &mono([1, 1, 1, 0], 1);
        assert_eq!(su2_normal_form(&b2b).unwrap(), expected);
    }

    #[test]
    fn foreign_variable_is_rejected() {
        let f = qz8();
        let p = MultiPoly::var(&f, &["alpha", "beta", "alpha_bar", "beta_bar", "r"], "r").unwrap();
        assert_eq!(su2_normal_form(&p), Err(AlgError::BadVariable("r".into())));
        let q = MultiPoly::var(&f, &["x", "y"], "x").unwrap();
        assert!(matches!(su2_normal_form(&q), Err(AlgError::BadVariable(_))));
    }

    #[test]
    fn derivative_and_substitution() {
        let f = qz8();
        let x = MultiPoly::var(&f, &["x", "y"], "x").unwrap();
        let y = MultiPoly::var(&f, &["x", "y"], "y").unwrap();
        let p = &(&x * &x) * &y;
        assert_eq!(p.diff(0), (&x * &y).scale_rat(&rat(2)));
        let s = p.substitute(0, &(&x + &y));
        assert_eq!(s, &(&(&x + &y) * &(&x + &y)) * &y);
    }

    fn arb_sphere_poly() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -3i64..4), 0..5).prop_map(|ts| {
            let mut p = sphere();
            for ((a, b, c, d), k) in ts {
                p.add_term(Mono(vec![a, b, c, d]), z8::int(k));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn normal_form_is_idempotent_and_multiplicative(p in arb_sphere_poly(), q in arb_sphere_poly()) {
            let np = su2_normal_form(&p).unwrap();
            prop_assert_eq!(su2_normal_form(&np).unwrap(), np.clone());
            let nq = su2_normal_form(&q).unwrap();
            let lhs = su2_normal_form(&(&p * &q)).unwrap();
            let rhs = su2_normal_form(&(&np * &nq)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
