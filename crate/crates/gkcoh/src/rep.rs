//! The finite-dimensional models `P(k)` (binary forms) and `V(k)` (their duals)
//! with the `GL2` and `sl2` actions, the `mu_m` basis, the pairing and the
//! invariant tensor `Upsilon`.
//!
//! Forms are stored by coefficient: entry `j` of a [`PkPoly`] is the coefficient
//! of `X^j Y^(k-j)`, and entry `j` of a [`VkDual`] is the value `mu(X^j Y^(k-j))`.

use crate::error::{Error, Result};
use crate::exact::{binom, rat, Field, Matrix, MultiPoly, NFElem};

#[derive(Clone, Debug, PartialEq)]
pub struct PkPoly {
    pub coeffs: Vec<NFElem>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VkDual {
    pub coeffs: Vec<NFElem>,
}

/// An invertible 2x2 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GL2Elem {
    m: Matrix,
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl PkPoly {
    pub fn zero(field: &Field, k: usize) -> Self {
        PkPoly { coeffs: vec![NFElem::zero(field); k + 1] }
    }

    /// The monomial `X^j Y^(k-j)`.
    pub fn monomial(field: &Field, k: usize, j: usize) -> Self {
        let mut p = Self::zero(field, k);
        p.coeffs[j] = NFElem::one(field);
        p
    }

    pub fn weight(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> &Field {
        self.coeffs[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(NFElem::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.weight(), other.weight());
        PkPoly { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &NFElem) -> Self {
        PkPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field().clone();
        let mut out = Self::zero(&f, self.weight() + other.weight());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += &(a * b);
                }
            }
        }
        out
    }

    /// As a polynomial in the variables `X, Y`.
    pub fn to_multipoly(&self) -> MultiPoly {
        let k = self.weight() as u32;
        let mut p = MultiPoly::zero(self.field(), &["X", "Y"]);
        for (j, c) in self.coeffs.iter().enumerate() {
            p.add_term(crate::exact::Mono(vec![j as u32, k - j as u32]), c.clone());
        }
        p
    }

    /// Reads a homogeneous polynomial in two variables of total degree `k`.
    pub fn from_multipoly(p: &MultiPoly, k: usize) -> Result<Self> {
        if p.nvars() != 2 {
            return Err(Error::BadWeight(k as i64));
        }
        let mut out = Self::zero(p.field(), k);
        for (m, c) in p.terms() {
            if m.degree() as usize != k {
                return Err(Error::WeightMismatch(m.degree() as usize, k));
            }
            out.coeffs[m.0[0] as usize] = c.clone();
        }
        Ok(out)
    }

    /// Evaluation at `(X, Y)`.
    pub fn eval(&self, x: &NFElem, y: &NFElem) -> NFElem {
        let k = self.weight() as u32;
        let mut acc = NFElem::zero(self.field());
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += &(c * &(x.pow(j as u32) * y.pow(k - j as u32)));
            }
        }
        acc
    }
}

impl VkDual {
    pub fn zero(field: &Field, k: usize) -> Self {
        VkDual { coeffs: vec![NFElem::zero(field); k + 1] }
    }

    /// The dual basis vector `(X^j Y^(k-j))^v`.
    pub fn basis(field: &Field, k: usize, j: usize) -> Self {
        let mut v = Self::zero(field, k);
        v.coeffs[j] = NFElem::one(field);
        v
    }

    pub fn weight(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> &Field {
        self.coeffs[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(NFElem::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.weight(), other.weight());
        VkDual { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.weight(), other.weight());
        VkDual { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &NFElem) -> Self {
        VkDual { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `mu(P)`.
    pub fn apply(&self, p: &PkPoly) -> NFElem {
        assert_eq!(self.weight(), p.weight());
        let mut acc = NFElem::zero(self.field());
        for (a, b) in self.coeffs.iter().zip(&p.coeffs) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }
}

impl GL2Elem {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::SingularMatrix);
        }
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(GL2Elem { m })
    }

    pub fn from_entries(a: NFElem, b: NFElem, c: NFElem, d: NFElem) -> Result<Self> {
        let f = a.field().clone();
        Self::new(Matrix::from_rows(&f, vec![vec![a, b], vec![c, d]]))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn entries(&self) -> [&NFElem; 4] {
        [self.m.get(0, 0), self.m.get(0, 1), self.m.get(1, 0), self.m.get(1, 1)]
    }

    pub fn det(&self) -> NFElem {
        self.m.det()
    }

    pub fn inverse(&self) -> Self {
        GL2Elem { m: self.m.inverse().expect("invertible") }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GL2Elem { m: self.m.mul(&other.m) }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Result<Self> {
        let [a, b, c, d] = self.entries();
        Self::from_entries(a.conj()?, b.conj()?, c.conj()?, d.conj()?)
    }
}

/// Matrix of `P -> g P` on `P(k)` in the monomial basis (column `j` is the image of `X^j Y^(k-j)`).
pub fn gl2_matrix(g: &GL2Elem, k: usize) -> Matrix {
    let [a, b, c, d] = g.entries();
    let f = a.field().clone();
    // (aX + cY)^j (bX + dY)^(k-j)
    let lin = |p: &NFElem, q: &NFElem| PkPoly { coeffs: vec![q.clone(), p.clone()] };
    let l1 = lin(a, c);
    let l2 = lin(b, d);
    let mut pows1 = vec![PkPoly { coeffs: vec![NFElem::one(&f)] }];
    let mut pows2 = vec![PkPoly { coeffs: vec![NFElem::one(&f)] }];
    for _ in 0..k {
        pows1.push(pows1.last().unwrap().mul(&l1));
        pows2.push(pows2.last().unwrap().mul(&l2));
    }
    let scale = g.det().pow((k / 2) as u32).inv().expect("invertible");
    let mut m = Matrix::zeros(&f, k + 1, k + 1);
    for j in 0..=k {
        let img = pows1[j].mul(&pows2[k - j]).scale(&scale);
        for (i, v) in img.coeffs.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

/// `(g P)(X, Y) = det(g)^(-k/2) P(aX + cY, bX + dY)`.
pub fn act_gl2(g: &GL2Elem, p: &PkPoly) -> PkPoly {
    let k = p.weight();
    PkPoly { coeffs: gl2_matrix(g, k).mul_vec(&p.coeffs) }
}

/// Matrix of `mu -> g mu` on `V(k)` in the dual monomial basis.
pub fn dual_matrix(g: &GL2Elem, k: usize) -> Matrix {
    gl2_matrix(&g.inverse(), k).transpose()
}

/// `(g mu)(P) = mu(g^-1 P)`.
pub fn dual_act(g: &GL2Elem, mu: &VkDual) -> VkDual {
    VkDual { coeffs: dual_matrix(g, mu.weight()).mul_vec(&mu.coeffs) }
}

fn check_trace_zero(x: &Matrix) -> Result<()> {
    if x.rows() != 2 || x.cols() != 2 || !(x.get(0, 0) + x.get(1, 1)).is_zero() {
        return Err(Error::NotTraceZero);
    }
    Ok(())
}

/// Matrix of the derivation `P -> X P` on `P(k)`.
pub fn lie_matrix(x: &Matrix, k: usize) -> Result<Matrix> {
    check_trace_zero(x)?;
    let (p, q, r) = (x.get(0, 0), x.get(0, 1), x.get(1, 0));
    let f = p.field().clone();
    let mut m = Matrix::zeros(&f, k + 1, k + 1);
    for j in 0..=k {
        let jj = NFElem::from_int(&f, j as i64);
        let kj = NFElem::from_int(&f, (k - j) as i64);
        // (pX + rY) dP/dX + (qX - pY) dP/dY on X^j Y^(k-j)
        let diag = &(p * &jj) - &(p * &kj);
        m.set(j, j, diag);
        if j > 0 {
            m.set(j - 1, j, r * &jj);
        }
        if j < k {
            m.set(j + 1, j, q * &kj);
        }
    }
    Ok(m)
}

pub fn lie_act_poly(x: &Matrix, p: &PkPoly) -> Result<PkPoly> {
    Ok(PkPoly { coeffs: lie_matrix(x, p.weight())?.mul_vec(&p.coeffs) })
}

/// Matrix of `mu -> X mu` on `V(k)`, where `(X mu)(P) = -mu(X P)`.
pub fn lie_dual_matrix(x: &Matrix, k: usize) -> Result<Matrix> {
    let t = lie_matrix(x, k)?.transpose();
    let f = x.field().clone();
    let minus = NFElem::from_int(&f, -1);
    let mut out = Matrix::zeros(&f, k + 1, k + 1);
    for i in 0..=k {
        for j in 0..=k {
            out.set(i, j, t.get(i, j) * &minus);
        }
    }
    Ok(out)
}

pub fn lie_act_dual(x: &Matrix, mu: &VkDual) -> Result<VkDual> {
    Ok(VkDual { coeffs: lie_dual_matrix(x, mu.weight())?.mul_vec(&mu.coeffs) })
}

/// The functional `mu_m` on `P(k-2)`.
pub fn mu_basis(field: &Field, k: usize, m: i64) -> Result<VkDual> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::BadWeight(k as i64));
    }
    let h = (k as i64 - 2) / 2;
    if m.abs() > h {
        return Err(Error::BadIndex(m));
    }
    let j = (h + m) as usize;
    let mut v = VkDual::zero(field, k - 2);
    v.coeffs[j] = NFElem::from_rational(field, rat(sign(h - m)) / binom(k as i64 - 2, h + m));
    Ok(v)
}

/// `mu -> mu((X y - Y x)^k)`, a form in the lower-case variables stored with the
/// same indexing convention (entry `j` is the coefficient of `x^j y^(k-j)`).
pub fn dual_iso(mu: &VkDual) -> PkPoly {
    let k = mu.weight();
    let f = mu.field().clone();
    let mut p = PkPoly::zero(&f, k);
    for j in 0..=k {
        let c = binom(k as i64, j as i64) * rat(sign((k - j) as i64));
        p.coeffs[k - j] = mu.coeffs[j].scale(&c);
    }
    p
}

/// Inverse of [`dual_iso`].
pub fn dual_iso_inv(p: &PkPoly) -> VkDual {
    let k = p.weight();
    let f = p.field().clone();
    let mut mu = VkDual::zero(&f, k);
    for j in 0..=k {
        let c = binom(k as i64, j as i64) * rat(sign((k - j) as i64));
        mu.coeffs[j] = p.coeffs[k - j].scale(&c.recip());
    }
    mu
}

/// The invariant pairing on `P(k)` normalized by `<X^k, Y^k> = 1`.
pub fn pairing_pk(p: &PkPoly, q: &PkPoly) -> Result<NFElem> {
    if p.weight() != q.weight() {
        return Err(Error::WeightMismatch(p.weight(), q.weight()));
    }
    Ok(dual_iso_inv(p).apply(q))
}

/// Element of `V(k1) (x) V(k2)`: `c[a][b]` is the coefficient of the tensor of dual basis vectors `a` and `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualTensor {
    pub c: Vec<Vec<NFElem>>,
}

impl DualTensor {
    pub fn zero(field: &Field, k1: usize, k2: usize) -> Self {
        DualTensor { c: vec![vec![NFElem::zero(field); k2 + 1]; k1 + 1] }
    }

    pub fn weights(&self) -> (usize, usize) {
        (self.c.len() - 1, self.c[0].len() - 1)
    }

    pub fn pure(a: &VkDual, b: &VkDual) -> Self {
        DualTensor { c: a.coeffs.iter().map(|x| b.coeffs.iter().map(|y| x * y).collect()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        DualTensor {
            c: self.c.iter().zip(&other.c).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect()).collect(),
        }
    }

    pub fn scale(&self, s: &NFElem) -> Self {
        DualTensor { c: self.c.iter().map(|r| r.iter().map(|a| a * s).collect()).collect() }
    }

    /// Applies `A (x) B` given the matrices of `A` and `B` on each factor.
    pub fn act(&self, a: &Matrix, b: &Matrix) -> Self {
        let (k1, k2) = self.weights();
        let f = a.field().clone();
        let t = Matrix::from_rows(&f, self.c.clone());
        let r = a.mul(&t).mul(&b.transpose());
        DualTensor { c: (0..=k1).map(|i| (0..=k2).map(|j| r.get(i, j).clone()).collect()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().all(NFElem::is_zero)
    }
}

/// `Upsilon = sum_m C(k-2, (k-2)/2 + m) (-1)^((k-2)/2 - m) mu_m (x) mu_{-m}` in `V(k-2)^(x)2`.
pub fn upsilon(field: &Field, k: usize) -> Result<DualTensor> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::BadWeight(k as i64));
    }
    let h = (k as i64 - 2) / 2;
    let mut t = DualTensor::zero(field, k - 2, k - 2);
    for m in -h..=h {
        let c = binom(k as i64 - 2, h + m) * rat(sign(h - m));
        let term = DualTensor::pure(&mu_basis(field, k, m)?, &mu_basis(field, k, -m)?);
        t = t.add(&term.scale(&NFElem::from_rational(field, c)));
    }
    Ok(t)
}

/// Named elements of `sl2(C)` over `Q(zeta8)`.
pub mod lie {
    use crate::exact::{qz8, z8, Matrix, NFElem};

    fn m(a: NFElem, b: NFElem, c: NFElem, d: NFElem) -> Matrix {
        Matrix::from_rows(&qz8(), vec![vec![a, b], vec![c, d]])
    }

    pub fn hat_h() -> Matrix {
        m(z8::one(), z8::zero(), z8::zero(), z8::int(-1))
    }
    pub fn tilde_w() -> Matrix {
        m(z8::zero(), z8::one(), z8::one(), z8::zero())
    }
    pub fn w() -> Matrix {
        m(z8::zero(), z8::one(), z8::int(-1), z8::zero())
    }
    pub fn h() -> Matrix {
        m(z8::zero(), -z8::i(), z8::i(), z8::zero())
    }
    pub fn hat_h_i() -> Matrix {
        m(z8::i(), z8::zero(), z8::zero(), -z8::i())
    }
    pub fn tilde_w_i() -> Matrix {
        m(z8::zero(), z8::i(), z8::i(), z8::zero())
    }
    /// Upper nilpotent `N1`.
    pub fn n1() -> Matrix {
        m(z8::zero(), z8::one(), z8::zero(), z8::zero())
    }
    /// Upper nilpotent `N2 = i N1`.
    pub fn n2() -> Matrix {
        m(z8::zero(), z8::i(), z8::zero(), z8::zero())
    }

    pub fn bracket(a: &Matrix, b: &Matrix) -> Matrix {
        let ab = a.mul(b);
        let ba = b.mul(a);
        let f = qz8();
        Matrix::from_rows(&f, (0..2).map(|i| (0..2).map(|j| ab.get(i, j) - ba.get(i, j)).collect()).collect())
    }

    /// `kappa(1/sqrt2, 1/sqrt2)`, which equals the rotation by `pi/4`.
    pub fn kappa1() -> super::GL2Elem {
        let s = z8::sqrt2().inv().unwrap();
        super::GL2Elem::from_entries(s.clone(), s.clone(), -&s, s).unwrap()
    }

    /// `kappa(1/sqrt2, -i/sqrt2)`.
    pub fn kappa2() -> super::GL2Elem {
        let s = z8::sqrt2().inv().unwrap();
        let is = &z8::i() * &s;
        super::GL2Elem::from_entries(s.clone(), -&is, -&is, s).unwrap()
    }

    /// `Ad(g) X = g X g^-1`.
    pub fn adjoint(g: &super::GL2Elem, x: &Matrix) -> Matrix {
        g.matrix().mul(x).mul(g.inverse().matrix())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, qz8, z8};
    use proptest::prelude::*;

    fn f() -> Field {
        qz8()
    }

    fn g(a: i64, b: i64, c: i64, d: i64) -> GL2Elem {
        GL2Elem::from_entries(z8::int(a), z8::int(b), z8::int(c), z8::int(d)).unwrap()
    }

    fn poly(cs: &[i64]) -> PkPoly {
        PkPoly { coeffs: cs.iter().map(|&c| z8::int(c)).collect() }
    }

    #[test]
    fn identity_and_torus_actions() {
        let p = poly(&[1, -2, 3, 0, 5]);
        assert_eq!(act_gl2(&g(1, 0, 0, 1), &p), p);
        // diag(t,1) on X^a Y^(k-a) gives t^(a-k/2)
        let t = GL2Elem::from_entries(z8::int(3), z8::zero(), z8::zero(), z8::one()).unwrap();
        for a in 0..=4 {
            let m = PkPoly::monomial(&f(), 4, a);
            let exp = NFElem::from_int(&f(), 3).powi(a as i64 - 2).unwrap();
            assert_eq!(act_gl2(&t, &m), m.scale(&exp));
        }
        // (0,1;-1,0) sends X^k to Y^k
        let x4 = PkPoly::monomial(&f(), 4, 4);
        assert_eq!(act_gl2(&g(0, 1, -1, 0), &x4), PkPoly::monomial(&f(), 4, 0));
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let e = GL2Elem::from_entries(z8::one(), z8::int(2), z8::int(2), z8::int(4));
        assert_eq!(e.unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn mu_basis_values() {
        let mu = mu_basis(&f(), 2, 0).unwrap();
        assert_eq!(mu.coeffs, vec![z8::one()]);
        let mu = mu_basis(&f(), 4, 1).unwrap();
        assert_eq!(mu.coeffs, vec![z8::zero(), z8::zero(), z8::one()]);
        assert_eq!(mu_basis(&f(), 4, 2).unwrap_err(), Error::BadIndex(2));
        // dual_iso(mu_m) = x^((k-2)/2 - m) y^((k-2)/2 + m)
        for k in [2usize, 4, 6, 8] {
            let h = (k as i64 - 2) / 2;
            for m in -h..=h {
                let p = dual_iso(&mu_basis(&f(), k, m).unwrap());
                assert_eq!(p, PkPoly::monomial(&f(), k - 2, (h - m) as usize));
            }
        }
    }

    #[test]
    fn mu_m_is_a_torus_eigenvector() {
        let t = z8::int(5);
        let d = GL2Elem::from_entries(t.clone(), z8::zero(), z8::zero(), z8::one()).unwrap();
        for m in -2i64..=2 {
            let mu = mu_basis(&f(), 6, m).unwrap();
            assert_eq!(dual_act(&d, &mu), mu.scale(&t.powi(-m).unwrap()));
        }
    }

    #[test]
    fn hat_h_weights() {
        for a in 0..=4 {
            let m = PkPoly::monomial(&f(), 4, a);
            let out = lie_act_poly(&lie::hat_h(), &m).unwrap();
            assert_eq!(out, m.scale(&z8::int(2 * a as i64 - 4)));
        }
        let bad = Matrix::identity(&f(), 2);
        assert_eq!(lie_act_poly(&bad, &poly(&[1, 0, 0])).unwrap_err(), Error::NotTraceZero);
    }

    #[test]
    fn w_kills_the_rotation_invariant() {
        // In P(2), X^2 + Y^2 is SO(2)-invariant.
        let v = dual_iso_inv(&poly(&[1, 0, 1]));
        assert!(lie_act_dual(&lie::w(), &v).unwrap().is_zero());
    }

    #[test]
    fn pairing_normalization() {
        let xk = PkPoly::monomial(&f(), 6, 6);
        let yk = PkPoly::monomial(&f(), 6, 0);
        assert_eq!(pairing_pk(&xk, &yk).unwrap(), z8::one());
        assert!(pairing_pk(&xk, &xk).unwrap().is_zero());
        assert_eq!(pairing_pk(&xk, &poly(&[1, 0, 0])).unwrap_err(), Error::WeightMismatch(6, 2));
    }

    #[test]
    fn pairing_is_sl2_invariant() {
        let s = g(2, 3, 1, 2);
        let p = poly(&[1, -1, 2, 0, 3]);
        let q = poly(&[0, 4, -2, 1, 1]);
        assert_eq!(pairing_pk(&act_gl2(&s, &p), &act_gl2(&s, &q)).unwrap(), pairing_pk(&p, &q).unwrap());
    }

    #[test]
    fn upsilon_small_weights() {
        let u2 = upsilon(&f(), 2).unwrap();
        assert_eq!(u2.c, vec![vec![z8::one()]]);
        let u4 = upsilon(&f(), 4).unwrap();
        let expected = DualTensor::pure(&mu_basis(&f(), 4, 1).unwrap(), &mu_basis(&f(), 4, -1).unwrap())
            .add(&DualTensor::pure(&mu_basis(&f(), 4, 0).unwrap(), &mu_basis(&f(), 4, 0).unwrap()).scale(&z8::int(-2)))
            .add(&DualTensor::pure(&mu_basis(&f(), 4, -1).unwrap(), &mu_basis(&f(), 4, 1).unwrap()));
        assert_eq!(u4, expected);
    }

    #[test]
    fn upsilon_is_invariant() {
        for k in [2usize, 4, 6, 8] {
            let u = upsilon(&f(), k).unwrap();
            for gg in [g(1, 1, 0, 1), g(2, 3, 1, 2), g(1, 0, 5, 3)] {
                let a = dual_matrix(&gg, k - 2);
                assert_eq!(u.act(&a, &a), u, "k = {k}");
            }
        }
    }

    #[test]
    fn bracket_relations() {
        use lie::*;
        let two = |m: Matrix| {
            Matrix::from_rows(&f(), (0..2).map(|i| (0..2).map(|j| m.get(i, j) * &z8::int(2)).collect()).collect())
        };
        assert_eq!(bracket(&hat_h(), &tilde_w()), two(w()));
        assert_eq!(bracket(&hat_h(), &w()), two(tilde_w()));
        assert_eq!(bracket(&tilde_w(), &h()), two(hat_h_i()));
        assert_eq!(bracket(&hat_h(), &h()), two(tilde_w_i()).scale_neg());
        assert_eq!(adjoint(&kappa1().inverse(), &hat_h()), tilde_w());
        assert_eq!(adjoint(&kappa2().inverse(), &hat_h()), h());
        assert_eq!(adjoint(&kappa1().inverse(), &h()), h());
        assert_eq!(adjoint(&kappa2().inverse(), &tilde_w()), tilde_w());
    }

    trait Neg2 {
        fn scale_neg(self) -> Matrix;
    }
    impl Neg2 for Matrix {
        fn scale_neg(self) -> Matrix {
            let f = self.field().clone();
            Matrix::from_rows(&f, (0..2).map(|i| (0..2).map(|j| -self.get(i, j)).collect()).collect())
        }
    }

    #[test]
    fn lie_bracket_acts_as_commutator() {
        use lie::*;
        let v = VkDual { coeffs: [3, -1, 2, 0, 7].iter().map(|&c| z8::int(c)).collect() };
        let lhs = lie_act_dual(&bracket(&hat_h(), &tilde_w()), &v).unwrap();
        let a = lie_act_dual(&hat_h(), &lie_act_dual(&tilde_w(), &v).unwrap()).unwrap();
        let b = lie_act_dual(&tilde_w(), &lie_act_dual(&hat_h(), &v).unwrap()).unwrap();
        assert_eq!(lhs, a.sub(&b));
        assert_eq!(lhs, lie_act_dual(&w(), &v).unwrap().scale(&z8::int(2)));
    }

    fn arb_gl2() -> impl Strategy<Value = GL2Elem> {
        (-4i64..5, -4i64..5, -4i64..5, -4i64..5, 0u32..3)
            .prop_filter_map("invertible", |(a, b, c, d, e)| {
                let a = z8::int(a) + &z8::i() * &z8::zeta().pow(e);
                GL2Elem::from_entries(a, z8::int(b), z8::int(c), z8::int(d)).ok()
            })
    }

    fn arb_poly(k: usize) -> impl Strategy<Value = PkPoly> {
        proptest::collection::vec(-5i64..6, k + 1).prop_map(|v| poly(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn gl2_action_is_a_group_action(g1 in arb_gl2(), g2 in arb_gl2(), p in arb_poly(4)) {
            let lhs = act_gl2(&g1.mul(&g2), &p);
            let rhs = act_gl2(&g1, &act_gl2(&g2, &p));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn dual_action_preserves_pairing(g1 in arb_gl2(), p in arb_poly(4), q in arb_poly(4)) {
            let mu = dual_iso_inv(&q);
            prop_assert_eq!(dual_act(&g1, &mu).apply(&act_gl2(&g1, &p)), mu.apply(&p));
        }

        #[test]
        fn dual_iso_intertwines(g1 in arb_gl2(), q in arb_poly(4)) {
            let mu = dual_iso_inv(&q);
            prop_assert_eq!(dual_iso(&dual_act(&g1, &mu)), act_gl2(&g1, &dual_iso(&mu)));
        }

        #[test]
        fn derivation_matches_first_order_expansion(p in arb_poly(4), which in 0usize..4) {
            // (1 + tX) acting, truncated at t^2; with det(1 + tX) = 1 + O(t^2) the first-order part is X.P
            use crate::exact::MultiPoly;
            let x = [lie::hat_h(), lie::tilde_w(), lie::w(), lie::h()][which].clone();
            let fz = f();
            let vars = ["X", "Y", "t"];
            let v = |n: &str| MultiPoly::var(&fz, &vars, n).unwrap();
            let (xx, yy, t) = (v("X"), v("Y"), v("t"));
            let c = |e: &NFElem| xx.constant_like(e.clone());
            let one = c(&z8::one());
            let a = &one + &(&t * &c(x.get(0, 0)));
            let b = &t * &c(x.get(0, 1));
            let cc = &t * &c(x.get(1, 0));
            let d = &one + &(&t * &c(x.get(1, 1)));
            let nx = &(&a * &xx) + &(&cc * &yy);
            let ny = &(&b * &xx) + &(&d * &yy);
            let mut sub = xx.zero_like();
            for (j, coef) in p.coeffs.iter().enumerate() {
                let term = &nx.pow(j as u32) * &ny.pow(4 - j as u32);
                sub = &sub + &term.scale(coef);
            }
            let first: Vec<NFElem> = (0..=4u32).map(|j| sub.coeff(&[j, 4 - j, 1])).collect();
            prop_assert_eq!(PkPoly { coeffs: first }, lie_act_poly(&x, &p).unwrap());
        }
    }

    #[test]
    fn rational_scalars_act_trivially() {
        let s = GL2Elem::from_entries(NFElem::from_rational(&f(), frac(3, 2)), z8::zero(), z8::zero(), NFElem::from_rational(&f(), frac(3, 2))).unwrap();
        let p = poly(&[1, 2, 3]);
        assert_eq!(act_gl2(&s, &p), p);
    }
}
