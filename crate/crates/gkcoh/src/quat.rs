//! Quaternion algebras `(a, b / F)`, symmetric powers of the trace-zero part,
//! the harmonic kernel `V_k`, the embedding into binary forms and torus-invariant vectors.
//!
//! Symmetric tensors are commutative polynomials in the letters `i, j, k`: the
//! multiset `{i, i, j}` is the monomial `i^2 j`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{factorial, AlgError, Field, Matrix, Mono, MultiPoly, NFElem};
use crate::rep::PkPoly;

const LETTERS: [&str; 3] = ["i", "j", "k"];

#[derive(Debug, PartialEq)]
pub struct QuaternionAlgebra {
    field: Field,
    a: NFElem,
    b: NFElem,
}

pub type Algebra = Arc<QuaternionAlgebra>;

impl QuaternionAlgebra {
    pub fn new(a: NFElem, b: NFElem) -> Result<Algebra> {
        if a.field() != b.field() {
            return Err(AlgError::FieldMismatch.into());
        }
        if a.is_zero() || b.is_zero() {
            return Err(AlgError::BadInput("quaternion parameters must be nonzero".into()).into());
        }
        Ok(Arc::new(QuaternionAlgebra { field: a.field().clone(), a, b }))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn a(&self) -> &NFElem {
        &self.a
    }
    pub fn b(&self) -> &NFElem {
        &self.b
    }

    /// `<e, e>` for `e` in `i, j, k`.
    fn letter_square_pairing(&self) -> [NFElem; 3] {
        let two = NFElem::from_int(&self.field, 2);
        let ab = &self.a * &self.b;
        [-(&two * &self.a), -(&two * &self.b), &two * &ab]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuatElem {
    alg: Algebra,
    coords: [NFElem; 4],
}

impl QuatElem {
    pub fn new(alg: &Algebra, coords: [NFElem; 4]) -> Self {
        QuatElem { alg: alg.clone(), coords }
    }

    pub fn from_ints(alg: &Algebra, c: [i64; 4]) -> Self {
        let f = alg.field();
        Self::new(alg, c.map(|x| NFElem::from_int(f, x)))
    }

    /// Basis element: 0 for 1, then 1, 2, 3 for `i, j, k`.
    pub fn basis(alg: &Algebra, idx: usize) -> Self {
        let mut c = [0; 4];
        c[idx] = 1;
        Self::from_ints(alg, c)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn coords(&self) -> &[NFElem; 4] {
        &self.coords
    }

    pub fn conj(&self) -> Self {
        let [x0, x1, x2, x3] = &self.coords;
        Self::new(&self.alg, [x0.clone(), -x1, -x2, -x3])
    }

    pub fn trace(&self) -> NFElem {
        &self.coords[0] + &self.coords[0]
    }

    pub fn norm(&self) -> NFElem {
        self.mul(&self.conj()).expect("same algebra").coords[0].clone()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.alg != other.alg {
            return Err(Error::AlgebraMismatch);
        }
        let (a, b) = (&self.alg.a, &self.alg.b);
        let ab = a * b;
        let [x0, x1, x2, x3] = &self.coords;
        let [y0, y1, y2, y3] = &other.coords;
        let c0 = &(&(x0 * y0) + &(a * &(x1 * y1))) + &(&(b * &(x2 * y2)) - &(&ab * &(x3 * y3)));
        let c1 = &(&(x0 * y1) + &(x1 * y0)) + &(b * &(&(x3 * y2) - &(x2 * y3)));
        let c2 = &(&(x0 * y2) + &(x2 * y0)) + &(a * &(&(x1 * y3) - &(x3 * y1)));
        let c3 = &(&(x0 * y3) + &(x3 * y0)) + &(&(x1 * y2) - &(x2 * y1));
        Ok(Self::new(&self.alg, [c0, c1, c2, c3]))
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm().inv()?;
        let c = self.conj();
        Ok(Self::new(&self.alg, c.coords.map(|x| &x * &n)))
    }
}

/// `<b1, b2> = Tr(b1 * conj(b2))`.
pub fn trace_pairing(b1: &QuatElem, b2: &QuatElem) -> Result<NFElem> {
    Ok(b1.mul(&b2.conj())?.trace())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    alg: Algebra,
    degree: usize,
    poly: MultiPoly,
}

impl SymTensor {
    pub fn zero(alg: &Algebra, degree: usize) -> Self {
        SymTensor { alg: alg.clone(), degree, poly: MultiPoly::zero(alg.field(), &LETTERS) }
    }

    pub fn one(alg: &Algebra) -> Self {
        let mut t = Self::zero(alg, 0);
        t.poly.add_term(Mono(vec![0, 0, 0]), NFElem::one(alg.field()));
        t
    }

    /// `c * i^p j^q k^r`.
    pub fn monomial(alg: &Algebra, exps: [u32; 3], c: NFElem) -> Self {
        let mut t = Self::zero(alg, exps.iter().sum::<u32>() as usize);
        t.poly.add_term(Mono(exps.to_vec()), c);
        t
    }

    /// A trace-zero quaternion as a degree-one tensor.
    pub fn from_pure(b: &QuatElem) -> Result<Self> {
        if !b.coords[0].is_zero() {
            return Err(AlgError::BadInput("element is not trace zero".into()).into());
        }
        let mut t = Self::zero(&b.alg, 1);
        for e in 0..3 {
            let mut exps = vec![0; 3];
            exps[e] = 1;
            t.poly.add_term(Mono(exps), b.coords[e + 1].clone());
        }
        Ok(t)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, exps: [u32; 3]) -> NFElem {
        self.poly.coeff(&exps)
    }

    /// Terms keyed by sorted multisets over `{i, j, k}` (letters as 0, 1, 2).
    pub fn terms(&self) -> BTreeMap<Vec<u8>, NFElem> {
        self.poly
            .terms()
            .map(|(m, c)| {
                let key = (0..3u8).flat_map(|e| std::iter::repeat(e).take(m.0[e as usize] as usize)).collect();
                (key, c.clone())
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        SymTensor { alg: self.alg.clone(), degree: self.degree, poly: &self.poly + &other.poly }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        SymTensor { alg: self.alg.clone(), degree: self.degree, poly: &self.poly - &other.poly }
    }

    pub fn scale(&self, c: &NFElem) -> Self {
        SymTensor { alg: self.alg.clone(), degree: self.degree, poly: self.poly.scale(c) }
    }

    /// Symmetric product.
    pub fn mul(&self, other: &Self) -> Self {
        SymTensor { alg: self.alg.clone(), degree: self.degree + other.degree, poly: &self.poly * &other.poly }
    }

    pub fn pow(&self, e: u32) -> Self {
        SymTensor { alg: self.alg.clone(), degree: self.degree * e as usize, poly: self.poly.pow(e) }
    }

    fn coords_in(&self, basis: &[[u32; 3]]) -> Vec<NFElem> {
        basis.iter().map(|m| self.coeff(*m)).collect()
    }

    fn from_coords(alg: &Algebra, basis: &[[u32; 3]], v: &[NFElem]) -> Self {
        let degree = basis.first().map_or(0, |m| m.iter().sum::<u32>() as usize);
        let mut t = Self::zero(alg, degree);
        for (m, c) in basis.iter().zip(v) {
            t.poly.add_term(Mono(m.to_vec()), c.clone());
        }
        t
    }

    /// Image under the linear substitution of `i, j, k` by the given degree-one polynomials.
    fn map_letters(&self, images: &[MultiPoly; 3]) -> MultiPoly {
        let mut out = images[0].zero_like();
        for (m, c) in self.poly.terms() {
            let mut term = images[0].constant_like(c.clone());
            for e in 0..3 {
                term = &term * &images[e].pow(m.0[e]);
            }
            out = &out + &term;
        }
        out
    }
}

/// Exponent vectors `(p, q, r)` with `p + q + r = n`, in ascending term order.
fn sym_monomials(n: usize) -> Vec<[u32; 3]> {
    let n = n as u32;
    let mut v: Vec<[u32; 3]> = (0..=n).flat_map(|p| (0..=n - p).map(move |q| [p, q, n - p - q])).collect();
    v.sort_by_key(|x| Mono(x.to_vec()));
    v
}

/// The contraction `Delta` summing `<b_s, b_t>` over unordered pairs of factors.
pub fn delta_k(t: &SymTensor) -> Result<SymTensor> {
    if t.degree < 2 {
        return Err(Error::DegreeTooSmall(t.degree));
    }
    let pair = t.alg.letter_square_pairing();
    let mut out = SymTensor::zero(&t.alg, t.degree - 2);
    for (m, c) in t.poly.terms() {
        for e in 0..3 {
            let p = m.0[e];
            if p < 2 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[e] -= 2;
            let w = NFElem::from_int(t.alg.field(), (p * (p - 1) / 2) as i64);
            out.poly.add_term(Mono(exps), &(c * &w) * &pair[e]);
        }
    }
    Ok(out)
}

fn delta_matrix(alg: &Algebra, n: usize) -> Matrix {
    let cols = sym_monomials(n);
    let rows = sym_monomials(n - 2);
    let mut m = Matrix::zeros(alg.field(), rows.len(), cols.len());
    for (j, mono) in cols.iter().enumerate() {
        let img = delta_k(&SymTensor::monomial(alg, *mono, NFElem::one(alg.field()))).expect("degree >= 2");
        for (i, r) in rows.iter().enumerate() {
            m.set(i, j, img.coeff(*r));
        }
    }
    m
}

/// The symmetric-power pairing normalized by `1/n!`.
pub fn sym_pairing(v: &SymTensor, w: &SymTensor) -> Result<NFElem> {
    if v.alg != w.alg {
        return Err(Error::AlgebraMismatch);
    }
    if v.degree != w.degree {
        return Err(Error::WeightMismatch(v.degree, w.degree));
    }
    let f = v.alg.field();
    let pair = v.alg.letter_square_pairing();
    let mut acc = NFElem::zero(f);
    for (m, c) in v.poly.terms() {
        let d = w.poly.coeff(&m.0);
        if d.is_zero() {
            continue;
        }
        let mut term = c * &d;
        for e in 0..3 {
            term = &term * &pair[e].pow(m.0[e]);
            term = term.scale(&factorial(m.0[e] as u64));
        }
        acc += &term;
    }
    Ok(acc.scale(&factorial(v.degree as u64).recip()))
}

/// A harmonic tensor of weight `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct VkElem {
    pub k: usize,
    pub tensor: SymTensor,
}

impl VkElem {
    pub fn new(k: usize, tensor: SymTensor) -> Result<Self> {
        if k % 2 == 1 || tensor.degree != k / 2 {
            return Err(Error::BadWeight(k as i64));
        }
        if tensor.degree >= 2 && !delta_k(&tensor)?.is_zero() {
            return Err(AlgError::BadInput("tensor is not harmonic".into()).into());
        }
        Ok(VkElem { k, tensor })
    }
}

/// Echelonized basis of `V_k`.
pub fn vk_basis(alg: &Algebra, k: i64) -> Result<Vec<VkElem>> {
    if k < 0 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    let n = (k / 2) as usize;
    let f = alg.field();
    if n < 2 {
        let monos = sym_monomials(n);
        return Ok(monos
            .iter()
            .map(|m| VkElem { k: k as usize, tensor: SymTensor::monomial(alg, *m, NFElem::one(f)) })
            .collect());
    }
    let cols = sym_monomials(n);
    Ok(delta_matrix(alg, n)
        .kernel_basis()
        .iter()
        .map(|v| VkElem { k: k as usize, tensor: SymTensor::from_coords(alg, &cols, v) })
        .collect())
}

/// The splitting `B -> M_2(E)` determined by a square root of `a` in `E`.
#[derive(Clone, Debug)]
pub struct Iota {
    alg: Algebra,
    sqrt_a: NFElem,
}

impl Iota {
    pub fn new(alg: &Algebra, sqrt_a: NFElem) -> Result<Self> {
        let me = Iota { alg: alg.clone(), sqrt_a };
        if &me.sqrt_a * &me.sqrt_a != me.lift(&alg.a)? {
            return Err(Error::MissingRoot(format!("{}", alg.a)));
        }
        Ok(me)
    }

    pub fn target(&self) -> &Field {
        self.sqrt_a.field()
    }

    pub fn sqrt_a(&self) -> &NFElem {
        &self.sqrt_a
    }

    /// Moves an element of the base field into the target field.
    pub fn lift(&self, x: &NFElem) -> Result<NFElem> {
        if x.field() == self.target() {
            return Ok(x.clone());
        }
        match x.as_rational() {
            Some(r) => Ok(NFElem::from_rational(self.target(), r)),
            None => Err(AlgError::FieldMismatch.into()),
        }
    }

    /// Whether `x` (in the target field) comes from the base field.
    pub fn in_base(&self, x: &NFElem) -> bool {
        if self.alg.field().degree() == 1 {
            x.as_rational().is_some()
        } else {
            self.alg.field() == self.target()
        }
    }
}

/// `x0 + x1 i + x2 j + x3 k -> [[x0 + x1 s, b (x2 + x3 s)], [x2 - x3 s, x0 - x1 s]]` with `s^2 = a`.
pub fn iota_embed(b: &QuatElem, iota: &Iota) -> Result<Matrix> {
    if b.alg != iota.alg {
        return Err(Error::AlgebraMismatch);
    }
    let s = &iota.sqrt_a;
    let x = b.coords.iter().map(|c| iota.lift(c)).collect::<Result<Vec<_>>>()?;
    let bb = iota.lift(&b.alg.b)?;
    let rows = vec![
        vec![&x[0] + &(&x[1] * s), &bb * &(&x[2] + &(&x[3] * s))],
        vec![&x[2] - &(&x[3] * s), &x[0] - &(&x[1] * s)],
    ];
    Ok(Matrix::from_rows(iota.target(), rows))
}

/// `Tr((Y; -X)(X Y) m)` as a quadratic form.
fn kappa_factor(m: &Matrix) -> PkPoly {
    // coefficients of Y^2, XY, X^2
    let xy = m.get(0, 0) - m.get(1, 1);
    PkPoly { coeffs: vec![m.get(1, 0).clone(), xy, -m.get(0, 1)] }
}

/// The embedding `V_k -> P(k)` given factorwise by `Tr((Y; -X)(X Y) iota(b))`.
pub fn kappa_embed(v: &VkElem, iota: &Iota) -> Result<PkPoly> {
    kappa_sym(&v.tensor, iota)
}

fn kappa_sym(t: &SymTensor, iota: &Iota) -> Result<PkPoly> {
    let alg = &t.alg;
    let letters: Vec<PkPoly> =
        (1..4).map(|e| iota_embed(&QuatElem::basis(alg, e), iota).map(|m| kappa_factor(&m))).collect::<Result<_>>()?;
    let e = iota.target();
    let mut out = PkPoly::zero(e, 2 * t.degree);
    for (m, c) in t.poly.terms() {
        let mut term = PkPoly { coeffs: vec![iota.lift(c)?] };
        for (idx, l) in letters.iter().enumerate() {
            for _ in 0..m.0[idx] {
                term = term.mul(l);
            }
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// Conjugation `t -> g t g^-1` on each factor.
pub fn conjugate_by(g: &QuatElem, t: &SymTensor) -> Result<SymTensor> {
    let ginv = g.inverse()?;
    let base = MultiPoly::zero(t.alg.field(), &LETTERS);
    let images: Vec<MultiPoly> = (1..4)
        .map(|e| {
            let img = g.mul(&QuatElem::basis(&t.alg, e))?.mul(&ginv)?;
            let mut p = base.zero_like();
            for l in 0..3 {
                p = &p + &base.gen_like(l).scale(&img.coords[l + 1]);
            }
            Ok(p)
        })
        .collect::<Result<_>>()?;
    let images: [MultiPoly; 3] = images.try_into().expect("three letters");
    Ok(SymTensor { alg: t.alg.clone(), degree: t.degree, poly: t.map_letters(&images) })
}

/// A Laurent polynomial in one formal unit `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    pub field: Field,
    pub coeffs: BTreeMap<i64, NFElem>,
}

impl LaurentPoly {
    pub fn coeff(&self, e: i64) -> NFElem {
        self.coeffs.get(&e).cloned().unwrap_or_else(|| NFElem::zero(&self.field))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&e| e == 0)
    }

    /// Largest `|e|` over the support.
    pub fn spread(&self) -> i64 {
        self.coeffs.keys().map(|e| e.abs()).max().unwrap_or(0)
    }
}

/// `f_v(u) = kappa(v)(1, u) u^(-k/2)`, the value on the torus element with `t / conj(t) = u`.
pub fn torus_eval(v: &VkElem, iota: &Iota) -> Result<LaurentPoly> {
    let p = kappa_embed(v, iota)?;
    let k = v.k as i64;
    let mut coeffs = BTreeMap::new();
    for (j, c) in p.coeffs.iter().enumerate() {
        if !c.is_zero() {
            coeffs.insert(k / 2 - j as i64, c.clone());
        }
    }
    Ok(LaurentPoly { field: iota.target().clone(), coeffs })
}

/// The derivative at the identity of the conjugation action of the norm-one torus in `F(i)`.
fn torus_derivation_matrix(alg: &Algebra, n: usize) -> Matrix {
    let base = MultiPoly::zero(alg.field(), &LETTERS);
    let cols = sym_monomials(n);
    let mut m = Matrix::zeros(alg.field(), cols.len(), cols.len());
    for (c, mono) in cols.iter().enumerate() {
        let t = SymTensor::monomial(alg, *mono, NFElem::one(alg.field()));
        // i -> 0, j -> k, k -> a j, applied as a derivation
        let mut img = base.zero_like();
        let images = [base.zero_like(), base.gen_like(2), base.gen_like(1).scale(&alg.a)];
        for e in 0..3 {
            img = &img + &(&t.poly.diff(e) * &images[e]);
        }
        for (r, rm) in cols.iter().enumerate() {
            m.set(r, c, img.coeff(rm));
        }
    }
    m
}

/// Checks invariance under `i -> i, j -> a'j + b'k, k -> a b' j + a' k` modulo `a'^2 = 1 + a b'^2`.
pub fn conjugation_invariant(v: &VkElem) -> bool {
    let alg = &v.tensor.alg;
    let vars = ["i", "j", "k", "ap", "bp"];
    let f = alg.field();
    let g = |n: &str| MultiPoly::var(f, &vars, n).expect("declared");
    let (i, j, k, ap, bp) = (g("i"), g("j"), g("k"), g("ap"), g("bp"));
    let images = [i.clone(), &(&ap * &j) + &(&bp * &k), &(&bp * &j).scale(&alg.a) + &(&ap * &k)];
    let moved = reduce_norm_relation(&v.tensor.map_letters(&images), &alg.a);
    let mut orig = moved.zero_like();
    for (m, c) in v.tensor.poly.terms() {
        orig.add_term(Mono(vec![m.0[0], m.0[1], m.0[2], 0, 0]), c.clone());
    }
    (&moved - &orig).is_zero()
}

/// Rewrites every `ap^2` as `1 + a bp^2` (variables 3 and 4).
fn reduce_norm_relation(p: &MultiPoly, a: &NFElem) -> MultiPoly {
    let rel = &p.constant_like(NFElem::one(p.field())) + &p.gen_like(4).pow(2).scale(a);
    let mut out = p.zero_like();
    for (m, c) in p.terms() {
        let e = m.0[3];
        let mut exps = m.0.clone();
        exps[3] = e % 2;
        let head = p.monomial_like(exps, c.clone());
        out = &out + &(&head * &rel.pow(e / 2));
    }
    out
}

/// `v_4 = j^2 - (1/a) k^2 - 2 (b/a) i^2`.
pub fn v4(alg: &Algebra) -> SymTensor {
    let f = alg.field();
    let ainv = alg.a.inv().expect("nonzero");
    let one = NFElem::one(f);
    SymTensor::monomial(alg, [0, 2, 0], one)
        .sub(&SymTensor::monomial(alg, [0, 0, 2], ainv.clone()))
        .sub(&SymTensor::monomial(alg, [2, 0, 0], &(&alg.b * &ainv) * &NFElem::from_int(f, 2)))
}

/// The torus-invariant harmonic vector of weight `k`, normalized in the span of `v4^n i^(k/2-2n)`.
pub fn invariant_vector(alg: &Algebra, k: i64, iota: &Iota) -> Result<VkElem> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    let n = (k / 2) as usize;
    let f = alg.field();
    let v2 = SymTensor::monomial(alg, [1, 0, 0], NFElem::one(f));
    let v4 = v4(alg);
    let span: Vec<SymTensor> = (0..=n / 2).map(|m| v4.pow(m as u32).mul(&v2.pow((n - 2 * m) as u32))).collect();
    let coeffs = if n < 2 {
        vec![NFElem::one(f)]
    } else {
        let rows = sym_monomials(n - 2);
        let mut m = Matrix::zeros(f, rows.len(), span.len());
        for (c, t) in span.iter().enumerate() {
            let d = delta_k(t)?;
            for (r, rm) in rows.iter().enumerate() {
                m.set(r, c, d.coeff(*rm));
            }
        }
        let ker = m.kernel_basis();
        if ker.len() != 1 {
            return Err(Error::NonUniqueInvariant(ker.len()));
        }
        let v = ker.into_iter().next().expect("one vector");
        let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero").inv()?;
        v.iter().map(|x| x * &lead).collect()
    };
    let mut t = SymTensor::zero(alg, n);
    for (c, s) in coeffs.iter().zip(&span) {
        t = t.add(&s.scale(c));
    }
    let v = VkElem::new(k as usize, t)?;

    // Uniqueness inside the full V_k: kernel of Delta stacked with the torus derivation.
    let full = if n >= 2 {
        let d = delta_matrix(alg, n);
        let dt = torus_derivation_matrix(alg, n);
        let mut rows: Vec<Vec<NFElem>> = (0..d.rows()).map(|r| d.row(r).to_vec()).collect();
        rows.extend((0..dt.rows()).map(|r| dt.row(r).to_vec()));
        Matrix::from_rows(f, rows).kernel_basis().len()
    } else {
        torus_derivation_matrix(alg, n).kernel_basis().len()
    };
    if full != 1 {
        return Err(Error::NonUniqueInvariant(full));
    }
    if !torus_derivation_matrix(alg, n).mul_vec(&v.tensor.coords_in(&sym_monomials(n))).iter().all(NFElem::is_zero) {
        return Err(Error::FormulaMismatch("invariant vector is moved by the torus".into()));
    }
    if !conjugation_invariant(&v) {
        return Err(Error::FormulaMismatch("invariant vector fails the norm-one conjugation check".into()));
    }
    let fv = torus_eval(&v, iota)?;
    if !fv.is_constant() {
        return Err(Error::FormulaMismatch("torus function is not constant".into()));
    }
    let scaled = &fv.coeff(0) * &iota.sqrt_a.powi(-(n as i64))?;
    if !iota.in_base(&scaled) {
        return Err(Error::FormulaMismatch("torus value is not in sqrt(a)^(k/2) F".into()));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi, qz8, z8};
    use crate::rep::{act_gl2, pairing_pk, GL2Elem};
    use proptest::prelude::*;

    fn alg(a: i64, b: i64) -> Algebra {
        QuaternionAlgebra::new(NFElem::from_int(&q(), a), NFElem::from_int(&q(), b)).unwrap()
    }

    fn iota_i(alg: &Algebra) -> Iota {
        Iota::new(alg, NFElem::generator(&qi())).unwrap()
    }

    fn int(n: i64) -> NFElem {
        NFElem::from_int(&q(), n)
    }

    #[test]
    fn quaternion_relations() {
        let b = alg(-3, 5);
        let (i, j, k) = (QuatElem::basis(&b, 1), QuatElem::basis(&b, 2), QuatElem::basis(&b, 3));
        assert_eq!(i.mul(&j).unwrap(), k);
        assert_eq!(j.mul(&i).unwrap(), QuatElem::from_ints(&b, [0, 0, 0, -1]));
        assert_eq!(k.mul(&k).unwrap(), QuatElem::from_ints(&b, [15, 0, 0, 0]));
        assert_eq!(i.mul(&i).unwrap(), QuatElem::from_ints(&b, [-3, 0, 0, 0]));
        let x = QuatElem::from_ints(&b, [1, 2, -1, 3]);
        let y = QuatElem::from_ints(&b, [0, 1, 4, -2]);
        assert_eq!(x.mul(&y).unwrap().norm(), &x.norm() * &y.norm());
        assert_eq!(x.mul(&x.inverse().unwrap()).unwrap(), QuatElem::basis(&b, 0));
    }

    #[test]
    fn trace_pairing_values() {
        let b = alg(-3, 5);
        let (i, j) = (QuatElem::basis(&b, 1), QuatElem::basis(&b, 2));
        assert!(trace_pairing(&i, &j).unwrap().is_zero());
        assert_eq!(trace_pairing(&i, &i).unwrap(), int(6));
        assert_eq!(trace_pairing(&j, &j).unwrap(), int(-10));
        let other = alg(-1, -1);
        assert_eq!(trace_pairing(&i, &QuatElem::basis(&other, 1)).unwrap_err(), Error::AlgebraMismatch);
    }

    #[test]
    fn delta_examples() {
        let b = alg(-3, 5);
        let ii = SymTensor::monomial(&b, [2, 0, 0], int(1));
        assert_eq!(delta_k(&ii).unwrap(), SymTensor::monomial(&b, [0, 0, 0], int(6)));
        assert!(delta_k(&v4(&b)).unwrap().is_zero());
        let iij = SymTensor::monomial(&b, [2, 1, 0], int(1));
        assert_eq!(delta_k(&iij).unwrap(), SymTensor::monomial(&b, [0, 1, 0], int(6)));
        let i = SymTensor::monomial(&b, [1, 0, 0], int(1));
        assert_eq!(delta_k(&i).unwrap_err(), Error::DegreeTooSmall(1));
    }

    #[test]
    fn vk_dimensions() {
        for b in [alg(-1, -1), alg(-1, -11), alg(2, 3)] {
            assert_eq!(vk_basis(&b, 0).unwrap().len(), 1);
            for k in (2..=12).step_by(2) {
                assert_eq!(vk_basis(&b, k).unwrap().len(), k as usize + 1);
            }
        }
        assert_eq!(vk_basis(&alg(-1, -1), 3).unwrap_err(), Error::BadWeight(3));
    }

    #[test]
    fn multiset_keys_are_sorted() {
        let b = alg(-1, -1);
        let t = SymTensor::monomial(&b, [2, 0, 1], int(4));
        let keys: Vec<_> = t.terms().into_keys().collect();
        assert_eq!(keys, vec![vec![0u8, 0, 2]]);
    }

    #[test]
    fn iota_is_a_homomorphism() {
        let b = alg(-1, -11);
        let io = iota_i(&b);
        let x = QuatElem::from_ints(&b, [1, 2, -1, 3]);
        let y = QuatElem::from_ints(&b, [0, 1, 4, -2]);
        let mx = iota_embed(&x, &io).unwrap();
        let my = iota_embed(&y, &io).unwrap();
        assert_eq!(iota_embed(&x.mul(&y).unwrap(), &io).unwrap(), mx.mul(&my));
        assert_eq!(mx.det(), io.lift(&x.norm()).unwrap());
        assert_eq!(mx.get(0, 0) + mx.get(1, 1), io.lift(&x.trace()).unwrap());
        let s = NFElem::generator(&qi());
        let ii = iota_embed(&QuatElem::basis(&b, 1), &io).unwrap();
        assert_eq!(ii, Matrix::from_rows(&qi(), vec![vec![s.clone(), NFElem::zero(&qi())], vec![NFElem::zero(&qi()), -&s]]));
        let jj = iota_embed(&QuatElem::basis(&b, 2), &io).unwrap();
        assert_eq!(jj.get(0, 1), &NFElem::from_int(&qi(), -11));
        assert!(jj.get(1, 0).is_one());
        assert_eq!(iota_embed(&QuatElem::basis(&b, 0), &io).unwrap(), Matrix::identity(&qi(), 2));
    }

    #[test]
    fn missing_root() {
        let b = alg(-1, -1);
        assert!(matches!(Iota::new(&b, z8::sqrt2()), Err(Error::MissingRoot(_))));
    }

    #[test]
    fn kappa_on_nilpotents() {
        // Over Q(zeta8) with a = 2: b1 = -(j + k/sqrt2)/2b-style nilpotents give X^k and Y^k.
        let f = qz8();
        let b = QuaternionAlgebra::new(z8::int(2), z8::int(3)).unwrap();
        let io = Iota::new(&b, z8::sqrt2()).unwrap();
        // iota(j) = [[0,3],[1,0]], iota(k) = [[0,3s],[-s,0]]; (0,-1;0,0) = -(j/6 + k/(6s))
        let s_inv = z8::sqrt2().inv().unwrap();
        let c = z8::frac(-1, 6);
        let b1 = QuatElem::new(&b, [z8::zero(), z8::zero(), c.clone(), &c * &s_inv]);
        assert_eq!(iota_embed(&b1, &io).unwrap().get(0, 1), &z8::int(-1));
        // (0,0;1,0) = (j - k/s)/2
        let b2 = QuatElem::new(&b, [z8::zero(), z8::zero(), z8::frac(1, 2), &z8::frac(-1, 2) * &s_inv]);
        assert!(iota_embed(&b2, &io).unwrap().get(1, 0).is_one());
        for n in 1..=4u32 {
            let t1 = SymTensor::from_pure(&b1).unwrap().pow(n);
            let t2 = SymTensor::from_pure(&b2).unwrap().pow(n);
            assert_eq!(kappa_sym(&t1, &io).unwrap(), PkPoly::monomial(&f, 2 * n as usize, 2 * n as usize));
            assert_eq!(kappa_sym(&t2, &io).unwrap(), PkPoly::monomial(&f, 2 * n as usize, 0));
        }
    }

    #[test]
    fn kappa_is_equivariant_and_preserves_pairing() {
        let b = alg(-1, -11);
        let io = iota_i(&b);
        let units = [[1, 1, 0, 0], [2, 0, 1, -1], [1, -1, 1, 1], [0, 3, 1, 0], [1, 2, 0, 1]];
        for k in [4i64, 6] {
            let basis = vk_basis(&b, k).unwrap();
            let v = basis.iter().enumerate().fold(SymTensor::zero(&b, k as usize / 2), |acc, (n, e)| {
                acc.add(&e.tensor.scale(&int(n as i64 * 2 - 3)))
            });
            let v = VkElem::new(k as usize, v).unwrap();
            for u in units {
                let g = QuatElem::from_ints(&b, u);
                let gv = VkElem::new(k as usize, conjugate_by(&g, &v.tensor).unwrap()).unwrap();
                let m = iota_embed(&g, &io).unwrap();
                let gg = GL2Elem::new(m).unwrap();
                assert_eq!(kappa_embed(&gv, &io).unwrap(), act_gl2(&gg, &kappa_embed(&v, &io).unwrap()));
            }
            for x in &basis {
                for y in &basis {
                    let lhs = pairing_pk(&kappa_embed(x, &io).unwrap(), &kappa_embed(y, &io).unwrap()).unwrap();
                    let rhs = io.lift(&sym_pairing(&x.tensor, &y.tensor).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "k = {k}");
                }
            }
        }
    }

    #[test]
    fn torus_values() {
        let b = alg(-1, -11);
        let io = iota_i(&b);
        let s = NFElem::generator(&qi());
        let v2 = invariant_vector(&b, 2, &io).unwrap();
        assert_eq!(v2.tensor, SymTensor::monomial(&b, [1, 0, 0], int(1)));
        let f2 = torus_eval(&v2, &io).unwrap();
        assert!(f2.is_constant());
        assert_eq!(f2.coeff(0), &s * &NFElem::from_int(&qi(), 2));
        let jj = VkElem { k: 4, tensor: SymTensor::monomial(&b, [0, 2, 0], int(1)) };
        let fj = torus_eval(&jj, &io).unwrap();
        assert!(!fj.is_constant());
        // (u - b/u)^2
        assert_eq!(fj.coeff(2), NFElem::one(&qi()));
        assert_eq!(fj.coeff(0), NFElem::from_int(&qi(), 22));
        assert_eq!(fj.coeff(-2), NFElem::from_int(&qi(), 121));
    }

    #[test]
    fn v4_torus_constant() {
        // The constant is -12 b (not -4 b).
        let b = alg(-1, -11);
        let io = iota_i(&b);
        let v = invariant_vector(&b, 4, &io).unwrap();
        assert_eq!(v.tensor, v4(&b));
        let fv = torus_eval(&v, &io).unwrap();
        assert!(fv.is_constant());
        assert_eq!(fv.coeff(0), NFElem::from_int(&qi(), 132));
    }

    #[test]
    fn invariant_vectors_up_to_weight_twelve() {
        for b in [alg(-1, -1), alg(-1, -11)] {
            let io = iota_i(&b);
            for k in (2..=12).step_by(2) {
                let v = invariant_vector(&b, k, &io).unwrap();
                assert!(torus_eval(&v, &io).unwrap().is_constant());
                assert!(conjugation_invariant(&v));
            }
        }
    }

    #[test]
    fn non_invariant_is_detected() {
        let b = alg(-1, -11);
        let v = vk_basis(&b, 4).unwrap().into_iter().find(|v| !v.tensor.coeff([0, 2, 0]).is_zero()).unwrap();
        let w = VkElem::new(4, v.tensor.add(&v4(&b).scale(&int(7)))).unwrap();
        if w.tensor != v4(&b).scale(&w.tensor.coeff([0, 2, 0])) {
            assert!(!conjugation_invariant(&w));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn delta_is_linear(x in proptest::collection::vec(-5i64..6, 10), y in proptest::collection::vec(-5i64..6, 10), c in -4i64..5) {
            let b = alg(-2, 7);
            let basis = sym_monomials(3);
            let tx = SymTensor::from_coords(&b, &basis, &x.iter().map(|&n| int(n)).collect::<Vec<_>>());
            let ty = SymTensor::from_coords(&b, &basis, &y.iter().map(|&n| int(n)).collect::<Vec<_>>());
            let lhs = delta_k(&tx.scale(&int(c)).add(&ty)).unwrap();
            let rhs = delta_k(&tx).unwrap().scale(&int(c)).add(&delta_k(&ty).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conjugation_preserves_harmonicity(u in proptest::array::uniform4(-3i64..4), idx in 0usize..7) {
            prop_assume!(u != [0, 0, 0, 0]);
            let b = alg(-1, -11);
            let g = QuatElem::from_ints(&b, u);
            let v = &vk_basis(&b, 6).unwrap()[idx];
            let gv = conjugate_by(&g, &v.tensor).unwrap();
            prop_assert!(delta_k(&gv).unwrap().is_zero());
        }
    }
}
