//! The complex place. Vectors of the induced module are finite sums
//! `sum_n phi_n(mu_n)` with `mu_n` in `V(2n)`; they are realised as polynomials
//! in the sphere coordinates `alpha, beta, conj(alpha), conj(beta)` times `r^(2N)`.
//!
//! Submodules build the projection to `V(k_id-2) (x) V(k_c-2)` and its section,
//! the cocycles `c1`, `c2` and the triple cup product.

pub mod cocycle;
pub mod cup;
pub mod section;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{binom, frac, qz8, rat, su2_normal_form, z8, MultiPoly, NFElem, Rational, SPHERE_VARS};
use crate::rep::{dual_act, GL2Elem, VkDual};

pub use cocycle::{c1_direct, pv_check, pv_check_scaled, C2Cocycle, ComplexGen, HomVDC, PvReport};
pub use cup::{cup3_complex, Cup3Report, LeveledTensor};
pub use section::{delta_s_closed_form, delta_s_complex, delta_s_direct, rho_complex, section_for, Section, WeightPair};

/// Torus character `diag(t, 1/t) -> |t|^(2N) (t/|t|)^(2 lambda)`, stored as `(N, lambda)`.
///
/// Only integral parameters are supported; these cover every `chi_k` with even weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharC {
    pub n: i64,
    pub lambda: i64,
}

impl CharC {
    pub fn new(n: i64, lambda: i64) -> Self {
        CharC { n, lambda }
    }
}

/// Finite sum `sum_n phi_n(levels[n])` in the induced module of `chi`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiVec {
    pub chi: CharC,
    pub levels: BTreeMap<i64, VkDual>,
}

impl PhiVec {
    pub fn zero(chi: CharC) -> Self {
        PhiVec { chi, levels: BTreeMap::new() }
    }

    pub fn single(chi: CharC, n: i64, mu: VkDual) -> Result<Self> {
        if n < chi.lambda.abs() {
            return Err(Error::BadLevel(n, chi.lambda.abs()));
        }
        if mu.weight() as i64 != 2 * n {
            return Err(Error::WeightMismatch(mu.weight(), 2 * n as usize));
        }
        let mut v = Self::zero(chi);
        v.push(n, mu);
        Ok(v)
    }

    /// Adds `phi_n(mu)` in place.
    pub fn push(&mut self, n: i64, mu: VkDual) {
        if mu.is_zero() {
            return;
        }
        let sum = match self.levels.remove(&n) {
            Some(old) => old.add(&mu),
            None => mu,
        };
        if !sum.is_zero() {
            self.levels.insert(n, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&n, mu) in &other.levels {
            out.push(n, mu.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&z8::int(-1)))
    }

    pub fn scale(&self, c: &NFElem) -> Self {
        let mut out = Self::zero(self.chi);
        for (&n, mu) in &self.levels {
            out.push(n, mu.scale(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.levels.values().all(VkDual::is_zero)
    }

    pub fn min_level(&self) -> Option<i64> {
        self.levels.keys().next().copied()
    }

    /// Right translation by `g` in `SU(2)`: `phi_n(mu) -> phi_n(g mu)`.
    pub fn act_k(&self, g: &GL2Elem) -> Self {
        let mut out = Self::zero(self.chi);
        for (&n, mu) in &self.levels {
            out.push(n, dual_act(g, mu));
        }
        out
    }
}

/// `r^two_n * poly(alpha, beta, conj alpha, conj beta)`, with `poly` in sphere normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoly {
    pub two_n: i64,
    pub poly: MultiPoly,
}

impl SpherePoly {
    pub fn new(two_n: i64, poly: &MultiPoly) -> Result<Self> {
        Ok(SpherePoly { two_n, poly: su2_normal_form(poly)? })
    }

    pub fn zero(two_n: i64) -> Self {
        SpherePoly { two_n, poly: MultiPoly::zero(&qz8(), &SPHERE_VARS) }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.two_n, other.two_n);
        SpherePoly { two_n: self.two_n, poly: &self.poly + &other.poly }
    }

    /// `f(kappa(alpha, beta) g)` for `g = kappa(a, b)`; the radial factor is unchanged.
    pub fn right_translate(&self, a: &NFElem, b: &NFElem) -> Result<Self> {
        let [al, be, alb, beb] = sphere_gens();
        let (ac, bc) = (a.conj()?, b.conj()?);
        let images = [
            &al.scale(a) - &be.scale(&bc),
            &al.scale(b) + &be.scale(&ac),
            &alb.scale(&ac) - &beb.scale(b),
            &alb.scale(&bc) + &beb.scale(a),
        ];
        SpherePoly::new(self.two_n, &self.poly.compose(&images))
    }
}

/// The four sphere coordinates as polynomials.
pub fn sphere_gens() -> [MultiPoly; 4] {
    let f = qz8();
    SPHERE_VARS.map(|v| MultiPoly::var(&f, &SPHERE_VARS, v).expect("sphere variable"))
}

/// The `SU(2)` element `kappa(a, b) = [[a, b], [-conj b, conj a]]`.
pub fn sphere_point(a: &NFElem, b: &NFElem) -> Result<GL2Elem> {
    let one = &(a * &a.conj()?) + &(b * &b.conj()?);
    if !one.is_one() {
        return Err(Error::InternalError("point is not on the unit sphere".into()));
    }
    GL2Elem::from_entries(a.clone(), b.clone(), -&b.conj()?, a.conj()?)
}

/// Binary form in `x, y` with sphere-polynomial coefficients; entry `j` multiplies `x^j y^(d-j)`.
type SphereForm = Vec<MultiPoly>;

fn form_mul(p: &SphereForm, q: &SphereForm) -> SphereForm {
    let zero = p[0].zero_like();
    let mut out = vec![zero; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] = &out[i + j] + &(a * b);
        }
    }
    out
}

fn form_pow(p: &SphereForm, e: i64) -> SphereForm {
    let mut acc = vec![p[0].constant_like(z8::one())];
    for _ in 0..e {
        acc = form_mul(&acc, p);
    }
    acc
}

/// `(alpha y - beta x)^(n+lambda) (-conj(beta) y - conj(alpha) x)^(n-lambda)`.
fn phi_form(n: i64, lambda: i64) -> SphereForm {
    let [al, be, alb, beb] = sphere_gens();
    let l1 = vec![al, -&be];
    let l2 = vec![-&beb, -&alb];
    form_mul(&form_pow(&l1, n + lambda), &form_pow(&l2, n - lambda))
}

/// The function `phi_n(mu)` on `B x SU(2)`.
pub fn phi_expand(n: i64, mu: &VkDual, chi: CharC) -> Result<SpherePoly> {
    if n < chi.lambda.abs() {
        return Err(Error::BadLevel(n, chi.lambda.abs()));
    }
    if mu.weight() as i64 != 2 * n {
        return Err(Error::WeightMismatch(mu.weight(), 2 * n as usize));
    }
    let form = phi_form(n, chi.lambda);
    let mut p = MultiPoly::zero(&qz8(), &SPHERE_VARS);
    for (c, m) in form.iter().zip(&mu.coeffs) {
        if !m.is_zero() {
            p = &p + &c.scale(m);
        }
    }
    SpherePoly::new(2 * chi.n, &p)
}

pub fn expand(v: &PhiVec) -> Result<SpherePoly> {
    let mut out = SpherePoly::zero(2 * v.chi.n);
    for (&n, mu) in &v.levels {
        out = out.add(&phi_expand(n, mu, v.chi)?);
    }
    SpherePoly::new(out.two_n, &out.poly)
}

/// `H^ = diag(1,-1)` as a first-order operator in sphere coordinates, with
/// `r d/dr` acting by `2N`.
pub fn hat_h_oracle(f: &SpherePoly) -> Result<SpherePoly> {
    let [al, be, alb, beb] = sphere_gens();
    let aa = &al * &alb;
    let bb = &be * &beb;
    let p = &f.poly;
    let radial = (&aa - &bb).scale(&z8::int(f.two_n));
    let mut out = &radial * p;
    out = &out - &(&(&al * &bb) * &p.diff(0)).scale(&z8::int(2));
    out = &out - &(&(&alb * &bb) * &p.diff(2)).scale(&z8::int(2));
    out = &out + &(&(&be * &aa) * &p.diff(1)).scale(&z8::int(2));
    out = &out + &(&(&beb * &aa) * &p.diff(3)).scale(&z8::int(2));
    SpherePoly::new(f.two_n, &out)
}

fn rq(r: Rational) -> NFElem {
    NFElem::from_rational(&qz8(), r)
}

/// Action of `H^` on `phi_n(mu)` through the three-term recurrence.
pub fn hat_h_recurrence(v: &PhiVec) -> PhiVec {
    let (nn, lam) = (v.chi.n, v.chi.lambda);
    let f = qz8();
    let mut out = PhiVec::zero(v.chi);
    for (&n, mu) in &v.levels {
        let c0 = lam * (nn - 1);
        if c0 != 0 && n > 0 {
            let s = frac(c0, n * (n + 1));
            let m0 = VkDual {
                coeffs: (0..=2 * n).map(|j| mu.coeffs[j as usize].scale(&(&s * rat(2 * n - 2 * j)))).collect(),
            };
            out.push(n, m0);
        }
        let cp = -(nn + n);
        if cp != 0 {
            let s = frac(2 * cp, (n + 1) * (2 * n + 1));
            let mut m1 = VkDual::zero(&f, 2 * n as usize + 2);
            for j in 1..=2 * n + 1 {
                m1.coeffs[j as usize] = mu.coeffs[j as usize - 1].scale(&(&s * rat(j * (2 * n + 2 - j))));
            }
            out.push(n + 1, m1);
        }
        let cm = (n + lam) * (n - lam) * (n - nn + 1);
        if cm != 0 {
            let s = frac(2 * cm, n * (2 * n + 1));
            let m = VkDual { coeffs: (0..=2 * n - 2).map(|j| mu.coeffs[j as usize + 1].scale(&s)).collect() };
            out.push(n - 1, m);
        }
    }
    out
}

/// Recurrence and coordinate oracle agree on `v`.
pub fn check_recurrence(v: &PhiVec) -> Result<()> {
    let lhs = expand(&hat_h_recurrence(v))?;
    let rhs = hat_h_oracle(&expand(v)?)?;
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::FormulaMismatch(format!("H^ recurrence for chi = {:?}", v.chi)))
    }
}

/// `int_{SU(2)} alpha^n1 beta^m1 conj(alpha)^n2 conj(beta)^m2` for the probability Haar measure.
pub fn moment_su2(n1: u32, m1: u32, n2: u32, m2: u32) -> Rational {
    if n1 != n2 || m1 != m2 {
        return rat(0);
    }
    let (n, m) = (n1 as i64, m1 as i64);
    rat(1) / (rat(n + m + 1) * binom(n + m, n))
}

/// Haar average of a polynomial in the sphere variables.
pub fn integrate_su2(p: &MultiPoly) -> NFElem {
    let mut acc = z8::zero();
    for (m, c) in p.terms() {
        let e = &m.0;
        let w = moment_su2(e[0], e[1], e[2], e[3]);
        if w != rat(0) {
            acc += &c.scale(&w);
        }
    }
    acc
}

/// `chi_k` for the weight pair `(k_id, k_c)`.
pub fn chi_k(k_id: usize, k_c: usize) -> CharC {
    let (a, b) = (k_id as i64, k_c as i64);
    CharC::new((a + b) / 2, (a - b) / 2)
}

/// The dual character `chi^_k`: `N^ = lambda + 1`, `lambda^ = N - 1`.
pub fn chi_hat(k_id: usize, k_c: usize) -> CharC {
    let c = chi_k(k_id, k_c);
    CharC::new(c.lambda + 1, c.n - 1)
}

/// Scalar by which the map `B(chi^_k) -> D(k)` multiplies level `n`.
pub fn psi_coeff(k_id: usize, k_c: usize, n: i64) -> Rational {
    let h = chi_hat(k_id, k_c);
    binom(n + h.lambda, h.n + n - 1)
}

/// Applies the level-wise scalars `coeff(n)` and relabels the character.
pub fn psi_with(v: &PhiVec, target: CharC, coeff: &dyn Fn(i64) -> Rational) -> PhiVec {
    let mut out = PhiVec::zero(target);
    for (&n, mu) in &v.levels {
        out.push(n, mu.scale(&rq(coeff(n))));
    }
    out
}

pub fn psi(v: &PhiVec, k_id: usize, k_c: usize) -> PhiVec {
    psi_with(v, chi_k(k_id, k_c), &|n| psi_coeff(k_id, k_c, n))
}

/// Inverse of [`psi`] on `D(k)`.
pub fn psi_inv(v: &PhiVec, k_id: usize, k_c: usize) -> Result<PhiVec> {
    let mut out = PhiVec::zero(chi_hat(k_id, k_c));
    for (&n, mu) in &v.levels {
        let c = psi_coeff(k_id, k_c, n);
        if c == rat(0) {
            return Err(Error::InternalError(format!("level {n} lies outside the discrete series")));
        }
        out.push(n, mu.scale(&rq(rat(1) / c)));
    }
    Ok(out)
}

/// `psi(H^ v) = H^ psi(v)` for every basis `phi_n(e_j)` of `B(chi^_k)` with `n <= n_max`.
pub fn psi_intertwine_check(k_id: usize, k_c: usize, n_max: i64) -> bool {
    psi_intertwine_check_with(k_id, k_c, n_max, &|n| psi_coeff(k_id, k_c, n))
}

pub fn psi_intertwine_check_with(k_id: usize, k_c: usize, n_max: i64, coeff: &dyn Fn(i64) -> Rational) -> bool {
    let (src, dst) = (chi_hat(k_id, k_c), chi_k(k_id, k_c));
    let f = qz8();
    for n in src.lambda.abs()..=n_max {
        for j in 0..=2 * n as usize {
            let v = match PhiVec::single(src, n, VkDual::basis(&f, 2 * n as usize, j)) {
                Ok(v) => v,
                Err(_) => return false,
            };
            let lhs = psi_with(&hat_h_recurrence(&v), dst, coeff);
            let rhs = hat_h_recurrence(&psi_with(&v, dst, coeff));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::dual_act;
    use rand::{Rng, SeedableRng};

    fn random_mu(rng: &mut rand::rngs::StdRng, k: usize) -> VkDual {
        VkDual {
            coeffs: (0..=k)
                .map(|_| {
                    let a = z8::frac(rng.gen_range(-9..=9), rng.gen_range(1..=5));
                    let b = z8::frac(rng.gen_range(-9..=9), rng.gen_range(1..=5));
                    &a + &(&b * &z8::i())
                })
                .collect(),
        }
    }

    #[test]
    fn level_zero_trivial_character_is_constant() {
        let p = phi_expand(0, &VkDual::basis(&qz8(), 0, 0), CharC::new(0, 0)).unwrap();
        assert_eq!(p.poly, MultiPoly::zero(&qz8(), &SPHERE_VARS).constant_like(z8::one()));
    }

    #[test]
    fn low_level_below_lambda_rejected() {
        let err = phi_expand(0, &VkDual::basis(&qz8(), 0, 0), CharC::new(3, 1)).unwrap_err();
        assert_eq!(err, Error::BadLevel(0, 1));
    }

    #[test]
    fn level_one_lambda_one_is_square_of_first_row() {
        // mu = (Y^2)^v picks the y^2 coefficient of (alpha y - beta x)^2
        let p = phi_expand(1, &VkDual::basis(&qz8(), 2, 0), CharC::new(2, 1)).unwrap();
        let [al, ..] = sphere_gens();
        assert_eq!(p.poly, al.pow(2));
        let p = phi_expand(1, &VkDual::basis(&qz8(), 2, 1), CharC::new(2, 1)).unwrap();
        assert_eq!(p.poly, {
            let [al, be, ..] = sphere_gens();
            (&al * &be).scale(&z8::int(-2))
        });
    }

    #[test]
    fn level_one_lambda_zero_is_product_of_rows() {
        let f = qz8();
        let p = phi_expand(1, &VkDual::basis(&f, 2, 1), CharC::new(2, 0)).unwrap();
        let [al, be, alb, beb] = sphere_gens();
        // xy coefficient of (alpha y - beta x)(-beta_bar y - alpha_bar x)
        let direct = &(&al * &alb).scale(&z8::int(-1)) + &(&be * &beb);
        assert_eq!(p.poly, su2_normal_form(&direct).unwrap());
    }

    #[test]
    fn oracle_on_radial_function() {
        let f = SpherePoly::new(4, &sphere_gens()[0].constant_like(z8::one())).unwrap();
        let [al, be, alb, beb] = sphere_gens();
        let want = SpherePoly::new(4, &(&(&al * &alb) - &(&be * &beb)).scale(&z8::int(4))).unwrap();
        assert_eq!(hat_h_oracle(&f).unwrap(), want);
        let zero = SpherePoly::new(0, &al.constant_like(z8::one())).unwrap();
        assert!(hat_h_oracle(&zero).unwrap().poly.is_zero());
    }

    #[test]
    fn recurrence_from_level_zero() {
        let chi = CharC::new(2, 0);
        let v = PhiVec::single(chi, 0, VkDual::basis(&qz8(), 0, 0)).unwrap();
        let out = hat_h_recurrence(&v);
        assert_eq!(out.levels.keys().copied().collect::<Vec<_>>(), vec![1]);
        // -(N+0) * 2/(1*1) * j(2-j) mu_{j-1}, only j = 1 survives
        assert_eq!(out.levels[&1].coeffs, vec![z8::zero(), z8::int(-4), z8::zero()]);
        check_recurrence(&v).unwrap();
    }

    #[test]
    fn recurrence_matches_oracle() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (nn, lam) in [(2, 0), (3, 1), (4, 0), (4, 2)] {
            let chi = CharC::new(nn, lam);
            for n in lam.abs()..=4 {
                let v = PhiVec::single(chi, n, random_mu(&mut rng, 2 * n as usize)).unwrap();
                check_recurrence(&v).unwrap();
            }
        }
    }

    #[test]
    fn phi_is_equivariant_under_right_translation() {
        let (a, b) = (z8::frac(3, 5), &z8::frac(4, 5) * &z8::i());
        let g = sphere_point(&a, &b).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for (chi, n) in [(CharC::new(2, 0), 1), (CharC::new(3, 1), 2), (CharC::new(4, 2), 2)] {
            let mu = random_mu(&mut rng, 2 * n as usize);
            let lhs = phi_expand(n, &mu, chi).unwrap().right_translate(&a, &b).unwrap();
            let rhs = phi_expand(n, &dual_act(&g, &mu), chi).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn moments() {
        assert_eq!(moment_su2(0, 0, 0, 0), rat(1));
        assert_eq!(moment_su2(1, 0, 1, 0), frac(1, 2));
        assert_eq!(moment_su2(1, 0, 0, 1), rat(0));
        assert_eq!(moment_su2(1, 1, 1, 1), frac(1, 6));
        let [al, be, alb, beb] = sphere_gens();
        let d = &(&al * &alb) - &(&be * &beb);
        assert_eq!(integrate_su2(&(&d * &d)), z8::frac(1, 3));
        // total mass is 1 in any representative
        let one = &(&al * &alb) + &(&be * &beb);
        assert_eq!(integrate_su2(&one.pow(3)), z8::one());
    }

    #[test]
    fn psi_intertwines() {
        assert!(psi_intertwine_check(2, 2, 5));
        assert!(psi_intertwine_check(4, 2, 6));
        assert!(psi_intertwine_check(4, 4, 7));
        let wrong = |n: i64| {
            let h = chi_hat(4, 2);
            binom(n + h.lambda, h.n + n)
        };
        assert!(!psi_intertwine_check_with(4, 2, 6, &wrong));
    }

    #[test]
    fn characters() {
        assert_eq!(chi_k(4, 2), CharC::new(3, 1));
        assert_eq!(chi_hat(4, 2), CharC::new(2, 2));
    }
}
