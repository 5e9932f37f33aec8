//! Projection `rho` from the induced module onto `V(k_id-2) (x) V(k_c-2)` and its
//! `SU(2)`-equivariant section, built by inverting `rho` on the levels
//! `|lambda| <= n <= N-2`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{chi_k, expand, hat_h_recurrence, moment_su2, CharC, PhiVec};
use crate::error::{Error, Result};
use crate::exact::{binom, qz8, rat, z8, Matrix, NFElem};
use crate::rep::{dual_iso_inv, dual_matrix, lie, lie_dual_matrix, DualTensor, GL2Elem, PkPoly, VkDual};

/// Weight pair `(k_id, k_c)`, both even and at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeightPair {
    pub id: usize,
    pub c: usize,
}

impl WeightPair {
    pub fn new(id: usize, c: usize) -> Result<Self> {
        for k in [id, c] {
            if k < 2 || k % 2 == 1 {
                return Err(Error::BadWeight(k as i64));
            }
        }
        Ok(WeightPair { id, c })
    }

    pub fn chi(&self) -> CharC {
        chi_k(self.id, self.c)
    }

    pub fn chi_hat(&self) -> CharC {
        super::chi_hat(self.id, self.c)
    }

    /// Dimension of `V(k_id-2) (x) V(k_c-2)`.
    pub fn dim(&self) -> usize {
        (self.id - 1) * (self.c - 1)
    }

    pub(crate) fn index(&self, a: usize, b: usize) -> usize {
        a * (self.c - 1) + b
    }

    /// Unit tensor at flattened position `idx`.
    pub fn basis(&self, idx: usize) -> DualTensor {
        let mut t = DualTensor::zero(&qz8(), self.id - 2, self.c - 2);
        t.c[idx / (self.c - 1)][idx % (self.c - 1)] = z8::one();
        t
    }

    pub(crate) fn flatten(&self, t: &DualTensor) -> Vec<NFElem> {
        t.c.iter().flatten().cloned().collect()
    }
}

/// Entrywise complex conjugate.
pub fn conj_matrix(m: &Matrix) -> Result<Matrix> {
    let rows = (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).conj()).collect::<std::result::Result<Vec<_>, _>>());
    Ok(Matrix::from_rows(m.field(), rows.collect::<std::result::Result<Vec<_>, _>>()?))
}

/// Lie algebra action on the tensor: `X` on the first slot and `conj X` on the second.
pub fn tensor_lie(x: &Matrix, t: &DualTensor) -> Result<DualTensor> {
    let (k1, k2) = t.weights();
    let f = qz8();
    let a = lie_dual_matrix(x, k1)?;
    let b = lie_dual_matrix(&conj_matrix(x)?, k2)?;
    Ok(t.act(&a, &Matrix::identity(&f, k2 + 1)).add(&t.act(&Matrix::identity(&f, k1 + 1), &b)))
}

/// `g` on the first slot and `conj g` on the second.
pub fn tensor_group(g: &GL2Elem, t: &DualTensor) -> Result<DualTensor> {
    let (k1, k2) = t.weights();
    Ok(t.act(&dual_matrix(g, k1), &dual_matrix(&g.conj()?, k2)))
}

/// `rho(f)[a][b] = int f (-conj beta)^a conj(alpha)^(k_id-2-a) (-beta)^b alpha^(k_c-2-b)`.
pub fn rho_complex(f: &PhiVec, k: WeightPair) -> Result<DualTensor> {
    let p = expand(f)?;
    let (r1, r2) = (k.id as u32 - 2, k.c as u32 - 2);
    let mut out = DualTensor::zero(&qz8(), k.id - 2, k.c - 2);
    for (m, c) in p.poly.terms() {
        let e = &m.0;
        for a in 0..=r1 {
            for b in 0..=r2 {
                let w = moment_su2(e[0] + r2 - b, e[1] + b, e[2] + r1 - a, e[3] + a);
                if w == rat(0) {
                    continue;
                }
                let s = if (a + b) % 2 == 0 { w } else { -w };
                out.c[a as usize][b as usize] += &c.scale(&s);
            }
        }
    }
    Ok(out)
}

/// The equivariant section of `rho`, stored as the inverse of `rho` restricted to
/// the finite-dimensional levels.
#[derive(Clone, Debug)]
pub struct Section {
    pub k: WeightPair,
    cols: Vec<(i64, usize)>,
    inverse: Matrix,
}

impl Section {
    pub fn new(k: WeightPair) -> Result<Self> {
        let chi = k.chi();
        let f = qz8();
        let mut cols = Vec::new();
        for n in chi.lambda.abs()..=chi.n - 2 {
            for j in 0..=2 * n as usize {
                cols.push((n, j));
            }
        }
        if cols.len() != k.dim() {
            return Err(Error::InternalError(format!("level count {} != {}", cols.len(), k.dim())));
        }
        let mut m = Matrix::zeros(&f, k.dim(), k.dim());
        for (col, &(n, j)) in cols.iter().enumerate() {
            let v = PhiVec::single(chi, n, VkDual::basis(&f, 2 * n as usize, j))?;
            for (row, x) in k.flatten(&rho_complex(&v, k)?).into_iter().enumerate() {
                m.set(row, col, x);
            }
        }
        let inverse = m.inverse().ok_or_else(|| Error::InternalError("projection is not invertible on low levels".into()))?;
        Ok(Section { k, cols, inverse })
    }

    pub fn apply(&self, mu: &DualTensor) -> PhiVec {
        let f = qz8();
        let x = self.inverse.mul_vec(&self.k.flatten(mu));
        let mut out = PhiVec::zero(self.k.chi());
        for (&(n, j), c) in self.cols.iter().zip(x) {
            let mut m = VkDual::zero(&f, 2 * n as usize);
            m.coeffs[j] = c;
            out.push(n, m);
        }
        out
    }
}

/// Cached [`Section`] for `k`.
pub fn section_for(k: WeightPair) -> Result<Arc<Section>> {
    static CACHE: OnceLock<Mutex<HashMap<WeightPair, Arc<Section>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("section cache").get(&k) {
        return Ok(s.clone());
    }
    let s = Arc::new(Section::new(k)?);
    cache.lock().expect("section cache").insert(k, s.clone());
    Ok(s)
}

/// `(H^ s(mu) - s(H^ mu)) / 2`.
pub fn delta_s_direct(mu: &DualTensor, k: WeightPair) -> Result<PhiVec> {
    let s = section_for(k)?;
    let a = hat_h_recurrence(&s.apply(mu));
    let b = s.apply(&tensor_lie(&lie::hat_h(), mu)?);
    Ok(a.sub(&b).scale(&z8::frac(1, 2)))
}

/// Contraction of `mu` against `(X_id y - Y_id x)^(k_id-2) (-Y_c y - X_c x)^(k_c-2)`, a form of degree `2N-4` in `x, y`.
fn t_form(mu: &DualTensor, k: WeightPair) -> PkPoly {
    let (r1, r2) = (k.id as i64 - 2, k.c as i64 - 2);
    let mut p = PkPoly::zero(&qz8(), (r1 + r2) as usize);
    for a in 0..=r1 {
        for b in 0..=r2 {
            let m = &mu.c[a as usize][b as usize];
            if m.is_zero() {
                continue;
            }
            // C(r1,a) y^a (-x)^(r1-a) * C(r2,b) (-x)^b (-y)^(r2-b)
            let xexp = r1 - a + b;
            let sgn = if (r1 - a + b + r2 - b) % 2 == 0 { 1 } else { -1 };
            let c = binom(r1, a) * binom(r2, b) * rat(sgn);
            p.coeffs[xexp as usize] += &m.scale(&c);
        }
    }
    p
}

/// Closed form `-2 C(2N-4, k_id-2) phi_{N-1}(t*)`, where `t*(P) = t(d^2 P / dx dy)`.
pub fn delta_s_closed_form(mu: &DualTensor, k: WeightPair) -> Result<PhiVec> {
    let chi = k.chi();
    let n = chi.n - 1;
    let t = dual_iso_inv(&t_form(mu, k));
    let mut star = VkDual::zero(&qz8(), 2 * n as usize);
    for j in 1..2 * n {
        star.coeffs[j as usize] = t.coeffs[j as usize - 1].scale(&rat(j * (2 * n - j)));
    }
    let c = binom(2 * chi.n - 4, k.id as i64 - 2) * rat(-2);
    let star = star.scale(&NFElem::from_rational(&qz8(), c));
    PhiVec::single(chi, n, star)
}

/// `delta s(mu)` from first principles, checked against the closed form.
pub fn delta_s_complex(mu: &DualTensor, k: WeightPair) -> Result<PhiVec> {
    let direct = delta_s_direct(mu, k)?;
    if direct != delta_s_closed_form(mu, k)? {
        return Err(Error::FormulaMismatch(format!("delta s for k = ({}, {})", k.id, k.c)));
    }
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::super::{sphere_point, SpherePoly};
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_tensor(seed: u64, k: WeightPair) -> DualTensor {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut t = DualTensor::zero(&qz8(), k.id - 2, k.c - 2);
        for row in t.c.iter_mut() {
            for x in row.iter_mut() {
                *x = &z8::frac(rng.gen_range(-7..=7), rng.gen_range(1..=4)) + &(&z8::i() * &z8::int(rng.gen_range(-3..=3)));
            }
        }
        t
    }

    #[test]
    fn section_inverts_projection() {
        for (a, b) in [(2, 2), (4, 2), (2, 4), (4, 4)] {
            let k = WeightPair::new(a, b).unwrap();
            let mu = random_tensor(a as u64 * 10 + b as u64, k);
            let s = section_for(k).unwrap();
            assert_eq!(rho_complex(&s.apply(&mu), k).unwrap(), mu);
        }
    }

    #[test]
    fn discrete_series_is_killed_by_projection() {
        let k = WeightPair::new(2, 2).unwrap();
        for j in 0..3 {
            let v = PhiVec::single(k.chi(), 1, VkDual::basis(&qz8(), 2, j)).unwrap();
            assert!(rho_complex(&v, k).unwrap().is_zero());
        }
        let k = WeightPair::new(4, 2).unwrap();
        let v = PhiVec::single(k.chi(), 2, VkDual::basis(&qz8(), 4, 1)).unwrap();
        assert!(rho_complex(&v, k).unwrap().is_zero());
    }

    #[test]
    fn projection_and_section_are_equivariant() {
        let (a, b) = (z8::frac(3, 5), &z8::frac(4, 5) * &z8::i());
        let g = sphere_point(&a, &b).unwrap();
        for (ka, kb) in [(4, 2), (4, 4)] {
            let k = WeightPair::new(ka, kb).unwrap();
            let mu = random_tensor(5, k);
            let s = section_for(k).unwrap();
            let v = s.apply(&mu);
            assert_eq!(s.apply(&tensor_group(&g, &mu).unwrap()), v.act_k(&g));
            // rho against right translation of the underlying function
            let moved = expand(&v).unwrap().right_translate(&a, &b).unwrap();
            assert_eq!(moved, expand(&v.act_k(&g)).unwrap());
            assert_eq!(rho_complex(&v.act_k(&g), k).unwrap(), tensor_group(&g, &mu).unwrap());
            let _: SpherePoly = moved;
        }
    }

    #[test]
    fn delta_s_closed_form_holds() {
        for (a, b) in [(2, 2), (4, 2), (2, 4), (4, 4)] {
            let k = WeightPair::new(a, b).unwrap();
            for i in 0..k.dim() {
                delta_s_complex(&k.basis(i), k).unwrap();
            }
        }
    }

    #[test]
    fn delta_s_at_parallel_weight_two() {
        let k = WeightPair::new(2, 2).unwrap();
        let d = delta_s_complex(&k.basis(0), k).unwrap();
        // t = 1, t* = (xy)^v, times -2
        assert_eq!(d.levels[&1].coeffs, vec![z8::zero(), z8::int(-2), z8::zero()]);
    }

    #[test]
    fn delta_s_is_linear() {
        let k = WeightPair::new(4, 2).unwrap();
        let (x, y) = (random_tensor(1, k), random_tensor(2, k));
        let c = &z8::frac(2, 3) + &z8::i();
        let lhs = delta_s_direct(&x.add(&y.scale(&c)), k).unwrap();
        let rhs = delta_s_direct(&x, k).unwrap().add(&delta_s_direct(&y, k).unwrap().scale(&c));
        assert_eq!(lhs, rhs);
    }
}
