//! Cocycles with values in the discrete series `D(k)`: `c1` from the section,
//! the 2-cocycle `c2` extended by `K`-equivariance, and the relation
//! `H^* c1 = i c2` checked in the Borel model.

use super::section::{section_for, tensor_group, tensor_lie, WeightPair};
use super::{hat_h_recurrence, psi_inv, PhiVec};
use crate::error::{Error, Result};
use crate::exact::{qz8, z8, Matrix, NFElem};
use crate::rep::{lie, DualTensor, GL2Elem};

/// Generators of `g/k` for `SL2(C)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexGen {
    HatH,
    TildeW,
    H,
}

impl ComplexGen {
    pub fn matrix(self) -> Matrix {
        match self {
            ComplexGen::HatH => lie::hat_h(),
            ComplexGen::TildeW => lie::tilde_w(),
            ComplexGen::H => lie::h(),
        }
    }

    /// `kappa` with `Ad(kappa^-1) H^ = self`.
    fn kappa(self) -> Option<GL2Elem> {
        match self {
            ComplexGen::HatH => None,
            ComplexGen::TildeW => Some(lie::kappa1()),
            ComplexGen::H => Some(lie::kappa2()),
        }
    }
}

/// Action of a generator on the induced module, by conjugating the `H^` recurrence.
pub fn lie_act_phi(x: ComplexGen, v: &PhiVec) -> PhiVec {
    match x.kappa() {
        None => hat_h_recurrence(v),
        Some(g) => hat_h_recurrence(&v.act_k(&g)).act_k(&g.inverse()),
    }
}

/// Linear map `V(k_id-2) (x) V(k_c-2) -> B(chi_k)`, stored on the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HomVDC {
    pub k: WeightPair,
    pub values: Vec<PhiVec>,
}

impl HomVDC {
    pub fn from_fn(k: WeightPair, f: impl Fn(&DualTensor) -> Result<PhiVec>) -> Result<Self> {
        let values = (0..k.dim()).map(|i| f(&k.basis(i))).collect::<Result<_>>()?;
        Ok(HomVDC { k, values })
    }

    pub fn apply(&self, mu: &DualTensor) -> PhiVec {
        let mut out = PhiVec::zero(self.k.chi());
        for (x, v) in self.k.flatten(mu).iter().zip(&self.values) {
            if !x.is_zero() {
                out = out.add(&v.scale(x));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        HomVDC { k: self.k, values: self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HomVDC { k: self.k, values: self.values.iter().zip(&other.values).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &NFElem) -> Self {
        HomVDC { k: self.k, values: self.values.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(PhiVec::is_zero)
    }

    /// `(g phi)(mu) = g phi(g^-1 mu)`.
    pub fn act_k(&self, g: &GL2Elem) -> Result<Self> {
        let gi = g.inverse();
        HomVDC::from_fn(self.k, |mu| Ok(self.apply(&tensor_group(&gi, mu)?).act_k(g)))
    }

    /// `(X phi)(mu) = X phi(mu) - phi(X mu)`.
    pub fn act_lie(&self, x: ComplexGen) -> Result<Self> {
        let m = x.matrix();
        HomVDC::from_fn(self.k, |mu| Ok(lie_act_phi(x, &self.apply(mu)).sub(&self.apply(&tensor_lie(&m, mu)?))))
    }

    /// Every value lies in levels `n >= N-1`.
    pub fn in_discrete_series(&self) -> bool {
        let bound = self.k.chi().n - 1;
        self.values.iter().all(|v| v.min_level().map_or(true, |n| n >= bound))
    }
}

/// `c1(X)(mu) = X s(mu) - s(X mu)`.
pub fn c1_direct(k: WeightPair, x: ComplexGen) -> Result<HomVDC> {
    let s = section_for(k)?;
    let m = x.matrix();
    HomVDC::from_fn(k, |mu| Ok(lie_act_phi(x, &s.apply(mu)).sub(&s.apply(&tensor_lie(&m, mu)?))))
}

/// The 2-cocycle on the three pairs of generators.
#[derive(Clone, Debug)]
pub struct C2Cocycle {
    pub k: WeightPair,
    /// `c2(W~, H) = c1(H^)`.
    pub tw_h: HomVDC,
    /// `c2(H^, H) = kappa1 c2(W~, H)`.
    pub hh_h: HomVDC,
    /// `c2(H^, W~) = -kappa2 c2(W~, H)`.
    pub hh_tw: HomVDC,
}

impl C2Cocycle {
    pub fn new(k: WeightPair) -> Result<Self> {
        let tw_h = c1_direct(k, ComplexGen::HatH)?;
        let hh_h = tw_h.act_k(&lie::kappa1())?;
        let hh_tw = tw_h.act_k(&lie::kappa2())?.scale(&z8::int(-1));
        Ok(C2Cocycle { k, tw_h, hh_h, hh_tw })
    }

    pub fn scale(&self, c: &NFElem) -> Self {
        C2Cocycle { k: self.k, tw_h: self.tw_h.scale(c), hh_h: self.hh_h.scale(c), hh_tw: self.hh_tw.scale(c) }
    }

    /// Antisymmetric evaluation on a pair of generators.
    pub fn eval(&self, x: ComplexGen, y: ComplexGen) -> HomVDC {
        use ComplexGen::*;
        match (x, y) {
            (TildeW, H) => self.tw_h.clone(),
            (H, TildeW) => self.tw_h.scale(&z8::int(-1)),
            (HatH, H) => self.hh_h.clone(),
            (H, HatH) => self.hh_h.scale(&z8::int(-1)),
            (HatH, TildeW) => self.hh_tw.clone(),
            (TildeW, HatH) => self.hh_tw.scale(&z8::int(-1)),
            _ => self.tw_h.scale(&z8::zero()),
        }
    }

    /// `d c2 (H^, W~, H)`; every bracket of two generators lies in `k`, so only
    /// the module terms contribute.
    pub fn coboundary_on_generators(&self) -> Result<HomVDC> {
        use ComplexGen::*;
        let a = self.eval(TildeW, H).act_lie(HatH)?;
        let b = self.eval(HatH, H).act_lie(TildeW)?;
        let c = self.eval(HatH, TildeW).act_lie(H)?;
        Ok(a.sub(&b).add(&c))
    }
}

/// Generators of `b / k_B` for the Borel subgroup: `H^`, `N1`, `N2 = i N1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BorelGen {
    HatH,
    N1,
    N2,
}

/// `H^* ⌟ (x_1 ∧ ... ∧ x_m) = sum_j (-1)^(j-1) <H^*, x_j> x_1 ∧ .. x_j omitted .. ∧ x_m`.
pub fn contract_hat_h_star(wedge: &[BorelGen]) -> Vec<(i64, Vec<BorelGen>)> {
    let mut out = Vec::new();
    for (j, &x) in wedge.iter().enumerate() {
        if x == BorelGen::HatH {
            let rest = wedge.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &y)| y).collect();
            out.push((if j % 2 == 0 { 1 } else { -1 }, rest));
        }
    }
    out
}

/// Value of `psi^-1(v)` at the identity, as a scalar. For `phi_n(mu)` of the dual
/// character this is `(-1)^(n - lambda^) mu(x^(n - lambda^) y^(n + lambda^))`.
fn eval_at_identity(v: &PhiVec, k: WeightPair) -> Result<NFElem> {
    let w = psi_inv(v, k.id, k.c)?;
    let lam = w.chi.lambda;
    let mut acc = z8::zero();
    for (&n, mu) in &w.levels {
        let j = (n - lam) as usize;
        let x = if (n - lam) % 2 == 0 { mu.coeffs[j].clone() } else { -&mu.coeffs[j] };
        acc += &x;
    }
    Ok(acc)
}

/// Shapiro image of a `D(k)`-valued linear map: the functional `mu -> phi(mu)(1)`,
/// listed on the tensor basis.
pub fn borel_functional(phi: &HomVDC) -> Result<Vec<NFElem>> {
    if !phi.in_discrete_series() {
        return Err(Error::InternalError("cochain leaves the discrete series".into()));
    }
    phi.values.iter().map(|v| eval_at_identity(v, phi.k)).collect()
}

/// Matrix of `X` on `V(k_id-2) (x) V(k_c-2)` in the flattened basis.
fn tensor_lie_matrix(x: &Matrix, k: WeightPair) -> Result<Matrix> {
    let f = qz8();
    let d = k.dim();
    let mut m = Matrix::zeros(&f, d, d);
    for col in 0..d {
        let img = k.flatten(&tensor_lie(x, &k.basis(col))?);
        for (row, v) in img.into_iter().enumerate() {
            m.set(row, col, v);
        }
    }
    Ok(m)
}

/// `(X lambda)(mu) = dchi^(X) lambda(mu) - lambda(X mu)` on `Hom(V(k-2), chi^)`.
fn borel_module_matrix(x: &Matrix, dchi: &NFElem, k: WeightPair) -> Result<Matrix> {
    let t = tensor_lie_matrix(x, k)?.transpose();
    let d = k.dim();
    let mut m = Matrix::zeros(&qz8(), d, d);
    for i in 0..d {
        for j in 0..d {
            let mut v = -t.get(i, j);
            if i == j {
                v += dchi;
            }
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// Outcome of the Borel-model check of `H^* c1 = i c2`.
#[derive(Clone, Debug)]
pub struct PvReport {
    pub k: WeightPair,
    /// Shapiro images of `c1` on `H^, N1, N2`.
    pub c1: [Vec<NFElem>; 3],
    /// Shapiro images of `c2` on `(N1,H^), (N2,H^), (N1,N2)`.
    pub c2: [Vec<NFElem>; 3],
    /// `H^* c1 - i c2` on the same pairs.
    pub difference: [Vec<NFElem>; 3],
    /// Equivariant 1-cochain `psi` on `H^, N1, N2` with `d psi = difference`.
    pub primitive: [Vec<NFElem>; 3],
    /// `c1(N1)` equals `(k_id-1)(1-k_c) y_id^(k_id-2) x_c^(k_c-2)`.
    pub c1_n1_expected: bool,
    /// `c1(N2) = i c1(N1)` and `c1(H^) = 0`.
    pub c1_relations: bool,
}

pub fn pv_check(k: WeightPair) -> Result<PvReport> {
    pv_check_scaled(k, &z8::one())
}

/// As [`pv_check`] with `c2` multiplied by `c2_scale`; any scale other than 1 is a negative control.
pub fn pv_check_scaled(k: WeightPair, c2_scale: &NFElem) -> Result<PvReport> {
    use ComplexGen as G;
    let d = k.dim();
    let f = qz8();
    let half = z8::frac(1, 2);
    let c1h = c1_direct(k, G::HatH)?;
    let c1w = c1_direct(k, G::TildeW)?;
    let c1hh = c1_direct(k, G::H)?;
    let c2 = C2Cocycle::new(k)?.scale(c2_scale);

    let scale = |v: Vec<NFElem>, c: &NFElem| v.into_iter().map(|x| &x * c).collect::<Vec<_>>();
    // N1 = W~/2 and N2 = -H/2 modulo k
    let c1 = [
        borel_functional(&c1h)?,
        scale(borel_functional(&c1w)?, &half),
        scale(borel_functional(&c1hh)?, &-&half),
    ];
    let c2v = [
        scale(borel_functional(&c2.eval(G::HatH, G::TildeW))?, &-&half),
        scale(borel_functional(&c2.eval(G::HatH, G::H))?, &half),
        scale(borel_functional(&c2.eval(G::TildeW, G::H))?, &z8::frac(-1, 4)),
    ];
    // (H^* ∧ c1)(Y, Z) = H^*(Y) c1(Z) - H^*(Z) c1(Y)
    let wedge = [scale(c1[1].clone(), &z8::int(-1)), scale(c1[2].clone(), &z8::int(-1)), vec![z8::zero(); d]];
    let i = z8::i();
    let difference: [Vec<NFElem>; 3] =
        std::array::from_fn(|p| wedge[p].iter().zip(&c2v[p]).map(|(a, b)| a - &(&i * b)).collect());

    let chi = k.chi_hat();
    let m_h = borel_module_matrix(&lie::hat_h(), &z8::int(2 * chi.n), k)?;
    let m_n1 = borel_module_matrix(&lie::n1(), &z8::zero(), k)?;
    let m_n2 = borel_module_matrix(&lie::n2(), &z8::zero(), k)?;
    let m_hi = borel_module_matrix(&lie::hat_h_i(), &(&i * &z8::int(2 * chi.lambda)), k)?;
    let id = Matrix::identity(&f, d);

    // unknowns psi(H^), psi(N1), psi(N2); six block rows
    let mut sys = Matrix::zeros(&f, 6 * d, 3 * d);
    let mut put = |br: usize, bc: usize, m: &Matrix, c: i64| {
        for r in 0..d {
            for s in 0..d {
                let v = m.get(r, s);
                if !v.is_zero() {
                    let old = sys.get(br * d + r, bc * d + s).clone();
                    sys.set(br * d + r, bc * d + s, &old + &(v * &z8::int(c)));
                }
            }
        }
    };
    // K_B equivariance: [H^_i, H^] = 0, [H^_i, N1] = 2 N2, [H^_i, N2] = -2 N1
    put(0, 0, &m_hi, 1);
    put(1, 1, &m_hi, 1);
    put(1, 2, &id, -2);
    put(2, 2, &m_hi, 1);
    put(2, 1, &id, 2);
    // d psi(X, Y) = X psi(Y) - Y psi(X) - psi([X, Y]) with [N_j, H^] = -2 N_j, [N1, N2] = 0
    put(3, 0, &m_n1, 1);
    put(3, 1, &m_h, -1);
    put(3, 1, &id, 2);
    put(4, 0, &m_n2, 1);
    put(4, 2, &m_h, -1);
    put(4, 2, &id, 2);
    put(5, 2, &m_n1, 1);
    put(5, 1, &m_n2, -1);
    let mut rhs = vec![z8::zero(); 3 * d];
    for p in &difference {
        rhs.extend(p.iter().cloned());
    }
    let sol = sys
        .solve(&rhs)
        .ok_or_else(|| Error::PVCheckFailed(format!("k = ({}, {})", k.id, k.c)))?;
    let primitive = [sol[..d].to_vec(), sol[d..2 * d].to_vec(), sol[2 * d..].to_vec()];

    let mut expected = vec![z8::zero(); d];
    expected[k.index(0, k.c - 2)] = z8::int((k.id as i64 - 1) * (1 - k.c as i64));
    let c1_n1_expected = c1[1] == expected;
    let c1_relations = c1[0].iter().all(NFElem::is_zero) && c1[2] == scale(c1[1].clone(), &i);
    Ok(PvReport { k, c1, c2: c2v, difference, primitive, c1_n1_expected, c1_relations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp(a: usize, b: usize) -> WeightPair {
        WeightPair::new(a, b).unwrap()
    }

    #[test]
    fn c1_is_equivariant() {
        for k in [kp(2, 2), kp(4, 2)] {
            let h = c1_direct(k, ComplexGen::HatH).unwrap();
            let w = c1_direct(k, ComplexGen::TildeW).unwrap();
            let hh = c1_direct(k, ComplexGen::H).unwrap();
            assert!(h.in_discrete_series() && w.in_discrete_series() && hh.in_discrete_series());
            assert_eq!(w, h.act_k(&lie::kappa1().inverse()).unwrap());
            assert_eq!(w, h.act_k(&lie::kappa1()).unwrap().scale(&z8::int(-1)));
            assert_eq!(hh, h.act_k(&lie::kappa2()).unwrap().scale(&z8::int(-1)));
        }
    }

    #[test]
    fn c2_satisfies_cocycle_identity() {
        for k in [kp(2, 2), kp(4, 2), kp(4, 4)] {
            let c2 = C2Cocycle::new(k).unwrap();
            assert!(c2.coboundary_on_generators().unwrap().is_zero(), "k = {k:?}");
        }
    }

    #[test]
    fn contraction_of_n1_wedge_hat_h() {
        assert_eq!(contract_hat_h_star(&[BorelGen::N1, BorelGen::HatH]), vec![(-1, vec![BorelGen::N1])]);
        assert_eq!(contract_hat_h_star(&[BorelGen::HatH, BorelGen::N2]), vec![(1, vec![BorelGen::N2])]);
        assert!(contract_hat_h_star(&[BorelGen::N1, BorelGen::N2]).is_empty());
    }

    #[test]
    fn pv_relation_holds() {
        for k in [kp(2, 2), kp(4, 4)] {
            let r = pv_check(k).unwrap();
            assert!(r.c1_relations && r.c1_n1_expected);
            assert!(r.difference.iter().flatten().all(NFElem::is_zero));
        }
    }

    #[test]
    fn perturbed_c2_fails() {
        let err = pv_check_scaled(kp(2, 2), &z8::int(2)).unwrap_err();
        assert!(matches!(err, Error::PVCheckFailed(_)));
    }
}
