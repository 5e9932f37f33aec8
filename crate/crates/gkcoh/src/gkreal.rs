//! The real place: weight vectors `f_n` of the induced module, the projection to
//! `V(k-2)`, its `SO(2)`-equivariant section, the 1-cocycles `c1` and their cup product.
//!
//! All scalars live in `Q(zeta8)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exact::{binom, qz8, rat, z8, Matrix, NFElem};
use crate::rep::{dual_act, lie, lie_act_dual, upsilon, DualTensor, GL2Elem, PkPoly, VkDual};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Finite combination `sum c_n f_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GKVecR {
    pub k: usize,
    pub coeffs: BTreeMap<i64, NFElem>,
}

impl GKVecR {
    pub fn zero(k: usize) -> Self {
        GKVecR { k, coeffs: BTreeMap::new() }
    }

    pub fn basis(k: usize, n: i64) -> Self {
        let mut v = Self::zero(k);
        v.push(n, z8::one());
        v
    }

    pub fn from_terms(k: usize, terms: &[(i64, NFElem)]) -> Self {
        let mut v = Self::zero(k);
        for (n, c) in terms {
            v.push(*n, c.clone());
        }
        v
    }

    /// Adds `c f_n`.
    pub fn push(&mut self, n: i64, c: NFElem) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(n).or_insert_with(z8::zero);
        *e += &c;
        if e.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn coeff(&self, n: i64) -> NFElem {
        self.coeffs.get(&n).cloned().unwrap_or_else(z8::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in &other.coeffs {
            out.push(*n, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&z8::int(-1)))
    }

    pub fn scale(&self, s: &NFElem) -> Self {
        let mut out = Self::zero(self.k);
        for (n, c) in &self.coeffs {
            out.push(*n, c * s);
        }
        out
    }

    /// Multiplies the coefficient of `f_n` by `w(n)`.
    pub fn map_weights(&self, w: impl Fn(i64) -> NFElem) -> Self {
        let mut out = Self::zero(self.k);
        for (n, c) in &self.coeffs {
            out.push(*n, c * &w(*n));
        }
        out
    }

    /// Whether the support lies in `|n| >= k/2`.
    pub fn in_discrete_series(&self) -> bool {
        self.coeffs.keys().all(|n| n.abs() >= self.k as i64 / 2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealGen {
    HatH,
    TildeW,
    W,
}

impl RealGen {
    pub fn matrix(self) -> Matrix {
        match self {
            RealGen::HatH => lie::hat_h(),
            RealGen::TildeW => lie::tilde_w(),
            RealGen::W => lie::w(),
        }
    }

    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        [RealGen::HatH, RealGen::TildeW, RealGen::W]
            .into_iter()
            .find(|g| &g.matrix() == m)
            .ok_or_else(|| Error::BadGenerator(format!("{:?}", m.row(0))))
    }
}

/// Action of `hat H`, `tilde W`, `W` on the weight vectors.
pub fn lie_act_principal(x: RealGen, v: &GKVecR) -> GKVecR {
    let half = v.k as i64 / 2;
    let i = z8::i();
    let mut out = GKVecR::zero(v.k);
    for (&n, c) in &v.coeffs {
        let up = c * &z8::int(half + n);
        let down = c * &z8::int(half - n);
        match x {
            RealGen::HatH => {
                out.push(n + 1, up);
                out.push(n - 1, down);
            }
            RealGen::TildeW => {
                out.push(n + 1, -(&i * &up));
                out.push(n - 1, &i * &down);
            }
            RealGen::W => out.push(n, &(&i * c) * &z8::int(2 * n)),
        }
    }
    out
}

pub fn lie_act_principal_matrix(x: &Matrix, v: &GKVecR) -> Result<GKVecR> {
    Ok(lie_act_principal(RealGen::from_matrix(x)?, v))
}

/// `A[m][j]` = coefficient of `X^j Y^(k-2-j)` in `P_m = (Y + iX)^m (Y - iX)^(k-2-m)`, and its inverse.
fn pm_change(k: usize) -> (Matrix, Matrix) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Matrix, Matrix)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("cache lock").get(&k) {
        return hit.clone();
    }
    let f = qz8();
    let d = k - 2;
    let plus = PkPoly { coeffs: vec![z8::one(), z8::i()] };
    let minus = PkPoly { coeffs: vec![z8::one(), -z8::i()] };
    let one = PkPoly { coeffs: vec![z8::one()] };
    let mut a = Matrix::zeros(&f, d + 1, d + 1);
    for m in 0..=d {
        let mut p = one.clone();
        for _ in 0..m {
            p = p.mul(&plus);
        }
        for _ in m..d {
            p = p.mul(&minus);
        }
        for (j, c) in p.coeffs.into_iter().enumerate() {
            a.set(m, j, c);
        }
    }
    let inv = a.inverse().expect("P_m is a basis");
    cache.lock().expect("cache lock").insert(k, (a.clone(), inv.clone()));
    (a, inv)
}

/// Coordinates of `mu` in the basis dual to `P_m`.
pub fn to_pm_dual(mu: &VkDual) -> Vec<NFElem> {
    pm_change(mu.weight() + 2).0.mul_vec(&mu.coeffs)
}

/// The functional with the given coordinates in the basis dual to `P_m`.
pub fn from_pm_dual(c: &[NFElem]) -> VkDual {
    VkDual { coeffs: pm_change(c.len() + 1).1.mul_vec(c) }
}

/// `rho(f_n) = P_(n + (k-2)/2)^v` for `|n| <= (k-2)/2`, zero otherwise.
pub fn rho_real(v: &GKVecR, _sign: Sign) -> VkDual {
    let h = (v.k as i64 - 2) / 2;
    let c: Vec<NFElem> = (0..=2 * h).map(|m| v.coeff(m - h)).collect();
    from_pm_dual(&c)
}

/// `s(P_m^v) = f_(m - (k-2)/2)`.
pub fn section_real(mu: &VkDual, _sign: Sign) -> GKVecR {
    let k = mu.weight() + 2;
    let h = (k as i64 - 2) / 2;
    let mut v = GKVecR::zero(k);
    for (m, c) in to_pm_dual(mu).into_iter().enumerate() {
        v.push(m as i64 - h, c);
    }
    v
}

/// `kappa(theta)` with `(cos theta, sin theta) = (c, s)` acting by `e^(2 i n theta)` on `f_n`.
pub fn rotate_gk(c: &NFElem, s: &NFElem, v: &GKVecR) -> GKVecR {
    let e = c + &(&z8::i() * s);
    v.map_weights(|n| e.powi(2 * n).expect("unit"))
}

/// `kappa(theta) = [[c, s], [-s, c]]` acting on `V(k-2)`.
pub fn rotate_v(c: &NFElem, s: &NFElem, mu: &VkDual) -> VkDual {
    let g = GL2Elem::from_entries(c.clone(), s.clone(), -s, c.clone()).expect("rotation");
    dual_act(&g, mu)
}

/// The element `diag(1, -1)` on the twisted induced module: `f_n -> +-(-1)^((k-2)/2) f_-n`.
pub fn weyl_gk(sign: Sign, v: &GKVecR) -> GKVecR {
    let h = (v.k as i64 - 2) / 2;
    let e = sign.value() * if h % 2 == 0 { 1 } else { -1 };
    let mut out = GKVecR::zero(v.k);
    for (n, c) in &v.coeffs {
        out.push(-n, c * &z8::int(e));
    }
    out
}

/// The element `diag(1, -1)` on `V(k-2)(+-)`.
pub fn weyl_v(sign: Sign, mu: &VkDual) -> VkDual {
    let g = GL2Elem::from_entries(z8::one(), z8::zero(), z8::zero(), z8::int(-1)).expect("invertible");
    dual_act(&g, mu).scale(&z8::int(sign.value()))
}

/// Inverse of the twist identifying `D(k)` inside the two induced modules.
fn untwist(sign: Sign, v: &GKVecR) -> GKVecR {
    match sign {
        Sign::Plus => v.clone(),
        Sign::Minus => v.map_weights(|n| if n < 0 { z8::int(-1) } else { z8::one() }),
    }
}

/// A linear map `V(k-2) -> D(k)` recorded on the basis `mu_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomVDR {
    pub k: usize,
    pub sign: Sign,
    /// `values[m + (k-2)/2]` is the image of `mu_m`.
    pub values: Vec<GKVecR>,
}

impl HomVDR {
    fn half(&self) -> i64 {
        (self.k as i64 - 2) / 2
    }

    pub fn on_mu(&self, m: i64) -> &GKVecR {
        &self.values[(m + self.half()) as usize]
    }

    /// Evaluation on an arbitrary functional, expanded in the `mu_m` basis.
    pub fn apply(&self, mu: &VkDual) -> GKVecR {
        let h = self.half();
        let mut out = GKVecR::zero(self.k);
        for (j, c) in mu.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = j as i64 - h;
            let w = binom(2 * h, j as i64) * rat(if (h - m) % 2 == 0 { 1 } else { -1 });
            out = out.add(&self.on_mu(m).scale(&c.scale(&w)));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        HomVDR {
            k: self.k,
            sign: self.sign,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(GKVecR::is_zero)
    }

    pub fn in_discrete_series(&self) -> bool {
        self.values.iter().all(GKVecR::in_discrete_series)
    }

    /// `(kappa1^-1 . phi)(mu) = kappa1^-1 phi(kappa1 mu)` with `kappa1` the rotation by `pi/4`.
    pub fn rotate_back_eighth(&self) -> Self {
        let s = z8::sqrt2().inv().expect("nonzero");
        let h = self.half();
        let values = (-h..=h)
            .map(|m| {
                let mu = crate::rep::mu_basis(&qz8(), self.k, m).expect("in range");
                let img = self.apply(&rotate_v(&s, &s, &mu));
                img.map_weights(|n| (-z8::i()).powi(n).expect("unit"))
            })
            .collect();
        HomVDR { k: self.k, sign: self.sign, values }
    }
}

fn check_weight(k: usize) -> Result<i64> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::BadWeight(k as i64));
    }
    Ok((k as i64 - 2) / 2)
}

/// `c1(X)(mu) = X s(mu) - s(X mu)`, read in `D(k)` through the sign twist.
pub fn c1_direct(k: usize, sign: Sign, x: RealGen) -> Result<HomVDR> {
    let h = check_weight(k)?;
    let f = qz8();
    let xm = x.matrix();
    let values = (-h..=h)
        .map(|m| {
            let mu = crate::rep::mu_basis(&f, k, m)?;
            let a = lie_act_principal(x, &section_real(&mu, sign));
            let b = section_real(&lie_act_dual(&xm, &mu)?, sign);
            Ok(untwist(sign, &a.sub(&b)))
        })
        .collect::<Result<_>>()?;
    Ok(HomVDR { k, sign, values })
}

/// `c1(hat H)(mu_m) = (k-1)((-i)^((k-2)/2+m) f_(k/2) +- i^((k-2)/2+m) f_(-k/2))`.
pub fn c1_closed_form(k: usize, sign: Sign) -> Result<HomVDR> {
    let h = check_weight(k)?;
    let half = k as i64 / 2;
    let i = z8::i();
    let km1 = z8::int(k as i64 - 1);
    let values = (-h..=h)
        .map(|m| {
            let e = (h + m) as u32;
            GKVecR::from_terms(
                k,
                &[
                    (half, &km1 * &(-&i).pow(e)),
                    (-half, &(&km1 * &i.pow(e)) * &z8::int(sign.value())),
                ],
            )
        })
        .collect();
    Ok(HomVDR { k, sign, values })
}

/// `c1(hat H)` from first principles, checked against the closed form.
pub fn cocycle_c1_real(k: usize, sign: Sign) -> Result<HomVDR> {
    let direct = c1_direct(k, sign, RealGen::HatH)?;
    if direct != c1_closed_form(k, sign)? {
        return Err(Error::FormulaMismatch(format!("c1(hat H) at k = {k}, sign {sign:?}")));
    }
    Ok(direct)
}

/// Checks `c(tilde W)` from rotation equivariance against the direct value and `d c (hat H, tilde W) = 0`.
pub fn cocycle_check_real(c: &HomVDR) -> bool {
    let Ok(direct_w) = c1_direct(c.k, c.sign, RealGen::TildeW) else {
        return false;
    };
    let via_k = c.rotate_back_eighth();
    if via_k != direct_w {
        return false;
    }
    let h = (c.k as i64 - 2) / 2;
    let f = qz8();
    (-h..=h).all(|m| {
        let mu = crate::rep::mu_basis(&f, c.k, m).expect("in range");
        let hm = lie_act_dual(&lie::hat_h(), &mu).expect("trace zero");
        let wm = lie_act_dual(&lie::tilde_w(), &mu).expect("trace zero");
        let t1 = lie_act_principal(RealGen::HatH, &via_k.apply(&mu)).sub(&via_k.apply(&hm));
        let t2 = lie_act_principal(RealGen::TildeW, &c.apply(&mu)).sub(&c.apply(&wm));
        t1.sub(&t2).is_zero()
    })
}

/// Finite combination of `f_a (x) f_b`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GKTensorR {
    pub coeffs: BTreeMap<(i64, i64), NFElem>,
}

impl GKTensorR {
    pub fn push(&mut self, a: i64, b: i64, c: NFElem) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((a, b)).or_insert_with(z8::zero);
        *e += &c;
        if e.is_zero() {
            self.coeffs.remove(&(a, b));
        }
    }

    pub fn coeff(&self, a: i64, b: i64) -> NFElem {
        self.coeffs.get(&(a, b)).cloned().unwrap_or_else(z8::zero)
    }

    pub fn outer(x: &GKVecR, y: &GKVecR) -> Self {
        let mut t = Self::default();
        for (a, c) in &x.coeffs {
            for (b, d) in &y.coeffs {
                t.push(*a, *b, c * d);
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.coeffs {
            out.push(*a, *b, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &NFElem) -> Self {
        let mut out = Self::default();
        for ((a, b), c) in &self.coeffs {
            out.push(*a, *b, c * s);
        }
        out
    }

    /// Average over `SO(2)`: only total weight zero survives.
    pub fn weight_zero_part(&self) -> Self {
        let mut out = Self::default();
        for ((a, b), c) in &self.coeffs {
            if a + b == 0 {
                out.push(*a, *b, c.clone());
            }
        }
        out
    }
}

/// `phi1 phi2 (Upsilon)`.
pub fn pair_through(phi1: &HomVDR, phi2: &HomVDR, ups: &DualTensor) -> GKTensorR {
    let f = qz8();
    let d = phi1.k - 2;
    let imgs1: Vec<GKVecR> = (0..=d).map(|a| phi1.apply(&VkDual::basis(&f, d, a))).collect();
    let imgs2: Vec<GKVecR> = (0..=d).map(|b| phi2.apply(&VkDual::basis(&f, d, b))).collect();
    let mut out = GKTensorR::default();
    for (a, row) in ups.c.iter().enumerate() {
        for (b, u) in row.iter().enumerate() {
            if !u.is_zero() {
                out = out.add(&GKTensorR::outer(&imgs1[a], &imgs2[b]).scale(u));
            }
        }
    }
    out
}

/// Both evaluations of the cup product `c1+ u c1-` at `(hat H, tilde W)`.
#[derive(Clone, Debug)]
pub struct CupReportR {
    pub k: usize,
    pub cup: GKTensorR,
    pub closed_form: GKTensorR,
    /// `-8i` times the weight-zero part of `(ds+ (x) ds+)(Upsilon)`.
    pub average_same_sign: GKTensorR,
    /// `-8i` times the weight-zero part of `(ds+ (x) ds-)(Upsilon)`.
    pub average_mixed_sign: GKTensorR,
}

impl CupReportR {
    pub fn closed_form_holds(&self) -> bool {
        self.cup == self.closed_form
    }
    pub fn same_sign_average_holds(&self) -> bool {
        self.cup == self.average_same_sign
    }
    pub fn mixed_sign_average_holds(&self) -> bool {
        self.cup == self.average_mixed_sign
    }
}

/// `delta s = c1(hat H) / 2`.
fn delta_s(k: usize, sign: Sign) -> Result<HomVDR> {
    let c = cocycle_c1_real(k, sign)?;
    let half = z8::frac(1, 2);
    Ok(HomVDR { k, sign, values: c.values.iter().map(|v| v.scale(&half)).collect() })
}

pub fn cup2_report(k: usize) -> Result<CupReportR> {
    check_weight(k)?;
    let ups = upsilon(&qz8(), k)?;
    let hp = cocycle_c1_real(k, Sign::Plus)?;
    let hm = cocycle_c1_real(k, Sign::Minus)?;
    let wp = hp.rotate_back_eighth();
    let wm = hm.rotate_back_eighth();
    let cup = pair_through(&hp, &wm, &ups).add(&pair_through(&wp, &hm, &ups).scale(&z8::int(-1)));

    let half = k as i64 / 2;
    let c = -(&z8::int(2) * &z8::i()).pow(k as u32 - 1).scale(&rat((k as i64 - 1).pow(2)));
    let mut closed_form = GKTensorR::default();
    closed_form.push(half, -half, c.clone());
    closed_form.push(-half, half, c);

    let m8i = &z8::int(-8) * &z8::i();
    let dp = delta_s(k, Sign::Plus)?;
    let dm = delta_s(k, Sign::Minus)?;
    let average_same_sign = pair_through(&dp, &dp, &ups).weight_zero_part().scale(&m8i);
    let average_mixed_sign = pair_through(&dp, &dm, &ups).weight_zero_part().scale(&m8i);
    Ok(CupReportR { k, cup, closed_form, average_same_sign, average_mixed_sign })
}

/// The cup value at `(hat H, tilde W)`, checked against the closed form and the rotation average.
pub fn cup2_real(k: usize) -> Result<GKTensorR> {
    let r = cup2_report(k)?;
    if !r.closed_form_holds() {
        return Err(Error::FormulaMismatch(format!("cup product closed form at k = {k}")));
    }
    if !r.same_sign_average_holds() {
        return Err(Error::FormulaMismatch(format!("cup product rotation average at k = {k}")));
    }
    Ok(r.cup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;
    use crate::rep::mu_basis;
    use proptest::prelude::*;

    /// Functions `y^(k/2) L(E)` with `E = e^(2 i theta)` and `L` a Laurent polynomial.
    type Laurent = BTreeMap<i64, NFElem>;

    fn lmul(a: &Laurent, b: &Laurent) -> Laurent {
        let mut out = Laurent::new();
        for (x, c) in a {
            for (y, d) in b {
                let e = out.entry(x + y).or_insert_with(z8::zero);
                *e += &(c * d);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn ladd(a: &Laurent, b: &Laurent) -> Laurent {
        let mut out = a.clone();
        for (x, c) in b {
            let e = out.entry(*x).or_insert_with(z8::zero);
            *e += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Applies `p y d/dy + q d/dtheta` (no x-dependence) with `p, q` Laurent in `E`.
    fn oracle(k: usize, f: &Laurent, p: &Laurent, q: &Laurent) -> Laurent {
        let ydy: Laurent = f.iter().map(|(n, c)| (*n, c * &z8::frac(k as i64, 2))).collect();
        let dth: Laurent = f.iter().map(|(n, c)| (*n, &(c * &z8::i()) * &z8::int(2 * n))).collect();
        ladd(&lmul(p, &ydy), &lmul(q, &dth))
    }

    fn sin2(scale: i64) -> Laurent {
        // scale * (E - 1/E) / (2i)
        let c = &z8::int(scale) * &(&z8::int(2) * &z8::i()).inv().unwrap();
        [(1, c.clone()), (-1, -c)].into_iter().collect()
    }

    fn cos2(scale: i64) -> Laurent {
        let c = z8::frac(scale, 2);
        [(1, c.clone()), (-1, c)].into_iter().collect()
    }

    fn to_vec(k: usize, l: &Laurent) -> GKVecR {
        GKVecR { k, coeffs: l.clone() }
    }

    #[test]
    fn lie_action_matches_coordinate_oracle() {
        for k in [2usize, 4, 6] {
            for n in -4i64..=4 {
                let f: Laurent = [(n, z8::one())].into_iter().collect();
                let v = GKVecR::basis(k, n);
                // hat H = 2y cos2t d/dy + sin2t d/dt;  tilde W = 2y sin2t d/dy - cos2t d/dt;  W = d/dt
                let hh = oracle(k, &f, &cos2(2), &sin2(1));
                let tw = oracle(k, &f, &sin2(2), &cos2(-1));
                let ww = oracle(k, &f, &Laurent::new(), &[(0, z8::one())].into_iter().collect());
                assert_eq!(lie_act_principal(RealGen::HatH, &v), to_vec(k, &hh));
                assert_eq!(lie_act_principal(RealGen::TildeW, &v), to_vec(k, &tw));
                assert_eq!(lie_act_principal(RealGen::W, &v), to_vec(k, &ww));
            }
        }
    }

    #[test]
    fn lie_action_examples() {
        assert!(lie_act_principal(RealGen::W, &GKVecR::basis(4, 0)).is_zero());
        let v = lie_act_principal(RealGen::HatH, &GKVecR::basis(2, 0));
        assert_eq!(v, GKVecR::from_terms(2, &[(1, z8::one()), (-1, z8::one())]));
        let v = lie_act_principal(RealGen::HatH, &GKVecR::basis(4, 1));
        assert_eq!(v, GKVecR::from_terms(4, &[(2, z8::int(3)), (0, z8::one())]));
        assert!(matches!(lie_act_principal_matrix(&lie::h(), &v), Err(Error::BadGenerator(_))));
    }

    #[test]
    fn rho_and_section() {
        let f = qz8();
        assert!(rho_real(&GKVecR::basis(4, 2), Sign::Plus).is_zero());
        assert_eq!(rho_real(&GKVecR::basis(2, 0), Sign::Plus).coeffs, vec![z8::one()]);
        for k in [2usize, 4, 6, 8] {
            let h = (k as i64 - 2) / 2;
            // s(P_h^v) = f_0
            let mut c = vec![z8::zero(); k - 1];
            c[h as usize] = z8::one();
            assert_eq!(section_real(&from_pm_dual(&c), Sign::Plus), GKVecR::basis(k, 0));
            for m in -h..=h {
                let mu = mu_basis(&f, k, m).unwrap();
                assert_eq!(rho_real(&section_real(&mu, Sign::Plus), Sign::Plus), mu);
            }
        }
    }

    #[test]
    fn section_is_rotation_equivariant() {
        let (c, s) = (z8::frac(3, 5), z8::frac(4, 5));
        for k in [2usize, 4, 6] {
            let mu = VkDual { coeffs: (0..k - 1).map(|j| z8::int(j as i64 * 3 - 2)).collect() };
            assert_eq!(section_real(&rotate_v(&c, &s, &mu), Sign::Plus), rotate_gk(&c, &s, &section_real(&mu, Sign::Plus)));
        }
    }

    #[test]
    fn section_is_weyl_equivariant() {
        for k in [2usize, 4, 6, 8] {
            for sign in [Sign::Plus, Sign::Minus] {
                let mu = VkDual { coeffs: (0..k - 1).map(|j| z8::int(j as i64 * j as i64 - 5)).collect() };
                assert_eq!(section_real(&weyl_v(sign, &mu), sign), weyl_gk(sign, &section_real(&mu, sign)));
            }
        }
    }

    #[test]
    fn w_on_v_matches_w_on_weights() {
        for k in [4usize, 6] {
            let mu = VkDual { coeffs: (0..k - 1).map(|j| z8::int(2 * j as i64 + 1)).collect() };
            let lhs = section_real(&lie_act_dual(&lie::w(), &mu).unwrap(), Sign::Plus);
            assert_eq!(lhs, lie_act_principal(RealGen::W, &section_real(&mu, Sign::Plus)));
        }
    }

    #[test]
    fn closed_form_examples() {
        let c = cocycle_c1_real(2, Sign::Plus).unwrap();
        assert_eq!(c.on_mu(0), &GKVecR::from_terms(2, &[(1, z8::one()), (-1, z8::one())]));
        let c = cocycle_c1_real(4, Sign::Plus).unwrap();
        assert_eq!(c.on_mu(1), &GKVecR::from_terms(4, &[(2, z8::int(-3)), (-2, z8::int(-3))]));
        let c = cocycle_c1_real(4, Sign::Minus).unwrap();
        assert_eq!(c.on_mu(1), &GKVecR::from_terms(4, &[(2, z8::int(-3)), (-2, z8::int(3))]));
    }

    #[test]
    fn closed_form_for_all_small_weights() {
        for k in [2usize, 4, 6, 8] {
            for sign in [Sign::Plus, Sign::Minus] {
                let c = cocycle_c1_real(k, sign).unwrap();
                assert!(c.in_discrete_series());
                assert!(c1_direct(k, sign, RealGen::TildeW).unwrap().in_discrete_series());
            }
        }
    }

    #[test]
    fn cocycle_checks() {
        assert!(cocycle_check_real(&cocycle_c1_real(2, Sign::Plus).unwrap()));
        assert!(cocycle_check_real(&cocycle_c1_real(6, Sign::Minus).unwrap()));
        let mut bad = cocycle_c1_real(4, Sign::Plus).unwrap();
        bad.values[0].push(2, z8::one());
        assert!(!cocycle_check_real(&bad));
    }

    #[test]
    fn cup_product() {
        let cup = cup2_real(2).unwrap();
        let mut expected = GKTensorR::default();
        expected.push(1, -1, -(&z8::int(2) * &z8::i()));
        expected.push(-1, 1, -(&z8::int(2) * &z8::i()));
        assert_eq!(cup, expected);
        let cup = cup2_real(4).unwrap();
        assert_eq!(cup.coeff(2, -2), &z8::int(72) * &z8::i());
        assert_eq!(cup.coeff(-2, 2), &z8::int(72) * &z8::i());
        assert!(cup2_real(6).is_ok());
    }

    #[test]
    fn mixed_sign_average_is_antisymmetric() {
        for k in [2usize, 4, 6] {
            let r = cup2_report(k).unwrap();
            let m = &r.average_mixed_sign;
            let half = k as i64 / 2;
            assert_eq!(m.coeff(half, -half), -m.coeff(-half, half));
            assert!(!r.mixed_sign_average_holds());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn brackets_on_weight_vectors(cs in proptest::collection::vec(-6i64..7, 7), k in prop::sample::select(vec![2usize, 4, 6])) {
            let v = GKVecR::from_terms(k, &cs.iter().enumerate().map(|(n, &c)| (n as i64 - 3, z8::int(c))).collect::<Vec<_>>());
            let a = lie_act_principal(RealGen::HatH, &lie_act_principal(RealGen::TildeW, &v));
            let b = lie_act_principal(RealGen::TildeW, &lie_act_principal(RealGen::HatH, &v));
            prop_assert_eq!(a.sub(&b), lie_act_principal(RealGen::W, &v).scale(&z8::int(2)));
        }

        #[test]
        fn rho_section_roundtrip(cs in proptest::collection::vec(-6i64..7, 5)) {
            let mu = VkDual { coeffs: cs.iter().map(|&c| NFElem::from_rational(&qz8(), frac(c, 3))).collect() };
            prop_assert_eq!(rho_real(&section_real(&mu, Sign::Minus), Sign::Minus), mu);
        }
    }
}
