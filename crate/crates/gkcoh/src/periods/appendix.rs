//! Determinant and conjugation identities for the period matrices of a CM-free
//! place, checked numerically on random samples and symbolically over `Q(i)(t, tau, taubar)`.

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{qi, MultiPoly, NFElem};

/// Outcome of [`appendix_a_check`]. Errors are maxima over all samples.
#[derive(Clone, Debug)]
pub struct AppendixReport {
    pub samples: usize,
    /// `|det - 1|` for the 9x9 block matrix of `X -> g X g^-1` over three embeddings.
    pub delta2_det_err: f64,
    /// Entrywise distance between that matrix and the closed form with `-tau lambda1^2`
    /// in row 2, column 3.
    pub delta2_closed_form_err: f64,
    /// `|det - 1|` for the closed form printed with `+tau lambda1^2` there.
    pub delta2_printed_det_err: f64,
    /// Relative error of `det = -|tau|^-2 Im(tau)^2 / ((l2 - l1)(conj(l2) - conj(l1)))`
    /// for the 3x3 block whose last column is the image of `diag(1, -1)`.
    pub det3_rel_err: f64,
    /// `det / (|tau|^-2 Im(tau)^2 / ...)` when the last column is `H_sigma` itself.
    pub det3_hsigma_ratio: C,
    pub conj_e12: bool,
    pub conj_e21: bool,
    /// `delta diag(1, -1) delta^-1 = H_sigma`.
    pub conj_h_literal: bool,
    /// `delta diag(i, -i) delta^-1 = H_sigma`.
    pub conj_h_twisted: bool,
    pub log: Vec<String>,
}

pub const APPENDIX_TOL: f64 = 1e-10;

impl AppendixReport {
    pub fn passed(&self) -> bool {
        self.delta2_det_err < APPENDIX_TOL
            && self.delta2_closed_form_err < APPENDIX_TOL
            && self.det3_rel_err < APPENDIX_TOL
            && self.conj_e12
            && self.conj_e21
            && self.conj_h_twisted
    }
}

type M2 = [[C; 2]; 2];

fn mul2(a: &M2, b: &M2) -> M2 {
    let mut r = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

fn inv2(a: &M2) -> M2 {
    let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

/// Coordinates of a trace-zero matrix in `diag(1,-1), e12, e21`.
fn coords(m: &M2) -> [C; 3] {
    [m[0][0], m[0][1], m[1][0]]
}

fn basis() -> [M2; 3] {
    let (o, z) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
    [[[o, z], [z, -o]], [[z, o], [z, z]], [[z, z], [o, z]]]
}

/// Columns are the images of the basis under conjugation by `g`.
fn conjugation_matrix(g: &M2) -> Vec<Vec<C>> {
    let gi = inv2(g);
    let cols: Vec<[C; 3]> = basis().iter().map(|b| coords(&mul2(&mul2(g, b), &gi))).collect();
    (0..3).map(|i| (0..3).map(|j| cols[j][i]).collect()).collect()
}

fn delta2_closed_form(tau: C, l1: C, l2: C, printed: bool) -> Vec<Vec<C>> {
    let d = l2 - l1;
    let s = if printed { 1.0 } else { -1.0 };
    vec![
        vec![(l2 + l1) / d, -1.0 / d, l2 * l1 / d],
        vec![-2.0 * tau * l1 / d, tau / d, s * tau * l1 * l1 / d],
        vec![2.0 / tau * l2 / d, -1.0 / tau / d, l2 * l2 / tau / d],
    ]
}

fn det(mut a: Vec<Vec<C>>) -> C {
    let n = a.len();
    let mut acc = C::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap();
        if a[p][k].norm() == 0.0 {
            return C::new(0.0, 0.0);
        }
        if p != k {
            a.swap(p, k);
            acc = -acc;
        }
        acc *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let v = a[k][j];
                a[i][j] -= f * v;
            }
        }
    }
    acc
}

fn block_diag(blocks: &[Vec<Vec<C>>]) -> Vec<Vec<C>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut out = vec![vec![C::new(0.0, 0.0); n]; n];
    let mut o = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out[o + i][o + j] = v;
            }
        }
        o += b.len();
    }
    out
}

fn max_entry_diff(a: &[Vec<C>], b: &[Vec<C>]) -> f64 {
    a.iter().zip(b).flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
}

struct Sample {
    tau: C,
    l1: C,
    l2: C,
    omega2: C,
}

fn sample(rng: &mut ChaCha8Rng) -> Sample {
    let mut u = |lo: f64, hi: f64| rng.gen_range(lo..hi);
    let im = u(0.2, 2.0) * if u(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
    let tau = C::new(u(-2.0, 2.0), im);
    let omega2 = C::from_polar(u(0.5, 2.0), u(0.0, std::f64::consts::TAU));
    loop {
        let l1 = C::new(u(-2.0, 2.0), u(-2.0, 2.0));
        let l2 = C::new(u(-2.0, 2.0), u(-2.0, 2.0));
        if (l2 - l1).norm() > 0.2 {
            return Sample { tau, l1, l2, omega2 };
        }
    }
}

/// 3x3 block in coordinates `(diag(1,-1), e12, e21)`; columns `x_sigma`, `x_sigmabar`
/// and the given last column.
fn gamma_block(s: &Sample, last: [C; 3]) -> Vec<Vec<C>> {
    let (t, tb) = (s.tau, s.tau.conj());
    let (d, db) = (s.l2 - s.l1, (s.l2 - s.l1).conj());
    vec![
        vec![-0.5 / d, -0.5 / db, last[0]],
        vec![t / 2.0 / d, tb / 2.0 / db, last[1]],
        vec![-1.0 / t / 2.0 / d, -1.0 / tb / 2.0 / db, last[2]],
    ]
}

fn h_sigma(tau: C) -> M2 {
    let (x, y) = (tau.re, tau.im);
    let r = |v: f64| C::new(v / y, 0.0);
    [[r(-x), r(x * x + y * y)], [r(-1.0), r(x)]]
}

// symbolic side: rational functions in t, tau, taubar over Q(i)

#[derive(Clone)]
struct RatFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFn {
    fn poly(p: MultiPoly) -> Self {
        let one = p.constant_like(NFElem::one(&qi()));
        RatFn { num: p, den: one }
    }
    fn add(&self, o: &Self) -> Self {
        RatFn { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }
    fn mul(&self, o: &Self) -> Self {
        RatFn { num: &self.num * &o.num, den: &self.den * &o.den }
    }
    fn div(&self, o: &Self) -> Self {
        RatFn { num: &self.num * &o.den, den: &self.den * &o.num }
    }
    fn neg(&self) -> Self {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
    fn same(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

type RM2 = [[RatFn; 2]; 2];

fn rmul(a: &RM2, b: &RM2) -> RM2 {
    let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn rinv(a: &RM2) -> RM2 {
    let d = a[0][0].mul(&a[1][1]).add(&a[0][1].mul(&a[1][0]).neg());
    [[a[1][1].div(&d), a[0][1].neg().div(&d)], [a[1][0].neg().div(&d), a[0][0].div(&d)]]
}

fn rscale(c: &RatFn, a: &RM2) -> RM2 {
    [[c.mul(&a[0][0]), c.mul(&a[0][1])], [c.mul(&a[1][0]), c.mul(&a[1][1])]]
}

fn rsame(a: &RM2, b: &RM2) -> bool {
    (0..2).all(|i| (0..2).all(|j| a[i][j].same(&b[i][j])))
}

struct SymbolicOutcome {
    e12: bool,
    e21: bool,
    h_literal: bool,
    h_twisted: bool,
}

fn symbolic_conjugations() -> SymbolicOutcome {
    let f = qi();
    let vars = ["t", "tau", "taub"];
    let v = |n: &str| RatFn::poly(MultiPoly::var(&f, &vars, n).unwrap());
    let zero = MultiPoly::zero(&f, &vars);
    let c = |x: NFElem| RatFn::poly(zero.constant_like(x));
    let int = |n: i64| c(NFElem::from_int(&f, n));
    let i = c(NFElem::generator(&f));
    let (t, tau, taub) = (v("t"), v("tau"), v("taub"));
    let (one, z) = (int(1), int(0));

    let delta: RM2 = [[t.mul(&taub), tau.clone()], [t.clone(), one.clone()]];
    let dinv = rinv(&delta);
    let conj = |m: RM2| rmul(&rmul(&delta, &m), &dinv);
    let diff = taub.add(&tau.neg());

    let e12: RM2 = [[z.clone(), one.clone()], [z.clone(), z.clone()]];
    let rhs12 = rscale(
        &t.mul(&taub).neg().div(&diff),
        &[[one.clone(), taub.neg()], [one.div(&taub), one.neg()]],
    );
    let e21: RM2 = [[z.clone(), z.clone()], [one.clone(), z.clone()]];
    let rhs21 = rscale(&tau.div(&t).div(&diff), &[[one.clone(), tau.neg()], [one.div(&tau), one.neg()]]);

    // Re tau = (tau + taub)/2, Im tau = (tau - taub)/(2i), |tau|^2 = tau taub
    let two = int(2);
    let re = tau.add(&taub).div(&two);
    let im = tau.add(&taub.neg()).div(&two.mul(&i));
    let h: RM2 = rscale(&one.div(&im), &[[re.neg(), tau.mul(&taub)], [one.neg(), re.clone()]]);
    let b1: RM2 = [[one.clone(), z.clone()], [z.clone(), one.neg()]];
    let ib1: RM2 = [[i.clone(), z.clone()], [z.clone(), i.neg()]];

    SymbolicOutcome {
        e12: rsame(&conj(e12), &rhs12),
        e21: rsame(&conj(e21), &rhs21),
        h_literal: rsame(&conj(b1), &h),
        h_twisted: rsame(&conj(ib1), &h),
    }
}

pub fn appendix_a_check(samples: usize, seed: u64) -> AppendixReport {
    let samples = samples.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut e9, mut ecf, mut eprinted, mut e3) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut ratio_sum = C::new(0.0, 0.0);
    let mut log = Vec::new();
    for _ in 0..samples {
        let places: Vec<Sample> = (0..3).map(|_| sample(&mut rng)).collect();
        let mut blocks = Vec::new();
        let mut printed = Vec::new();
        for s in &places {
            let o1 = s.tau * s.omega2;
            let g: M2 = [[o1, s.l1 * o1], [s.omega2, s.l2 * s.omega2]];
            let m = conjugation_matrix(&g);
            ecf = ecf.max(max_entry_diff(&m, &delta2_closed_form(s.tau, s.l1, s.l2, false)));
            printed.push(delta2_closed_form(s.tau, s.l1, s.l2, true));
            blocks.push(m);
        }
        e9 = e9.max((det(block_diag(&blocks)) - 1.0).norm());
        eprinted = eprinted.max((det(block_diag(&printed)) - 1.0).norm());

        let s = &places[0];
        let claim = s.tau.norm_sqr().recip() * s.tau.im * s.tau.im / ((s.l2 - s.l1) * (s.l2 - s.l1).conj());
        let t = C::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let delta: M2 = [[t * s.tau.conj(), s.tau], [t, C::new(1.0, 0.0)]];
        let image = coords(&mul2(&mul2(&delta, &basis()[0]), &inv2(&delta)));
        let d_conj = det(gamma_block(s, image));
        e3 = e3.max((d_conj + claim).norm() / claim.norm());
        ratio_sum += det(gamma_block(s, coords(&h_sigma(s.tau)))) / claim;
    }
    let ratio = ratio_sum / samples as f64;
    let sym = symbolic_conjugations();
    log.push(format!("delta2: max |det - 1| = {e9:.3e}, closed form max deviation = {ecf:.3e}"));
    log.push(format!("delta2 with +tau*l1^2 in (2,3): max |det - 1| = {eprinted:.3e}"));
    log.push(format!("3x3 block: max relative error vs -claim = {e3:.3e}; H_sigma column gives claim * ({:.6}{:+.6}i)", ratio.re, ratio.im));
    log.push(format!(
        "conjugations: e12 {}, e21 {}, diag(1,-1) -> H_sigma {}, diag(i,-i) -> H_sigma {}",
        sym.e12, sym.e21, sym.h_literal, sym.h_twisted
    ));
    AppendixReport {
        samples,
        delta2_det_err: e9,
        delta2_closed_form_err: ecf,
        delta2_printed_det_err: eprinted,
        det3_rel_err: e3,
        det3_hsigma_ratio: ratio,
        conj_e12: sym.e12,
        conj_e21: sym.e21,
        conj_h_literal: sym.h_literal,
        conj_h_twisted: sym.h_twisted,
        log,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold_on_random_samples() {
        for seed in [1, 2, 3] {
            let r = appendix_a_check(100, seed);
            assert!(r.passed(), "{:#?}", r.log);
            assert!((r.det3_hsigma_ratio - C::new(0.0, -1.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn printed_sign_and_h_sigma_discrepancies() {
        let r = appendix_a_check(5, 7);
        assert!(r.delta2_printed_det_err > 1e-3);
        assert!(!r.conj_h_literal);
    }

    #[test]
    fn h_sigma_squares_to_minus_one() {
        let h = h_sigma(C::new(0.3, 1.7));
        let sq = mul2(&h, &h);
        assert!((sq[0][0] + 1.0).norm() < 1e-12 && (sq[1][1] + 1.0).norm() < 1e-12);
        assert!(sq[0][1].norm() < 1e-12 && sq[1][0].norm() < 1e-12);
    }

    #[test]
    fn determinant_helper() {
        let m = vec![
            vec![C::new(2.0, 0.0), C::new(1.0, 0.0)],
            vec![C::new(0.0, 1.0), C::new(3.0, 0.0)],
        ];
        assert!((det(m) - C::new(6.0, -1.0)).norm() < 1e-15);
    }
}
