//! Coproduct ansatz on two- and three-site tensor bases.
//!
//! ```text
//! D(a^dagger) = c1 a^dagger (x) K1 + c2 K2 (x) a^dagger
//! D(a)        = c3 a (x) K3 + c4 K4 (x) a
//! D(N)        = c5 N (x) 1 + c6 1 (x) N + gamma
//! ```
//!
//! with `Ki = q'^{alpha_i N}`. A function of `N` is carried to the function of
//! the diagonal `D(N)`, so `D(Ki) = q'^{alpha_i gamma} Ki^{c5} (x) Ki^{c6}`.
//!
//! Co-associativity for `a` and `a^dagger` then forces `ci = q'^{alpha_i gamma}`,
//! and the consistency condition `[D(a), D(a^dagger)] = g(D(N))` with
//! `g(x) = [x+1]_k - [x]_k` has no solution with real `gamma`. The scan
//! therefore searches complex `gamma` with `c1..c4` derived from it; at
//! `k = -1` it finds `gamma = 1/2 +- i pi/(2 ln q')`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{AlgebraFamily, FamilyTag};
use crate::bracket::{gen_bracket, gen_bracket_complex, DeformParams};
use crate::error::{Error, Result};
use crate::fock::{amplitude, fock_ops, FockRep, Triple};
use crate::ladder::{complex_func_of_n, nan_max, LadderOperator, Matrix, Rule, ShiftOperator, Window};

pub type TensorOperator = ShiftOperator<[i64; 2]>;
pub type Tensor3Operator = ShiftOperator<[i64; 3]>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn product_rule<const S: usize>(
    x: &Rule<i64>,
    y: &Rule<i64>,
    split: impl Fn([i64; S]) -> (i64, i64) + Send + Sync + 'static,
) -> Rule<[i64; S]> {
    match (x, y) {
        (Rule::Const(a), Rule::Const(b)) => Rule::Const(a * b),
        _ => {
            let (x, y) = (x.clone(), y.clone());
            Rule::func(move |n: [i64; S]| {
                let (i, j) = split(n);
                x.eval(i) * y.eval(j)
            })
        }
    }
}

/// `x (x) y`.
pub fn kron(x: &LadderOperator, y: &LadderOperator) -> TensorOperator {
    let mut out = TensorOperator::zero();
    for (dx, rx) in x.terms() {
        for (dy, ry) in y.terms() {
            let rule = product_rule(rx, ry, |[i, j]: [i64; 2]| (i, j));
            out = out.add(&TensorOperator::single([dx, dy], rule));
        }
    }
    out
}

fn kron3_with(
    x: &TensorOperator,
    y: &LadderOperator,
    place: impl Fn([i64; 2], i64) -> [i64; 3] + Copy + Send + Sync + 'static,
    split: impl Fn([i64; 3]) -> ([i64; 2], i64) + Copy + Send + Sync + 'static,
) -> Tensor3Operator {
    let mut out = Tensor3Operator::zero();
    for (dx, rx) in x.terms() {
        for (dy, ry) in y.terms() {
            let rule = match (rx, ry) {
                (Rule::Const(a), Rule::Const(b)) => Rule::Const(a * b),
                _ => {
                    let (rx, ry) = (rx.clone(), ry.clone());
                    Rule::func(move |n: [i64; 3]| {
                        let (pair, single) = split(n);
                        rx.eval(pair) * ry.eval(single)
                    })
                }
            };
            out = out.add(&Tensor3Operator::single(place(dx, dy), rule));
        }
    }
    out
}

/// `x (x) y` with `x` on sites 1, 2.
pub fn kron_2_1(x: &TensorOperator, y: &LadderOperator) -> Tensor3Operator {
    kron3_with(x, y, |[a, b], c| [a, b, c], |[a, b, c]| ([a, b], c))
}

/// `x (x) y` with `y` on sites 2, 3.
pub fn kron_1_2(x: &LadderOperator, y: &TensorOperator) -> Tensor3Operator {
    kron3_with(y, x, |[b, c], a| [a, b, c], |[a, b, c]| ([b, c], a))
}

fn product_states<const S: usize>(window: Window) -> impl Iterator<Item = [i64; S]> {
    let dim = window.dim as i64;
    let total = (0..S).fold(1i64, |acc, _| acc * dim);
    (0..total).map(move |mut idx| {
        let mut n = [0i64; S];
        for slot in n.iter_mut().rev() {
            *slot = window.n0 + idx % dim;
            idx /= dim;
        }
        n
    })
}

/// Max amplitude over the product window `window^S`.
pub fn tensor_residual<const S: usize>(op: &ShiftOperator<[i64; S]>, window: Window) -> f64 {
    product_states::<S>(window).map(|n| op.max_amplitude(n)).fold(0.0, nan_max)
}

/// Dense matrix of a two-site operator on `window x window`, row-major in `(n1, n2)`.
pub fn tensor_matrix_window(op: &TensorOperator, window: Window) -> Matrix {
    let dim = window.dim;
    let index = |[a, b]: [i64; 2]| -> Option<usize> {
        let (i, j) = (a - window.n0, b - window.n0);
        (i >= 0 && j >= 0 && (i as usize) < dim && (j as usize) < dim).then(|| i as usize * dim + j as usize)
    };
    let mut m = vec![vec![ZERO; dim * dim]; dim * dim];
    for n in product_states::<2>(window) {
        let col = index(n).expect("state inside window");
        for (out, amp) in op.apply(n) {
            if let Some(row) = index(out) {
                m[row][col] += amp;
            }
        }
    }
    m
}

/// Constants of the coproduct ansatz together with the algebra it is tested on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoproductSpec {
    pub c: [Complex64; 6],
    pub alpha: [f64; 4],
    pub gamma: Complex64,
    pub qprime: f64,
    pub k: f64,
}

impl CoproductSpec {
    /// `D(h) = h (x) 1 + 1 (x) h`.
    pub fn primitive(qprime: f64, k: f64) -> Self {
        Self { c: [ONE; 6], alpha: [0.0; 4], gamma: ZERO, qprime, k }
    }

    /// `c5 = c6 = 1` and `ci = q'^{alpha_i gamma}` for `i <= 4`, the only
    /// choice co-associative for `a` and `a^dagger`.
    pub fn derived(qprime: f64, k: f64, alpha: [f64; 4], gamma: Complex64) -> Self {
        let l = qprime.ln();
        let ci = |a: f64| (gamma * (a * l)).exp();
        Self {
            c: [ci(alpha[0]), ci(alpha[1]), ci(alpha[2]), ci(alpha[3]), ONE, ONE],
            alpha,
            gamma,
            qprime,
            k,
        }
    }

    /// Exact solution at `k = -1`: `alpha = (1/2, -1/2, 1/2, -1/2)`,
    /// `gamma = 1/2 + i pi/(2 ln q')`.
    pub fn hong_yan(qprime: f64) -> Self {
        let gamma = Complex64::new(0.5, PI / (2.0 * qprime.ln()));
        Self::derived(qprime, -1.0, [0.5, -0.5, 0.5, -0.5], gamma)
    }

    pub fn deform_params(&self) -> Result<DeformParams> {
        DeformParams::from_k_form(self.qprime, self.k)
    }

    fn terms(&self, h: Generator) -> [(Complex64, Factor, Factor); 3] {
        let [c1, c2, c3, c4, c5, c6] = self.c;
        let [a1, a2, a3, a4] = self.alpha;
        match h {
            Generator::Adag => [
                (c1, Factor::Adag, Factor::Pow(a1)),
                (c2, Factor::Pow(a2), Factor::Adag),
                (ZERO, Factor::One, Factor::One),
            ],
            Generator::A => [
                (c3, Factor::A, Factor::Pow(a3)),
                (c4, Factor::Pow(a4), Factor::A),
                (ZERO, Factor::One, Factor::One),
            ],
            Generator::N => [
                (c5, Factor::N, Factor::One),
                (c6, Factor::One, Factor::N),
                (self.gamma, Factor::One, Factor::One),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    A,
    Adag,
    N,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::A, Generator::Adag, Generator::N];
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Factor {
    One,
    A,
    Adag,
    N,
    /// `q'^{alpha N}`
    Pow(f64),
}

#[derive(Clone, Debug)]
pub struct CoproductOps {
    pub delta_n: TensorOperator,
    pub delta_a: TensorOperator,
    pub delta_adag: TensorOperator,
}

struct Coproduct {
    spec: CoproductSpec,
    triple: Triple,
    ops: CoproductOps,
}

impl Coproduct {
    fn new(spec: &CoproductSpec, rep: &FockRep) -> Result<Self> {
        crate::bracket::check_base(spec.qprime, "qprime")?;
        let triple = fock_ops(rep)?;
        let build = |h| {
            spec.terms(h).iter().fold(TensorOperator::zero(), |acc, &(coef, l, r)| {
                if coef == ZERO {
                    return acc;
                }
                acc.add(&kron(&local(&triple, spec, l), &local(&triple, spec, r)).scale(coef))
            })
        };
        let ops = CoproductOps {
            delta_n: build(Generator::N),
            delta_a: build(Generator::A),
            delta_adag: build(Generator::Adag),
        };
        Ok(Self { spec: *spec, triple, ops })
    }

    fn delta_factor(&self, f: Factor) -> TensorOperator {
        match f {
            Factor::One => TensorOperator::identity(),
            Factor::A => self.ops.delta_a.clone(),
            Factor::Adag => self.ops.delta_adag.clone(),
            Factor::N => self.ops.delta_n.clone(),
            Factor::Pow(alpha) => {
                let (s, nu, l) = (self.spec, self.triple.nu, self.spec.qprime.ln());
                TensorOperator::diagonal(move |[n1, n2]: [i64; 2]| {
                    let z = s.c[4] * (n1 as f64 + nu) + s.c[5] * (n2 as f64 + nu) + s.gamma;
                    (z * (alpha * l)).exp()
                })
            }
        }
    }

    /// `(D (x) id) D(h) - (id (x) D) D(h)`.
    fn coassoc_defect(&self, h: Generator) -> Tensor3Operator {
        self.spec.terms(h).iter().fold(Tensor3Operator::zero(), |acc, &(coef, l, r)| {
            if coef == ZERO {
                return acc;
            }
            let left = kron_2_1(&self.delta_factor(l), &local(&self.triple, &self.spec, r));
            let right = kron_1_2(&local(&self.triple, &self.spec, l), &self.delta_factor(r));
            acc.add(&left.sub(&right).scale(coef))
        })
    }
}

fn local(t: &Triple, spec: &CoproductSpec, f: Factor) -> LadderOperator {
    match f {
        Factor::One => LadderOperator::identity(),
        Factor::A => t.a.clone(),
        Factor::Adag => t.adag.clone(),
        Factor::N => t.n_op.clone(),
        Factor::Pow(alpha) => {
            let l = spec.qprime.ln();
            complex_func_of_n(move |x| Complex64::new((alpha * x * l).exp(), 0.0), t.nu)
        }
    }
}

pub fn coproduct_ops(spec: &CoproductSpec, rep: &FockRep) -> Result<CoproductOps> {
    Ok(Coproduct::new(spec, rep)?.ops)
}

/// Max over `h in {a, a^dagger, N}` and the three-site window of
/// `((id (x) D) D - (D (x) id) D)(h)`.
pub fn coassoc_residual(spec: &CoproductSpec, rep: &FockRep, window: Window) -> Result<f64> {
    let cp = Coproduct::new(spec, rep)?;
    Ok(Generator::ALL
        .iter()
        .map(|&h| tensor_residual(&cp.coassoc_defect(h), window))
        .fold(0.0, nan_max))
}

/// Max of `[D(N), D(a^dagger)] - D(a^dagger)` and `[D(N), D(a)] + D(a)` on the two-site window.
pub fn homomorphism_residual(spec: &CoproductSpec, rep: &FockRep, window: Window) -> Result<f64> {
    let cp = Coproduct::new(spec, rep)?;
    Ok(homomorphism_from(&cp, window))
}

fn homomorphism_from(cp: &Coproduct, window: Window) -> f64 {
    let o = &cp.ops;
    let up = o.delta_n.commutator(&o.delta_adag).sub(&o.delta_adag);
    let down = o.delta_n.commutator(&o.delta_a).add(&o.delta_a);
    tensor_residual(&up, window).max(tensor_residual(&down, window))
}

/// Max amplitude of `[D(a), D(a^dagger)] - g(D(N))` on the two-site window.
pub fn consistency_residual(spec: &CoproductSpec, rep: &FockRep, window: Window) -> Result<f64> {
    let cp = Coproduct::new(spec, rep)?;
    Ok(consistency_from(&cp, window)?)
}

fn consistency_from(cp: &Coproduct, window: Window) -> Result<f64> {
    let p = cp.spec.deform_params()?;
    let (s, nu) = (cp.spec, cp.triple.nu);
    let rhs = TensorOperator::diagonal(move |[n1, n2]: [i64; 2]| {
        let z = s.c[4] * (n1 as f64 + nu) + s.c[5] * (n2 as f64 + nu) + s.gamma;
        gen_bracket_complex(z + 1.0, &p) - gen_bracket_complex(z, &p)
    });
    let lhs = cp.ops.delta_a.commutator(&cp.ops.delta_adag);
    Ok(tensor_residual(&lhs.sub(&rhs), window))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfResiduals {
    pub coassoc: f64,
    pub homomorphism: f64,
    pub consistency: f64,
}

impl HopfResiduals {
    pub fn total(&self) -> f64 {
        self.coassoc + self.homomorphism + self.consistency
    }
}

/// All three residuals through the exact tensor operators.
pub fn hopf_residuals(spec: &CoproductSpec, rep: &FockRep, two_site: Window, three_site: Window) -> Result<HopfResiduals> {
    let cp = Coproduct::new(spec, rep)?;
    Ok(HopfResiduals {
        coassoc: Generator::ALL
            .iter()
            .map(|&h| tensor_residual(&cp.coassoc_defect(h), three_site))
            .fold(0.0, nan_max),
        homomorphism: homomorphism_from(&cp, two_site),
        consistency: consistency_from(&cp, two_site)?,
    })
}

/// Closed-form evaluation of [`hopf_residuals`] for scans.
///
/// Expands every residual into its shift components by hand, so each
/// evaluation costs a few dozen exponentials instead of building closures.
pub struct FastHopf {
    params: DeformParams,
    nu: f64,
    ln_qp: f64,
    two_site: Window,
    three_site: Window,
    lo: i64,
    /// `sqrt(lambda(n))` for `n = lo..`
    amp: Vec<Complex64>,
}

impl FastHopf {
    pub fn new(rep: &FockRep, qprime: f64, k: f64, two_site: Window, three_site: Window) -> Result<Self> {
        // checks unitarity over the larger of the two windows
        let widest = if two_site.dim >= three_site.dim { two_site } else { three_site };
        fock_ops(&rep.clone().with_window(widest))?;
        let lambda = rep.lambda_fn();
        let lo = two_site.n0.min(three_site.n0) - 1;
        let hi = (two_site.n0 + two_site.dim as i64).max(three_site.n0 + three_site.dim as i64) + 1;
        Ok(Self {
            params: DeformParams::from_k_form(qprime, k)?,
            nu: rep.nu,
            ln_qp: qprime.ln(),
            two_site,
            three_site,
            lo,
            amp: (lo..=hi).map(|n| amplitude(lambda(n))).collect(),
        })
    }

    fn sa(&self, n: i64) -> Complex64 {
        self.amp[(n - self.lo) as usize]
    }

    /// `q'^{alpha_i x}` at `x = n + nu` for every `n` the windows touch.
    fn pow_tables(&self, s: &CoproductSpec) -> PowTables {
        let lo = self.lo;
        let tab = |alpha: f64| {
            (0..self.amp.len()).map(|i| (alpha * ((lo + i as i64) as f64 + self.nu) * self.ln_qp).exp()).collect()
        };
        PowTables { lo, k: s.alpha.map(tab) }
    }

    pub fn eval(&self, s: &CoproductSpec) -> HopfResiduals {
        let k = self.pow_tables(s);
        HopfResiduals {
            coassoc: self.coassoc(s, &k),
            homomorphism: self.homomorphism(s, &k),
            consistency: self.consistency(s, &k),
        }
    }

    /// Total residual, abandoning the evaluation once it reaches `bound`.
    pub fn total_below(&self, s: &CoproductSpec, bound: f64) -> f64 {
        let k = self.pow_tables(s);
        let mut total = self.consistency(s, &k);
        if !(total < bound) {
            return total;
        }
        total += self.homomorphism(s, &k);
        if !(total < bound) {
            return total;
        }
        total + self.coassoc(s, &k)
    }

    fn z(&self, s: &CoproductSpec, n1: i64, n2: i64) -> Complex64 {
        s.c[4] * (n1 as f64 + self.nu) + s.c[5] * (n2 as f64 + self.nu) + s.gamma
    }

    /// `f(z(n1, n2))` on the window, computed once per `n1 + n2` when `c5 = c6`.
    fn pair_table(&self, s: &CoproductSpec, w: Window, f: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
        let d = w.dim;
        let mut out = vec![ZERO; d * d];
        if s.c[4] == s.c[5] {
            let sums: Vec<_> = (0..2 * d - 1).map(|t| f(self.z(s, w.n0, w.n0 + t as i64))).collect();
            for i in 0..d {
                for j in 0..d {
                    out[i * d + j] = sums[i + j];
                }
            }
        } else {
            for i in 0..d {
                for j in 0..d {
                    out[i * d + j] = f(self.z(s, w.n0 + i as i64, w.n0 + j as i64));
                }
            }
        }
        out
    }

    fn consistency(&self, s: &CoproductSpec, k: &PowTables) -> f64 {
        let w = self.two_site;
        let [c1, c2, c3, c4, _, _] = s.c;
        let p = self.params;
        let g = self.pair_table(s, w, |z| gen_bracket_complex(z + 1.0, &p) - gen_bracket_complex(z, &p));
        let diff = |n: i64| self.sa(n + 1) * self.sa(n + 1) - self.sa(n) * self.sa(n);
        let mut worst: f64 = 0.0;
        for (idx, [n1, n2]) in product_states::<2>(w).enumerate() {
            let diag = c1 * c3 * diff(n1) * (k.at(0, n2) * k.at(2, n2))
                + c2 * c4 * (k.at(1, n1) * k.at(3, n1)) * diff(n2)
                - g[idx];
            worst = nan_max(worst, diag.norm());
            if n1 >= 1 {
                let shift = k.at(1, n1) * k.at(2, n2 + 1) - k.at(1, n1 - 1) * k.at(2, n2);
                worst = nan_max(worst, (c2 * c3 * self.sa(n1) * self.sa(n2 + 1) * shift).norm());
            }
            if n2 >= 1 {
                let shift = k.at(3, n1 + 1) * k.at(0, n2) - k.at(3, n1) * k.at(0, n2 - 1);
                worst = nan_max(worst, (c1 * c4 * self.sa(n1 + 1) * self.sa(n2) * shift).norm());
            }
        }
        worst
    }

    fn homomorphism(&self, s: &CoproductSpec, k: &PowTables) -> f64 {
        let [c1, c2, c3, c4, c5, c6] = s.c;
        let mut worst: f64 = 0.0;
        for [n1, n2] in product_states::<2>(self.two_site) {
            worst = nan_max(worst, ((c5 - 1.0) * c1 * self.sa(n1 + 1) * k.at(0, n2)).norm());
            worst = nan_max(worst, ((c6 - 1.0) * c2 * k.at(1, n1) * self.sa(n2 + 1)).norm());
            if n1 >= 1 {
                worst = nan_max(worst, ((1.0 - c5) * c3 * self.sa(n1) * k.at(2, n2)).norm());
            }
            if n2 >= 1 {
                worst = nan_max(worst, ((1.0 - c6) * c4 * k.at(3, n1) * self.sa(n2)).norm());
            }
        }
        worst
    }

    fn coassoc(&self, s: &CoproductSpec, k: &PowTables) -> f64 {
        let w = self.three_site;
        let d = w.dim;
        let [c1, c2, c3, c4, c5, c6] = s.c;
        let [a1, a2, a3, a4] = s.alpha;
        let l = self.ln_qp;
        let e = |alpha: f64| self.pair_table(s, w, move |z| (z * (alpha * l)).exp());
        let (e1, e2, e3, e4) = (e(a1), e(a2), e(a3), e(a4));
        let mut worst: f64 = 0.0;
        for [n1, n2, n3] in product_states::<3>(w) {
            let i = |n: i64| (n - w.n0) as usize;
            let pair = |t: &[Complex64], x: i64, y: i64| t[i(x) * d + i(y)];
            let x = |n: i64| n as f64 + self.nu;
            let number = (c5 * c5 - c5) * x(n1) + (c6 - c6 * c6) * x(n3) + (c5 - c6) * s.gamma;
            worst = nan_max(worst, number.norm());
            let raise1 = c1 * self.sa(n1 + 1) * (c1 * k.at(0, n2) * k.at(0, n3) - pair(&e1, n2, n3));
            let raise3 = c2 * self.sa(n3 + 1) * (pair(&e2, n1, n2) - c2 * k.at(1, n1) * k.at(1, n2));
            worst = nan_max(worst, raise1.norm().max(raise3.norm()));
            if n1 >= 1 {
                let lower1 = c3 * self.sa(n1) * (c3 * k.at(2, n2) * k.at(2, n3) - pair(&e3, n2, n3));
                worst = nan_max(worst, lower1.norm());
            }
            if n3 >= 1 {
                let lower3 = c4 * self.sa(n3) * (pair(&e4, n1, n2) - c4 * k.at(3, n1) * k.at(3, n2));
                worst = nan_max(worst, lower3.norm());
            }
        }
        worst
    }
}

struct PowTables {
    lo: i64,
    k: [Vec<f64>; 4],
}

impl PowTables {
    fn at(&self, i: usize, n: i64) -> f64 {
        self.k[i][(n - self.lo) as usize]
    }
}

/// Search schedule for [`hopf_scan`].
///
/// Coordinates are `(alpha1..alpha4, Re gamma, theta)` with
/// `Im gamma = theta / ln q'`, so `theta` covers one full period.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfScanConfig {
    pub alpha_box: (f64, f64),
    pub gamma_box: (f64, f64),
    pub theta_box: (f64, f64),
    pub coarse_points: usize,
    pub refine_rounds: usize,
    pub refine_points: usize,
    pub shrink: f64,
    pub two_site: Window,
    pub three_site: Window,
    pub nu: f64,
    pub casimir_const: f64,
}

impl Default for HopfScanConfig {
    fn default() -> Self {
        Self {
            alpha_box: (-2.0, 2.0),
            gamma_box: (-1.0, 1.0),
            theta_box: (-PI, PI),
            coarse_points: 9,
            refine_rounds: 2,
            refine_points: 5,
            shrink: 4.0,
            two_site: Window::new(0, 5),
            three_site: Window::new(0, 4),
            nu: 0.0,
            casimir_const: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopfScanRow {
    pub k: f64,
    pub best: Option<CoproductSpec>,
    /// Incumbent re-evaluated through the exact tensor operators.
    pub residuals: Option<HopfResiduals>,
    pub min_residual: f64,
    /// Reason the cell did not produce a finite minimum.
    pub failure: Option<String>,
}

impl HopfScanRow {
    pub fn converged(&self) -> bool {
        self.failure.is_none() && self.min_residual.is_finite()
    }
}

fn spec_at(qprime: f64, k: f64, x: &[f64; 6]) -> CoproductSpec {
    let gamma = Complex64::new(x[4], x[5] / qprime.ln());
    CoproductSpec::derived(qprime, k, [x[0], x[1], x[2], x[3]], gamma)
}

/// Lexicographic grid over `center +- half` with `points` per axis; keeps the
/// first strictly smaller residual.
fn grid_round(
    eval: &impl Fn(&[f64; 6], f64) -> f64,
    center: [f64; 6],
    half: [f64; 6],
    points: usize,
    incumbent: &mut Option<([f64; 6], f64)>,
) {
    let axis = |i: usize, j: usize| {
        if points == 1 {
            center[i]
        } else {
            center[i] - half[i] + 2.0 * half[i] * j as f64 / (points - 1) as f64
        }
    };
    let total = points.pow(6);
    for mut idx in 0..total {
        let mut x = [0.0; 6];
        for i in (0..6).rev() {
            x[i] = axis(i, idx % points);
            idx /= points;
        }
        let bound = incumbent.as_ref().map_or(f64::INFINITY, |(_, best)| *best);
        let r = eval(&x, bound);
        if r.is_nan() {
            continue;
        }
        if incumbent.as_ref().map_or(true, |(_, best)| r < *best) {
            *incumbent = Some((x, r));
        }
    }
}

fn scan_cell(qprime: f64, k: f64, cfg: &HopfScanConfig) -> Result<HopfScanRow> {
    let params = DeformParams::from_k_form(qprime, k)?;
    let rep = FockRep::new(AlgebraFamily::GenOsc(params), cfg.nu, cfg.casimir_const);
    let fast = FastHopf::new(&rep, qprime, k, cfg.two_site, cfg.three_site)?;
    let eval = |x: &[f64; 6], bound: f64| fast.total_below(&spec_at(qprime, k, x), bound);
    let mid = |(lo, hi): (f64, f64)| 0.5 * (lo + hi);
    let halfw = |(lo, hi): (f64, f64)| 0.5 * (hi - lo);
    let (ab, gb, tb) = (cfg.alpha_box, cfg.gamma_box, cfg.theta_box);
    let center = [mid(ab), mid(ab), mid(ab), mid(ab), mid(gb), mid(tb)];
    let mut half = [halfw(ab), halfw(ab), halfw(ab), halfw(ab), halfw(gb), halfw(tb)];
    let mut incumbent = None;
    grid_round(&eval, center, half, cfg.coarse_points, &mut incumbent);
    for _ in 0..cfg.refine_rounds {
        let Some((x, _)) = incumbent else { break };
        half.iter_mut().for_each(|h| *h /= cfg.shrink);
        grid_round(&eval, x, half, cfg.refine_points, &mut incumbent);
    }
    let Some((x, _)) = incumbent else {
        return Ok(HopfScanRow {
            k,
            best: None,
            residuals: None,
            min_residual: f64::NAN,
            failure: Some("no finite residual on the search grid".into()),
        });
    };
    let best = spec_at(qprime, k, &x);
    let residuals = hopf_residuals(&best, &rep, cfg.two_site, cfg.three_site)?;
    Ok(HopfScanRow { k, best: Some(best), min_residual: residuals.total(), residuals: Some(residuals), failure: None })
}

/// Minimizes the total residual over the coproduct parameters for each `k`.
/// Cells that cannot be evaluated are reported, not propagated.
pub fn hopf_scan(qprime: f64, k_grid: &[f64], cfg: &HopfScanConfig) -> Result<Vec<HopfScanRow>> {
    crate::bracket::check_base(qprime, "qprime")?;
    Ok(k_grid
        .iter()
        .map(|&k| {
            scan_cell(qprime, k, cfg).unwrap_or_else(|e| HopfScanRow {
                k,
                best: None,
                residuals: None,
                min_residual: f64::NAN,
                failure: Some(e.to_string()),
            })
        })
        .collect())
}

/// Residual of `[D(J+), D(J-)] - [2 D(J0)]_{alpha,beta}` on the two-site
/// window with `D(J+-) = J+- (x) q^{s J0} + q^{-s J0} (x) J+-`.
pub fn suq2_residual_at(rep: &FockRep, s: f64, window: Window) -> Result<f64> {
    if rep.family.tag() != FamilyTag::SuQ2Gen {
        return Err(Error::InvalidParams(format!(
            "su_q(2) coproduct needs the suq2-gen family (got {})",
            rep.family.tag()
        )));
    }
    let p = rep.family.deform_params();
    let t = fock_ops(rep)?;
    let l = p.ln_q();
    let up = complex_func_of_n(move |x| Complex64::new((s * x * l).exp(), 0.0), t.nu);
    let down = complex_func_of_n(move |x| Complex64::new((-s * x * l).exp(), 0.0), t.nu);
    let dj_plus = kron(&t.adag, &up).add(&kron(&down, &t.adag));
    let dj_minus = kron(&t.a, &up).add(&kron(&down, &t.a));
    let nu = t.nu;
    let rhs = TensorOperator::diagonal(move |[n1, n2]: [i64; 2]| {
        Complex64::new(gen_bracket(2.0 * (n1 as f64 + n2 as f64 + 2.0 * nu), &p).value, 0.0)
    });
    Ok(tensor_residual(&dj_plus.commutator(&dj_minus).sub(&rhs), window))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuQ2Scan {
    pub s: f64,
    pub residual: f64,
}

/// Minimizes [`suq2_residual_at`] over `s`: 9-point grid on `[-2, 2]`, then
/// 40 five-point rounds halving the interval around the incumbent.
pub fn suq2_homomorphism_residual(rep: &FockRep, window: Window) -> Result<SuQ2Scan> {
    let consider = |s: f64, best: &mut Option<SuQ2Scan>| -> Result<()> {
        let r = suq2_residual_at(rep, s, window)?;
        if !r.is_nan() && best.map_or(true, |b| r < b.residual) {
            *best = Some(SuQ2Scan { s, residual: r });
        }
        Ok(())
    };
    let mut best = None;
    for i in 0..9 {
        consider(-2.0 + 0.5 * i as f64, &mut best)?;
    }
    let mut half = 0.5;
    for _ in 0..40 {
        let Some(center) = best.map(|b| b.s) else { break };
        half /= 2.0;
        for j in -2..=2 {
            consider(center + half * j as f64 / 2.0, &mut best)?;
        }
    }
    best.ok_or_else(|| Error::Domain("su_q(2) residual is NaN for every scanned s".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(qprime: f64, k: f64, nu: f64, c: f64) -> FockRep {
        FockRep::new(AlgebraFamily::GenOsc(DeformParams::from_k_form(qprime, k).unwrap()), nu, c)
    }

    fn w(dim: usize) -> Window {
        Window::new(0, dim)
    }

    #[test]
    fn primitive_coproduct_shape() {
        let spec = CoproductSpec::primitive(1.5, 0.5);
        let ops = coproduct_ops(&spec, &rep(1.5, 0.5, 0.5, 0.0)).unwrap();
        let degrees: Vec<_> = ops.delta_a.degrees().collect();
        assert_eq!(degrees, vec![[-1, 0], [0, -1]]);
        assert_eq!(ops.delta_n.apply([2, 3]), vec![([2, 3], Complex64::new(6.0, 0.0))]);
    }

    #[test]
    fn delta_n_eigenvalue() {
        let mut spec = CoproductSpec::primitive(1.5, 0.5);
        spec.c[4] = Complex64::new(0.5, 0.0);
        spec.c[5] = Complex64::new(2.0, 0.0);
        spec.gamma = Complex64::new(0.25, 0.0);
        let ops = coproduct_ops(&spec, &rep(1.5, 0.5, 0.5, 0.0)).unwrap();
        let out = ops.delta_n.apply([1, 3]);
        assert_eq!(out, vec![([1, 3], Complex64::new(0.5 * 1.5 + 2.0 * 3.5 + 0.25, 0.0))]);
    }

    #[test]
    fn hong_yan_solution_is_exact() {
        for &qp in &[1.2, 1.5, 0.7] {
            let spec = CoproductSpec::hong_yan(qp);
            let r = rep(qp, -1.0, 0.0, 0.0);
            let res = hopf_residuals(&spec, &r, w(5), w(4)).unwrap();
            assert!(res.coassoc < 1e-10 && res.homomorphism < 1e-12 && res.consistency < 1e-10, "{res:?}");
            let wide = hopf_residuals(&spec, &r.clone().with_window(w(8)), w(8), w(5)).unwrap();
            assert!(wide.total() < 1e-8, "{wide:?}");
        }
    }

    #[test]
    fn fast_matches_tensor_route() {
        let cases = [
            (1.5, -1.0, 0.0, 0.0, CoproductSpec::hong_yan(1.5)),
            (1.2, 0.5, 0.5, 0.3, CoproductSpec::derived(1.2, 0.5, [0.3, -1.1, 0.7, 1.9], Complex64::new(-0.4, 0.8))),
            (1.5, 1.0, 0.25, 0.0, CoproductSpec::primitive(1.5, 1.0)),
            (0.8, -2.0, 0.0, 0.1, {
                let mut s = CoproductSpec::derived(0.8, -2.0, [1.0, 0.5, -0.5, 0.0], Complex64::new(0.3, -0.2));
                s.c[4] = Complex64::new(1.3, 0.1);
                s.c[5] = Complex64::new(0.0, 0.0);
                s.c[1] = Complex64::new(0.7, -0.4);
                s
            }),
        ];
        for (qp, k, nu, c, spec) in cases {
            let r = rep(qp, k, nu, c).allow_non_unitary(true);
            let exact = hopf_residuals(&spec, &r, w(5), w(4)).unwrap();
            let fast = FastHopf::new(&r, qp, k, w(5), w(4)).unwrap().eval(&spec);
            for (e, f) in [
                (exact.coassoc, fast.coassoc),
                (exact.homomorphism, fast.homomorphism),
                (exact.consistency, fast.consistency),
            ] {
                assert!((e - f).abs() < 1e-12 * e.max(1.0), "{exact:?} vs {fast:?}");
            }
        }
    }

    #[test]
    fn delta_n_coassoc_scalar_conditions() {
        let r = rep(1.5, 0.5, 0.5, 0.0);
        let values = [0.0, 1.0, 2.0, -0.5];
        for &c5 in &values {
            for &c6 in &values {
                for &g in &[0.0, 0.7] {
                    let mut spec = CoproductSpec::primitive(1.5, 0.5);
                    spec.c[4] = Complex64::new(c5, 0.0);
                    spec.c[5] = Complex64::new(c6, 0.0);
                    spec.gamma = Complex64::new(g, 0.0);
                    let cp = Coproduct::new(&spec, &r).unwrap();
                    let res = tensor_residual(&cp.coassoc_defect(Generator::N), w(4));
                    let holds = c5 * c5 == c5 && c6 * c6 == c6 && (c5 - c6) * g == 0.0;
                    assert_eq!(res < 1e-12, holds, "c5={c5} c6={c6} gamma={g} res={res}");
                }
            }
        }
    }

    #[test]
    fn homomorphism_examples() {
        let r = rep(1.5, 0.5, 0.0, 0.0);
        let spec = CoproductSpec::derived(1.5, 0.5, [0.3, -1.2, 1.7, 0.4], Complex64::new(0.2, 0.0));
        assert!(homomorphism_residual(&spec, &r, w(5)).unwrap() < 1e-12);
        assert!(homomorphism_residual(&CoproductSpec::primitive(1.5, 0.5), &r, w(5)).unwrap() < 1e-12);
        let mut broken = CoproductSpec::primitive(1.5, 0.5);
        broken.c[5] = ZERO;
        // 1 (x) a^dagger on |0,0> has amplitude sqrt(lambda(1)) = 1
        assert!(homomorphism_residual(&broken, &r, w(5)).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn primitive_coproduct_fails_consistency_near_undeformed_limit() {
        // [D(a), D(a^dagger)] = 2 while g(D(N)) = 1 as q' -> 1
        let qp = 1.0 + 1e-6;
        for &k in &[-1.0, 0.0, 0.5] {
            let r = consistency_residual(&CoproductSpec::primitive(qp, k), &rep(qp, k, 0.0, 0.0), w(5)).unwrap();
            assert!((r - 1.0).abs() < 1e-4, "k={k} r={r}");
        }
    }

    #[test]
    fn kron_matches_dense_product() {
        let r = rep(1.3, 0.4, 0.5, 0.2);
        let spec = CoproductSpec::derived(1.3, 0.4, [0.6, -0.2, 0.9, -1.4], Complex64::new(0.3, 0.4));
        let ops = coproduct_ops(&spec, &r).unwrap();
        let inner = 5;
        let pad = Window::new(0, inner + 2);
        let prod = ops.delta_a.compose(&ops.delta_adag);
        let (ma, mb) = (tensor_matrix_window(&ops.delta_a, pad), tensor_matrix_window(&ops.delta_adag, pad));
        let mp = tensor_matrix_window(&prod, pad);
        let d = pad.dim;
        for i1 in 0..inner {
            for i2 in 0..inner {
                for j1 in 0..inner {
                    for j2 in 0..inner {
                        let (row, col) = (i1 * d + i2, j1 * d + j2);
                        let dense: Complex64 = (0..d * d).map(|m| ma[row][m] * mb[m][col]).sum();
                        assert!((dense - mp[row][col]).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn scan_finds_k_minus_one() {
        let cfg = HopfScanConfig::default();
        let rows = hopf_scan(1.5, &[-1.0, 0.0], &cfg).unwrap();
        assert!(rows[0].min_residual < 1e-8, "{:?}", rows[0]);
        assert!(rows[1].min_residual > 1e-3, "{:?}", rows[1]);
        let again = hopf_scan(1.5, &[-1.0, 0.0], &cfg).unwrap();
        assert_eq!(rows, again);
    }

    #[test]
    fn suq2_homomorphism() {
        let fam = |a: f64, b: f64| AlgebraFamily::suq2_gen(1.5, a, b).unwrap();
        let sym = FockRep::new(fam(1.0, -1.0), -2.0, 0.0).allow_non_unitary(true);
        let best = suq2_homomorphism_residual(&sym, w(5)).unwrap();
        // s and -s both work since [x] is symmetric under q -> 1/q
        assert!(best.residual < 1e-10 && (best.s.abs() - 1.0).abs() < 1e-12, "{best:?}");
        let eq = FockRep::new(fam(1.0, 1.0), -2.0, 0.0).allow_non_unitary(true);
        assert!(suq2_homomorphism_residual(&eq, w(5)).unwrap().residual > 1e-3);
        assert!(suq2_residual_at(&rep(1.5, 0.5, 0.0, 0.0), 1.0, w(5)).is_err());
    }
}
