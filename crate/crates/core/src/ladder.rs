//! Exact shift operators on a number-operator eigenbasis.
//!
//! An operator is a finite map from shift degree `d` to a coefficient rule
//! `c_d`, acting as `O|n> = sum_d c_d(n) |n+d>`. Products and sums are formed
//! on the rules themselves, so the infinite matrix is never truncated and a
//! relation that holds algebraically holds on every basis state.
//!
//! The same machinery serves one-site operators (labels `i64`) and the
//! two- and three-site tensor operators used by the coproduct checks
//! (labels `[i64; 2]`, `[i64; 3]`).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

/// Basis label / shift degree on one or several sites.
pub trait Label: Copy + Ord + Send + Sync + fmt::Debug + 'static {
    fn origin() -> Self;
    fn shifted(self, by: Self) -> Self;
    /// Labels with a negative component lie below the lowest state.
    fn is_physical(self) -> bool;
}

impl Label for i64 {
    fn origin() -> Self {
        0
    }

    fn shifted(self, by: Self) -> Self {
        self + by
    }

    fn is_physical(self) -> bool {
        self >= 0
    }
}

impl<const S: usize> Label for [i64; S] {
    fn origin() -> Self {
        [0; S]
    }

    fn shifted(self, by: Self) -> Self {
        let mut out = self;
        for (o, b) in out.iter_mut().zip(by) {
            *o += b;
        }
        out
    }

    fn is_physical(self) -> bool {
        self.iter().all(|&v| v >= 0)
    }
}

type RuleFn<L> = Arc<dyn Fn(L) -> Complex64 + Send + Sync>;

/// Coefficient rule attached to one shift degree.
#[derive(Clone)]
pub enum Rule<L: Label> {
    Const(Complex64),
    Func(RuleFn<L>),
}

impl<L: Label> Rule<L> {
    pub fn func(f: impl Fn(L) -> Complex64 + Send + Sync + 'static) -> Self {
        Rule::Func(Arc::new(f))
    }

    pub fn eval(&self, n: L) -> Complex64 {
        match self {
            Rule::Const(c) => *c,
            Rule::Func(f) => f(n),
        }
    }

    fn is_exact_zero(&self) -> bool {
        matches!(self, Rule::Const(c) if *c == Complex64::new(0.0, 0.0))
    }

    fn scaled(&self, s: Complex64) -> Self {
        match self {
            Rule::Const(c) => Rule::Const(c * s),
            Rule::Func(f) => {
                let f = f.clone();
                Rule::func(move |n: L| s * f(n))
            }
        }
    }

    fn plus(&self, other: &Self) -> Self {
        match (self, other) {
            (Rule::Const(a), Rule::Const(b)) => Rule::Const(a + b),
            _ => {
                let (a, b) = (self.clone(), other.clone());
                Rule::func(move |n: L| a.eval(n) + b.eval(n))
            }
        }
    }

    /// Rule of `outer o inner` where `inner` moves the label by `inner_shift` first.
    fn after(&self, inner: &Self, inner_shift: L) -> Self {
        match (self, inner) {
            (Rule::Const(a), Rule::Const(b)) => Rule::Const(a * b),
            _ => {
                let (a, b) = (self.clone(), inner.clone());
                Rule::func(move |n: L| a.eval(n.shifted(inner_shift)) * b.eval(n))
            }
        }
    }
}

impl<L: Label> fmt::Debug for Rule<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Const(c) => write!(f, "Const({c})"),
            Rule::Func(_) => write!(f, "Func(..)"),
        }
    }
}

/// Finite sum of shift terms.
#[derive(Clone, Debug)]
pub struct ShiftOperator<L: Label> {
    terms: BTreeMap<L, Rule<L>>,
}

pub type LadderOperator = ShiftOperator<i64>;

impl<L: Label> ShiftOperator<L> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn scalar(c: Complex64) -> Self {
        Self::single(L::origin(), Rule::Const(c))
    }

    pub fn single(degree: L, rule: Rule<L>) -> Self {
        let mut op = Self::zero();
        op.insert(degree, rule);
        op
    }

    /// Degree-zero operator with the given diagonal.
    pub fn diagonal(f: impl Fn(L) -> Complex64 + Send + Sync + 'static) -> Self {
        Self::single(L::origin(), Rule::func(f))
    }

    fn insert(&mut self, degree: L, rule: Rule<L>) {
        let merged = match self.terms.remove(&degree) {
            Some(existing) => existing.plus(&rule),
            None => rule,
        };
        if !merged.is_exact_zero() {
            self.terms.insert(degree, merged);
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = L> + '_ {
        self.terms.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (L, &Rule<L>)> {
        self.terms.iter().map(|(d, r)| (*d, r))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero();
        for (d, r) in &self.terms {
            out.insert(*d, r.scaled(s));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, r) in &other.terms {
            out.insert(*d, r.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Operator product `self * inner` (inner acts first).
    pub fn compose(&self, inner: &Self) -> Self {
        let mut out = Self::zero();
        for (d, c_inner) in &inner.terms {
            for (e, c_outer) in &self.terms {
                out.insert(d.shifted(*e), c_outer.after(c_inner, *d));
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    /// Expansion of `O|n>`; labels below the lowest state and exact zeros are dropped.
    pub fn apply(&self, n: L) -> Vec<(L, Complex64)> {
        self.terms
            .iter()
            .filter_map(|(d, rule)| {
                let m = n.shifted(*d);
                if !m.is_physical() {
                    return None;
                }
                let amp = rule.eval(n);
                (amp != Complex64::new(0.0, 0.0)).then_some((m, amp))
            })
            .collect()
    }

    /// Largest amplitude modulus in `O|n>` (0 when the image is empty).
    pub fn max_amplitude(&self, n: L) -> f64 {
        self.apply(n).iter().map(|(_, a)| a.norm()).fold(0.0, nan_max)
    }
}

/// `max` that propagates NaN instead of skipping it.
pub fn nan_max(acc: f64, v: f64) -> f64 {
    if acc.is_nan() || v.is_nan() {
        f64::NAN
    } else {
        acc.max(v)
    }
}

/// Diagonal operator `f(N)` with `N|n> = (n + nu)|n>`.
pub fn func_of_n(f: impl Fn(f64) -> f64 + Send + Sync + 'static, nu: f64) -> LadderOperator {
    LadderOperator::diagonal(move |n| Complex64::new(f(n as f64 + nu), 0.0))
}

/// Complex-valued variant of [`func_of_n`].
pub fn complex_func_of_n(
    f: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    nu: f64,
) -> LadderOperator {
    LadderOperator::diagonal(move |n| f(n as f64 + nu))
}

pub fn compose<L: Label>(outer: &ShiftOperator<L>, inner: &ShiftOperator<L>) -> ShiftOperator<L> {
    outer.compose(inner)
}

pub fn commutator<L: Label>(a: &ShiftOperator<L>, b: &ShiftOperator<L>) -> ShiftOperator<L> {
    a.commutator(b)
}

pub fn linear_combine<L: Label>(coeffs: &[Complex64], ops: &[ShiftOperator<L>]) -> ShiftOperator<L> {
    assert_eq!(coeffs.len(), ops.len(), "one coefficient per operator");
    coeffs
        .iter()
        .zip(ops)
        .fold(ShiftOperator::zero(), |acc, (c, o)| acc.add(&o.scale(*c)))
}

pub fn apply(op: &LadderOperator, n: i64) -> Vec<(i64, Complex64)> {
    op.apply(n)
}

pub type Matrix = Vec<Vec<Complex64>>;

/// Dense block `<m|O|n>` for `m, n` in `[n0, n0 + dim)`. Entries are exact;
/// amplitudes leaving the block are not represented.
pub fn matrix_window(op: &LadderOperator, n0: i64, dim: usize) -> Matrix {
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    let hi = n0 + dim as i64;
    for col in n0..hi {
        for (d, rule) in op.terms() {
            let row = col + d;
            if (n0..hi).contains(&row) && row >= 0 {
                m[(row - n0) as usize][(col - n0) as usize] = rule.eval(col);
            }
        }
    }
    m
}

/// Contiguous block of basis labels `[n0, n0 + dim)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub n0: i64,
    pub dim: usize,
}

impl Window {
    pub const DEFAULT_DIM: usize = 16;

    pub fn new(n0: i64, dim: usize) -> Self {
        Self { n0, dim }
    }

    pub fn states(&self) -> impl Iterator<Item = i64> {
        self.n0..self.n0 + self.dim as i64
    }
}

impl Default for Window {
    fn default() -> Self {
        Self::new(0, Self::DEFAULT_DIM)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn raise() -> LadderOperator {
        LadderOperator::single(1, Rule::func(|n| c(((n + 1) as f64).sqrt())))
    }

    fn lower() -> LadderOperator {
        LadderOperator::single(-1, Rule::func(|n| c((n as f64).sqrt())))
    }

    #[test]
    fn number_operator_with_offset() {
        let n_op = func_of_n(|x| x, 0.5);
        assert_eq!(apply(&n_op, 3), vec![(3, c(3.5))]);
        let id = func_of_n(|_| 1.0, 0.0);
        assert_eq!(apply(&id, 7), vec![(7, c(1.0))]);
        let pow = func_of_n(|x| 2f64.powf(-x), 0.0);
        assert_eq!(apply(&pow, 2), vec![(2, c(0.25))]);
    }

    #[test]
    fn identity_is_neutral() {
        let o = raise().add(&lower().scale(c(0.3)));
        let left = compose(&LadderOperator::identity(), &o);
        let right = compose(&o, &LadderOperator::identity());
        for n in 0..8 {
            assert_eq!(left.apply(n), o.apply(n));
            assert_eq!(right.apply(n), o.apply(n));
        }
    }

    #[test]
    fn canonical_commutator() {
        let comm = commutator(&lower(), &raise());
        for n in 0..16 {
            let out = comm.apply(n);
            assert_eq!(out.len(), 1);
            assert!((out[0].1 - c(1.0)).norm() < 1e-12);
        }
        let self_comm = commutator(&raise(), &raise());
        for n in 0..8 {
            assert!(self_comm.max_amplitude(n) < 1e-15);
        }
    }

    #[test]
    fn cancelling_combination_vanishes() {
        let o = raise();
        let zero = linear_combine(&[c(1.0), c(-1.0)], &[o.clone(), o]);
        for n in 0..10 {
            assert!(zero.max_amplitude(n) < 1e-15);
        }
        let two = linear_combine(&[c(2.0)], &[LadderOperator::identity()]);
        assert_eq!(two.apply(5), vec![(5, c(2.0))]);
    }

    #[test]
    fn exact_zero_constants_are_pruned() {
        let id = LadderOperator::identity();
        assert!(id.sub(&id).is_zero());
    }

    #[test]
    fn lowering_below_vacuum_is_dropped() {
        let shifted = LadderOperator::single(-1, Rule::Const(c(1.0)));
        assert!(shifted.apply(0).is_empty());
        assert_eq!(shifted.apply(1), vec![(0, c(1.0))]);
    }

    #[test]
    fn window_matrices() {
        let id = matrix_window(&LadderOperator::identity(), 0, 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(id[i][j], c(if i == j { 1.0 } else { 0.0 }));
            }
        }
        let n_op = matrix_window(&func_of_n(|x| x, 0.0), 0, 3);
        assert_eq!([n_op[0][0], n_op[1][1], n_op[2][2]], [c(0.0), c(1.0), c(2.0)]);
        let up = matrix_window(&raise(), 2, 3);
        assert_eq!(up[1][0], c(3f64.sqrt()));
        assert_eq!(up[0][2], c(0.0));
    }

    #[test]
    fn tensor_labels_shift_componentwise() {
        let op = ShiftOperator::<[i64; 2]>::single([1, -1], Rule::Const(c(2.0)));
        assert_eq!(op.apply([0, 1]), vec![([1, 0], c(2.0))]);
        assert!(op.apply([3, 0]).is_empty());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn dense_mul(x: &Matrix, y: &Matrix) -> Matrix {
            let d = x.len();
            (0..d)
                .map(|i| (0..d).map(|j| (0..d).map(|k| x[i][k] * y[k][j]).sum()).collect())
                .collect()
        }

        fn op(kind: u8, s: f64) -> LadderOperator {
            match kind % 3 {
                0 => raise().scale(c(s)),
                1 => lower().scale(c(s)),
                _ => func_of_n(move |x| s * x + 1.0, 0.25),
            }
        }

        proptest! {
            #[test]
            fn composition_matches_padded_dense_product(
                kinds in proptest::collection::vec(0u8..3, 1..=5),
                scales in proptest::collection::vec(-2.0f64..2.0, 5),
            ) {
                // pad the block so every intermediate label of a length-5 word stays inside
                let (n0, dim, pad) = (10, 6, 5);
                let word = kinds.iter().zip(&scales).map(|(k, s)| op(*k, *s));
                let exact = word.clone().reduce(|acc, o| compose(&acc, &o)).unwrap();
                let dense = word
                    .map(|o| matrix_window(&o, n0 - pad, dim + 2 * pad as usize))
                    .reduce(|acc, m| dense_mul(&acc, &m))
                    .unwrap();
                let inner = matrix_window(&exact, n0, dim);
                for i in 0..dim {
                    for j in 0..dim {
                        let (e, d) = (inner[i][j], dense[i + pad as usize][j + pad as usize]);
                        prop_assert!((e - d).norm() <= 1e-12 * e.norm().max(1.0), "({i},{j}): {e} vs {d}");
                    }
                }
            }

            #[test]
            fn commutator_is_antisymmetric(k1 in 0u8..3, k2 in 0u8..3, s in -2.0f64..2.0, n in 0i64..12) {
                let (x, y) = (op(k1, s), op(k2, 1.0 - s));
                let sum = commutator(&x, &y).add(&commutator(&y, &x));
                prop_assert!(sum.max_amplitude(n) < 1e-12);
            }
        }
    }
}
