//! Lowest-weight Fock representations of the oscillator families.
//!
//! `N|n> = (n + nu)|n>`, `a|n> = sqrt(lambda(n))|n-1>`,
//! `a^dagger|n> = sqrt(lambda(n+1))|n+1>`, where `lambda(n)` is the eigenvalue
//! of `a^dagger a` fixed by the family and the Casimir constant.

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{AlgebraFamily, SpectrumKind};
use crate::bracket::gen_bracket;
use crate::error::{Error, Result};
use crate::ladder::{func_of_n, LadderOperator, Rule, Window};

/// `lambda` values this far below zero are treated as rounding noise.
const NEGATIVE_SLACK: f64 = 1e-12;

pub type LambdaFn = Arc<dyn Fn(i64) -> f64 + Send + Sync>;

/// The generators `{a, a^dagger, N}` of one representation.
#[derive(Clone, Debug)]
pub struct Triple {
    pub a: LadderOperator,
    pub adag: LadderOperator,
    pub n_op: LadderOperator,
    pub nu: f64,
}

pub(crate) fn amplitude(lambda: f64) -> Complex64 {
    if lambda >= 0.0 {
        Complex64::new(lambda.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-lambda).sqrt())
    }
}

impl Triple {
    /// Ladder triple with `a^dagger a = lambda(n)` on `|n>`.
    pub fn from_lambda(lambda: LambdaFn, nu: f64) -> Self {
        let down = lambda.clone();
        let a = LadderOperator::single(-1, Rule::func(move |n| amplitude(down(n))));
        let adag = LadderOperator::single(1, Rule::func(move |n| amplitude(lambda(n + 1))));
        Self { a, adag, n_op: func_of_n(|x| x, nu), nu }
    }

    pub fn generators(&self) -> [&LadderOperator; 3] {
        [&self.a, &self.adag, &self.n_op]
    }
}

#[derive(Clone, Debug)]
pub struct FockRep {
    pub family: AlgebraFamily,
    /// Spectrum offset of `N`.
    pub nu: f64,
    pub casimir_const: f64,
    /// Permit negative `lambda` (imaginary amplitudes, `a^dagger` no longer adjoint to `a`).
    pub non_unitary: bool,
    pub window: Window,
}

impl FockRep {
    pub fn new(family: AlgebraFamily, nu: f64, casimir_const: f64) -> Self {
        Self { family, nu, casimir_const, non_unitary: false, window: Window::default() }
    }

    /// Standard sector: `nu = 0`, Casimir constant 0.
    pub fn standard(family: AlgebraFamily) -> Self {
        Self::new(family, 0.0, 0.0)
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn allow_non_unitary(mut self, yes: bool) -> Self {
        self.non_unitary = yes;
        self
    }

    pub fn lambda_fn(&self) -> LambdaFn {
        let p = self.family.deform_params();
        let (nu, c) = (self.nu, self.casimir_const);
        match self.family.spectrum_kind() {
            SpectrumKind::Oscillator => {
                Arc::new(move |n| gen_bracket(n as f64 + nu, &p).value + c)
            }
            SpectrumKind::MacfarlaneBiedenharn => Arc::new(move |n| {
                let x = n as f64 + nu;
                gen_bracket(x, &p).value + c * (p.alpha() * x * p.ln_q()).exp()
            }),
            SpectrumKind::ArikCoonDressed => Arc::new(move |n| {
                // A^dagger A after dressing the alpha = beta oscillator by q^{-alpha N/2}
                let x = n as f64 + nu;
                x + c * (-p.alpha() * (x - 1.0) * p.ln_q()).exp()
            }),
            SpectrumKind::SuQ2LowestWeight => Arc::new(move |m| {
                // J+J- eigenvalue: Lambda(m+1) = Lambda(m) - [2(m + mu)], Lambda(0) = c
                let term = |j: i64| gen_bracket(2.0 * (j as f64 + nu), &p).value;
                if m >= 0 {
                    c - (0..m).map(term).sum::<f64>()
                } else {
                    c + (m..0).map(term).sum::<f64>()
                }
            }),
        }
    }

    pub fn lambda(&self, n: i64) -> f64 {
        (self.lambda_fn())(n)
    }
}

/// Builds `{a, a^dagger, N}` for `rep`, checking `lambda >= 0` on the window
/// (including the state just above it, reached by `a^dagger`).
pub fn fock_ops(rep: &FockRep) -> Result<Triple> {
    let lambda = rep.lambda_fn();
    if !rep.non_unitary {
        let w = rep.window;
        for n in w.n0..=w.n0 + w.dim as i64 {
            let l = lambda(n);
            if !l.is_finite() {
                return Err(Error::Domain(format!("lambda({n}) is not finite")));
            }
            if l < -NEGATIVE_SLACK {
                return Err(Error::NonUnitary { n, lambda: l });
            }
        }
    }
    Ok(Triple::from_lambda(lambda, rep.nu))
}
