//! Scalar bracket kernels.
//!
//! Three brackets appear throughout the crate:
//!
//! ```text
//! [x]          = (q^x - q^-x) / (q - q^-1)
//! [x]_{a,b}    = (q^{a x} - q^{b x}) / (q^a - q^b)
//! [x]_{q',k}   = (q'^x - q'^{k x}) / (q' - q'^k)
//! ```
//!
//! The generalized bracket switches to its `a = b` limit `x q^{(x-1) a}` when
//! `|q^a - q^b|` drops below [`DEGENERATE_THRESHOLD`].

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `|q - 1|` at or below this is rejected.
pub const Q_ONE_TOLERANCE: f64 = 1e-12;
/// `|q^alpha - q^beta|` below this selects the limit formula.
pub const DEGENERATE_THRESHOLD: f64 = 1e-9;
/// `|alpha|` below this leaves `k = beta / alpha` undefined.
pub const ALPHA_ZERO_TOLERANCE: f64 = 1e-12;

pub(crate) fn check_base(q: f64, what: &str) -> Result<()> {
    if !q.is_finite() || q <= 0.0 {
        return Err(Error::InvalidParams(format!("{what} must be a positive real (got {q})")));
    }
    if (q - 1.0).abs() <= Q_ONE_TOLERANCE {
        return Err(Error::InvalidParams(format!("{what} must differ from 1 (got {q})")));
    }
    Ok(())
}

/// The deformation triple `(q, alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformParams {
    q: f64,
    alpha: f64,
    beta: f64,
}

impl DeformParams {
    pub fn new(q: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_base(q, "q")?;
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "exponents must be finite (alpha = {alpha}, beta = {beta})"
            )));
        }
        Ok(Self { q, alpha, beta })
    }

    /// k-form parameterization: base `qprime` with `alpha = 1`, `beta = k`.
    pub fn from_k_form(qprime: f64, k: f64) -> Result<Self> {
        Self::new(qprime, 1.0, k)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn ln_q(&self) -> f64 {
        self.q.ln()
    }

    /// `q^{(alpha - beta)/2}`.
    pub fn qprime(&self) -> f64 {
        self.q.powf(0.5 * (self.alpha - self.beta))
    }

    /// `beta / alpha`, undefined when alpha vanishes.
    pub fn k(&self) -> Option<f64> {
        (self.alpha.abs() > ALPHA_ZERO_TOLERANCE).then(|| self.beta / self.alpha)
    }

    pub fn is_degenerate(&self) -> bool {
        (self.q.powf(self.alpha) - self.q.powf(self.beta)).abs() < DEGENERATE_THRESHOLD
    }

    /// Same base with the exponents swapped.
    pub fn swapped(&self) -> Self {
        Self { q: self.q, alpha: self.beta, beta: self.alpha }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketBranch {
    Generic,
    DegenerateLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketValue {
    pub value: f64,
    pub branch: BracketBranch,
}

/// Standard symmetric bracket `(q^x - q^-x)/(q - q^-1)`.
pub fn std_bracket(x: f64, q: f64) -> Result<f64> {
    check_base(q, "q")?;
    let l = q.ln();
    Ok((x * l).sinh() / l.sinh())
}

/// Generalized bracket `[x]_{alpha,beta}`.
pub fn gen_bracket(x: f64, p: &DeformParams) -> BracketValue {
    let l = p.ln_q();
    if p.is_degenerate() {
        return BracketValue {
            value: x * ((x - 1.0) * p.alpha * l).exp(),
            branch: BracketBranch::DegenerateLimit,
        };
    }
    // q^{beta x} expm1((alpha - beta) x ln q) / (q^beta expm1((alpha - beta) ln q))
    let d = (p.alpha - p.beta) * l;
    let value = ((x - 1.0) * p.beta * l).exp() * (x * d).exp_m1() / d.exp_m1();
    BracketValue { value, branch: BracketBranch::Generic }
}

/// Generalized bracket continued to a complex argument.
pub fn gen_bracket_complex(z: Complex64, p: &DeformParams) -> Complex64 {
    let l = p.ln_q();
    if p.is_degenerate() {
        return z * ((z - 1.0) * (p.alpha * l)).exp();
    }
    let qa = (p.alpha * l).exp();
    let qb = (p.beta * l).exp();
    ((z * (p.alpha * l)).exp() - (z * (p.beta * l)).exp()) / (qa - qb)
}

/// k-form bracket `(q'^x - q'^{kx})/(q' - q'^k)`.
pub fn bracket_k_form(x: f64, qprime: f64, k: f64) -> Result<f64> {
    check_base(qprime, "qprime")?;
    let den = qprime - qprime.powf(k);
    if den.abs() <= Q_ONE_TOLERANCE {
        return Err(Error::Domain(format!(
            "degenerate k-form denominator q'-q'^k = {den:e} (qprime = {qprime}, k = {k})"
        )));
    }
    Ok((qprime.powf(x) - qprime.powf(k * x)) / den)
}

/// `[n+1]_{alpha,beta} - [n]_{alpha,beta}`.
pub fn delta_bracket(n: f64, p: &DeformParams) -> f64 {
    gen_bracket(n + 1.0, p).value - gen_bracket(n, p).value
}

/// `| [x]_{alpha,beta} - q^{(alpha+beta)(x-1)/2} [x]_{q'} |` with `q' = q^{(alpha-beta)/2}`.
pub fn factorization_residual(x: f64, p: &DeformParams) -> Result<f64> {
    if p.is_degenerate() {
        return Err(Error::Domain(
            "factorization identity needs the generic branch (q^alpha ~ q^beta)".into(),
        ));
    }
    let lhs = gen_bracket(x, p).value;
    let prefactor = (0.5 * (p.alpha + p.beta) * (x - 1.0) * p.ln_q()).exp();
    let rhs = prefactor * std_bracket(x, p.qprime())?;
    Ok((lhs - rhs).abs())
}

/// `| [x+1] - q [x] - q^{-x} |` for the standard bracket.
pub fn mb_identity_residual(x: f64, q: f64) -> Result<f64> {
    let r = std_bracket(x + 1.0, q)? - q * std_bracket(x, q)? - q.powf(-x);
    Ok(r.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: f64, a: f64, b: f64) -> DeformParams {
        DeformParams::new(q, a, b).unwrap()
    }

    #[test]
    fn std_bracket_values() {
        assert_eq!(std_bracket(0.0, 2.0).unwrap(), 0.0);
        assert!((std_bracket(1.0, 7.0).unwrap() - 1.0).abs() < 1e-15);
        // (4 - 0.25) / (2 - 0.5)
        assert!((std_bracket(2.0, 2.0).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn std_bracket_rejects_bad_base() {
        assert!(matches!(std_bracket(1.0, 0.0), Err(Error::InvalidParams(_))));
        assert!(matches!(std_bracket(1.0, -2.0), Err(Error::InvalidParams(_))));
        assert!(matches!(std_bracket(1.0, 1.0 + 1e-13), Err(Error::InvalidParams(_))));
        assert!(std_bracket(1.0, 1.0 + 1e-7).is_ok());
    }

    #[test]
    fn undeformed_limit() {
        for i in -50..=50 {
            let x = i as f64 / 10.0;
            assert!((std_bracket(x, 1.0 + 1e-7).unwrap() - x).abs() < 1e-5);
        }
    }

    #[test]
    fn gen_bracket_unit_and_reduction() {
        for &(q, a, b) in &[(1.5, 0.7, -0.3), (0.6, -1.2, 2.0), (3.0, 0.0, 1.0)] {
            let v = gen_bracket(1.0, &p(q, a, b));
            assert_eq!(v.branch, BracketBranch::Generic);
            assert!((v.value - 1.0).abs() < 1e-14);
        }
        for i in -20..=20 {
            let x = i as f64 * 0.25;
            let g = gen_bracket(x, &p(1.7, 1.0, -1.0)).value;
            let s = std_bracket(x, 1.7).unwrap();
            assert!((g - s).abs() < 1e-12 * s.abs().max(1.0));
        }
    }

    #[test]
    fn degenerate_branch() {
        let v = gen_bracket(3.0, &p(2.0, 1.0, 1.0));
        assert_eq!(v.branch, BracketBranch::DegenerateLimit);
        assert_eq!(v.value, 12.0);
        // generic branch just beside the limit
        let near = gen_bracket(3.0, &p(2.0, 1.0, 1.0 + 1e-8));
        assert_eq!(near.branch, BracketBranch::Generic);
        assert!((near.value - 12.0).abs() < 1e-6);
    }

    #[test]
    fn k_form_values() {
        assert!((bracket_k_form(1.0, 1.5, -0.4).unwrap() - 1.0).abs() < 1e-15);
        assert!((bracket_k_form(2.0, 2.0, 0.0).unwrap() - 3.0).abs() < 1e-15);
        assert!(matches!(bracket_k_form(2.0, 2.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bracket_k_form(2.0, 1.0, 0.0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn delta_bracket_cases() {
        for n in 0..10 {
            let x = n as f64;
            let d = delta_bracket(x, &p(1.3, 1.0, 0.0));
            assert!((d - 1.3f64.powf(x)).abs() < 1e-12 * d);
            let hy = delta_bracket(x, &p(1.3, 1.0, -1.0));
            let s = std_bracket(x + 1.0, 1.3).unwrap() - std_bracket(x, 1.3).unwrap();
            assert!((hy - s).abs() < 1e-12);
        }
        assert!((delta_bracket(0.0, &p(1.5, 0.7, -0.3)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_edge_points() {
        let pp = p(1.5, 0.7, -0.3);
        assert!(factorization_residual(0.0, &pp).unwrap() < 1e-15);
        assert!(factorization_residual(1.0, &pp).unwrap() < 1e-15);
        assert!(mb_identity_residual(0.0, 2.0).unwrap() < 1e-15);
        assert!(mb_identity_residual(3.0, 1.5).unwrap() < 1e-14);
        assert!(factorization_residual(2.0, &p(1.5, 0.3, 0.3)).is_err());
    }

    #[test]
    fn params_derived_quantities() {
        let pp = p(4.0, 1.0, -1.0);
        assert!((pp.qprime() - 4.0).abs() < 1e-15);
        assert_eq!(pp.k(), Some(-1.0));
        assert_eq!(p(4.0, 0.0, 1.0).k(), None);
        assert!(DeformParams::new(2.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn complex_bracket_matches_real() {
        for &(q, a, b) in &[(1.5, 0.7, -0.3), (2.0, 1.0, 1.0), (0.8, 1.0, -1.0)] {
            let pp = p(q, a, b);
            for i in -8..=8 {
                let x = i as f64 * 0.5;
                let c = gen_bracket_complex(Complex64::new(x, 0.0), &pp);
                let r = gen_bracket(x, &pp).value;
                assert!((c.re - r).abs() < 1e-12 * r.abs().max(1.0) && c.im.abs() < 1e-14);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn base() -> impl Strategy<Value = f64> {
            (0.5f64..2.0).prop_filter("q away from 1", |q| (q - 1.0).abs() > 1e-3)
        }

        proptest! {
            #[test]
            fn symmetric_in_exponents(q in base(), a in -2.0f64..2.0, b in -2.0f64..2.0, x in -5.0f64..5.0) {
                let (u, v) = (gen_bracket(x, &p(q, a, b)).value, gen_bracket(x, &p(q, b, a)).value);
                prop_assert!((u - v).abs() <= 1e-12 * u.abs().max(1.0), "{u} vs {v}");
            }

            #[test]
            fn pins_zero_and_one(q in base(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
                let d = p(q, a, b);
                prop_assert!(gen_bracket(0.0, &d).value.abs() < 1e-15);
                prop_assert!((gen_bracket(1.0, &d).value - 1.0).abs() < 1e-12);
            }

            #[test]
            fn factorizes(q in base(), a in -2.0f64..2.0, b in -2.0f64..2.0, x in -5.0f64..5.0) {
                prop_assume!((a - b).abs() > 1e-3);
                let d = p(q, a, b);
                let r = factorization_residual(x, &d).unwrap();
                prop_assert!(r <= 1e-10 * gen_bracket(x, &d).value.abs().max(1.0), "{r:e}");
            }

            #[test]
            fn continuous_across_degenerate_switch(q in base(), a in -2.0f64..2.0, x in -5.0f64..5.0) {
                let limit = gen_bracket(x, &p(q, a, a)).value;
                let near = gen_bracket(x, &p(q, a, a + 1e-7)).value;
                prop_assert!((near - limit).abs() / limit.abs().max(1.0) < 1e-5);
            }

            #[test]
            fn k_form_is_unit_alpha(q in base(), k in -2.0f64..2.0, x in -5.0f64..5.0) {
                prop_assume!((k - 1.0).abs() > 1e-3);
                let direct = bracket_k_form(x, q, k).unwrap();
                let general = gen_bracket(x, &DeformParams::from_k_form(q, k).unwrap()).value;
                prop_assert!((direct - general).abs() <= 1e-10 * direct.abs().max(1.0));
            }
        }
    }
}
