//! Dressing maps `A = f(N) a`, reductions between families, and the
//! obstruction scans showing when no such map exists.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{verify, window_residual, window_scale, within_tolerance, AlgebraFamily, ResidualReport};
use crate::bracket::{bracket_k_form, delta_bracket, DeformParams};
use crate::error::{Error, Result};
use crate::fock::{fock_ops, FockRep, Triple};
use crate::ladder::{complex_func_of_n, nan_max, Window};

/// Tolerance for the parameter constraints of the reduction cases.
const CASE_TOLERANCE: f64 = 1e-12;

/// Coefficient rule `f` on the N-spectrum for `A = f(N) a`, `A^dagger = a^dagger f(N)`.
#[derive(Clone)]
pub struct DressingMap {
    pub label: String,
    f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
}

impl fmt::Debug for DressingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DressingMap({})", self.label)
    }
}

impl DressingMap {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::complex(label, move |x| Complex64::new(f(x), 0.0))
    }

    pub fn complex(label: impl Into<String>, f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { label: label.into(), f: Arc::new(f) }
    }

    pub fn identity() -> Self {
        Self::new("1", |_| 1.0)
    }

    /// `q^{exponent N}`.
    pub fn power(q: f64, exponent: f64) -> Self {
        let l = q.ln();
        Self::new(format!("{q}^({exponent} N)"), move |x| (exponent * x * l).exp())
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.f)(x)
    }

    /// `1 / f`.
    pub fn inverse(&self) -> Self {
        let f = self.f.clone();
        Self::complex(format!("1/({})", self.label), move |x| f(x).inv())
    }

    /// Fails when `f` vanishes somewhere on the window.
    pub fn check_invertible(&self, nu: f64, window: Window) -> Result<()> {
        for n in window.states() {
            let v = self.eval(n as f64 + nu);
            if v.norm() == 0.0 || !v.is_finite() {
                return Err(Error::Domain(format!("dressing {} not invertible at n = {n}", self.label)));
            }
        }
        Ok(())
    }
}

/// `A = f(N) a`, `A^dagger = a^dagger f(N)`, `N` unchanged.
pub fn dress(t: &Triple, map: &DressingMap) -> Triple {
    let f = map.f.clone();
    let f_of_n = complex_func_of_n(move |x| f(x), t.nu);
    Triple {
        a: f_of_n.compose(&t.a),
        adag: t.adag.compose(&f_of_n),
        n_op: t.n_op.clone(),
        nu: t.nu,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionCase {
    /// `alpha = 0`: dresses to Macfarlane-Biedenharn with `q' = q^{-beta/2}`.
    AlphaZero,
    /// `beta = 0`: dresses to Macfarlane-Biedenharn with `q' = q^{-alpha/2}`.
    BetaZero,
    /// `alpha + beta = 0`: is Hong Yan with base `q^alpha`.
    SumZero,
    /// `alpha = beta`: dresses to the generalized Arik-Coon form.
    AlphaEqBeta,
}

impl ReductionCase {
    pub const ALL: [ReductionCase; 4] =
        [ReductionCase::AlphaZero, ReductionCase::BetaZero, ReductionCase::SumZero, ReductionCase::AlphaEqBeta];

    pub fn name(self) -> &'static str {
        match self {
            ReductionCase::AlphaZero => "alpha-zero",
            ReductionCase::BetaZero => "beta-zero",
            ReductionCase::SumZero => "sum-zero",
            ReductionCase::AlphaEqBeta => "alpha-eq-beta",
        }
    }

    fn check(self, p: &DeformParams) -> Result<()> {
        let (a, b) = (p.alpha(), p.beta());
        let (ok, what) = match self {
            ReductionCase::AlphaZero => (a.abs() <= CASE_TOLERANCE, "alpha = 0"),
            ReductionCase::BetaZero => (b.abs() <= CASE_TOLERANCE, "beta = 0"),
            ReductionCase::SumZero => ((a + b).abs() <= CASE_TOLERANCE, "alpha + beta = 0"),
            ReductionCase::AlphaEqBeta => ((a - b).abs() <= CASE_TOLERANCE, "alpha = beta"),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "{} needs {what} (alpha = {a}, beta = {b})",
                self.name()
            )))
        }
    }

    /// Dressing applied to the general oscillator and the family it lands in.
    pub fn target(self, p: &DeformParams) -> Result<(DressingMap, AlgebraFamily)> {
        self.check(p)?;
        let (q, a, b) = (p.q(), p.alpha(), p.beta());
        Ok(match self {
            ReductionCase::AlphaZero => {
                (DressingMap::power(q, -(a + b) / 4.0), AlgebraFamily::mb(q.powf(-b / 2.0))?)
            }
            ReductionCase::BetaZero => {
                (DressingMap::power(q, -(a + b) / 4.0), AlgebraFamily::mb(q.powf(-a / 2.0))?)
            }
            ReductionCase::SumZero => (DressingMap::identity(), AlgebraFamily::hong_yan(q.powf(a))?),
            ReductionCase::AlphaEqBeta => {
                (DressingMap::power(q, -a / 2.0), AlgebraFamily::gen_arik_coon(q, a)?)
            }
        })
    }
}

impl std::str::FromStr for ReductionCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReductionCase::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown reduction case '{s}'")))
    }
}

/// Dresses the general-oscillator Fock representation as prescribed by `case`
/// and verifies the target family's relations.
pub fn reduction_check_with(
    case: ReductionCase,
    p: &DeformParams,
    nu: f64,
    casimir_const: f64,
    window: Window,
    tolerance: f64,
) -> Result<ResidualReport> {
    let (map, target) = case.target(p)?;
    map.check_invertible(nu, window)?;
    let rep = FockRep::new(AlgebraFamily::GenOsc(*p), nu, casimir_const).with_window(window);
    let dressed = dress(&fock_ops(&rep)?, &map);
    Ok(verify(&target, &dressed, window, tolerance))
}

/// [`reduction_check_with`] on the standard sector (`nu = 0`, Casimir 0).
pub fn reduction_check(case: ReductionCase, p: &DeformParams, window: Window, tolerance: f64) -> Result<ResidualReport> {
    reduction_check_with(case, p, 0.0, 0.0, window, tolerance)
}

/// Generalized MB dressed by `q^{-(alpha+beta)N/4}`, checked against MB with
/// `q' = q^{(alpha-beta)/2}`.
pub fn gen_mb_reduction_check(
    p: &DeformParams,
    nu: f64,
    casimir_const: f64,
    window: Window,
    tolerance: f64,
) -> Result<ResidualReport> {
    let map = DressingMap::power(p.q(), -(p.alpha() + p.beta()) / 4.0);
    let rep = FockRep::new(AlgebraFamily::GenMB(*p), nu, casimir_const).with_window(window);
    let dressed = dress(&fock_ops(&rep)?, &map);
    Ok(verify(&AlgebraFamily::mb(p.qprime())?, &dressed, window, tolerance))
}

/// Largest amplitude difference between two operators, with the largest
/// amplitude of the operators themselves as its scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorGap {
    pub max_difference: f64,
    pub scale: f64,
}

impl OperatorGap {
    pub fn within(&self, tolerance: f64) -> bool {
        within_tolerance(self.max_difference, self.scale, tolerance)
    }
}

/// Compares the commutator right-hand sides of the general oscillator with
/// `alpha + beta = 0` and Hong Yan with base `q^alpha`.
pub fn sum_zero_rhs_difference(p: &DeformParams, nu: f64, window: Window) -> Result<OperatorGap> {
    ReductionCase::SumZero.check(p)?;
    let hy = AlgebraFamily::hong_yan(p.q().powf(p.alpha()))?;
    let gen = AlgebraFamily::GenOsc(*p);
    let t = fock_ops(&FockRep::new(gen, nu, 0.0).with_window(window))?;
    let rhs = |f: &AlgebraFamily| crate::algebra::relations_for(f)[2].rhs.instantiate(&t);
    let (ours, theirs) = (rhs(&gen), rhs(&hy));
    Ok(OperatorGap {
        max_difference: window_residual(&ours.sub(&theirs), window),
        scale: window_scale(&[ours, theirs], window),
    })
}

/// Inequivalence term between the k-forms with `k1` and `k2`:
/// `((q'^{k2(n+1)} - q'^{k1(n+1)}) - (q'^{k2 n} - q'^{k1 n})) / (q' - q'^{k2})`.
pub fn f_obstruction_term(n: f64, qprime: f64, k1: f64, k2: f64) -> Result<f64> {
    crate::bracket::check_base(qprime, "qprime")?;
    let den = qprime - qprime.powf(k2);
    if den.abs() <= crate::bracket::Q_ONE_TOLERANCE {
        return Err(Error::Domain(format!("degenerate denominator q' - q'^k2 (k2 = {k2})")));
    }
    let pw = |e: f64| qprime.powf(e);
    Ok(((pw(k2 * (n + 1.0)) - pw(k1 * (n + 1.0))) - (pw(k2 * n) - pw(k1 * n))) / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RescaleResidual {
    /// Per-state residual of the `k2` relation, indexed like the window.
    pub profile: Vec<f64>,
    pub max_residual: f64,
    /// Largest amplitude among `A A^dagger`, `A^dagger A` and the bracket difference.
    pub scale: f64,
}

/// Rescales the `k1` Fock representation by `((q'-q'^{k1})/(q'-q'^{k2}))^{1/2}`
/// and measures how far it is from satisfying the `k2` relation.
pub fn k_rescale_residual(qprime: f64, k1: f64, k2: f64, nu: f64, window: Window) -> Result<RescaleResidual> {
    let den1 = bracket_k_form(1.0, qprime, k1).map(|_| qprime - qprime.powf(k1))?;
    let den2 = bracket_k_form(1.0, qprime, k2).map(|_| qprime - qprime.powf(k2))?;
    let r = Complex64::new(den1 / den2, 0.0).sqrt();
    let rep = FockRep::new(AlgebraFamily::GenOsc(DeformParams::from_k_form(qprime, k1)?), nu, 0.0)
        .with_window(window)
        .allow_non_unitary(true);
    let t = fock_ops(&rep)?;
    let (a, adag) = (t.a.scale(r), t.adag.scale(r));
    let p2 = DeformParams::from_k_form(qprime, k2)?;
    let rhs = complex_func_of_n(move |x| Complex64::new(delta_bracket(x, &p2), 0.0), nu);
    let terms = [a.compose(&adag), adag.compose(&a), rhs];
    let defect = terms[0].sub(&terms[1]).sub(&terms[2]);
    let profile: Vec<f64> = window.states().map(|n| defect.max_amplitude(n)).collect();
    let max_residual = profile.iter().copied().fold(0.0, nan_max);
    Ok(RescaleResidual { profile, max_residual, scale: window_scale(&terms, window) })
}

/// `h(n) = -ln([n+nu+1]_k - [n+nu]_k) / (2(n+nu))` in the `(q', k)` form.
/// Real `n` is accepted for sub-step evaluation.
pub fn h_function(n: f64, qprime: f64, k: f64, nu: f64) -> Result<f64> {
    let x = n + nu;
    if x.abs() < 1e-12 {
        return Err(Error::Domain(format!("h undefined at n + nu = 0 (n = {n}, nu = {nu})")));
    }
    let arg = delta_bracket(x, &DeformParams::from_k_form(qprime, k)?);
    if !(arg > 0.0) {
        return Err(Error::Domain(format!(
            "log of nonpositive bracket difference {arg:e} at n = {n}, k = {k}"
        )));
    }
    Ok(-arg.ln() / (2.0 * x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HRow {
    pub k: f64,
    pub n: i64,
    /// `Err` carries the domain-error reason for this grid point.
    pub h: std::result::Result<f64, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HKSummary {
    pub k: f64,
    /// `max_n h - min_n h` over valid points.
    pub variation: f64,
    /// Central differences `(h(n+1) - h(n-1))/2` at interior points with both neighbours valid.
    pub slopes: Vec<(i64, f64)>,
    pub domain_errors: usize,
}

impl HKSummary {
    pub fn min_abs_slope(&self) -> f64 {
        self.slopes.iter().map(|s| s.1.abs()).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_slope(&self) -> f64 {
        self.slopes.iter().map(|s| s.1.abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HScanResult {
    pub qprime: f64,
    pub nu: f64,
    /// Ordered by `(k, n)`.
    pub rows: Vec<HRow>,
    pub per_k: Vec<HKSummary>,
}

impl HScanResult {
    pub fn summary(&self, k: f64) -> Option<&HKSummary> {
        self.per_k.iter().find(|s| (s.k - k).abs() < 1e-12)
    }
}

/// Inclusive grid `min, min + step, ..., max` snapped to 12 decimals so that
/// points such as `k = 0` are exact.
pub fn uniform_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(max >= min) || !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidParams(format!("bad grid [{min}, {max}] step {step}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| ((min + i as f64 * step) * 1e12).round() / 1e12).collect())
}

/// Reference h-scan parameters: `q' = 1.5`, `nu = 0.5`, `-0.6 <= k <= 1.5` step 0.1, `n <= 20`.
pub fn h_scan_defaults() -> (f64, Vec<f64>, f64, i64) {
    (1.5, uniform_grid(-0.6, 1.5, 0.1).expect("static grid"), 0.5, 20)
}

/// Evaluates `h` on `k_grid x [0, n_max]`.
pub fn h_scan(qprime: f64, k_grid: &[f64], nu: f64, n_max: i64) -> Result<HScanResult> {
    crate::bracket::check_base(qprime, "qprime")?;
    if n_max < 0 {
        return Err(Error::InvalidParams(format!("n_max must be >= 0 (got {n_max})")));
    }
    let mut rows = Vec::new();
    let mut per_k = Vec::new();
    for &k in k_grid {
        let hs: Vec<_> = (0..=n_max)
            .map(|n| h_function(n as f64, qprime, k, nu).map_err(|e| e.to_string()))
            .collect();
        let valid: Vec<f64> = hs.iter().filter_map(|h| h.as_ref().ok().copied()).collect();
        let variation = if valid.is_empty() {
            0.0
        } else {
            valid.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                - valid.iter().copied().fold(f64::INFINITY, f64::min)
        };
        let slopes = (1..n_max)
            .filter_map(|n| {
                let (lo, hi) = (&hs[(n - 1) as usize], &hs[(n + 1) as usize]);
                match (lo, hi) {
                    (Ok(l), Ok(h)) => Some((n, (h - l) / 2.0)),
                    _ => None,
                }
            })
            .collect();
        per_k.push(HKSummary {
            k,
            variation,
            slopes,
            domain_errors: hs.iter().filter(|h| h.is_err()).count(),
        });
        rows.extend(hs.into_iter().enumerate().map(|(n, h)| HRow { k, n: n as i64, h }));
    }
    Ok(HScanResult { qprime, nu, rows, per_k })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DressingSolverReport {
    /// Would-be dressing constant `Q(n) = exp h(n)` per window state.
    pub q_values: Vec<f64>,
    /// `max Q - min Q`; zero certifies a Macfarlane-Biedenharn dressing exists.
    pub spread: f64,
    /// `f(N) = Q^{-N/2}` on the window with `Q` taken at the first state.
    pub f_values: Vec<f64>,
}

/// Solves for the constant `Q` of the ansatz `B = Q^{-N/2} a` state by state.
pub fn dressing_solver_demo(qprime: f64, k: f64, nu: f64, window: Window) -> Result<DressingSolverReport> {
    let q_values = window
        .states()
        .map(|n| h_function(n as f64, qprime, k, nu).map(f64::exp))
        .collect::<Result<Vec<_>>>()?;
    let hi = q_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = q_values.iter().copied().fold(f64::INFINITY, f64::min);
    let q0 = q_values.first().copied().unwrap_or(f64::NAN);
    let f_values = window.states().map(|n| q0.powf(-(n as f64 + nu) / 2.0)).collect();
    Ok(DressingSolverReport { spread: hi - lo, q_values, f_values })
}
