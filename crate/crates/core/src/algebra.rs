//! Oscillator families, their defining relations, and Casimir checks.
//!
//! Each family is a declarative list of [`Relation`]s: pairs of operator
//! words whose difference must vanish in every representation. Verification
//! instantiates both sides on a concrete [`Triple`] and reports the largest
//! amplitude of `(lhs - rhs)|n>` over a window of basis states.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::bracket::{check_base, delta_bracket, gen_bracket, std_bracket, DeformParams};
use crate::error::{Error, Result};
use crate::fock::{fock_ops, FockRep, Triple};
use crate::ladder::{func_of_n, nan_max, LadderOperator, Window};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    MacfarlaneBiedenharn,
    ArikCoon,
    ChaturvediSrinivasan,
    ChakrabartiJagannathan,
    GenMB,
    HongYan,
    GenOsc,
    GenArikCoon,
    SuQ2Gen,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 9] = [
        FamilyTag::MacfarlaneBiedenharn,
        FamilyTag::ArikCoon,
        FamilyTag::ChaturvediSrinivasan,
        FamilyTag::ChakrabartiJagannathan,
        FamilyTag::GenMB,
        FamilyTag::HongYan,
        FamilyTag::GenOsc,
        FamilyTag::GenArikCoon,
        FamilyTag::SuQ2Gen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::MacfarlaneBiedenharn => "mb",
            FamilyTag::ArikCoon => "arik-coon",
            FamilyTag::ChaturvediSrinivasan => "chaturvedi-srinivasan",
            FamilyTag::ChakrabartiJagannathan => "chakrabarti-jagannathan",
            FamilyTag::GenMB => "gen-mb",
            FamilyTag::HongYan => "hong-yan",
            FamilyTag::GenOsc => "gen-osc",
            FamilyTag::GenArikCoon => "gen-arik-coon",
            FamilyTag::SuQ2Gen => "suq2-gen",
        }
    }

    /// Where the family sits in the (alpha, beta) plane.
    pub fn chart_location(self) -> &'static str {
        match self {
            FamilyTag::MacfarlaneBiedenharn => "gen-mb at alpha = 1, beta = -1; gen-osc on the axes alpha = 0 or beta = 0 after dressing",
            FamilyTag::ArikCoon => "gen-mb at alpha = 1, beta = 0",
            FamilyTag::ChaturvediSrinivasan => "gen-mb at alpha = 0, beta = -1",
            FamilyTag::ChakrabartiJagannathan => "gen-mb with q^alpha = q1, q^beta = 1/q2",
            FamilyTag::GenMB => "whole plane; equivalent to mb(q^((alpha-beta)/2))",
            FamilyTag::HongYan => "gen-osc on the anti-diagonal alpha + beta = 0 (k = -1)",
            FamilyTag::GenOsc => "whole plane; k = beta/alpha labels inequivalent algebras",
            FamilyTag::GenArikCoon => "gen-osc on the diagonal alpha = beta (k = 1) after dressing",
            FamilyTag::SuQ2Gen => "two-parameter su_q(2) analogue; Hopf-compatible only for alpha + beta = 0",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown family '{s}'")))
    }
}

/// An oscillator family with concrete parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgebraFamily {
    MacfarlaneBiedenharn { q: f64 },
    ArikCoon { q: f64 },
    ChaturvediSrinivasan { q: f64 },
    ChakrabartiJagannathan { q1: f64, q2: f64 },
    GenMB(DeformParams),
    HongYan { q: f64 },
    GenOsc(DeformParams),
    GenArikCoon { q: f64, alpha: f64 },
    SuQ2Gen(DeformParams),
}

/// How `a^dagger a` depends on the Casimir constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// `lambda = [x]_{alpha,beta} + c`
    Oscillator,
    /// `lambda = [x]_{alpha,beta} + c q^{alpha x}`
    MacfarlaneBiedenharn,
    /// `lambda = x + c q^{-alpha (x - 1)}`
    ArikCoonDressed,
    /// prefix sums of `-[2(m + mu)]_{alpha,beta}`
    SuQ2LowestWeight,
}

impl AlgebraFamily {
    pub fn mb(q: f64) -> Result<Self> {
        check_base(q, "q")?;
        Ok(Self::MacfarlaneBiedenharn { q })
    }

    pub fn arik_coon(q: f64) -> Result<Self> {
        check_base(q, "q")?;
        Ok(Self::ArikCoon { q })
    }

    pub fn chaturvedi_srinivasan(q: f64) -> Result<Self> {
        check_base(q, "q")?;
        Ok(Self::ChaturvediSrinivasan { q })
    }

    pub fn chakrabarti_jagannathan(q1: f64, q2: f64) -> Result<Self> {
        for (v, name) in [(q1, "q1"), (q2, "q2")] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be a positive real (got {v})")));
            }
        }
        Ok(Self::ChakrabartiJagannathan { q1, q2 })
    }

    pub fn gen_mb(q: f64, alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self::GenMB(DeformParams::new(q, alpha, beta)?))
    }

    pub fn hong_yan(q: f64) -> Result<Self> {
        check_base(q, "q")?;
        Ok(Self::HongYan { q })
    }

    pub fn gen_osc(q: f64, alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self::GenOsc(DeformParams::new(q, alpha, beta)?))
    }

    pub fn gen_arik_coon(q: f64, alpha: f64) -> Result<Self> {
        DeformParams::new(q, alpha, alpha)?;
        Ok(Self::GenArikCoon { q, alpha })
    }

    pub fn suq2_gen(q: f64, alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self::SuQ2Gen(DeformParams::new(q, alpha, beta)?))
    }

    pub fn tag(&self) -> FamilyTag {
        match self {
            Self::MacfarlaneBiedenharn { .. } => FamilyTag::MacfarlaneBiedenharn,
            Self::ArikCoon { .. } => FamilyTag::ArikCoon,
            Self::ChaturvediSrinivasan { .. } => FamilyTag::ChaturvediSrinivasan,
            Self::ChakrabartiJagannathan { .. } => FamilyTag::ChakrabartiJagannathan,
            Self::GenMB(_) => FamilyTag::GenMB,
            Self::HongYan { .. } => FamilyTag::HongYan,
            Self::GenOsc(_) => FamilyTag::GenOsc,
            Self::GenArikCoon { .. } => FamilyTag::GenArikCoon,
            Self::SuQ2Gen(_) => FamilyTag::SuQ2Gen,
        }
    }

    /// The family's relations expressed through a single `(q, alpha, beta)` triple.
    pub fn deform_params(&self) -> DeformParams {
        let p = |q, a, b| DeformParams::new(q, a, b).expect("validated at construction");
        match *self {
            Self::MacfarlaneBiedenharn { q } | Self::HongYan { q } => p(q, 1.0, -1.0),
            Self::ArikCoon { q } => p(q, 1.0, 0.0),
            Self::ChaturvediSrinivasan { q } => p(q, 0.0, -1.0),
            // base e: q^alpha = q1, q^beta = 1/q2
            Self::ChakrabartiJagannathan { q1, q2 } => p(std::f64::consts::E, q1.ln(), -q2.ln()),
            Self::GenMB(d) | Self::GenOsc(d) | Self::SuQ2Gen(d) => d,
            Self::GenArikCoon { q, alpha } => p(q, alpha, alpha),
        }
    }

    pub fn spectrum_kind(&self) -> SpectrumKind {
        match self.tag() {
            FamilyTag::HongYan | FamilyTag::GenOsc => SpectrumKind::Oscillator,
            FamilyTag::GenArikCoon => SpectrumKind::ArikCoonDressed,
            FamilyTag::SuQ2Gen => SpectrumKind::SuQ2LowestWeight,
            _ => SpectrumKind::MacfarlaneBiedenharn,
        }
    }

    /// Named parameters, for reports.
    pub fn param_list(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Self::MacfarlaneBiedenharn { q }
            | Self::ArikCoon { q }
            | Self::ChaturvediSrinivasan { q }
            | Self::HongYan { q } => vec![("q", q)],
            Self::ChakrabartiJagannathan { q1, q2 } => vec![("q1", q1), ("q2", q2)],
            Self::GenMB(d) | Self::GenOsc(d) | Self::SuQ2Gen(d) => {
                vec![("q", d.q()), ("alpha", d.alpha()), ("beta", d.beta())]
            }
            Self::GenArikCoon { q, alpha } => vec![("q", q), ("alpha", alpha)],
        }
    }
}

/// Scalar function of the number operator, with a printable label.
#[derive(Clone)]
pub struct NFn {
    pub label: String,
    pub f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl NFn {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { label: label.into(), f: Arc::new(f) }
    }
}

impl fmt::Debug for NFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NFn({})", self.label)
    }
}

/// Operator-word template over the generators.
#[derive(Clone, Debug)]
pub enum Word {
    A,
    Adag,
    N,
    FnN(NFn),
    Scalar(f64),
    Prod(Vec<Word>),
    Sum(Vec<(f64, Word)>),
    Comm(Box<Word>, Box<Word>),
}

impl Word {
    pub fn prod(words: impl IntoIterator<Item = Word>) -> Self {
        Word::Prod(words.into_iter().collect())
    }

    pub fn comm(a: Word, b: Word) -> Self {
        Word::Comm(Box::new(a), Box::new(b))
    }

    pub fn fn_n(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Word::FnN(NFn::new(label, f))
    }

    pub fn instantiate(&self, t: &Triple) -> LadderOperator {
        match self {
            Word::A => t.a.clone(),
            Word::Adag => t.adag.clone(),
            Word::N => t.n_op.clone(),
            Word::FnN(g) => {
                let f = g.f.clone();
                func_of_n(move |x| f(x), t.nu)
            }
            Word::Scalar(c) => LadderOperator::scalar(Complex64::new(*c, 0.0)),
            Word::Prod(ws) => ws
                .iter()
                .fold(LadderOperator::identity(), |acc, w| acc.compose(&w.instantiate(t))),
            Word::Sum(terms) => terms.iter().fold(LadderOperator::zero(), |acc, (c, w)| {
                acc.add(&w.instantiate(t).scale(Complex64::new(*c, 0.0)))
            }),
            Word::Comm(a, b) => a.instantiate(t).commutator(&b.instantiate(t)),
        }
    }

    /// Individual product terms of the word, before any cancellation between them.
    pub fn expand(&self, t: &Triple) -> Vec<LadderOperator> {
        match self {
            Word::Sum(terms) => terms
                .iter()
                .flat_map(|(c, w)| {
                    let c = Complex64::new(*c, 0.0);
                    w.expand(t).into_iter().map(move |o| o.scale(c))
                })
                .collect(),
            Word::Comm(a, b) => {
                let (xs, ys) = (a.expand(t), b.expand(t));
                let mut out = Vec::with_capacity(2 * xs.len() * ys.len());
                for x in &xs {
                    for y in &ys {
                        out.push(x.compose(y));
                        out.push(y.compose(x));
                    }
                }
                out
            }
            Word::Prod(ws) => ws.iter().fold(vec![LadderOperator::identity()], |acc, w| {
                let parts = w.expand(t);
                acc.iter().flat_map(|l| parts.iter().map(move |r| l.compose(r))).collect()
            }),
            _ => vec![self.instantiate(t)],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    /// Human-readable form of the relation.
    pub equation: String,
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    fn new(name: &str, equation: impl Into<String>, lhs: Word, rhs: Word) -> Self {
        Self { name: name.into(), equation: equation.into(), lhs, rhs }
    }

    /// `lhs - rhs` on the given representation.
    pub fn defect(&self, t: &Triple) -> LadderOperator {
        self.lhs.instantiate(t).sub(&self.rhs.instantiate(t))
    }
}

/// `a a^dagger - coeff a^dagger a`
fn deformed_product(coeff: f64) -> Word {
    Word::Sum(vec![
        (1.0, Word::prod([Word::A, Word::Adag])),
        (-coeff, Word::prod([Word::Adag, Word::A])),
    ])
}

fn number_relations(raise: &str, lower: &str, n: &str) -> [Relation; 2] {
    [
        Relation::new(
            "number-raising",
            format!("[{n}, {raise}] = {raise}"),
            Word::comm(Word::N, Word::Adag),
            Word::Adag,
        ),
        Relation::new(
            "number-lowering",
            format!("[{n}, {lower}] = -{lower}"),
            Word::comm(Word::N, Word::A),
            Word::Sum(vec![(-1.0, Word::A)]),
        ),
    ]
}

/// Defining relations of `family`.
pub fn relations_for(family: &AlgebraFamily) -> Vec<Relation> {
    if let AlgebraFamily::SuQ2Gen(p) = *family {
        let mut rels = number_relations("J+", "J-", "J0").to_vec();
        rels.push(Relation::new(
            "raising-lowering",
            "[J+, J-] = [2 J0]_{alpha,beta}",
            Word::comm(Word::Adag, Word::A),
            Word::fn_n("[2N]_{alpha,beta}", move |x| gen_bracket(2.0 * x, &p).value),
        ));
        return rels;
    }

    let mut rels = number_relations("a^dagger", "a", "N").to_vec();
    let third = match *family {
        AlgebraFamily::MacfarlaneBiedenharn { q } => Relation::new(
            "deformed-product",
            "a a^dagger - q a^dagger a = q^{-N}",
            deformed_product(q),
            Word::fn_n("q^{-N}", move |x| q.powf(-x)),
        ),
        AlgebraFamily::ArikCoon { q } => Relation::new(
            "deformed-product",
            "a a^dagger - q a^dagger a = 1",
            deformed_product(q),
            Word::Scalar(1.0),
        ),
        AlgebraFamily::ChaturvediSrinivasan { q } => Relation::new(
            "deformed-product",
            "a a^dagger - a^dagger a = q^{-N}",
            deformed_product(1.0),
            Word::fn_n("q^{-N}", move |x| q.powf(-x)),
        ),
        AlgebraFamily::ChakrabartiJagannathan { q1, q2 } => Relation::new(
            "deformed-product",
            "a a^dagger - q1 a^dagger a = q2^{-N}",
            deformed_product(q1),
            Word::fn_n("q2^{-N}", move |x| q2.powf(-x)),
        ),
        AlgebraFamily::GenMB(p) => {
            let l = p.ln_q();
            Relation::new(
                "deformed-product",
                "a a^dagger - q^alpha a^dagger a = q^{beta N}",
                deformed_product((p.alpha() * l).exp()),
                Word::fn_n("q^{beta N}", move |x| (p.beta() * x * l).exp()),
            )
        }
        AlgebraFamily::HongYan { q } => Relation::new(
            "commutator",
            "[a, a^dagger] = [N+1] - [N]",
            Word::comm(Word::A, Word::Adag),
            Word::fn_n("[N+1]-[N]", move |x| {
                std_bracket(x + 1.0, q).expect("validated base") - std_bracket(x, q).expect("validated base")
            }),
        ),
        AlgebraFamily::GenOsc(p) => Relation::new(
            "commutator",
            "[a, a^dagger] = [N+1]_{alpha,beta} - [N]_{alpha,beta}",
            Word::comm(Word::A, Word::Adag),
            Word::fn_n("[N+1]_{alpha,beta}-[N]_{alpha,beta}", move |x| delta_bracket(x, &p)),
        ),
        AlgebraFamily::GenArikCoon { q, alpha } => {
            let q2 = q.powf(-alpha);
            Relation::new(
                "deformed-product",
                "A A^dagger - q'' A^dagger A = 1 + N (1 - q''), q'' = q^{-alpha}",
                deformed_product(q2),
                Word::fn_n("1 + N(1-q'')", move |x| 1.0 + x * (1.0 - q2)),
            )
        }
        AlgebraFamily::SuQ2Gen(_) => unreachable!("handled above"),
    };
    rels.push(third);
    rels
}

/// Largest amplitude of `op|n>` over the window.
pub fn window_residual(op: &LadderOperator, window: Window) -> f64 {
    window.states().map(|n| op.max_amplitude(n)).fold(0.0, nan_max)
}

/// Largest amplitude of any of `terms` over the window.
pub fn window_scale(terms: &[LadderOperator], window: Window) -> f64 {
    terms.iter().map(|o| window_residual(o, window)).fold(0.0, nan_max)
}

/// `residual <= tolerance * max(1, scale)`: absolute below unit scale, relative above it.
///
/// Amplitudes of the individual terms reach `q^{2 |alpha| n}`, so the double
/// precision floor of a cancelling difference is `eps * scale`.
pub fn within_tolerance(residual: f64, scale: f64, tolerance: f64) -> bool {
    residual <= tolerance * scale.max(1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationResidual {
    pub name: String,
    pub equation: String,
    /// `max_n max |(lhs - rhs)|n>|`.
    pub max_residual: f64,
    /// Largest amplitude among the individual terms of the relation.
    pub scale: f64,
    pub pass: bool,
}

impl RelationResidual {
    pub fn scaled_residual(&self) -> f64 {
        self.max_residual / self.scale.max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub family: FamilyTag,
    pub params: Vec<(&'static str, f64)>,
    pub window: Window,
    pub tolerance: f64,
    pub relations: Vec<RelationResidual>,
    pub pass: bool,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.relations.iter().map(|r| r.max_residual).fold(0.0, nan_max)
    }

    pub fn max_scaled_residual(&self) -> f64 {
        self.relations.iter().map(|r| r.scaled_residual()).fold(0.0, nan_max)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.relations.iter().find(|r| r.name == name).map(|r| r.max_residual)
    }
}

/// Checks every defining relation of `family` on `triple`.
pub fn verify(family: &AlgebraFamily, triple: &Triple, window: Window, tolerance: f64) -> ResidualReport {
    let relations: Vec<_> = relations_for(family)
        .into_iter()
        .map(|rel| {
            let r = window_residual(&rel.defect(triple), window);
            let mut terms = rel.lhs.expand(triple);
            terms.extend(rel.rhs.expand(triple));
            let scale = window_scale(&terms, window);
            RelationResidual {
                pass: within_tolerance(r, scale, tolerance),
                name: rel.name,
                equation: rel.equation,
                max_residual: r,
                scale,
            }
        })
        .collect();
    ResidualReport {
        family: family.tag(),
        params: family.param_list(),
        window,
        tolerance,
        pass: relations.iter().all(|r| r.pass),
        relations,
    }
}

/// Builds the Fock triple of `rep` and verifies it on `rep.window`.
pub fn verify_rep(rep: &FockRep, tolerance: f64) -> Result<ResidualReport> {
    let t = fock_ops(rep)?;
    Ok(verify(&rep.family, &t, rep.window, tolerance))
}

/// Casimir element of the family as an operator word, when one is known.
///
/// Macfarlane-Biedenharn type: `q^{-alpha N}(a^dagger a - [N]_{alpha,beta})`;
/// Hong Yan: `a^dagger a - [N]`; general oscillator:
/// `q^{(alpha+beta)/2}(a^dagger a - [N]_{alpha,beta})` with a constant prefactor.
pub fn casimir_word(family: &AlgebraFamily) -> Option<Word> {
    let p = family.deform_params();
    let core = |label: &str| {
        Word::Sum(vec![
            (1.0, Word::prod([Word::Adag, Word::A])),
            (-1.0, Word::fn_n(label, move |x| gen_bracket(x, &p).value)),
        ])
    };
    match family.tag() {
        FamilyTag::MacfarlaneBiedenharn
        | FamilyTag::ArikCoon
        | FamilyTag::ChaturvediSrinivasan
        | FamilyTag::ChakrabartiJagannathan
        | FamilyTag::GenMB => {
            let l = p.ln_q();
            Some(Word::prod([
                Word::fn_n("q^{-alpha N}", move |x| (-p.alpha() * x * l).exp()),
                core("[N]_{alpha,beta}"),
            ]))
        }
        FamilyTag::HongYan => Some(core("[N]")),
        FamilyTag::GenOsc => {
            let pre = (0.5 * (p.alpha() + p.beta()) * p.ln_q()).exp();
            Some(Word::prod([Word::Scalar(pre), core("[N]_{alpha,beta}")]))
        }
        FamilyTag::GenArikCoon | FamilyTag::SuQ2Gen => None,
    }
}

pub fn casimir_op(family: &AlgebraFamily, triple: &Triple) -> Option<LadderOperator> {
    casimir_word(family).map(|w| w.instantiate(triple))
}

/// `max |[C, g]|n>|` over `g in {a, a^dagger, N}` and the window.
pub fn centrality_residual(casimir: &LadderOperator, triple: &Triple, window: Window) -> f64 {
    triple
        .generators()
        .iter()
        .map(|g| window_residual(&casimir.commutator(g), window))
        .fold(0.0, nan_max)
}

/// Largest amplitude of `T g` and `g T` over the expanded terms `T` of the Casimir word.
pub fn centrality_scale(casimir: &Word, triple: &Triple, window: Window) -> f64 {
    let terms = casimir.expand(triple);
    let products: Vec<_> = triple
        .generators()
        .iter()
        .flat_map(|g| terms.iter().flat_map(move |t| [t.compose(g), g.compose(t)]))
        .collect();
    window_scale(&products, window)
}

/// Diagonal entries `<n|C|n>` (real parts) over the window.
pub fn casimir_eigenvalue_profile(casimir: &LadderOperator, window: Window) -> Vec<f64> {
    window
        .states()
        .map(|n| {
            casimir
                .apply(n)
                .into_iter()
                .find(|(m, _)| *m == n)
                .map_or(0.0, |(_, amp)| amp.re)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CasimirReport {
    pub eigenvalues: Vec<f64>,
    pub centrality_residual: f64,
    /// Term scale for the centrality residual.
    pub centrality_scale: f64,
    /// `max - min` of the eigenvalue profile.
    pub spread: f64,
    /// Largest diagonal amplitude among the expanded Casimir terms.
    pub eigenvalue_scale: f64,
}

impl CasimirReport {
    pub fn pass(&self, tolerance: f64) -> bool {
        within_tolerance(self.centrality_residual, self.centrality_scale, tolerance)
            && within_tolerance(self.spread, self.eigenvalue_scale, tolerance)
    }
}

pub fn casimir_report(rep: &FockRep) -> Result<Option<CasimirReport>> {
    let t = fock_ops(rep)?;
    let Some(word) = casimir_word(&rep.family) else {
        return Ok(None);
    };
    let c = word.instantiate(&t);
    let eigenvalues = casimir_eigenvalue_profile(&c, rep.window);
    let hi = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, nan_max);
    let lo = eigenvalues.iter().copied().map(|v| -v).fold(f64::NEG_INFINITY, nan_max);
    Ok(Some(CasimirReport {
        centrality_residual: centrality_residual(&c, &t, rep.window),
        centrality_scale: centrality_scale(&word, &t, rep.window),
        spread: hi + lo,
        eigenvalue_scale: window_scale(&word.expand(&t), rep.window),
        eigenvalues,
    }))
}
