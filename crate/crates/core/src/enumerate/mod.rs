//! Conjugacy classes of tracefree representations of a Montesinos link.
//!
//! Every class has a unique representative with `X_1 = A(1)`; the five
//! [`Case`]s follow the classification by reducibility and by
//! `-tr_h = a + 1/a`. Discrete parameters are enumerated exactly, the
//! continuous ones (`a` in case (iv), the `lambda`s in case (iii)) are
//! sampled, and every representative is checked crossing by crossing with
//! [`crate::verify`].

mod cases;
mod chain;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::mat2::{Mat2, Mat2Error, SVariant, C64};
use crate::montesinos::MontesinosSpec;
use crate::rational::{Fraction, RationalError};
use crate::tangle::{build_montesinos_diagram, EndMatrices, TangleError};
use crate::tol;
use crate::verify::{VerificationReport, VerifyError};

pub use cases::{
    binary_tuples, closure_sign, default_a_samples, enumerate_abelian,
    enumerate_binary_irreducible, enumerate_mu_nonzero, enumerate_mu_zero,
    enumerate_reducible_nonabelian, enumerate_tuples_mu_nonzero, enumerate_tuples_mu_zero,
    s_binary, s_mu_nonzero, s_mu_zero, sign_tuples, MuNonzeroTuple, MuZeroTuple, MAX_TUPLES,
};
pub use chain::{
    build_binary, build_chain, build_representation, de_decompose, recover_y, BinaryChain, Chain,
    TransferMode,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnumError {
    #[error("wrong case for this link: {0}")]
    UsedWrongCase(&'static str),
    #[error("closure violated (residual {0:e})")]
    ClosureViolation(f64),
    #[error("bracket vanishes (|{{k}}_s| = {0:e})")]
    SingularBracket(f64),
    #[error("no solution of the closure equation")]
    NoSolution,
    #[error("degenerate parameters for the D-E decomposition")]
    DegenerateParameters,
    #[error("pair (X_l, X_l+1) is not regular at tangle {0}")]
    NonRegular(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("parameter space too large ({0} tuples)")]
    TooManyTuples(u128),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Matrix(#[from] Mat2Error),
    #[error(transparent)]
    Rational(#[from] RationalError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// The five cases of the classification, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    /// (i) abelian
    Abelian,
    /// (ii) reducible, non-abelian
    ReducibleNonabelian,
    /// (iii) irreducible with `a = +-1`
    IrreducibleBinary,
    /// (iv) irreducible, `mu = 0`, `a != +-1`
    IrreducibleMuZero,
    /// (v) irreducible, `mu != 0`, `a != +-1`
    IrreducibleMuNonzero,
}

impl Case {
    pub const ALL: [Case; 5] = [
        Case::Abelian,
        Case::ReducibleNonabelian,
        Case::IrreducibleBinary,
        Case::IrreducibleMuZero,
        Case::IrreducibleMuNonzero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Case::Abelian => "abelian",
            Case::ReducibleNonabelian => "reducible_nonabelian",
            Case::IrreducibleBinary => "irreducible_binary",
            Case::IrreducibleMuZero => "irreducible_mu0",
            Case::IrreducibleMuNonzero => "irreducible_muN",
        }
    }

    pub fn roman(self) -> &'static str {
        match self {
            Case::Abelian => "i",
            Case::ReducibleNonabelian => "ii",
            Case::IrreducibleBinary => "iii",
            Case::IrreducibleMuZero => "iv",
            Case::IrreducibleMuNonzero => "v",
        }
    }

    /// Accepts the roman numeral or the name.
    pub fn parse(text: &str) -> Option<Case> {
        Case::ALL
            .into_iter()
            .find(|c| c.roman() == text || c.name() == text)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The parameters identifying a class within its case.
#[derive(Clone, Debug, PartialEq)]
pub enum Params {
    /// Case (i): `(a, s_1..s_r)` in `{+-1}^{r+1}`.
    Signs { a: i8, s: Vec<i8> },
    /// Case (ii): signs plus the choice `Y_1 in {S_{s_1}, S'_{s_1}}`.
    Reducible {
        a: i8,
        s: Vec<i8>,
        variant: SVariant,
    },
    /// Case (iii): `a`, the phases `n_l` of `s_l`, and one sample of the
    /// free `lambda`s.
    Binary {
        a: i8,
        n_list: Vec<i64>,
        sample: usize,
        free: Vec<C64>,
        lambdas: Vec<C64>,
        b: Vec<C64>,
    },
    /// Case (iv): `(n, n_1..n_r)` and the sampled `a`.
    MuZero {
        n: i64,
        n_list: Vec<i64>,
        sample: usize,
    },
    /// Case (v): `(n, n_1..n_r)` and `theta / pi`.
    MuNonzero {
        n: i64,
        n_list: Vec<i64>,
        theta_over_pi: Fraction,
    },
}

impl Params {
    /// Discrete tuple and sample index, the ordering key within a case.
    pub fn key(&self) -> (Vec<i64>, usize) {
        fn signs(a: i8, s: &[i8]) -> Vec<i64> {
            let mut k = alloc::vec![a as i64];
            k.extend(s.iter().map(|&x| x as i64));
            k
        }
        match self {
            Params::Signs { a, s } => (signs(*a, s), 0),
            Params::Reducible { a, s, variant } => {
                let mut k = signs(*a, s);
                k.push(match variant {
                    SVariant::Primary => 0,
                    SVariant::Transposed => 1,
                });
                (k, 0)
            }
            Params::Binary {
                a, n_list, sample, ..
            } => {
                let mut k = alloc::vec![*a as i64];
                k.extend_from_slice(n_list);
                (k, *sample)
            }
            Params::MuZero { n, n_list, sample } => {
                let mut k = alloc::vec![*n];
                k.extend_from_slice(n_list);
                (k, *sample)
            }
            Params::MuNonzero { n, n_list, .. } => {
                let mut k = alloc::vec![*n];
                k.extend_from_slice(n_list);
                (k, 0)
            }
        }
    }
}

/// One enumerated conjugacy class with its explicit representative.
#[derive(Clone, Debug, PartialEq)]
pub struct RepClass {
    pub case: Case,
    pub params: Params,
    pub a: C64,
    pub s: Vec<C64>,
    pub x: Vec<Mat2>,
    pub y: Vec<Mat2>,
    pub ends: Vec<EndMatrices>,
    pub character: Vec<C64>,
    pub closure_residual: f64,
    pub report: VerificationReport,
}

impl RepClass {
    /// Largest crossing-level verification residual.
    pub fn residual(&self) -> f64 {
        self.report.max_residual()
    }

    pub fn verified(&self) -> bool {
        self.report.pass
    }

    /// `(case, tuple, sample)`, the output order.
    pub fn sort_key(&self) -> (Case, Vec<i64>, usize) {
        let (k, i) = self.params.key();
        (self.case, k, i)
    }
}

/// Traces of the fixed words `X_l X_{l+1}` (cyclically), `X_l Y_l` and
/// `X_1 Y_1 X_2`.
pub fn character_vector(x: &[Mat2], y: &[Mat2]) -> Vec<C64> {
    let r = x.len();
    let mut out = Vec::with_capacity(2 * r + 1);
    for l in 0..r {
        out.push((x[l] * x[(l + 1) % r]).trace());
    }
    for l in 0..r {
        out.push((x[l] * y[l]).trace());
    }
    if r > 0 {
        out.push((x[0] * y[0] * x[1 % r]).trace());
    }
    out
}

fn characters_agree(u: &[C64], v: &[C64]) -> bool {
    u.len() == v.len()
        && u.iter()
            .zip(v)
            .all(|(a, b)| (a - b).norm() <= tol::VERIFY * a.norm().max(1.0))
}

/// Non-fatal events during enumeration.
#[derive(Clone, Debug, PartialEq)]
pub enum Warning {
    /// A tuple or sample produced no representative.
    Skipped {
        case: Case,
        key: Vec<i64>,
        sample: Option<usize>,
        reason: String,
    },
    /// Two classes of the same case with equal character vectors
    /// (indices into the sorted class list).
    SuspectedConjugate {
        case: Case,
        first: usize,
        second: usize,
    },
    /// A class dropped by character deduplication.
    Merged {
        case: Case,
        kept: Vec<i64>,
        dropped: Vec<i64>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnumOptions {
    pub cases: Vec<Case>,
    pub tol: f64,
    /// Values of `a` for case (iv).
    pub a_samples: Vec<C64>,
    /// Samples of `lambda_1..lambda_{r-2}` for case (iii).
    pub lambda_samples: Vec<Vec<C64>>,
    pub dedupe_characters: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            cases: Case::ALL.to_vec(),
            tol: tol::VERIFY,
            a_samples: default_a_samples(),
            lambda_samples: Vec::new(),
            dedupe_characters: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    pub classes: Vec<RepClass>,
    pub warnings: Vec<Warning>,
}

impl Enumeration {
    pub fn count(&self, case: Case) -> usize {
        self.classes.iter().filter(|c| c.case == case).count()
    }

    pub fn all_verified(&self) -> bool {
        self.classes.iter().all(RepClass::verified)
    }
}

/// Runs the requested cases, sorts the classes by `(case, tuple, sample)`
/// and compares character vectors within each case.
pub fn enumerate_all(spec: &MontesinosSpec, opts: &EnumOptions) -> Result<Enumeration, EnumError> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(EnumError::InvalidParameter("tolerance must be positive"));
    }
    let diagram = build_montesinos_diagram(spec);
    let mut classes = Vec::new();
    let mut warnings = Vec::new();
    let wants = |c: Case| opts.cases.contains(&c);

    if wants(Case::Abelian) {
        classes.extend(cases::abelian(spec, &diagram, opts.tol)?);
    }
    if wants(Case::ReducibleNonabelian) {
        classes.extend(cases::reducible(spec, &diagram, opts.tol)?);
    }
    if wants(Case::IrreducibleBinary) {
        for a in [1i8, -1] {
            let (c, w) = cases::binary(spec, &diagram, a, &opts.lambda_samples, opts.tol)?;
            classes.extend(c);
            warnings.extend(w);
        }
    }
    if wants(Case::IrreducibleMuZero) && spec.mu_is_zero() {
        let (c, w) = cases::mu_zero(spec, &diagram, &opts.a_samples, opts.tol)?;
        classes.extend(c);
        warnings.extend(w);
    }
    if wants(Case::IrreducibleMuNonzero) && !spec.mu_is_zero() {
        let (c, w) = cases::mu_nonzero(spec, &diagram, opts.tol)?;
        classes.extend(c);
        warnings.extend(w);
    }

    classes.sort_by_key(RepClass::sort_key);

    let mut kept: Vec<RepClass> = Vec::with_capacity(classes.len());
    for class in classes {
        let twin = kept
            .iter()
            .position(|k| k.case == class.case && characters_agree(&k.character, &class.character));
        match twin {
            Some(i) if opts.dedupe_characters => warnings.push(Warning::Merged {
                case: class.case,
                kept: kept[i].params.key().0,
                dropped: class.params.key().0,
            }),
            Some(i) => {
                warnings.push(Warning::SuspectedConjugate {
                    case: class.case,
                    first: i,
                    second: kept.len(),
                });
                kept.push(class);
            }
            None => kept.push(class),
        }
    }
    Ok(Enumeration {
        classes: kept,
        warnings,
    })
}
