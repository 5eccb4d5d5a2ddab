//! The versioned JSON schema. Complex numbers are `[re, im]`, matrices are
//! `[[a, b], [c, d]]` of complex numbers. Non-finite reals become `null`.

use montrep_core::enumerate::{Enumeration, Params, RepClass, Warning};
use montrep_core::mat2::SVariant;
use montrep_core::tangle::EndMatrices;
use montrep_core::verify::VerificationReport;
use montrep_core::{Mat2, MontesinosSpec, C64};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cx(pub [f64; 2]);

impl From<C64> for Cx {
    fn from(z: C64) -> Self {
        Cx([z.re, z.im])
    }
}

impl From<Cx> for C64 {
    fn from(z: Cx) -> Self {
        C64::new(z.0[0], z.0[1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mx(pub [[Cx; 2]; 2]);

impl From<Mat2> for Mx {
    fn from(m: Mat2) -> Self {
        let [a, b, c, d] = m.0;
        Mx([[a.into(), b.into()], [c.into(), d.into()]])
    }
}

impl From<Mx> for Mat2 {
    fn from(m: Mx) -> Self {
        let [[a, b], [c, d]] = m.0;
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub spec: String,
    /// `[p, q]` per tangle, canonical signs.
    pub fractions: Vec<[i64; 2]>,
    pub components: usize,
    pub crossings: u64,
}

impl Link {
    pub fn new(spec: &MontesinosSpec, components: usize) -> Self {
        Link {
            spec: spec.to_string(),
            fractions: spec
                .fractions()
                .iter()
                .map(|f| [f.numer(), f.denom()])
                .collect(),
            components,
            crossings: spec.crossing_count(),
        }
    }
}

pub fn mu_string(spec: &MontesinosSpec) -> String {
    let mu = spec.mu().normalized();
    format!("{}/{}", mu.numer(), mu.denom())
}

pub fn expansions(spec: &MontesinosSpec) -> Vec<Vec<i64>> {
    spec.tangles()
        .iter()
        .map(|t| t.expansion.terms().to_vec())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunInfo {
    pub command: &'static str,
    pub cases: Vec<&'static str>,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub a_values: Vec<Cx>,
    pub lambda_samples: Vec<Vec<Cx>>,
    pub dedupe: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamsOut {
    Signs {
        a: i8,
        s: Vec<i8>,
    },
    Reducible {
        a: i8,
        s: Vec<i8>,
        y1: &'static str,
    },
    Binary {
        a: i8,
        n_list: Vec<i64>,
        sample: usize,
        free_lambdas: Vec<Cx>,
        lambdas: Vec<Cx>,
        b: Vec<Cx>,
    },
    MuZero {
        n: i64,
        n_list: Vec<i64>,
        sample: usize,
    },
    MuNonzero {
        n: i64,
        n_list: Vec<i64>,
        theta_over_pi: String,
    },
}

impl From<&Params> for ParamsOut {
    fn from(p: &Params) -> Self {
        let cx = |v: &[C64]| v.iter().map(|&z| z.into()).collect();
        match p {
            Params::Signs { a, s } => ParamsOut::Signs {
                a: *a,
                s: s.clone(),
            },
            Params::Reducible { a, s, variant } => ParamsOut::Reducible {
                a: *a,
                s: s.clone(),
                y1: match variant {
                    SVariant::Primary => "S",
                    SVariant::Transposed => "S'",
                },
            },
            Params::Binary {
                a,
                n_list,
                sample,
                free,
                lambdas,
                b,
            } => ParamsOut::Binary {
                a: *a,
                n_list: n_list.clone(),
                sample: *sample,
                free_lambdas: cx(free),
                lambdas: cx(lambdas),
                b: cx(b),
            },
            Params::MuZero { n, n_list, sample } => ParamsOut::MuZero {
                n: *n,
                n_list: n_list.clone(),
                sample: *sample,
            },
            Params::MuNonzero {
                n,
                n_list,
                theta_over_pi,
            } => {
                let t = theta_over_pi.normalized();
                ParamsOut::MuNonzero {
                    n: *n,
                    n_list: n_list.clone(),
                    theta_over_pi: format!("{}/{}", t.numer(), t.denom()),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndsOut {
    pub nw: Mx,
    pub ne: Mx,
    pub sw: Mx,
    pub se: Mx,
}

impl From<&EndMatrices> for EndsOut {
    fn from(e: &EndMatrices) -> Self {
        EndsOut {
            nw: e.nw.into(),
            ne: e.ne.into(),
            sw: e.sw.into(),
            se: e.se.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrices {
    #[serde(rename = "X")]
    pub x: Vec<Mx>,
    #[serde(rename = "Y")]
    pub y: Vec<Mx>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ends: Vec<EndsOut>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportOut {
    pub max_crossing_residual: Option<f64>,
    pub max_tracefree_residual: Option<f64>,
    pub max_det_residual: Option<f64>,
    pub closure_residual: Option<f64>,
    pub per_crossing: Vec<Option<f64>>,
    pub per_join: Vec<Option<f64>>,
    pub pass: bool,
    pub tol: f64,
}

impl From<&VerificationReport> for ReportOut {
    fn from(r: &VerificationReport) -> Self {
        ReportOut {
            max_crossing_residual: finite(r.max_crossing_residual),
            max_tracefree_residual: finite(r.max_tracefree_residual),
            max_det_residual: finite(r.max_det_residual),
            closure_residual: finite(r.closure_residual),
            per_crossing: r.per_crossing.iter().map(|&x| finite(x)).collect(),
            per_join: r.per_join.iter().map(|&x| finite(x)).collect(),
            pass: r.pass,
            tol: r.tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassOut {
    pub case: &'static str,
    pub params: ParamsOut,
    pub a: Cx,
    pub s: Vec<Cx>,
    pub matrices: Matrices,
    pub character: Vec<Cx>,
    pub residual: Option<f64>,
    pub closure_residual: Option<f64>,
    pub verified: bool,
    pub verification: ReportOut,
}

impl From<&RepClass> for ClassOut {
    fn from(c: &RepClass) -> Self {
        ClassOut {
            case: c.case.name(),
            params: (&c.params).into(),
            a: c.a.into(),
            s: c.s.iter().map(|&z| z.into()).collect(),
            matrices: Matrices {
                x: c.x.iter().map(|&m| m.into()).collect(),
                y: c.y.iter().map(|&m| m.into()).collect(),
                ends: c.ends.iter().map(EndsOut::from).collect(),
            },
            character: c.character.iter().map(|&z| z.into()).collect(),
            residual: finite(c.residual()),
            closure_residual: finite(c.closure_residual),
            verified: c.verified(),
            verification: (&c.report).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WarningOut {
    Skipped {
        case: &'static str,
        key: Vec<i64>,
        sample: Option<usize>,
        reason: String,
    },
    SuspectedConjugate {
        case: &'static str,
        first: usize,
        second: usize,
    },
    Merged {
        case: &'static str,
        kept: Vec<i64>,
        dropped: Vec<i64>,
    },
}

impl From<&Warning> for WarningOut {
    fn from(w: &Warning) -> Self {
        match w {
            Warning::Skipped {
                case,
                key,
                sample,
                reason,
            } => WarningOut::Skipped {
                case: case.name(),
                key: key.clone(),
                sample: *sample,
                reason: reason.clone(),
            },
            Warning::SuspectedConjugate {
                case,
                first,
                second,
            } => WarningOut::SuspectedConjugate {
                case: case.name(),
                first: *first,
                second: *second,
            },
            Warning::Merged {
                case,
                kept,
                dropped,
            } => WarningOut::Merged {
                case: case.name(),
                kept: kept.clone(),
                dropped: dropped.clone(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    /// Class count per case name, in case order.
    pub per_case: BTreeMap<String, usize>,
    pub verified: usize,
    pub failed: usize,
    pub max_residual: Option<f64>,
    pub pass: bool,
}

impl Summary {
    pub fn of(e: &Enumeration, cases: &[montrep_core::enumerate::Case]) -> Self {
        let per_case = cases
            .iter()
            .map(|&c| (format!("{}:{}", c.roman(), c.name()), e.count(c)))
            .collect();
        let verified = e.classes.iter().filter(|c| c.verified()).count();
        let max = e.classes.iter().map(RepClass::residual).fold(0.0, f64::max);
        Summary {
            total: e.classes.len(),
            per_case,
            verified,
            failed: e.classes.len() - verified,
            max_residual: finite(max),
            pass: verified == e.classes.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnumDocument {
    pub schema: u32,
    pub link: Link,
    pub mu: String,
    pub expansions: Vec<Vec<i64>>,
    pub run: RunInfo,
    pub classes: Vec<ClassOut>,
    pub warnings: Vec<WarningOut>,
    pub report: Summary,
}

/// The part of an [`EnumDocument`] that `verify --from-json` reads back.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct LoadedDocument {
    pub schema: u32,
    pub link: Link,
    pub classes: Vec<LoadedClass>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct LoadedClass {
    pub case: String,
    pub matrices: Matrices,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifiedClass {
    pub index: usize,
    pub case: String,
    pub residual: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyDocument {
    pub schema: u32,
    pub link: Link,
    pub tol: f64,
    pub classes: Vec<VerifiedClass>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanOut {
    pub n_list: Vec<i64>,
    pub grid: usize,
    /// `[theta, residual]` rows.
    pub samples: Vec<(f64, Option<f64>)>,
    pub roots: Vec<f64>,
    /// `theta` of the enumerated case (v) tuples with this `n_list`.
    pub expected: Vec<f64>,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanDocument {
    pub schema: u32,
    pub link: Link,
    pub mu: String,
    pub threshold: f64,
    pub scans: Vec<ScanOut>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangleEndsDocument {
    pub schema: u32,
    pub expression: String,
    pub fraction: Option<[i64; 2]>,
    pub s: Cx,
    #[serde(rename = "X")]
    pub x: Mx,
    #[serde(rename = "Y")]
    pub y: Mx,
    pub propagated: EndsOut,
    pub closed_form: Option<EndsOut>,
    pub max_difference: Option<f64>,
}
