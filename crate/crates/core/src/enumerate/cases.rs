//! The discrete parameter spaces of the five cases and their enumerators.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::chain::{build_binary, build_representation, Chain, TransferMode};
use super::{character_vector, Case, EnumError, Params, RepClass, Warning};
use crate::mat2::{a_unchecked, mat_s, SVariant, C64, ONE};
use crate::montesinos::MontesinosSpec;
use crate::rational::Fraction;
use crate::tangle::{build_montesinos_diagram, Diagram};
use crate::tol;
use crate::verify::verify_chain;

/// Upper bound on the size of any enumerated tuple space.
pub const MAX_TUPLES: u128 = 10_000_000;

fn sign_pow(s: i8, k: i64) -> i8 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        s
    }
}

fn parity(k: i64) -> i8 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// All `(a, s_1..s_r)` in `{+-1}^{r+1}` with `(-1)^{p~_l} s_l^{p_l} = a`.
pub fn sign_tuples(spec: &MontesinosSpec) -> Result<Vec<(i8, Vec<i8>)>, EnumError> {
    let r = spec.len();
    if r >= 64 || (1u128 << r) > MAX_TUPLES {
        return Err(EnumError::TooManyTuples(1u128 << r.min(127)));
    }
    let mut out = Vec::new();
    for a in [1i8, -1] {
        'mask: for mask in 0u64..(1u64 << r) {
            let s: Vec<i8> = (0..r)
                .map(|l| if mask >> l & 1 == 1 { -1 } else { 1 })
                .collect();
            for (td, &sl) in spec.tangles().iter().zip(&s) {
                if parity(td.p_tilde) * sign_pow(sl, td.p) != a {
                    continue 'mask;
                }
            }
            out.push((a, s));
        }
    }
    Ok(out)
}

/// `prod (-1)^{q~_l - 1} s_l^{q_l}` for signs `s_l`.
pub fn closure_sign(spec: &MontesinosSpec, s: &[i8]) -> i8 {
    spec.tangles()
        .iter()
        .zip(s)
        .map(|(td, &sl)| parity(td.q_tilde - 1) * sign_pow(sl, td.q))
        .product()
}

fn tuple_space(spec: &MontesinosSpec) -> Result<Vec<Vec<i64>>, EnumError> {
    let sizes: Vec<i64> = spec.fractions().iter().map(|f| f.numer()).collect();
    let total: u128 = sizes.iter().map(|&p| p as u128).product();
    if total > MAX_TUPLES {
        return Err(EnumError::TooManyTuples(total));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0i64; sizes.len()];
    loop {
        out.push(cur.clone());
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < sizes[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// `sum (2 n_l q_l + 1) / p_l`, exactly.
fn phase_sum(spec: &MontesinosSpec, n_list: &[i64]) -> Result<Fraction, EnumError> {
    let mut sum = Fraction::zero();
    for (f, &n) in spec.fractions().iter().zip(n_list) {
        let num = 2i64
            .checked_mul(n)
            .and_then(|x| x.checked_mul(f.denom()))
            .and_then(|x| x.checked_add(1))
            .ok_or(crate::rational::RationalError::Overflow)?;
        sum = sum.checked_add(&Fraction::new(num, f.numer())?)?;
    }
    Ok(sum)
}

/// `exp(i pi t)` with `t` reduced exactly modulo 2 first.
fn unit_turn(t: &Fraction) -> C64 {
    let t = t.normalized();
    let (num, den) = (t.numer() as i128, t.denom() as i128);
    let reduced = num.rem_euclid(2 * den) as f64 / den as f64;
    C64::from_polar(1.0, PI * reduced)
}

/// A case (iv) tuple: `sum (2 n_l q_l + 1) / p_l = 2n + r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuZeroTuple {
    pub n: i64,
    pub n_list: Vec<i64>,
}

/// A case (v) tuple with its angle `theta = pi * theta_over_pi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuNonzeroTuple {
    pub n: i64,
    pub n_list: Vec<i64>,
    pub theta_over_pi: Fraction,
}

/// All `(n_1..n_r)` with `0 <= n_l < p_l` satisfying the `mu = 0` equation,
/// with the integer `n` it determines (possibly negative).
pub fn enumerate_tuples_mu_zero(spec: &MontesinosSpec) -> Result<Vec<MuZeroTuple>, EnumError> {
    if !spec.mu_is_zero() {
        return Err(EnumError::UsedWrongCase("case (iv) requires mu = 0"));
    }
    let r = Fraction::integer(spec.len() as i64);
    let mut out = Vec::new();
    for n_list in tuple_space(spec)? {
        let excess = phase_sum(spec, &n_list)?.checked_sub(&r)?.normalized();
        if excess.denom() == 1 && excess.numer().rem_euclid(2) == 0 {
            out.push(MuZeroTuple {
                n: excess.numer() / 2,
                n_list,
            });
        }
    }
    Ok(out)
}

/// All `(n, n_1..n_r)` with `0 <= n_l < p_l` and
/// `theta = (pi / mu)(2n + r - sum (2 n_l q_l + 1) / p_l)` in `[0, 2 pi)`
/// and not in `pi Z`.
///
/// Each `(a, s_1..s_r)` arises from exactly one such tuple.
pub fn enumerate_tuples_mu_nonzero(
    spec: &MontesinosSpec,
) -> Result<Vec<MuNonzeroTuple>, EnumError> {
    if spec.mu_is_zero() {
        return Err(EnumError::UsedWrongCase("case (v) requires mu != 0"));
    }
    let mu = spec.mu();
    let r = Fraction::integer(spec.len() as i64);
    let mut out = Vec::new();
    for n_list in tuple_space(spec)? {
        let c = r.checked_sub(&phase_sum(spec, &n_list)?)?;
        // 0 <= (2n + c) / mu < 2
        let (lo, hi) = {
            let x = -c.to_f64() / 2.0;
            let y = (2.0 * mu.to_f64() - c.to_f64()) / 2.0;
            (
                libm::floor(x.min(y)) as i64 - 1,
                libm::ceil(x.max(y)) as i64 + 1,
            )
        };
        for n in lo..=hi {
            let t = Fraction::integer(2 * n).checked_add(&c)?.checked_div(&mu)?;
            let t = t.normalized();
            if t >= Fraction::zero() && t < Fraction::integer(2) && !t.is_integer() {
                out.push(MuNonzeroTuple {
                    n,
                    n_list: n_list.clone(),
                    theta_over_pi: t,
                });
            }
        }
    }
    Ok(out)
}

/// `s_l = exp(i pi (t + p~_l + 2 n_l) / p_l)` for `a = (-1)^t`.
pub fn s_binary(spec: &MontesinosSpec, a: i8, n_list: &[i64]) -> Result<Vec<C64>, EnumError> {
    let t = if a == 1 { 0 } else { 1 };
    spec.tangles()
        .iter()
        .zip(n_list)
        .map(|(td, &n)| Ok(unit_turn(&Fraction::new(t + td.p_tilde + 2 * n, td.p)?)))
        .collect()
}

/// `s_l = |a|^{1/p_l} exp(i (theta + p~_l pi + 2 n_l pi) / p_l)` with
/// `theta = arg a` in `(-pi, pi]`.
pub fn s_mu_zero(spec: &MontesinosSpec, a: C64, n_list: &[i64]) -> Result<Vec<C64>, EnumError> {
    let theta = a.arg();
    spec.tangles()
        .iter()
        .zip(n_list)
        .map(|(td, &n)| {
            let p = td.p as f64;
            let modulus = libm::pow(a.norm(), 1.0 / p);
            let fixed = unit_turn(&Fraction::new(td.p_tilde + 2 * n, td.p)?);
            Ok(fixed * C64::from_polar(modulus, theta / p))
        })
        .collect()
}

/// `a = exp(i theta)` and `s_l = exp(i (theta + p~_l pi + 2 n_l pi) / p_l)`.
pub fn s_mu_nonzero(
    spec: &MontesinosSpec,
    theta_over_pi: &Fraction,
    n_list: &[i64],
) -> Result<(C64, Vec<C64>), EnumError> {
    let a = unit_turn(theta_over_pi);
    let s = spec
        .tangles()
        .iter()
        .zip(n_list)
        .map(|(td, &n)| {
            let shift = Fraction::integer(td.p_tilde + 2 * n);
            let t = theta_over_pi
                .checked_add(&shift)?
                .checked_div(&Fraction::integer(td.p))?;
            Ok(unit_turn(&t))
        })
        .collect::<Result<Vec<_>, EnumError>>()?;
    Ok((a, s))
}

/// The case (iii) phase tuples for `a = +-1`: `s_l = exp(i pi k_l / p_l)`
/// with `k_l = t + p~_l + 2 n_l`, `0 <= n_l < p_l`, keeping `Im(s_l) >= 0`
/// (the inverse gives the same class) and at least one `s_l != +-1`.
pub fn binary_tuples(spec: &MontesinosSpec, a: i8) -> Result<Vec<Vec<i64>>, EnumError> {
    if a != 1 && a != -1 {
        return Err(EnumError::InvalidParameter("a must be +1 or -1"));
    }
    let t = if a == 1 { 0 } else { 1 };
    let mut out = Vec::new();
    'tuple: for n_list in tuple_space(spec)? {
        let mut some_nonreal = false;
        for (td, &n) in spec.tangles().iter().zip(&n_list) {
            let k = (t + td.p_tilde + 2 * n).rem_euclid(2 * td.p);
            if k > td.p {
                continue 'tuple;
            }
            if k % td.p != 0 {
                some_nonreal = true;
            }
        }
        if some_nonreal {
            out.push(n_list);
        }
    }
    Ok(out)
}

/// Default `a` values sampled in case (iv).
pub fn default_a_samples() -> Vec<C64> {
    vec![
        C64::new(0.5, 0.0),
        C64::from_polar(2.0, PI / 5.0),
        C64::from_polar(1.0, PI / 7.0),
        C64::new(-3.0, 0.0),
        C64::from_polar(1.2, 2.0),
    ]
}

fn finish(
    case: Case,
    params: Params,
    a: C64,
    s: Vec<C64>,
    chain: Chain,
    diagram: &Diagram,
    tolerance: f64,
) -> Result<RepClass, EnumError> {
    let report = verify_chain(diagram, &chain.x, &chain.y, tolerance)?;
    Ok(RepClass {
        case,
        params,
        a,
        s,
        character: character_vector(&chain.x, &chain.y),
        closure_residual: chain.closure_residual,
        x: chain.x,
        y: chain.y,
        ends: chain.ends,
        report,
    })
}

fn construction_tol(tolerance: f64) -> f64 {
    tolerance.clamp(tol::CONSTRUCTION, tol::VERIFY)
}

pub(super) fn abelian(
    spec: &MontesinosSpec,
    diagram: &Diagram,
    tolerance: f64,
) -> Result<Vec<RepClass>, EnumError> {
    let mut out = Vec::new();
    for (a, s) in sign_tuples(spec)? {
        if closure_sign(spec, &s) != 1 {
            continue;
        }
        let sc: Vec<C64> = s.iter().map(|&x| C64::new(x as f64, 0.0)).collect();
        let y1 = a_unchecked(ONE) * (s[0] as f64);
        let chain = build_representation(
            spec,
            y1,
            &sc,
            TransferMode::ClosedForm,
            construction_tol(tolerance),
        )?;
        out.push(finish(
            Case::Abelian,
            Params::Signs { a, s },
            C64::new(a as f64, 0.0),
            sc,
            chain,
            diagram,
            tolerance,
        )?);
    }
    Ok(out)
}

/// Case (i): every sign tuple passing the exact closure condition.
pub fn enumerate_abelian(
    spec: &MontesinosSpec,
    tolerance: f64,
) -> Result<Vec<RepClass>, EnumError> {
    abelian(spec, &build_montesinos_diagram(spec), tolerance)
}

pub(super) fn reducible(
    spec: &MontesinosSpec,
    diagram: &Diagram,
    tolerance: f64,
) -> Result<Vec<RepClass>, EnumError> {
    let mut out = Vec::new();
    if !spec.mu_is_zero() {
        return Ok(out);
    }
    for (a, s) in sign_tuples(spec)? {
        if closure_sign(spec, &s) != 1 {
            continue;
        }
        let sc: Vec<C64> = s.iter().map(|&x| C64::new(x as f64, 0.0)).collect();
        for variant in [SVariant::Primary, SVariant::Transposed] {
            let y1 = mat_s(s[0], variant)?.mat();
            let chain = match build_representation(
                spec,
                y1,
                &sc,
                TransferMode::Reducible { a: a as f64 },
                construction_tol(tolerance),
            ) {
                Ok(c) => c,
                Err(EnumError::ClosureViolation(_)) => continue,
                Err(e) => return Err(e),
            };
            out.push(finish(
                Case::ReducibleNonabelian,
                Params::Reducible {
                    a,
                    s: s.clone(),
                    variant,
                },
                C64::new(a as f64, 0.0),
                sc.clone(),
                chain,
                diagram,
                tolerance,
            )?);
        }
    }
    Ok(out)
}

/// Case (ii): empty unless `mu = 0`; otherwise each admissible sign tuple
/// with `Y_1 = S_{s_1}` and `Y_1 = S'_{s_1}`.
pub fn enumerate_reducible_nonabelian(
    spec: &MontesinosSpec,
    tolerance: f64,
) -> Result<Vec<RepClass>, EnumError> {
    reducible(spec, &build_montesinos_diagram(spec), tolerance)
}

type Outcome = (Vec<RepClass>, Vec<Warning>);

pub(super) fn binary(
    spec: &MontesinosSpec,
    diagram: &Diagram,
    a: i8,
    samples: &[Vec<C64>],
    tolerance: f64,
) -> Result<Outcome, EnumError> {
    let r = spec.len();
    let free_count = r.saturating_sub(2);
    let empty = [Vec::new()];
    let samples: &[Vec<C64>] = if free_count == 0 { &empty } else { samples };
    let mut classes = Vec::new();
    let mut warnings = Vec::new();
    for n_list in binary_tuples(spec, a)? {
        let s = s_binary(spec, a, &n_list)?;
        let mut key = vec![a as i64];
        key.extend_from_slice(&n_list);
        if samples.is_empty() {
            warnings.push(Warning::Skipped {
                case: Case::IrreducibleBinary,
                key,
                sample: None,
                reason: "no lambda samples supplied".to_string(),
            });
            continue;
        }
        for (index, sample) in samples.iter().enumerate() {
            let free = &sample[..free_count.min(sample.len())];
            match build_binary(spec, &s, free, construction_tol(tolerance)) {
                Ok(built) => {
                    let params = Params::Binary {
                        a,
                        n_list: n_list.clone(),
                        sample: index,
                        free: free.to_vec(),
                        lambdas: built.lambdas,
                        b: built.b,
                    };
                    classes.push(finish(
                        Case::IrreducibleBinary,
                        params,
                        C64::new(a as f64, 0.0),
                        s.clone(),
                        built.chain,
                        diagram,
                        tolerance,
                    )?);
                }
                Err(e) => warnings.push(Warning::Skipped {
                    case: Case::IrreducibleBinary,
                    key: key.clone(),
                    sample: Some(index),
                    reason: e.to_string(),
                }),
            }
        }
    }
    Ok((classes, warnings))
}

/// Case (iii) for one `a in {+-1}`: each phase tuple with each sample of
/// the free `lambda_1..lambda_{r-2}`. Samples without a closure solution,
/// with a non-regular pair or with `{q_l}_{s_l} = 0` are reported, not
/// emitted.
pub fn enumerate_binary_irreducible(
    spec: &MontesinosSpec,
    a: i8,
    lambda_samples: &[Vec<C64>],
    tolerance: f64,
) -> Result<Outcome, EnumError> {
    binary(
        spec,
        &build_montesinos_diagram(spec),
        a,
        lambda_samples,
        tolerance,
    )
}

pub(super) fn mu_zero(
    spec: &MontesinosSpec,
    diagram: &Diagram,
    a_values: &[C64],
    tolerance: f64,
) -> Result<Outcome, EnumError> {
    let tuples = enumerate_tuples_mu_zero(spec)?;
    let mut classes = Vec::new();
    let mut warnings = Vec::new();
    for t in tuples {
        let mut key = vec![t.n];
        key.extend_from_slice(&t.n_list);
        for (index, &a) in a_values.iter().enumerate() {
            let degenerate = a.norm().is_nan()
                || a.norm() <= 0.0
                || !a.re.is_finite()
                || !a.im.is_finite()
                || (a - ONE).norm() < tol::ZERO
                || (a + ONE).norm() < tol::ZERO;
            let built = if degenerate {
                Err(EnumError::InvalidParameter(
                    "a must be finite, nonzero and not +-1",
                ))
            } else {
                s_mu_zero(spec, a, &t.n_list).and_then(|s| {
                    let y1 = a_unchecked(s[0]);
                    build_representation(
                        spec,
                        y1,
                        &s,
                        TransferMode::ClosedForm,
                        construction_tol(tolerance),
                    )
                    .map(|c| (s, c))
                })
            };
            match built {
                Ok((s, chain)) => classes.push(finish(
                    Case::IrreducibleMuZero,
                    Params::MuZero {
                        n: t.n,
                        n_list: t.n_list.clone(),
                        sample: index,
                    },
                    a,
                    s,
                    chain,
                    diagram,
                    tolerance,
                )?),
                Err(e) => warnings.push(Warning::Skipped {
                    case: Case::IrreducibleMuZero,
                    key: key.clone(),
                    sample: Some(index),
                    reason: e.to_string(),
                }),
            }
        }
    }
    Ok((classes, warnings))
}

/// Case (iv): every tuple of [`enumerate_tuples_mu_zero`] at every sampled
/// `a`.
pub fn enumerate_mu_zero(
    spec: &MontesinosSpec,
    a_values: &[C64],
    tolerance: f64,
) -> Result<Outcome, EnumError> {
    mu_zero(spec, &build_montesinos_diagram(spec), a_values, tolerance)
}

pub(super) fn mu_nonzero(
    spec: &MontesinosSpec,
    diagram: &Diagram,
    tolerance: f64,
) -> Result<Outcome, EnumError> {
    let tuples = enumerate_tuples_mu_nonzero(spec)?;
    let mut classes = Vec::new();
    let mut warnings = Vec::new();
    for t in tuples {
        let built = s_mu_nonzero(spec, &t.theta_over_pi, &t.n_list).and_then(|(a, s)| {
            build_representation(
                spec,
                a_unchecked(s[0]),
                &s,
                TransferMode::ClosedForm,
                construction_tol(tolerance),
            )
            .map(|c| (a, s, c))
        });
        match built {
            Ok((a, s, chain)) => classes.push(finish(
                Case::IrreducibleMuNonzero,
                Params::MuNonzero {
                    n: t.n,
                    n_list: t.n_list,
                    theta_over_pi: t.theta_over_pi,
                },
                a,
                s,
                chain,
                diagram,
                tolerance,
            )?),
            Err(e) => {
                let mut key = vec![t.n];
                key.extend_from_slice(&t.n_list);
                warnings.push(Warning::Skipped {
                    case: Case::IrreducibleMuNonzero,
                    key,
                    sample: None,
                    reason: e.to_string(),
                });
            }
        }
    }
    Ok((classes, warnings))
}

/// Case (v): one class per tuple of [`enumerate_tuples_mu_nonzero`].
pub fn enumerate_mu_nonzero(spec: &MontesinosSpec, tolerance: f64) -> Result<Outcome, EnumError> {
    mu_nonzero(spec, &build_montesinos_diagram(spec), tolerance)
}
