//! Crossing-level oracle.
//!
//! Nothing here uses the closed-form end matrices: a representation is
//! checked arc by arc against `rho(z) = rho(x) rho(y) rho(x)^{-1}` (written
//! with both under-arcs directed away from the crossing, so the check is
//! `rho(out) + rho(x) rho(in) rho(x)^{-1} = 0`), against `tr = 0` and
//! `det = 1` on every arc, and against `rho(e) + rho(e') = 0` on every join
//! of outward ends.
//!
//! Residuals use the max-abs-entry norm, divided by `max(1, |M|)` of the
//! matrices involved so that large-modulus parameters are judged on the same
//! footing as unit ones.

use alloc::vec::Vec;
use core::f64::consts::PI;

use thiserror::Error;

use crate::enumerate::{build_chain, TransferMode};
use crate::mat2::{a_unchecked, Mat2, C64, ONE};
use crate::montesinos::MontesinosSpec;
use crate::tangle::{propagate_montesinos, Diagram, JoinKind, RepAssignment, TangleError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("arc {0} is unlabeled")]
    UnlabeledArc(usize),
    #[error("diagram has no closure joins")]
    NotClosed,
    #[error("{0}")]
    UsedWrongCase(&'static str),
    #[error(transparent)]
    Tangle(#[from] TangleError),
}

/// Outcome of [`verify_representation`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub max_crossing_residual: f64,
    pub max_tracefree_residual: f64,
    pub max_det_residual: f64,
    /// Largest residual over all joins (glue and closure).
    pub closure_residual: f64,
    pub per_crossing: Vec<f64>,
    pub per_join: Vec<f64>,
    pub pass: bool,
    pub tol: f64,
}

impl VerificationReport {
    pub fn max_residual(&self) -> f64 {
        self.max_crossing_residual
            .max(self.max_tracefree_residual)
            .max(self.max_det_residual)
            .max(self.closure_residual)
    }
}

fn scale(ms: &[&Mat2]) -> f64 {
    ms.iter().fold(1.0, |acc: f64, m| acc.max(m.max_abs()))
}

fn nan_to_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

/// Checks every relation of `d` under `asg`.
pub fn verify_representation(
    d: &Diagram,
    asg: &RepAssignment,
    tol: f64,
) -> Result<VerificationReport, VerifyError> {
    let mut labels = Vec::with_capacity(d.arc_count);
    for arc in 0..d.arc_count {
        labels.push(asg.arc(arc).ok_or(VerifyError::UnlabeledArc(arc))?);
    }
    let directed = |da: crate::tangle::DirectedArc| {
        let m = labels[da.arc];
        if da.forward {
            m
        } else {
            -m
        }
    };

    let mut per_crossing = Vec::with_capacity(d.crossings.len());
    for c in &d.crossings {
        let over = labels[c.over];
        let (inn, out) = (directed(c.under_in), directed(c.under_out));
        let residual = match over.inverse() {
            Some(oi) => {
                let r = (out + over * inn * oi).max_abs();
                r / scale(&[&over, &inn, &out])
            }
            None => f64::INFINITY,
        };
        per_crossing.push(nan_to_inf(residual));
    }

    let (mut tracefree, mut det) = (0.0f64, 0.0f64);
    for m in &labels {
        let sc = scale(&[m]);
        tracefree = tracefree.max(nan_to_inf(m.trace().norm() / sc));
        det = det.max(nan_to_inf((m.det() - ONE).norm() / (sc * sc)));
    }

    let per_join: Vec<f64> = d
        .joins
        .iter()
        .map(|j| {
            let (a, b) = (directed(j.a), directed(j.b));
            nan_to_inf((a + b).max_abs() / scale(&[&a, &b]))
        })
        .collect();

    let max_crossing = per_crossing.iter().copied().fold(0.0, f64::max);
    let closure = per_join.iter().copied().fold(0.0, f64::max);
    let pass = max_crossing <= tol && tracefree <= tol && det <= tol && closure <= tol;
    Ok(VerificationReport {
        max_crossing_residual: max_crossing,
        max_tracefree_residual: tracefree,
        max_det_residual: det,
        closure_residual: closure,
        per_crossing,
        per_join,
        pass,
        tol,
    })
}

/// Labels each block of a stacked diagram from its `(X_l, Y_l)` by the
/// crossing rule alone and verifies the result, joins included.
pub fn verify_chain(
    d: &Diagram,
    x: &[Mat2],
    y: &[Mat2],
    tol: f64,
) -> Result<VerificationReport, VerifyError> {
    let pairs: Vec<(Mat2, Mat2)> = x.iter().copied().zip(y.iter().copied()).collect();
    let asg = propagate_montesinos(d, &pairs)?;
    verify_representation(d, &asg, tol)
}

/// `s_l = exp(i (theta + p~_l pi + 2 n_l pi) / p_l)` at a float angle.
fn s_at(spec: &MontesinosSpec, theta: f64, n_list: &[i64]) -> Vec<C64> {
    spec.tangles()
        .iter()
        .zip(n_list)
        .map(|(td, &n)| {
            let phase = (theta + PI * (td.p_tilde + 2 * n) as f64) / td.p as f64;
            C64::from_polar(1.0, phase)
        })
        .collect()
}

/// Closure residual of the chain with `a = e^{i theta}`, `Y_1 = A(s_1)` and
/// the given `n_l`. Infinite where a bracket vanishes.
pub fn closure_residual_at(spec: &MontesinosSpec, n_list: &[i64], theta: f64) -> f64 {
    let s = s_at(spec, theta, n_list);
    match build_chain(spec, a_unchecked(s[0]), &s, TransferMode::ClosedForm) {
        Ok(chain) => nan_to_inf(chain.closure_residual),
        Err(_) => f64::INFINITY,
    }
}

/// `(theta, residual)` on `grid` equally spaced angles in `[0, 2 pi)`.
pub fn scan_closure_residual(
    spec: &MontesinosSpec,
    n_list: &[i64],
    grid: usize,
) -> Result<Vec<(f64, f64)>, VerifyError> {
    if spec.mu_is_zero() {
        return Err(VerifyError::UsedWrongCase(
            "the residual scan requires mu != 0",
        ));
    }
    if n_list.len() != spec.len() {
        return Err(VerifyError::UsedWrongCase("one n_l per tangle is required"));
    }
    Ok((0..grid)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / grid as f64;
            (theta, closure_residual_at(spec, n_list, theta))
        })
        .collect())
}

/// Local minima of a cyclic scan, refined by golden-section search between
/// the neighbouring grid points. Refined minima below `threshold` and away
/// from `pi Z` (where `a = +-1` and the reducible families live) are
/// returned in increasing order.
pub fn find_residual_roots(
    spec: &MontesinosSpec,
    n_list: &[i64],
    scan: &[(f64, f64)],
    threshold: f64,
) -> Vec<f64> {
    let n = scan.len();
    if n < 3 {
        return Vec::new();
    }
    let step = 2.0 * PI / n as f64;
    let f = |t: f64| closure_residual_at(spec, n_list, t);
    let mut roots = Vec::new();
    for i in 0..n {
        let (prev, cur, next) = (scan[(i + n - 1) % n].1, scan[i].1, scan[(i + 1) % n].1);
        if !(cur <= prev && cur <= next) || !cur.is_finite() {
            continue;
        }
        let (mut lo, mut hi) = (scan[i].0 - step, scan[i].0 + step);
        let g = (libm::sqrt(5.0) - 1.0) / 2.0;
        let (mut c, mut d) = (hi - g * (hi - lo), lo + g * (hi - lo));
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..80 {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = f(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = f(d);
            }
        }
        let t = (lo + hi) / 2.0;
        if f(t) >= threshold {
            continue;
        }
        let t = num_traits::Euclid::rem_euclid(&t, &(2.0 * PI));
        let to_pi = (t / PI - libm::round(t / PI)).abs() * PI;
        if to_pi < 1e-7 {
            continue;
        }
        if roots.iter().all(|&r: &f64| (r - t).abs() > step) {
            roots.push(t);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Number of link components: strands are followed through crossings (the
/// two under-arcs of a crossing belong to one strand) and through joins.
pub fn count_components(d: &Diagram) -> Result<usize, VerifyError> {
    if !d.joins.iter().any(|j| j.kind == JoinKind::Closure) {
        return Err(VerifyError::NotClosed);
    }
    let mut parent: Vec<usize> = (0..d.arc_count).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut union = |a: usize, b: usize| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for c in &d.crossings {
        union(c.under_in.arc, c.under_out.arc);
    }
    for j in &d.joins {
        union(j.a.arc, j.b.arc);
    }
    let mut roots: Vec<usize> = (0..d.arc_count).map(|i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(roots.len())
}
