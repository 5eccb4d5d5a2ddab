//! Building a representation tangle by tangle from `X_1 = A(1)`.

use alloc::vec::Vec;

use super::EnumError;
use crate::mat2::{
    a_unchecked, bracket, e_unchecked, is_regular_pair, parity_sign, Mat2, TraceFreeMat, C64, ONE,
};
use crate::montesinos::MontesinosSpec;
use crate::rational::TangleData;
use crate::tangle::{closed_form_ends, mat_b, pair_transfer, transfer_weight, EndMatrices};
use crate::tol;

/// The per-tangle generating pairs and end matrices of a representation.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub x: Vec<Mat2>,
    pub y: Vec<Mat2>,
    pub ends: Vec<EndMatrices>,
    /// Defect of the closure `(nw_{r+1}, ne_{r+1}) = (X_1, ne_1)`.
    pub closure_residual: f64,
}

/// How the bottom ends of each tangle are obtained from its top ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransferMode {
    /// The closed forms in terms of `(X_l, Y_l)`.
    ClosedForm,
    /// `(sw, se) = -(nw, ne) (-1)^{q~-1} s^q B(q/p)`, valid at `s = +-1`.
    Reducible { a: f64 },
}

/// `Y` from `X`, `ne` and `s`: `ne = (-1)^{p~}({1+p} X + {-p} Y)`.
pub fn recover_y(td: &TangleData, x: &Mat2, ne: &Mat2, s: C64) -> Result<Mat2, EnumError> {
    let bp = bracket(-td.p, s);
    if bp.norm() < tol::ZERO {
        return Err(EnumError::SingularBracket(bp.norm()));
    }
    let lhs = *ne * parity_sign(td.p_tilde) - *x * bracket(1 + td.p, s);
    Ok(lhs * bp.inv())
}

/// Walks the stack from `(A(1), y1)`, gluing `(nw_{l+1}, ne_{l+1}) =
/// -(sw_l, se_l)` and recovering each `Y_{l+1}` from its `ne` end.
pub fn build_chain(
    spec: &MontesinosSpec,
    y1: Mat2,
    s: &[C64],
    mode: TransferMode,
) -> Result<Chain, EnumError> {
    let tangles = spec.tangles();
    if s.len() != tangles.len() {
        return Err(EnumError::InvalidParameter(
            "one s value per tangle is required",
        ));
    }
    let x1 = a_unchecked(ONE);
    let (mut x, mut y) = (x1, y1);
    let mut chain = Chain {
        x: Vec::with_capacity(s.len()),
        y: Vec::with_capacity(s.len()),
        ends: Vec::with_capacity(s.len()),
        closure_residual: 0.0,
    };
    for (l, td) in tangles.iter().enumerate() {
        let mut ends = closed_form_ends(td, &x, &y, s[l]);
        if let TransferMode::Reducible { a } = mode {
            let t = mat_b(C64::new(td.q as f64 / td.p as f64, 0.0), C64::new(a, 0.0))
                * transfer_weight(td, s[l]);
            let (sw, se) = pair_transfer(&ends.nw, &ends.ne, &t);
            ends.sw = sw;
            ends.se = se;
        }
        chain.x.push(x);
        chain.y.push(y);
        chain.ends.push(ends);
        let (next_x, next_ne) = (-ends.sw, -ends.se);
        if l + 1 < tangles.len() {
            y = recover_y(&tangles[l + 1], &next_x, &next_ne, s[l + 1])?;
            x = next_x;
        } else {
            chain.closure_residual = next_x
                .max_abs_diff(&x1)
                .max(next_ne.max_abs_diff(&chain.ends[0].ne));
        }
    }
    Ok(chain)
}

/// [`build_chain`] followed by the closure check.
pub fn build_representation(
    spec: &MontesinosSpec,
    y1: Mat2,
    s: &[C64],
    mode: TransferMode,
    tolerance: f64,
) -> Result<Chain, EnumError> {
    let chain = build_chain(spec, y1, s, mode)?;
    if chain.closure_residual.is_nan() || chain.closure_residual > tolerance {
        return Err(EnumError::ClosureViolation(chain.closure_residual));
    }
    Ok(chain)
}

/// A representation with `-tr_h = +-2` and regular pairs `(X_l, X_{l+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryChain {
    pub chain: Chain,
    /// `lambda_1, ..., lambda_r`; the last two solve the closure.
    pub lambdas: Vec<C64>,
    /// The square roots `b_l` of `(-1)^{q~_l - 1} s_l^{q_l}`.
    pub b: Vec<C64>,
}

/// `X_{l+1} = (D(lambda_1) E(b_1) ... D(lambda_l) E(b_l)).A(1)` with the
/// free `lambda_1..lambda_{r-2}` given and the last two solving
/// `D(lambda_1) E(b_1) ... D(lambda_r) E(b_r) = D(lambda)`. Each `Y_l`
/// follows from `(-1)^{q~}({1-q} X_l + {q} Y_l) = -X_{l+1}`.
pub fn build_binary(
    spec: &MontesinosSpec,
    s: &[C64],
    free: &[C64],
    tolerance: f64,
) -> Result<BinaryChain, EnumError> {
    let tangles = spec.tangles();
    let r = tangles.len();
    if s.len() != r {
        return Err(EnumError::InvalidParameter(
            "one s value per tangle is required",
        ));
    }
    if free.len() < r.saturating_sub(2) {
        return Err(EnumError::InvalidParameter(
            "r - 2 free lambda values are required",
        ));
    }
    let b: Vec<C64> = tangles
        .iter()
        .zip(s)
        .map(|(td, &sl)| transfer_weight(td, sl).sqrt())
        .collect();

    let lambdas: Vec<C64> = if r == 1 {
        if (b[0] - b[0].inv()).norm() > tolerance {
            return Err(EnumError::NoSolution);
        }
        alloc::vec![ONE]
    } else {
        let mut prefix = Mat2::IDENTITY;
        for l in 0..r - 2 {
            prefix = prefix * dmat(free[l])? * e_unchecked(b[l]);
        }
        let target = prefix.inverse().ok_or(EnumError::NoSolution)?;
        let (c1, c2, _c3) = de_decompose(&target, b[r - 2], b[r - 1], tolerance)?;
        let mut out: Vec<C64> = free[..r - 2].to_vec();
        out.push(c1);
        out.push(c2);
        out
    };

    let a1 = a_unchecked(ONE);
    let mut xs = Vec::with_capacity(r + 1);
    xs.push(a1);
    let mut g = Mat2::IDENTITY;
    for l in 0..r {
        g = g * dmat(lambdas[l])? * e_unchecked(b[l]);
        let ginv = g.inverse().ok_or(EnumError::NoSolution)?;
        xs.push(g * a1 * ginv);
    }
    let closure_residual = xs[r].max_abs_diff(&a1);
    xs[r] = a1;

    let mut chain = Chain {
        x: Vec::with_capacity(r),
        y: Vec::with_capacity(r),
        ends: Vec::with_capacity(r),
        closure_residual,
    };
    for (l, td) in tangles.iter().enumerate() {
        let (xl, xn) = (xs[l], xs[l + 1]);
        let regular = is_regular_pair(
            &TraceFreeMat::new(xl, tol::CONSTRUCTION.max(tolerance))?,
            &TraceFreeMat::new(xn, tol::CONSTRUCTION.max(tolerance))?,
            tolerance.max(tol::CONSTRUCTION),
        )?;
        if !regular.is_regular() {
            return Err(EnumError::NonRegular(l));
        }
        let bq = bracket(td.q, s[l]);
        if bq.norm() < tol::ZERO {
            return Err(EnumError::SingularBracket(bq.norm()));
        }
        let y = (-xn * parity_sign(td.q_tilde) - xl * bracket(1 - td.q, s[l])) * bq.inv();
        chain.x.push(xl);
        chain.y.push(y);
        chain.ends.push(closed_form_ends(td, &xl, &y, s[l]));
    }
    if closure_residual.is_nan() || closure_residual > tolerance {
        return Err(EnumError::ClosureViolation(closure_residual));
    }
    Ok(BinaryChain { chain, lambdas, b })
}

fn dmat(l: C64) -> Result<Mat2, EnumError> {
    if l.norm() == 0.0 || !l.re.is_finite() || !l.im.is_finite() {
        return Err(EnumError::InvalidParameter(
            "lambda must be nonzero and finite",
        ));
    }
    Ok(Mat2::diag(l, l.inv()))
}

/// Solves `D(c1) E(b1) D(c2) E(b2) D(c3) = Z` for `det Z = 1`.
///
/// With `M = E(b1) D(c2) E(b2)`, the products `M11 M22` and `Z11 Z22` must
/// agree, which is a quadratic `K x^2 + (L - Z11 Z22) x + K = 0` in
/// `x = c2^2`. The roots of `M12 = 0` and `M21 = 0` are tried as well; then
/// `c1 c3` and `c1 / c3` are read off from the entries, and the candidate
/// with the smallest multiply-back residual is returned.
pub fn de_decompose(
    z: &Mat2,
    b1: C64,
    b2: C64,
    tolerance: f64,
) -> Result<(C64, C64, C64), EnumError> {
    if b1.norm() == 0.0 || b2.norm() == 0.0 {
        return Err(EnumError::InvalidParameter("b must be nonzero"));
    }
    let half = |b: C64| ((b + b.inv()) * 0.5, (b - b.inv()) * 0.5);
    let (al1, be1) = half(b1);
    let (al2, be2) = half(b2);
    let k = al1 * al2 * be1 * be2;
    let l = (al1 * al2).powi(2) + (be1 * be2).powi(2);
    let [z11, z12, z21, z22] = z.0;
    let scale = z.max_abs().max(1.0);

    let mut candidates: Vec<C64> = Vec::new();
    if k.norm() > tol::ZERO {
        let bq = l - z11 * z22;
        let disc = (bq * bq - k * k * 4.0).sqrt();
        for root in [(-bq + disc) / (k * 2.0), (-bq - disc) / (k * 2.0)] {
            candidates.push(root);
        }
    }
    if (al1 * be2).norm() > tol::ZERO {
        candidates.push(-(be1 * al2) / (al1 * be2));
    }
    if (be1 * al2).norm() > tol::ZERO {
        candidates.push(-(al1 * be2) / (be1 * al2));
    }
    if candidates.is_empty() {
        return Err(EnumError::DegenerateParameters);
    }

    let mut best: Option<(f64, (C64, C64, C64))> = None;
    for x in candidates {
        if x.norm() < tol::ZERO || !x.re.is_finite() || !x.im.is_finite() {
            continue;
        }
        let c2 = x.sqrt();
        let m = e_unchecked(b1) * Mat2::diag(c2, c2.inv()) * e_unchecked(b2);
        let [m11, m12, m21, m22] = m.0;
        let big = |u: C64| u.norm() > tol::ZERO * scale;
        let prod = if m11.norm() >= m22.norm() && big(m11) {
            z11 / m11
        } else if big(m22) && big(z22) {
            m22 / z22
        } else {
            ONE
        };
        let ratio = if m12.norm() >= m21.norm() && big(m12) {
            z12 / m12
        } else if big(m21) && big(z21) {
            m21 / z21
        } else {
            ONE
        };
        if prod.norm() == 0.0 || ratio.norm() == 0.0 {
            continue;
        }
        let c1 = (prod * ratio).sqrt();
        let c3 = prod / c1;
        let back = Mat2::diag(c1, c1.inv()) * m * Mat2::diag(c3, c3.inv());
        let residual = back.max_abs_diff(z);
        if residual.is_finite() && best.is_none_or(|(r, _)| residual < r) {
            best = Some((residual, (c1, c2, c3)));
        }
    }
    match best {
        Some((residual, c)) if residual <= tolerance * scale => Ok(c),
        Some(_) => Err(EnumError::NoSolution),
        None => Err(EnumError::DegenerateParameters),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::mat_e;

    fn check(z: &Mat2, b1: C64, b2: C64) {
        let (c1, c2, c3) = de_decompose(z, b1, b2, 1e-10).unwrap();
        let back = Mat2::diag(c1, c1.inv())
            * mat_e(b1).unwrap()
            * Mat2::diag(c2, c2.inv())
            * mat_e(b2).unwrap()
            * Mat2::diag(c3, c3.inv());
        assert!(back.max_abs_diff(z) < 1e-10, "{:?}", back);
    }

    #[test]
    fn decomposes_product_of_e() {
        let (b1, b2) = (C64::new(0.6, 0.8), C64::new(1.2, -0.3));
        let z = mat_e(b1).unwrap() * mat_e(b2).unwrap();
        check(&z, b1, b2);
    }

    #[test]
    fn decomposes_generic() {
        let two = C64::new(2.0, 0.0);
        let z = Mat2::new(
            C64::new(1.0, 0.5),
            C64::new(0.3, -0.2),
            C64::new(-0.4, 0.1),
            C64::new(0.0, 0.0),
        );
        // make det 1 by fixing z22
        let z22 = (ONE + z.0[1] * z.0[2]) / z.0[0];
        let z = Mat2::new(z.0[0], z.0[1], z.0[2], z22);
        check(&z, two, two);
    }

    #[test]
    fn decomposes_diagonal() {
        let b = C64::from_polar(1.0, 0.7);
        let lam = C64::new(1.7, 0.4);
        check(&Mat2::diag(lam, lam.inv()), b, b);
        check(&Mat2::IDENTITY, b, b.inv());
    }

    #[test]
    fn degenerate_parameters() {
        let z = Mat2::new(ONE, ONE, ZERO_C, ONE);
        assert!(matches!(
            de_decompose(&z, ONE, ONE, 1e-10),
            Err(EnumError::DegenerateParameters)
        ));
    }

    const ZERO_C: C64 = crate::mat2::ZERO;
}
