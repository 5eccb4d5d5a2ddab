//! End matrices of a rational tangle as linear combinations of its
//! generating pair, and the induced transfer from the top ends to the
//! bottom ends.

use super::TangleError;
use crate::mat2::{bracket, parity_sign, powi, Mat2, Mat2Error, C64, ONE};
use crate::rational::TangleData;
use crate::tol;

/// Outward end matrices of one tangle.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EndMatrices {
    pub nw: Mat2,
    pub ne: Mat2,
    pub sw: Mat2,
    pub se: Mat2,
}

/// A 2x2 scalar matrix acting on rows `(rho_nw, rho_ne)` of matrices.
pub type Transfer = Mat2;

/// `nw = X`, `ne = (-1)^{p~}({1+p} X + {-p} Y)`, `sw = (-1)^{q~}({1-q} X +
/// {q} Y)`, `se = (-1)^{p~+q~}({1+p-q} X + {q-p} Y)`, brackets at `s`.
///
/// The formulas hold for arbitrary `X`, `Y` provided `s + 1/s = -tr(XY)`.
pub fn ends_closed_form(
    td: &TangleData,
    x: &Mat2,
    y: &Mat2,
    s: C64,
    tolerance: f64,
) -> Result<EndMatrices, TangleError> {
    if s.norm() == 0.0 || !s.re.is_finite() || !s.im.is_finite() {
        return Err(TangleError::Matrix(Mat2Error::ZeroParameter));
    }
    let tau = s + s.inv();
    let defect = (tau + (*x * *y).trace()).norm();
    if defect > tolerance * tau.norm().max(1.0) {
        return Err(TangleError::InconsistentTrace { defect });
    }
    Ok(ends_unchecked(td, x, y, s))
}

pub(crate) fn ends_unchecked(td: &TangleData, x: &Mat2, y: &Mat2, s: C64) -> EndMatrices {
    let (p, q) = (td.p, td.q);
    let sp = parity_sign(td.p_tilde);
    let sq = parity_sign(td.q_tilde);
    let combo = |cx: C64, cy: C64, sign: f64| (*x * cx + *y * cy) * C64::new(sign, 0.0);
    EndMatrices {
        nw: *x,
        ne: combo(bracket(1 + p, s), bracket(-p, s), sp),
        sw: combo(bracket(1 - q, s), bracket(q, s), sq),
        se: combo(bracket(1 + p - q, s), bracket(q - p, s), sp * sq),
    }
}

/// `T = (-1)^{q~-1} / {p}_s [[{p+q}, (-1)^{p~}{q}], [-(-1)^{p~}{q}, {p-q}]]`,
/// so that [`pair_transfer`] maps `(nw, ne)` to `(sw, se)`.
pub fn linear_transfer(td: &TangleData, s: C64) -> Result<Transfer, TangleError> {
    let bp = bracket(td.p, s);
    if bp.norm() < tol::ZERO {
        return Err(TangleError::SingularBracket(bp.norm()));
    }
    let sp = parity_sign(td.p_tilde);
    let pre = C64::new(parity_sign(td.q_tilde - 1), 0.0) / bp;
    let bq = bracket(td.q, s) * sp;
    Ok(Mat2::new(bracket(td.p + td.q, s), bq, -bq, bracket(td.p - td.q, s)) * pre)
}

/// `(sw, se) = -(nw, ne) . T`.
pub fn pair_transfer(nw: &Mat2, ne: &Mat2, t: &Transfer) -> (Mat2, Mat2) {
    let [t11, t12, t21, t22] = t.0;
    (-(*nw * t11 + *ne * t21), -(*nw * t12 + *ne * t22))
}

/// `B(w) = [[1 + w, a w], [-a w, 1 - w]]`, used at `a = +-1`.
pub fn mat_b(w: C64, a: C64) -> Mat2 {
    Mat2::new(ONE + w, a * w, -a * w, ONE - w)
}

/// `C(w) = 1/(a - 1/a) [[a w - 1/(a w), w - 1/w], [-(w - 1/w), a/w - w/a]]`.
pub fn mat_c(w: C64, a: C64) -> Result<Mat2, Mat2Error> {
    if a.norm() == 0.0 || w.norm() == 0.0 {
        return Err(Mat2Error::ZeroParameter);
    }
    let d = a - a.inv();
    if d.norm() < tol::ZERO {
        return Err(Mat2Error::InvalidParameter(
            "C(w) requires a not in {+1, -1}",
        ));
    }
    let (ai, wi) = (a.inv(), w.inv());
    Ok(Mat2::new(a * w - ai * wi, w - wi, -(w - wi), a * wi - ai * w) * d.inv())
}

/// `(-1)^{q~-1} s^q`, the scalar whose `B` or `C` image is the transfer.
pub fn transfer_weight(td: &TangleData, s: C64) -> C64 {
    powi(s, td.q) * parity_sign(td.q_tilde - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::{a_unchecked, I};
    use crate::rational::{cf_expand, ContinuedFraction, Fraction};
    use crate::tangle::{build_rational_diagram, propagate};
    use alloc::vec;

    fn td(ks: &[i64]) -> TangleData {
        TangleData::new(ContinuedFraction::new(ks.to_vec()).unwrap()).unwrap()
    }

    fn unit(t: f64) -> C64 {
        C64::from_polar(1.0, t)
    }

    #[test]
    fn single_crossing_sw_is_y() {
        let s = unit(0.7);
        let (x, y) = (a_unchecked(ONE), a_unchecked(s));
        let e = ends_closed_form(&td(&[1]), &x, &y, s, 1e-10).unwrap();
        assert!(e.sw.max_abs_diff(&y) < 1e-12);
    }

    #[test]
    fn ne_in_normal_form() {
        for ks in [vec![2, 3], vec![1, 1, 1], vec![3, -2], vec![-2, 1, 4]] {
            let t = td(&ks);
            let s = unit(1.1);
            let e = ends_closed_form(&t, &a_unchecked(ONE), &a_unchecked(s), s, 1e-10).unwrap();
            let expected = a_unchecked(powi(s, -t.p) * parity_sign(t.p_tilde));
            assert!(e.ne.max_abs_diff(&expected) < 1e-10, "{:?}", ks);
        }
    }

    #[test]
    fn horizontal_trace() {
        for ks in [vec![2, 3], vec![4], vec![1, -3, 2]] {
            let t = td(&ks);
            let s = unit(0.4);
            let e = ends_closed_form(&t, &a_unchecked(ONE), &a_unchecked(s), s, 1e-10).unwrap();
            let tr_h = -(e.sw * e.se).trace();
            let tr_v = -(e.ne * e.se).trace();
            let h = (powi(s, t.p) + powi(s, -t.p)) * parity_sign(t.p_tilde);
            let v = (powi(s, t.q) + powi(s, -t.q)) * parity_sign(t.q_tilde);
            assert!((tr_h - h).norm() < 1e-10, "{:?}", ks);
            assert!((tr_v - v).norm() < 1e-10, "{:?}", ks);
        }
    }

    #[test]
    fn matches_propagation() {
        for ks in [
            vec![1],
            vec![3],
            vec![2, 3],
            vec![1, 1, 1],
            vec![-2, 3, -1],
            vec![2, -1, 2, 2],
        ] {
            let t = td(&ks);
            let d = build_rational_diagram(&t.expansion);
            let s = unit(2.3);
            let (x, y) = (a_unchecked(unit(0.3)), a_unchecked(unit(0.3) * s));
            let asg = propagate(&d, x, y).unwrap();
            let e = ends_closed_form(&t, &x, &y, s, 1e-10).unwrap();
            for (m, end) in [(e.ne, d.ends.ne), (e.sw, d.ends.sw), (e.se, d.ends.se)] {
                assert!(m.max_abs_diff(&asg.get(end).unwrap()) < 1e-9, "{:?}", ks);
            }
        }
    }

    #[test]
    fn transfer_reproduces_ends() {
        for f in [(2, 7), (3, -2), (5, 3), (1, 1)] {
            let t =
                TangleData::new(cf_expand(&Fraction::pair(f.0, f.1).unwrap()).unwrap()).unwrap();
            let s = unit(0.9);
            let (x, y) = (a_unchecked(ONE), a_unchecked(s));
            let e = ends_closed_form(&t, &x, &y, s, 1e-10).unwrap();
            let tr = linear_transfer(&t, s).unwrap();
            let (sw, se) = pair_transfer(&e.nw, &e.ne, &tr);
            assert!(sw.max_abs_diff(&e.sw) < 1e-10);
            assert!(se.max_abs_diff(&e.se) < 1e-10);
        }
    }

    #[test]
    fn transfer_as_b_and_c() {
        for f in [(2, 7), (3, -2), (5, 3), (3, 1), (1, 1)] {
            let t =
                TangleData::new(cf_expand(&Fraction::pair(f.0, f.1).unwrap()).unwrap()).unwrap();
            let (p, q) = (t.p as f64, t.q as f64);
            for s in [ONE, -ONE] {
                let a = powi(s, t.p) * parity_sign(t.p_tilde);
                let expected = mat_b(C64::new(q / p, 0.0), a) * transfer_weight(&t, s);
                assert!(linear_transfer(&t, s).unwrap().max_abs_diff(&expected) < 1e-10);
            }
            let s = C64::new(0.8, 0.3);
            let a = powi(s, t.p) * parity_sign(t.p_tilde);
            let expected = mat_c(transfer_weight(&t, s), a).unwrap();
            assert!(
                linear_transfer(&t, s).unwrap().max_abs_diff(&expected) < 1e-10,
                "{:?}",
                f
            );
        }
    }

    #[test]
    fn b_and_c_are_multiplicative() {
        let a = C64::new(1.3, 0.4);
        let (w, v) = (C64::new(0.3, -1.2), C64::new(-0.7, 0.2));
        for sign in [ONE, -ONE] {
            let lhs = mat_b(w, sign) * mat_b(v, sign);
            assert!(lhs.max_abs_diff(&mat_b(w + v, sign)) < 1e-12);
        }
        let lhs = mat_c(w, a).unwrap() * mat_c(v, a).unwrap();
        assert!(lhs.max_abs_diff(&mat_c(w * v, a).unwrap()) < 1e-12);
    }

    #[test]
    fn errors() {
        let t = td(&[2]);
        let x = a_unchecked(ONE);
        assert!(matches!(
            ends_closed_form(&t, &x, &a_unchecked(I), unit(0.2), 1e-10),
            Err(TangleError::InconsistentTrace { .. })
        ));
        // {2}_i = i + 1/i = 0
        assert!(matches!(
            linear_transfer(&t, I),
            Err(TangleError::SingularBracket(_))
        ));
        assert!(mat_c(ONE, ONE).is_err());
    }
}
