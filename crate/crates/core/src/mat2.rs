//! 2x2 complex matrices and the special families used by the classification.
//!
//! `P.X` denotes `P X P^{-1}` ([`conjugate`]). The tracefree matrices
//! `A(a)`, `S_a`, `S'_a` and the group elements `D(b)`, `E(b)` satisfy
//! `E(b).A(1) = A(b^2)` and `D(b).A(1) = A(1)`.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use thiserror::Error;

use crate::tol;

pub type C64 = Complex<f64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Mat2Error {
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not tracefree with determinant 1 (|tr| = {trace:e}, |det - 1| = {det:e})")]
    NotTraceFree { trace: f64, det: f64 },
}

/// Row-major 2x2 complex matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Mat2(pub [C64; 4]);

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "[[{}, {}], [{}, {}]]", a, b, c, d)
    }
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([ONE, ZERO, ZERO, ONE]);
    pub const ZERO: Mat2 = Mat2([ZERO, ZERO, ZERO, ZERO]);

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn diag(a: C64, d: C64) -> Self {
        Mat2([a, ZERO, ZERO, d])
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2([a.into(), b.into(), c.into(), d.into()])
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.0[2 * row + col]
    }

    pub fn trace(&self) -> C64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> C64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn scale(&self, k: C64) -> Mat2 {
        Mat2(self.0.map(|x| x * k))
    }

    /// Inverse, or `None` when `|det|` is below [`tol::ZERO`] relative to
    /// the entry scale.
    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        let scale = self.max_abs().max(1.0);
        if det.norm() <= tol::ZERO * scale * scale {
            return None;
        }
        let [a, b, c, d] = self.0;
        Some(Mat2([d / det, -b / det, -c / det, a / det]))
    }

    /// Inverse of a determinant-1 matrix, `[[d, -b], [-c, a]]`.
    pub fn adjugate(&self) -> Mat2 {
        let [a, b, c, d] = self.0;
        Mat2([d, -b, -c, a])
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max absolute entry difference, the norm used for every residual.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o += r;
        }
        Mat2(out)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o -= r;
        }
        Mat2(out)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2(self.0.map(|x| -x))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl Mul<C64> for Mat2 {
    type Output = Mat2;
    fn mul(self, k: C64) -> Mat2 {
        self.scale(k)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, k: f64) -> Mat2 {
        Mat2(self.0.map(|x| x * k))
    }
}

impl Mul<Mat2> for C64 {
    type Output = Mat2;
    fn mul(self, m: Mat2) -> Mat2 {
        m.scale(self)
    }
}

/// An element of `SL_0(2,C)`: trace 0, determinant 1, hence `X^2 = -I`
/// and `X^{-1} = -X`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceFreeMat(Mat2);

impl TraceFreeMat {
    pub fn new(m: Mat2, tol: f64) -> Result<Self, Mat2Error> {
        let trace = m.trace().norm();
        let det = (m.det() - ONE).norm();
        if trace > tol || det > tol {
            return Err(Mat2Error::NotTraceFree { trace, det });
        }
        Ok(TraceFreeMat(m))
    }

    pub fn mat(&self) -> Mat2 {
        self.0
    }

    pub fn inverse(&self) -> TraceFreeMat {
        TraceFreeMat(-self.0)
    }
}

impl From<TraceFreeMat> for Mat2 {
    fn from(x: TraceFreeMat) -> Mat2 {
        x.0
    }
}

fn nonzero(a: C64) -> Result<C64, Mat2Error> {
    if a.norm() == 0.0 || !a.re.is_finite() || !a.im.is_finite() {
        Err(Mat2Error::ZeroParameter)
    } else {
        Ok(a)
    }
}

/// `A(a) = 1/2 [[(a + 1/a) i, a - 1/a], [a - 1/a, -(a + 1/a) i]]`.
pub fn mat_a(a: C64) -> Result<TraceFreeMat, Mat2Error> {
    let a = nonzero(a)?;
    Ok(TraceFreeMat(a_unchecked(a)))
}

pub(crate) fn a_unchecked(a: C64) -> Mat2 {
    let inv = a.inv();
    let plus = (a + inv) * I * 0.5;
    let minus = (a - inv) * 0.5;
    Mat2([plus, minus, minus, -plus])
}

/// `D(b) = diag(b, 1/b)`.
pub fn mat_d(b: C64) -> Result<Mat2, Mat2Error> {
    let b = nonzero(b)?;
    Ok(Mat2::diag(b, b.inv()))
}

/// `E(b) = 1/2 [[b + 1/b, (b - 1/b) i], [-(b - 1/b) i, b + 1/b]]`.
pub fn mat_e(b: C64) -> Result<Mat2, Mat2Error> {
    let b = nonzero(b)?;
    Ok(e_unchecked(b))
}

pub(crate) fn e_unchecked(b: C64) -> Mat2 {
    let inv = b.inv();
    let alpha = (b + inv) * 0.5;
    let beta = (b - inv) * 0.5 * I;
    Mat2([alpha, beta, -beta, alpha])
}

/// Which of the two non-regular normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SVariant {
    /// `S_a = [[ai, 1], [0, -ai]]`
    Primary,
    /// `S'_a = [[ai, 0], [1, -ai]]`
    Transposed,
}

pub fn mat_s(a: i8, variant: SVariant) -> Result<TraceFreeMat, Mat2Error> {
    if a != 1 && a != -1 {
        return Err(Mat2Error::InvalidParameter("S_a requires a in {+1, -1}"));
    }
    let ai = I * a as f64;
    Ok(TraceFreeMat(match variant {
        SVariant::Primary => Mat2([ai, ONE, ZERO, -ai]),
        SVariant::Transposed => Mat2([ai, ZERO, ONE, -ai]),
    }))
}

/// `P.X = P X P^{-1}`.
pub fn conjugate(p: &Mat2, x: &Mat2) -> Result<Mat2, Mat2Error> {
    let inv = p.inverse().ok_or(Mat2Error::SingularMatrix)?;
    Ok(*p * *x * inv)
}

/// `{k}_s = sign(k) * sum_{j=1}^{|k|} s^{2j-1-|k|}`.
///
/// Evaluated as `(s^k - s^{-k}) / (s - 1/s)` away from `s = +-1`, as the
/// explicit sum within [`tol::BRACKET_POLYNOMIAL`] of `+-1`, and as
/// `k s^{k-1}` within [`tol::BRACKET_DEGENERATE`].
pub fn bracket(k: i64, s: C64) -> C64 {
    if k == 0 {
        return ZERO;
    }
    let near_one = (s - ONE).norm();
    let near_minus_one = (s + ONE).norm();
    if near_one < tol::BRACKET_DEGENERATE || near_minus_one < tol::BRACKET_DEGENERATE {
        let sign = if near_one < near_minus_one { 1.0 } else { -1.0 };
        let pow = if (k - 1) % 2 == 0 { 1.0 } else { sign };
        return C64::new(k as f64 * pow, 0.0);
    }
    if near_one < tol::BRACKET_POLYNOMIAL || near_minus_one < tol::BRACKET_POLYNOMIAL {
        let n = k.unsigned_abs() as i64;
        let s2 = s * s;
        let mut term = powi(s, 1 - n);
        let mut sum = ZERO;
        for _ in 0..n {
            sum += term;
            term *= s2;
        }
        return if k < 0 { -sum } else { sum };
    }
    let sk = powi(s, k);
    (sk - sk.inv()) / (s - s.inv())
}

/// `s^k` for any integer `k`.
pub fn powi(s: C64, k: i64) -> C64 {
    let base = if k < 0 { s.inv() } else { s };
    let mut e = k.unsigned_abs();
    let mut acc = ONE;
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

/// `(-1)^n` as a real scalar.
pub fn parity_sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Normal form of a pair `(Z, W)` of tracefree matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PairNormalForm {
    /// `P.Z = A(1)`, `P.W = A(s)`, `s + 1/s = -tr(ZW)`, `Im(s) >= 0`.
    Regular { p: Mat2, s: C64 },
    /// `-tr(ZW) = 2a`, `W != aZ`; `P.Z = A(1)`, `P.W = S_a` or `S'_a`.
    NonRegular { p: Mat2, a: i8, variant: SVariant },
}

impl PairNormalForm {
    pub fn normalizer(&self) -> Mat2 {
        match self {
            PairNormalForm::Regular { p, .. } | PairNormalForm::NonRegular { p, .. } => *p,
        }
    }

    pub fn is_regular(&self) -> bool {
        matches!(self, PairNormalForm::Regular { .. })
    }
}

/// Decides regularity of `(Z, W)` and returns a normalizing `P` in SL(2,C).
///
/// `P` diagonalizes `Z` to `A(1) = diag(i, -i)` from its eigenvectors and is
/// then adjusted by a diagonal `D(b)` to balance the off-diagonal entries of
/// `P.W`. Of the two solutions `s`, `1/s` the one with `Im(s) > 0` (or
/// `|s| >= 1` on the real axis) is returned.
pub fn is_regular_pair(
    z: &TraceFreeMat,
    w: &TraceFreeMat,
    tol: f64,
) -> Result<PairNormalForm, Mat2Error> {
    let z = TraceFreeMat::new(z.mat(), tol.max(tol::CONSTRUCTION))?.mat();
    let w = TraceFreeMat::new(w.mat(), tol.max(tol::CONSTRUCTION))?.mat();

    let p0 = diagonalizer(&z);
    let w0 = p0 * w * p0.adjugate();
    let [w11, w12, w21, _] = w0.0;
    let scale = w0.max_abs().max(1.0);
    let small = |x: C64| x.norm() <= tol * scale;

    match (small(w12), small(w21)) {
        (true, true) => {
            // W = aZ with a = -i w11
            let s = -I * w11;
            let s = C64::new(s.re.signum(), 0.0);
            Ok(PairNormalForm::Regular { p: p0, s })
        }
        (false, true) => {
            let a = sign_of(-I * w11);
            // D(b) scales w12 by b^2
            let b = (w12.inv()).sqrt();
            let p = Mat2::diag(b, b.inv()) * p0;
            Ok(PairNormalForm::NonRegular {
                p,
                a,
                variant: SVariant::Primary,
            })
        }
        (true, false) => {
            let a = sign_of(-I * w11);
            let b = w21.sqrt();
            let p = Mat2::diag(b, b.inv()) * p0;
            Ok(PairNormalForm::NonRegular {
                p,
                a,
                variant: SVariant::Transposed,
            })
        }
        (false, false) => {
            // b^4 = w21 / w12 makes both off-diagonal entries equal to c
            let b2 = (w21 / w12).sqrt();
            let mut c = b2 * w12;
            let mut s = -I * w11 + c;
            let mut b2 = b2;
            if !prefer(s) {
                b2 = -b2;
                c = -c;
                s = -I * w11 + c;
            }
            let b = b2.sqrt();
            let p = Mat2::diag(b, b.inv()) * p0;
            Ok(PairNormalForm::Regular { p, s })
        }
    }
}

fn sign_of(x: C64) -> i8 {
    if x.re >= 0.0 {
        1
    } else {
        -1
    }
}

fn prefer(s: C64) -> bool {
    if s.im.abs() > tol::ZERO * s.norm().max(1.0) {
        s.im > 0.0
    } else {
        s.norm() >= 1.0 - tol::ZERO
    }
}

/// A determinant-1 `P` with `P Z P^{-1} = diag(i, -i)`.
fn diagonalizer(z: &Mat2) -> Mat2 {
    let [z11, z12, z21, _] = z.0;
    let eigvec = |lambda: C64| {
        // rows of Z - lambda: (z11 - lambda, z12), (z21, -z11 - lambda)
        let v1 = (z12, lambda - z11);
        let v2 = (lambda + z11, z21);
        if v1.0.norm() + v1.1.norm() >= v2.0.norm() + v2.1.norm() {
            v1
        } else {
            v2
        }
    };
    let (x1, y1) = eigvec(I);
    let (x2, y2) = eigvec(-I);
    let det = x1 * y2 - x2 * y1;
    let k = det.sqrt().inv();
    // columns are eigenvectors for i and -i
    let v = Mat2([x1 * k, x2 * k, y1 * k, y2 * k]);
    v.adjugate()
}
