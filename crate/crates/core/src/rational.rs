//! Exact rational arithmetic for rational tangles.
//!
//! A rational tangle `[[k_1],...,[k_m]]` has the continued fraction
//! `[[k_1,...,k_m]] = k_m + 1/[[k_1,...,k_{m-1}]]` and the tangle fraction
//! `[[k_1,...,k_m]]^{(-1)^{m-1}}`. The integers `u_j`, `v_j` satisfy the
//! three-term recursion `x_{j+1} = k_{j+1} x_j + x_{j-1}` with `u_0 = 0`,
//! `u_1 = 1`, `v_0 = 1`, `v_1 = k_1`.
//!
//! Everything here is integer arithmetic with overflow detection.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("division by zero in continued fraction")]
    DivisionByZero,
    #[error("invalid fraction {0}/{1}: numerator and denominator must be nonzero")]
    InvalidFraction(i64, i64),
    #[error("continued fraction must have at least one term")]
    EmptyExpansion,
    #[error("continued fraction term {0} is zero")]
    ZeroTerm(usize),
    #[error("integer overflow")]
    Overflow,
}

pub type Result<T> = core::result::Result<T, RationalError>;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| RationalError::Overflow)
}

/// A reduced integer pair `p/q`.
///
/// The pair is kept as given up to a common positive factor, so the signs of
/// `p` and `q` are meaningful: `3/-2` and `-3/2` are equal as rationals
/// (see [`PartialEq`]) but are different tangle specifications.
#[derive(Clone, Copy, Debug, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fraction {
    p: i64,
    q: i64,
}

impl Fraction {
    /// The rational `p/q` normalized with `q > 0`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(RationalError::DivisionByZero);
        }
        let (p, q) = if q < 0 {
            (-(p as i128), -(q as i128))
        } else {
            (p as i128, q as i128)
        };
        Self::reduce(p, q)
    }

    /// A tangle fraction in canonical form: reduced, `p > 0`, sign carried
    /// by `q`. Both entries must be nonzero.
    pub fn tangle(p: i64, q: i64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(RationalError::InvalidFraction(p, q));
        }
        let (p, q) = if p < 0 {
            (-(p as i128), -(q as i128))
        } else {
            (p as i128, q as i128)
        };
        Self::reduce(p, q)
    }

    /// The pair `p/q` reduced by `gcd(|p|, |q|)` with signs kept as given.
    pub fn pair(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(RationalError::InvalidFraction(p, q));
        }
        Self::reduce(p as i128, q as i128)
    }

    pub fn integer(n: i64) -> Self {
        Fraction { p: n, q: 1 }
    }

    pub fn zero() -> Self {
        Fraction { p: 0, q: 1 }
    }

    fn reduce(p: i128, q: i128) -> Result<Self> {
        let g = gcd(p, q).max(1);
        Ok(Fraction {
            p: narrow(p / g)?,
            q: narrow(q / g)?,
        })
    }

    pub fn numer(&self) -> i64 {
        self.p
    }

    pub fn denom(&self) -> i64 {
        self.q
    }

    /// Field-by-field equality, as opposed to equality of rationals.
    pub fn same_pair(&self, other: &Fraction) -> bool {
        self.p == other.p && self.q == other.q
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0
    }

    pub fn is_integer(&self) -> bool {
        self.q == 1 || self.q == -1
    }

    /// Standard form with positive denominator.
    pub fn normalized(&self) -> Self {
        if self.q < 0 {
            Fraction {
                p: -self.p,
                q: -self.q,
            }
        } else {
            *self
        }
    }

    pub fn checked_add(&self, rhs: &Fraction) -> Result<Self> {
        let p = self.p as i128 * rhs.q as i128 + rhs.p as i128 * self.q as i128;
        let q = self.q as i128 * rhs.q as i128;
        Self::from_wide(p, q)
    }

    pub fn checked_sub(&self, rhs: &Fraction) -> Result<Self> {
        self.checked_add(&Fraction {
            p: rhs.p.checked_neg().ok_or(RationalError::Overflow)?,
            q: rhs.q,
        })
    }

    pub fn checked_mul(&self, rhs: &Fraction) -> Result<Self> {
        Self::from_wide(
            self.p as i128 * rhs.p as i128,
            self.q as i128 * rhs.q as i128,
        )
    }

    pub fn checked_div(&self, rhs: &Fraction) -> Result<Self> {
        if rhs.p == 0 {
            return Err(RationalError::DivisionByZero);
        }
        Self::from_wide(
            self.p as i128 * rhs.q as i128,
            self.q as i128 * rhs.p as i128,
        )
    }

    pub fn recip(&self) -> Result<Self> {
        if self.p == 0 {
            return Err(RationalError::DivisionByZero);
        }
        Ok(Fraction {
            p: self.q,
            q: self.p,
        }
        .normalized())
    }

    fn from_wide(p: i128, q: i128) -> Result<Self> {
        if q == 0 {
            return Err(RationalError::DivisionByZero);
        }
        let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
        Self::reduce(p, q)
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.p as i128 * other.q as i128 == other.p as i128 * self.q as i128
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let a = self.normalized();
        let b = other.normalized();
        (a.p as i128 * b.q as i128).partial_cmp(&(b.p as i128 * a.q as i128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// A nonempty list of nonzero integers `(k_1, ..., k_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<i64>", into = "Vec<i64>"))]
pub struct ContinuedFraction(Vec<i64>);

impl ContinuedFraction {
    pub fn new(ks: Vec<i64>) -> Result<Self> {
        if ks.is_empty() {
            return Err(RationalError::EmptyExpansion);
        }
        if let Some(i) = ks.iter().position(|&k| k == 0) {
            return Err(RationalError::ZeroTerm(i));
        }
        Ok(ContinuedFraction(ks))
    }

    pub fn terms(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of crossings of the standard diagram, `sum |k_i|`.
    pub fn crossing_count(&self) -> u64 {
        self.0.iter().map(|k| k.unsigned_abs()).sum()
    }
}

impl TryFrom<Vec<i64>> for ContinuedFraction {
    type Error = RationalError;

    fn try_from(ks: Vec<i64>) -> Result<Self> {
        ContinuedFraction::new(ks)
    }
}

impl From<ContinuedFraction> for Vec<i64> {
    fn from(cf: ContinuedFraction) -> Self {
        cf.0
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[[")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", k)?;
        }
        f.write_str("]]")
    }
}

/// `[[k_1,...,k_m]]` as an exact rational.
///
/// Fails when an intermediate value `[[k_1,...,k_j]]`, `j < m`, is zero,
/// since the next step would invert it.
pub fn cf_eval(ks: &ContinuedFraction) -> Result<Fraction> {
    let terms = ks.terms();
    let mut value = Fraction::integer(terms[0]);
    for &k in &terms[1..] {
        let inv = value.recip()?;
        value = Fraction::integer(k).checked_add(&inv)?;
    }
    Ok(value)
}

/// `[[k_1,...,k_m]]^{(-1)^{m-1}}`.
pub fn tangle_fraction(ks: &ContinuedFraction) -> Result<Fraction> {
    let value = cf_eval(ks)?;
    if ks.len() % 2 == 1 {
        Ok(value)
    } else {
        value.recip()
    }
}

/// The sequences `u_0..u_m` and `v_0..v_m`.
pub fn uv_sequences(ks: &ContinuedFraction) -> Result<(Vec<i64>, Vec<i64>)> {
    let terms = ks.terms();
    let m = terms.len();
    let mut u = Vec::with_capacity(m + 1);
    let mut v = Vec::with_capacity(m + 1);
    u.push(0);
    u.push(1);
    v.push(1);
    v.push(terms[0]);
    for j in 1..m {
        let k = terms[j];
        let next_u = step(k, u[j], u[j - 1])?;
        let next_v = step(k, v[j], v[j - 1])?;
        u.push(next_u);
        v.push(next_v);
    }
    Ok((u, v))
}

fn step(k: i64, cur: i64, prev: i64) -> Result<i64> {
    k.checked_mul(cur)
        .and_then(|x| x.checked_add(prev))
        .ok_or(RationalError::Overflow)
}

/// The companion pair `(p~, q~)` of a rational tangle.
///
/// `p~ = u_m, q~ = u_{m-1}` for odd `m` and `q~ = u_m, p~ = u_{m-1}` for
/// even `m`; `q~` is zero for a single twist region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Companion {
    pub p_tilde: i64,
    pub q_tilde: i64,
}

pub fn tilde_of(ks: &ContinuedFraction) -> Result<Companion> {
    let (u, _) = uv_sequences(ks)?;
    let m = ks.len();
    Ok(if m % 2 == 1 {
        Companion {
            p_tilde: u[m],
            q_tilde: u[m - 1],
        }
    } else {
        Companion {
            p_tilde: u[m - 1],
            q_tilde: u[m],
        }
    })
}

/// The signed pair `(p, q)` read off the `v` sequence:
/// `(v_m, v_{m-1})` for odd `m`, `(v_{m-1}, v_m)` for even `m`.
///
/// As a rational this equals [`tangle_fraction`]; the signs are the ones
/// entering the closed-form end matrices.
pub fn signed_pair(ks: &ContinuedFraction) -> Result<(i64, i64)> {
    let (_, v) = uv_sequences(ks)?;
    let m = ks.len();
    Ok(if m % 2 == 1 {
        (v[m], v[m - 1])
    } else {
        (v[m - 1], v[m])
    })
}

/// Everything about one rational tangle that the closed forms need.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TangleData {
    pub expansion: ContinuedFraction,
    pub p: i64,
    pub q: i64,
    pub p_tilde: i64,
    pub q_tilde: i64,
    pub u: Vec<i64>,
    pub v: Vec<i64>,
}

impl TangleData {
    pub fn new(expansion: ContinuedFraction) -> Result<Self> {
        let (u, v) = uv_sequences(&expansion)?;
        let (p, q) = signed_pair(&expansion)?;
        let c = tilde_of(&expansion)?;
        Ok(TangleData {
            expansion,
            p,
            q,
            p_tilde: c.p_tilde,
            q_tilde: c.q_tilde,
            u,
            v,
        })
    }

    pub fn fraction(&self) -> Fraction {
        Fraction {
            p: self.p,
            q: self.q,
        }
    }

    /// `p~ q - p q~`, which is 1 for every expansion.
    pub fn determinant(&self) -> i128 {
        self.p_tilde as i128 * self.q as i128 - self.p as i128 * self.q_tilde as i128
    }

    pub fn p_tilde_odd(&self) -> bool {
        self.p_tilde.rem_euclid(2) == 1
    }

    pub fn q_tilde_odd(&self) -> bool {
        self.q_tilde.rem_euclid(2) == 1
    }
}

/// Expansion `ks` with `(v_m, v_{m-1}) = (a, b)` exactly.
///
/// Reverse Euclid: each step picks a nonzero `k` with `a = k b + r` and
/// continues from `(b, r)` until `b = 1`. Remainders are chosen so that no
/// intermediate `v_j` (`j < m`) vanishes.
fn expand_pair(mut a: i64, mut b: i64) -> Result<Vec<i64>> {
    if b == 0 || gcd(a as i128, b as i128) != 1 {
        return Err(RationalError::InvalidFraction(a, b));
    }
    let mut rev = Vec::new();
    loop {
        if b == 1 && a != 0 {
            rev.push(a);
            break;
        }
        let k = if b > 0 {
            match a.div_euclid(b) {
                0 => 1,
                k => k,
            }
        } else {
            // smallest r = a - k b >= 1
            let nb = -(b as i128);
            let k = (1 - a as i128 + nb - 1).div_euclid(nb);
            let k = narrow(k)?;
            if k == 0 {
                1
            } else {
                k
            }
        };
        let r = (a as i128) - (k as i128) * (b as i128);
        rev.push(k);
        a = b;
        b = narrow(r)?;
        if rev.len() > 256 {
            return Err(RationalError::Overflow);
        }
    }
    rev.reverse();
    Ok(rev)
}

/// Changes the length parity while keeping the final `(v_m, v_{m-1})`.
fn flip_parity(ks: &[i64]) -> Option<Vec<i64>> {
    let mut out = Vec::with_capacity(ks.len() + 1);
    if ks[0] != 1 {
        // [[x]] = (x - 1) + 1/1
        out.push(1);
        out.push(ks[0] - 1);
        out.extend_from_slice(&ks[1..]);
        Some(out)
    } else if ks.len() >= 2 && ks[1] != -1 {
        out.push(ks[1] + 1);
        out.extend_from_slice(&ks[2..]);
        Some(out)
    } else {
        None
    }
}

/// An expansion whose signed pair (see [`signed_pair`]) is exactly `f`.
///
/// Hence `tangle_fraction(cf_expand(f)) == f`, and the signs of `f` are
/// the signs used by the closed forms.
pub fn cf_expand(f: &Fraction) -> Result<ContinuedFraction> {
    let (p, q) = (f.numer(), f.denom());
    if p == 0 || q == 0 {
        return Err(RationalError::InvalidFraction(p, q));
    }
    // odd length: (v_m, v_{m-1}) = (p, q); even length: (v_m, v_{m-1}) = (q, p)
    for (a, b, odd) in [(p, q, true), (q, p, false)] {
        let ks = expand_pair(a, b)?;
        let candidate = if (ks.len() % 2 == 1) == odd {
            Some(ks)
        } else {
            flip_parity(&ks)
        };
        if let Some(ks) = candidate {
            let cf = ContinuedFraction::new(ks)?;
            if signed_pair(&cf)? == (p, q) && tangle_fraction(&cf).is_ok() {
                return Ok(cf);
            }
        }
    }
    Err(RationalError::InvalidFraction(p, q))
}

/// `mu = sum q_l / p_l` over the tangles of a Montesinos link.
pub fn mu_of(fractions: &[Fraction]) -> Result<Fraction> {
    let mut mu = Fraction::zero();
    for f in fractions {
        if f.numer() == 0 {
            return Err(RationalError::InvalidFraction(f.numer(), f.denom()));
        }
        mu = mu.checked_add(&Fraction::new(f.denom(), f.numer())?)?;
    }
    Ok(mu)
}

/// `N(mu)`, the numerator of `mu` in lowest terms with positive denominator.
pub fn mu_numerator(mu: &Fraction) -> i64 {
    mu.normalized().numer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cf(ks: &[i64]) -> ContinuedFraction {
        ContinuedFraction::new(ks.to_vec()).unwrap()
    }

    fn fr(p: i64, q: i64) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(cf_eval(&cf(&[2])).unwrap(), fr(2, 1));
        assert_eq!(cf_eval(&cf(&[2, 3])).unwrap(), fr(7, 2));
        assert_eq!(cf_eval(&cf(&[2, -3, 4])).unwrap(), fr(18, 5));
    }

    #[test]
    fn eval_rejects_zero_intermediate() {
        // [[1,-1]] = -1 + 1 = 0, then inverted
        assert_eq!(
            cf_eval(&cf(&[1, -1, 2])),
            Err(RationalError::DivisionByZero)
        );
        // a zero final value is fine
        assert_eq!(cf_eval(&cf(&[1, -1])).unwrap(), Fraction::zero());
        assert_eq!(
            tangle_fraction(&cf(&[1, -1])),
            Err(RationalError::DivisionByZero)
        );
    }

    #[test]
    fn tangle_fraction_examples() {
        assert_eq!(tangle_fraction(&cf(&[3])).unwrap(), fr(3, 1));
        assert_eq!(tangle_fraction(&cf(&[2, 3])).unwrap(), fr(2, 7));
        assert_eq!(tangle_fraction(&cf(&[1, 1, 1])).unwrap(), fr(3, 2));
    }

    #[test]
    fn uv_examples() {
        assert_eq!(
            uv_sequences(&cf(&[2, 3])).unwrap(),
            (vec![0, 1, 3], vec![1, 2, 7])
        );
        assert_eq!(uv_sequences(&cf(&[5])).unwrap(), (vec![0, 1], vec![1, 5]));
        assert_eq!(
            uv_sequences(&cf(&[1, 1, 1])).unwrap(),
            (vec![0, 1, 1, 2], vec![1, 1, 2, 3])
        );
    }

    #[test]
    fn tilde_examples() {
        let t = TangleData::new(cf(&[2, 3])).unwrap();
        assert_eq!((t.p_tilde, t.q_tilde), (1, 3));
        assert_eq!((t.p, t.q), (2, 7));
        assert_eq!(t.determinant(), 1);

        let t = TangleData::new(cf(&[2])).unwrap();
        assert_eq!((t.p_tilde, t.q_tilde, t.p, t.q), (1, 0, 2, 1));
        assert_eq!(t.determinant(), 1);

        let t = TangleData::new(cf(&[1, 1, 1])).unwrap();
        assert_eq!((t.p_tilde, t.q_tilde, t.p, t.q), (2, 1, 3, 2));
        assert_eq!(t.determinant(), 1);
    }

    #[test]
    fn expand_examples() {
        let ks = cf_expand(&Fraction::tangle(2, 7).unwrap()).unwrap();
        assert_eq!(tangle_fraction(&ks).unwrap(), fr(2, 7));
        assert_eq!(
            cf_expand(&Fraction::tangle(3, 1).unwrap()).unwrap(),
            cf(&[3])
        );
        let f = Fraction::pair(-5, 2).unwrap();
        let ks = cf_expand(&f).unwrap();
        assert_eq!(tangle_fraction(&ks).unwrap(), fr(-5, 2));
        assert_eq!(signed_pair(&ks).unwrap(), (-5, 2));
    }

    #[test]
    fn expand_keeps_signs() {
        let f = Fraction::tangle(3, -2).unwrap();
        assert_eq!((f.numer(), f.denom()), (3, -2));
        let ks = cf_expand(&f).unwrap();
        assert_eq!(signed_pair(&ks).unwrap(), (3, -2));
    }

    #[test]
    fn expand_rejects_zero() {
        assert!(matches!(
            Fraction::tangle(2, 0),
            Err(RationalError::InvalidFraction(2, 0))
        ));
        assert!(Fraction::tangle(0, 3).is_err());
    }

    #[test]
    fn mu_examples() {
        let spec = [fr(2, 1), fr(3, 1)];
        let mu = mu_of(&spec).unwrap();
        assert_eq!(mu, fr(5, 6));
        assert_eq!(mu_numerator(&mu), 5);

        let spec = [
            Fraction::tangle(3, 1).unwrap(),
            Fraction::tangle(3, 1).unwrap(),
            Fraction::tangle(3, -2).unwrap(),
        ];
        assert!(mu_of(&spec).unwrap().is_zero());

        let spec = [fr(1, 1), fr(1, 1), fr(1, 1)];
        let mu = mu_of(&spec).unwrap();
        assert_eq!(mu, fr(3, 1));
        assert_eq!(mu_numerator(&mu), 3);
    }

    #[test]
    fn overflow_is_reported() {
        let ks = cf(&[i64::MAX / 2, 3, 5]);
        assert_eq!(uv_sequences(&ks), Err(RationalError::Overflow));
    }

    #[test]
    fn fraction_equality_is_rational() {
        assert_eq!(
            Fraction::pair(3, -2).unwrap(),
            Fraction::pair(-3, 2).unwrap()
        );
        assert!(!Fraction::pair(3, -2)
            .unwrap()
            .same_pair(&Fraction::pair(-3, 2).unwrap()));
    }
}
