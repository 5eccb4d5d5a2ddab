//! The link specification `M(p_1/q_1, ..., p_r/q_r)` and its derived data.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write;

use crate::rational::{cf_expand, mu_of, Fraction, RationalError, TangleData};

/// A Montesinos link. Each fraction is canonical (`p > 0`, reduced, sign in
/// `q`) and carries the expansion chosen by [`cf_expand`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MontesinosSpec {
    fractions: Vec<Fraction>,
    tangles: Vec<TangleData>,
    mu: Fraction,
}

impl MontesinosSpec {
    pub fn new(fractions: Vec<Fraction>) -> Result<Self, RationalError> {
        if fractions.is_empty() {
            return Err(RationalError::EmptyExpansion);
        }
        let fractions = fractions
            .iter()
            .map(|f| Fraction::tangle(f.numer(), f.denom()))
            .collect::<Result<Vec<_>, _>>()?;
        let tangles = fractions
            .iter()
            .map(|f| cf_expand(f).and_then(TangleData::new))
            .collect::<Result<Vec<_>, _>>()?;
        let mu = mu_of(&fractions)?;
        Ok(MontesinosSpec {
            fractions,
            tangles,
            mu,
        })
    }

    /// Convenience constructor from `(p, q)` pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self, RationalError> {
        let fractions = pairs
            .iter()
            .map(|&(p, q)| Fraction::tangle(p, q))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(fractions)
    }

    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }

    pub fn fractions(&self) -> &[Fraction] {
        &self.fractions
    }

    pub fn tangles(&self) -> &[TangleData] {
        &self.tangles
    }

    /// `mu = sum q_l / p_l`, normalized with positive denominator.
    pub fn mu(&self) -> Fraction {
        self.mu
    }

    /// `N(mu)`, the numerator of `mu`.
    pub fn mu_numerator(&self) -> i64 {
        self.mu.numer()
    }

    pub fn mu_is_zero(&self) -> bool {
        self.mu.is_zero()
    }

    pub fn crossing_count(&self) -> u64 {
        self.tangles
            .iter()
            .map(|t| t.expansion.crossing_count())
            .sum()
    }
}

impl fmt::Display for MontesinosSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::from("M(");
        for (i, fr) in self.fractions.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{}/{}", fr.numer(), fr.denom())?;
        }
        out.push(')');
        f.write_str(&out)
    }
}
