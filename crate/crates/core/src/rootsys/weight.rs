use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weight in the fundamental-weight basis: `[n_1, ..., n_l]` stands for
/// `n_1 ϖ_1 + ... + n_l ϖ_l`.
///
/// Only integral weights are representable. Rational input goes through
/// [`Weight::from_rationals`], which rejects anything off the weight lattice.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The fundamental weight ϖ_i, with `i` counted from 1.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Weight::zero(rank);
        w.0[i - 1] = 1;
        w
    }

    pub fn from_rationals(coords: &[BigRational]) -> Result<Self> {
        let mut out = Vec::with_capacity(coords.len());
        for c in coords {
            if !c.is_integer() {
                let shown: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
                return Err(Error::NonIntegral(format!("[{}]", shown.join(","))));
            }
            let v = c
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::InvalidData(format!("coordinate {c} out of range")))?;
            out.push(v);
        }
        Ok(Weight(out))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Dominant integral: every coordinate non-negative.
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Strictly dominant: every coordinate positive.
    pub fn is_regular_dominant(&self) -> bool {
        self.0.iter().all(|&c| c > 0)
    }

    /// Coordinate `i` (0-based).
    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [i64] {
        &mut self.0
    }

    /// Reorders coordinates: the result's coordinate `k` is `self[perm[k]]`.
    pub fn permuted(&self, perm: &[usize]) -> Weight {
        Weight(perm.iter().map(|&p| self.0[p]).collect())
    }

    /// Parses `1,0,-1`, `[1,0,-1]` or `1 0 -1`. Entries may be written as
    /// fractions (`1/2`); non-integral values are rejected.
    pub fn parse(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
        if trimmed.trim().is_empty() {
            return Ok(Weight(Vec::new()));
        }
        let mut rationals = Vec::new();
        for tok in trimmed.split(|c: char| c == ',' || c.is_whitespace()) {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let r = BigRational::from_str(tok)
                .map_err(|_| Error::Parse(format!("bad weight coordinate `{tok}` in `{s}`")))?;
            rationals.push(r);
        }
        Weight::from_rationals(&rationals)
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl<const N: usize> From<[i64; N]> for Weight {
    fn from(v: [i64; N]) -> Self {
        Weight(v.to_vec())
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Weight::parse(s)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add<&Weight> for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(mut self, rhs: Weight) -> Weight {
        self += &rhs;
        self
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        debug_assert_eq!(self.rank(), rhs.rank());
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl Sub<&Weight> for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(mut self, rhs: Weight) -> Weight {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Weight> for Weight {
    fn sub_assign(&mut self, rhs: &Weight) {
        debug_assert_eq!(self.rank(), rhs.rank());
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<i64> for &Weight {
    type Output = Weight;
    fn mul(self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}
