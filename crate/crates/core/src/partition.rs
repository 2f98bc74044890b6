//! Integer partitions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::factorial;

/// A weakly decreasing sequence of positive integers; trailing zeros are implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Validates ordering and strips trailing zeros.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument("partition parts must be weakly decreasing"));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// |λ|
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// ℓ(λ), the number of positive parts.
    pub fn length(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parts padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Result<Vec<u32>> {
        if self.length() > n {
            return Err(Error::PartitionTooLong { len: self.length(), n });
        }
        let mut out = self.0.clone();
        out.resize(n, 0);
        Ok(out)
    }

    /// Multiplicities m_i of each part size i, indexed from 1.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0; self.0.first().map_or(0, |&p| p as usize) + 1];
        for &p in &self.0 {
            m[p as usize] += 1;
        }
        m
    }

    /// z_λ = ∏ i^{m_i} m_i!, the centralizer order of the cycle type λ.
    pub fn centralizer_order(&self) -> BigUint {
        self.multiplicities()
            .iter()
            .enumerate()
            .skip(1)
            .fold(BigUint::one(), |acc, (i, &m)| acc * BigUint::from(i as u32).pow(m) * factorial(m))
    }
}

/// Comma-separated parts, `0` for the empty partition.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("invalid partition `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// Partitions of exactly `weight` with at most `max_parts` parts, in
/// lexicographically descending order.
pub fn partitions_of(weight: u32, max_parts: usize) -> Vec<Partition> {
    fn rec(rest: u32, max_part: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weight, weight, max_parts, &mut Vec::new(), &mut out);
    out
}

/// All partitions with |λ| ≤ `max_weight` and ℓ(λ) ≤ `max_parts`, ordered
/// by weight and then lexicographically descending.
pub fn enumerate_partitions(max_weight: u32, max_parts: usize) -> Vec<Partition> {
    (0..=max_weight).flat_map(|w| partitions_of(w, max_parts)).collect()
}
