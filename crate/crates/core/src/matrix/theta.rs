use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of 1-based column indices, stored strictly increasing.
///
/// Ordered by cardinality first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThetaSubset(Vec<usize>);

impl ThetaSubset {
    /// Validates every member against `1..=n`; input order is irrelevant.
    pub fn new(members: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        if let Some(&bad) = v.iter().find(|&&j| j == 0 || j > n) {
            return Err(Error::InvalidTheta(format!("index {bad} outside 1..={n}")));
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTheta("duplicate index".into()));
        }
        Ok(ThetaSubset(v))
    }

    pub fn empty() -> Self {
        ThetaSubset(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        ThetaSubset((1..=n).collect())
    }

    /// Every subset of `1..=n`, including the empty set, in canonical order.
    pub fn all(n: usize) -> Vec<ThetaSubset> {
        (0..=n).flat_map(|k| Self::of_size(n, k)).collect()
    }

    /// Every nonempty subset of `1..=n` in canonical order.
    pub fn all_nonempty(n: usize) -> Vec<ThetaSubset> {
        (1..=n).flat_map(|k| Self::of_size(n, k)).collect()
    }

    /// The `k`-element subsets of `1..=n`, lexicographically.
    pub fn of_size(n: usize, k: usize) -> Vec<ThetaSubset> {
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let mut cur: Vec<usize> = (1..=k).collect();
        loop {
            out.push(ThetaSubset(cur.clone()));
            let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i + 1) else {
                return out;
            };
            cur[i] += 1;
            for j in i + 1..k {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    /// Members shifted to 0-based column indices.
    pub fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|j| j - 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn intersection(&self, other: &ThetaSubset) -> ThetaSubset {
        ThetaSubset(self.0.iter().copied().filter(|&j| other.contains(j)).collect())
    }

    pub fn union(&self, other: &ThetaSubset) -> ThetaSubset {
        let mut v: Vec<usize> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        ThetaSubset(v)
    }

    pub fn is_subset(&self, other: &ThetaSubset) -> bool {
        self.0.iter().all(|&j| other.contains(j))
    }
}

impl Ord for ThetaSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ThetaSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ThetaSubset {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "{{")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}
