//! Group type signatures.
//!
//! A design of type `8^11 10^1` has eleven groups of size 8 and one of
//! size 10. `GroupSignature` is the canonical multiset of group sizes:
//! one `(size, count)` part per distinct size, parts ordered by total
//! class weight `size * count` descending (ties by size ascending), which
//! reproduces the conventional `g^u m^1` reading order.

use std::fmt;
use std::str::FromStr;

use crate::error::SignatureError;

/// Canonical multiset of `(group size, multiplicity)` parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSignature {
    parts: Vec<(u32, u32)>,
}

impl GroupSignature {
    /// Build a signature from arbitrary `(size, count)` parts.
    ///
    /// Parts with equal sizes are merged; zero sizes or counts are
    /// rejected, as is an empty signature.
    pub fn new(parts: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, SignatureError> {
        let mut merged: Vec<(u32, u32)> = Vec::new();
        for (size, count) in parts {
            if size == 0 || count == 0 {
                return Err(SignatureError::ZeroPart);
            }
            match merged.iter_mut().find(|(s, _)| *s == size) {
                Some((_, c)) => *c += count,
                None => merged.push((size, count)),
            }
        }
        if merged.is_empty() {
            return Err(SignatureError::Empty);
        }
        merged.sort_by(|&(s1, c1), &(s2, c2)| {
            let w1 = u64::from(s1) * u64::from(c1);
            let w2 = u64::from(s2) * u64::from(c2);
            w2.cmp(&w1).then(s1.cmp(&s2))
        });
        Ok(Self { parts: merged })
    }

    /// Signature with `count` groups all of size `size`.
    pub fn uniform(size: u32, count: u32) -> Result<Self, SignatureError> {
        Self::new([(size, count)])
    }

    /// Signature of a list of group cells.
    pub fn of_groups<T>(groups: &[Vec<T>]) -> Result<Self, SignatureError> {
        Self::new(groups.iter().map(|g| (g.len() as u32, 1)))
    }

    /// Canonical `(size, count)` parts.
    pub fn parts(&self) -> &[(u32, u32)] {
        &self.parts
    }

    /// Total number of points `N = sum size * count`.
    pub fn n_points(&self) -> u64 {
        self.parts
            .iter()
            .map(|&(s, c)| u64::from(s) * u64::from(c))
            .sum()
    }

    /// Total number of groups.
    pub fn n_groups(&self) -> u64 {
        self.parts.iter().map(|&(_, c)| u64::from(c)).sum()
    }

    /// Number of unordered point pairs lying in distinct groups.
    ///
    /// This is the coverage target of a GDD: `(N^2 - sum size^2 * count) / 2`.
    pub fn cross_pairs(&self) -> u64 {
        let n = self.n_points();
        let same: u64 = self
            .parts
            .iter()
            .map(|&(s, c)| u64::from(s) * u64::from(s) * u64::from(c))
            .sum();
        (n * n - same) / 2
    }

    /// True when all groups share one size.
    pub fn is_uniform(&self) -> bool {
        self.parts.len() == 1
    }
}

impl fmt::Display for GroupSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (size, count)) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{size}^{count}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupSignature {
    type Err = SignatureError;

    /// Parse `g^u` terms separated by whitespace, e.g. `8^11 10^1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = Vec::new();
        for term in s.split_whitespace() {
            let (size, count) = term
                .split_once('^')
                .ok_or_else(|| SignatureError::BadTerm(term.to_string()))?;
            let size: u32 = size
                .parse()
                .map_err(|_| SignatureError::BadTerm(term.to_string()))?;
            let count: u32 = count
                .parse()
                .map_err(|_| SignatureError::BadTerm(term.to_string()))?;
            parts.push((size, count));
        }
        Self::new(parts)
    }
}

/// Number of unordered pairs a GDD of this type must cover exactly once.
pub fn cross_pairs(sig: &GroupSignature) -> u64 {
    sig.cross_pairs()
}
