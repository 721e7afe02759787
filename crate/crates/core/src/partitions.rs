//! Partitions and the rectangles `P_{r,n}` that index Schur bases.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("parts must be weakly decreasing: {0:?}")]
    NotDecreasing(Vec<u32>),
    #[error("cannot parse partition `{0}`")]
    Parse(String),
}

/// Weakly decreasing tuple of positive parts (trailing zeros stripped).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(SmallVec<[u32; 6]>);

impl Partition {
    pub fn empty() -> Self {
        Partition(SmallVec::new())
    }

    /// Accepts zero-padded input such as `[2, 1, 0]`.
    pub fn new(parts: &[u32]) -> Result<Self, PartitionError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotDecreasing(parts.to_vec()));
        }
        let len = parts.iter().take_while(|&&p| p > 0).count();
        Ok(Partition(SmallVec::from_slice(&parts[..len])))
    }

    pub fn single(i: u32) -> Self {
        Partition::new(&[i]).expect("one part")
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// λ_i with 1-based `i`; zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return u32::MAX;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn first(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Parts padded with zeros to length `r` (`None` if longer than `r`).
    pub fn padded(&self, r: usize) -> Option<Vec<u32>> {
        if self.len() > r {
            return None;
        }
        let mut v = self.0.to_vec();
        v.resize(r, 0);
        Some(v)
    }

    /// All μ ⊇ λ with μ/λ a horizontal strip of size `i` and at most `max_len` rows.
    pub fn horizontal_strips(&self, i: u32, max_len: usize, max_first: Option<u32>) -> Vec<Partition> {
        let rows = (self.len() + 1).min(max_len.max(self.len()));
        let lam = self.padded(rows).unwrap_or_else(|| self.0.to_vec());
        let mut out = Vec::new();
        let mut mu = lam.clone();
        fn go(
            row: usize,
            left: u32,
            lam: &[u32],
            mu: &mut Vec<u32>,
            max_first: Option<u32>,
            out: &mut Vec<Partition>,
        ) {
            if row == lam.len() {
                if left == 0 {
                    out.push(Partition::new(mu).expect("strip keeps order"));
                }
                return;
            }
            // mu_row ranges over [lam_row, lam_{row-1}] (row 0 unbounded)
            let cap = if row == 0 {
                max_first.unwrap_or(u32::MAX)
            } else {
                lam[row - 1]
            };
            let hi = cap.min(lam[row].saturating_add(left));
            if hi < lam[row] {
                return;
            }
            for m in lam[row]..=hi {
                mu[row] = m;
                go(row + 1, left - (m - lam[row]), lam, mu, max_first, out);
            }
            mu[row] = lam[row];
        }
        go(0, i, &lam, &mut mu, max_first, &mut out);
        out
    }
}

impl Ord for Partition {
    /// By weight, then reverse lexicographic, so `[2]` precedes `[1,1]`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .or_else(|| t.strip_prefix('(').and_then(|t| t.strip_suffix(')')))
            .ok_or_else(|| PartitionError::Parse(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        Partition::new(&parts)
    }
}

impl serde::Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

impl<'de> serde::Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        Partition::new(&v).map_err(serde::de::Error::custom)
    }
}

/// Width of a rectangle: `n - r`, or unbounded for `n = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Width {
    Finite(u32),
    Infinite,
}

/// The r × width rectangle; `contains` tests membership in `P_{r,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RectBound {
    pub r: u32,
    pub width: Width,
}

impl RectBound {
    pub fn new(r: u32, width: Width) -> Self {
        RectBound { r, width }
    }

    pub fn finite(r: u32, width: u32) -> Self {
        RectBound {
            r,
            width: Width::Finite(width),
        }
    }

    pub fn contains(&self, la: &Partition) -> bool {
        la.len() <= self.r as usize
            && match self.width {
                Width::Finite(w) => la.first() <= w,
                Width::Infinite => true,
            }
    }

    pub fn max_first(&self) -> Option<u32> {
        match self.width {
            Width::Finite(w) => Some(w),
            Width::Infinite => None,
        }
    }
}

/// All partitions in a finite rectangle, sorted by (weight, lexicographic).
///
/// # Panics
/// If the width is infinite; use [`enumerate_by_weight`] instead.
pub fn enumerate_partitions(bound: RectBound) -> Vec<Partition> {
    let Width::Finite(w) = bound.width else {
        panic!("enumerate_partitions needs a finite width");
    };
    let mut out = Vec::new();
    for weight in 0..=bound.r * w {
        out.extend(bounded_by_weight(bound.r, weight, w));
    }
    out
}

/// All λ with ℓ(λ) ≤ r and |λ| = weight, in decreasing lexicographic order.
pub fn enumerate_by_weight(r: u32, weight: u32) -> Vec<Partition> {
    bounded_by_weight(r, weight, weight)
}

fn bounded_by_weight(r: u32, weight: u32, max_part: u32) -> Vec<Partition> {
    fn go(left: u32, max: u32, rows: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition::new(cur).expect("built decreasing"));
            return;
        }
        if rows == 0 {
            return;
        }
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            go(left - p, p, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(weight, max_part, r, &mut Vec::new(), &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
