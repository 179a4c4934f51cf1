//! Compositions, partitions and the weight functions that index every
//! expansion in the crate.
//!
//! Parts are stored as `u32`. Sizes used by the certificates stay below 64,
//! and weights are computed in `u64` with overflow checks.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite sequence of positive parts. The empty composition is allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidComposition(format!("{parts:?} contains a zero part")));
        }
        Ok(Composition(parts))
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    /// Callers guarantee every part is positive.
    pub(crate) fn from_vec(parts: Vec<u32>) -> Self {
        debug_assert!(!parts.contains(&0));
        Composition(parts)
    }

    pub fn single(part: u32) -> Self {
        assert!(part > 0, "parts must be positive");
        Composition(vec![part])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// The last part, written `i_{-1}` in index notation.
    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Zero-based part lookup.
    pub fn part(&self, index: usize) -> Option<u32> {
        self.0.get(index).copied()
    }

    pub fn concat(&self, other: &Composition) -> Composition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        parts.extend_from_slice(&self.0);
        parts.extend_from_slice(&other.0);
        Composition(parts)
    }

    /// Concatenation of several factors, left to right.
    pub fn join<'a>(factors: impl IntoIterator<Item = &'a Composition>) -> Composition {
        let mut parts = Vec::new();
        for f in factors {
            parts.extend_from_slice(&f.0);
        }
        Composition(parts)
    }

    pub fn prepend(&self, part: u32) -> Composition {
        assert!(part > 0, "parts must be positive");
        let mut parts = Vec::with_capacity(self.len() + 1);
        parts.push(part);
        parts.extend_from_slice(&self.0);
        Composition(parts)
    }

    pub fn append(&self, part: u32) -> Composition {
        assert!(part > 0, "parts must be positive");
        let mut parts = self.0.clone();
        parts.push(part);
        Composition(parts)
    }

    /// Drops the leading part.
    pub fn tail(&self) -> Composition {
        Composition(self.0.get(1..).unwrap_or_default().to_vec())
    }

    /// Partial sums `k_1, k_1+k_2, ...`, excluding 0.
    pub fn partial_sums(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().scan(0usize, |acc, &p| {
            *acc += p as usize;
            Some(*acc)
        })
    }

    /// Whether some prefix has size `p`; the empty prefix and the whole
    /// composition both count.
    pub fn has_prefix_of_size(&self, p: usize) -> bool {
        p == 0 || self.partial_sums().any(|s| s == p)
    }

    pub fn has_suffix_of_size(&self, s: usize) -> bool {
        let n = self.size();
        s <= n && self.has_prefix_of_size(n - s)
    }

    /// Splits into `(prefix, suffix)` with `|prefix| = p`, if such a prefix exists.
    pub fn split_at_size(&self, p: usize) -> Option<(Composition, Composition)> {
        if p == 0 {
            return Some((Composition::empty(), self.clone()));
        }
        let mut acc = 0usize;
        for (i, &part) in self.0.iter().enumerate() {
            acc += part as usize;
            if acc == p {
                return Some((
                    Composition(self.0[..=i].to_vec()),
                    Composition(self.0[i + 1..].to_vec()),
                ));
            }
            if acc > p {
                return None;
            }
        }
        None
    }

    /// Splits into `(prefix, suffix)` with `|suffix| = s`.
    pub fn split_suffix(&self, s: usize) -> Option<(Composition, Composition)> {
        let n = self.size();
        if s > n {
            return None;
        }
        self.split_at_size(n - s)
    }

    pub fn min_part(&self) -> Option<u32> {
        self.0.iter().copied().min()
    }

    pub fn has_no_ones(&self) -> bool {
        self.0.iter().all(|&p| p >= 2)
    }

    pub fn underlying_partition(&self) -> Partition {
        underlying_partition(self)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

/// Accepts `"4,3,2"`, `"[4, 3, 2]"`, `"4 3 2"`, or a bare digit string
/// `"432"` (one part per digit). Bracketed input is always a list, so
/// `"[12]"` has the single part 12.
impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let outer = s.trim();
        let bracketed = outer.starts_with('[');
        let trimmed = outer.trim_start_matches('[').trim_end_matches(']').trim();
        if trimmed.is_empty() {
            return Ok(Composition::empty());
        }
        let bad = || Error::InvalidComposition(s.to_string());
        let parts: Vec<u32> = if bracketed || trimmed.contains(',') || trimmed.contains(char::is_whitespace) {
            trimmed
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            trimmed
                .chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        Composition::new(parts)
    }
}

impl From<Partition> for Composition {
    fn from(p: Partition) -> Self {
        Composition(p.0)
    }
}

fn write_parts(f: &mut fmt::Formatter<'_>, parts: &[u32]) -> fmt::Result {
    write!(f, "[")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{p}")?;
    }
    write!(f, "]")
}

/// A weakly decreasing sequence of positive parts.
///
/// The derived order compares part sequences lexicographically, so among
/// partitions of one size `[2,1,1] < [2,2] < [3,1] < [4]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the given parts into weakly decreasing order.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidComposition(format!("{parts:?} contains a zero part")));
        }
        parts.sort_unstable_by_key(|&p| Reverse(p));
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub(crate) fn from_sorted(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(!parts.contains(&0));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiset union.
    pub fn merge(&self, other: &Partition) -> Partition {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] >= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Partition(out)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_parts(f, &self.0)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let c: Composition = s.parse()?;
        Partition::new(c.into_parts())
    }
}

/// `ρ(I)`: the parts of `I` sorted into weakly decreasing order.
pub fn underlying_partition(comp: &Composition) -> Partition {
    let mut parts = comp.0.clone();
    parts.sort_unstable_by_key(|&p| Reverse(p));
    Partition(parts)
}

/// All compositions of `n` with every part at least `min_part`, in
/// lexicographic order. `n = 0` yields the empty composition.
fn enumerate_with_min_part(n: usize, min_part: u32) -> Vec<Composition> {
    fn rec(remaining: usize, min_part: u32, current: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if remaining == 0 {
            out.push(Composition(current.clone()));
            return;
        }
        for p in min_part as usize..=remaining {
            current.push(p as u32);
            rec(remaining - p, min_part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, min_part.max(1), &mut Vec::new(), &mut out);
    out
}

/// `W_n`: compositions of `n` with no part equal to 1, lexicographic order.
pub fn enumerate_no_ones(n: usize) -> Vec<Composition> {
    enumerate_with_min_part(n, 2)
}

/// `W_n(p)`: members of `W_n` with a prefix of size `p`.
pub fn enumerate_no_ones_with_prefix(n: usize, p: usize) -> Vec<Composition> {
    if p > n {
        return Vec::new();
    }
    enumerate_no_ones(n)
        .into_iter()
        .filter(|k| k.has_prefix_of_size(p))
        .collect()
}

/// Every composition of `n`, lexicographic order. Exponential in `n`.
pub fn enumerate_all(n: usize) -> Vec<Composition> {
    enumerate_with_min_part(n, 1)
}

/// Compositions of `n` whose path weight can be nonzero: any leading part,
/// every later part at least 2.
pub fn enumerate_path_support(n: usize) -> Vec<Composition> {
    if n == 0 {
        return vec![Composition::empty()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in enumerate_no_ones(n - first) {
            out.push(rest.prepend(first as u32));
        }
    }
    out
}

fn checked_product(iter: impl Iterator<Item = u64>) -> u64 {
    iter.fold(1u64, |acc, x| acc.checked_mul(x).expect("weight overflows u64"))
}

/// Path weight `w_I = i_1 (i_2 - 1) ... (i_z - 1)`; the empty composition has
/// weight 1.
pub fn w_weight(comp: &Composition) -> u64 {
    match comp.0.split_first() {
        None => 1,
        Some((&first, rest)) => (first as u64)
            .checked_mul(checked_product(rest.iter().map(|&p| p as u64 - 1)))
            .expect("weight overflows u64"),
    }
}

/// `w'_K = (k_2 - 1) ... (k_z - 1)`.
pub fn w_prime(comp: &Composition) -> Result<u64> {
    match comp.0.split_first() {
        None => Err(Error::EmptyComposition(comp.to_string())),
        Some((_, rest)) => Ok(checked_product(rest.iter().map(|&p| p as u64 - 1))),
    }
}

/// `∏ (k_i - 1)` over every part, i.e. `w_{1K}`.
pub fn shifted_product(comp: &Composition) -> u64 {
    checked_product(comp.0.iter().map(|&p| p as u64 - 1))
}

/// A subset of `{1, ..., 8}` stored as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelSet(u8);

impl LevelSet {
    pub fn empty() -> Self {
        LevelSet(0)
    }

    pub fn from_levels(levels: &[usize]) -> Self {
        let mut s = LevelSet(0);
        for &l in levels {
            s.insert(l);
        }
        s
    }

    pub fn insert(&mut self, level: usize) {
        assert!((1..=8).contains(&level), "level out of range");
        self.0 |= 1 << (level - 1);
    }

    pub fn contains(&self, level: usize) -> bool {
        (1..=8).contains(&level) && self.0 & (1 << (level - 1)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=8).filter(move |&l| self.contains(l))
    }

    pub fn max(&self) -> Option<usize> {
        self.iter().last()
    }

    pub fn bits(&self) -> u8 {
        self.0
    }

    /// Whether two consecutive levels are both present.
    pub fn has_adjacent(&self) -> bool {
        self.0 & (self.0 >> 1) != 0
    }
}

impl fmt::Display for LevelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// `{l ∈ [6] : K has a prefix of size b + l}`.
pub fn prefix_l(comp: &Composition, b: usize) -> LevelSet {
    let mut set = LevelSet::empty();
    for s in comp.partial_sums() {
        if s > b && s <= b + 6 {
            set.insert(s - b);
        }
    }
    set
}

/// `{l ∈ [3] : K has a suffix of size b + l}`.
pub fn suffix_l(comp: &Composition, b: usize) -> LevelSet {
    let n = comp.size();
    let mut set = LevelSet::empty();
    // Suffix sizes are n minus each prefix size, including the empty prefix.
    for p in std::iter::once(0).chain(comp.partial_sums()) {
        let s = n - p;
        if s > b && s <= b + 3 {
            set.insert(s - b);
        }
    }
    set
}
