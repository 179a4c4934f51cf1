//! Sparse exact arithmetic in the elementary basis.
//!
//! [`ESym`] is keyed by partitions and multiplies by merging parts. [`CompExpansion`]
//! lives in the free algebra on compositions, where `e_I e_J = e_{IJ}`, and
//! [`CompExpansion::project`] identifies `e_I` with `e_{ρ(I)}`.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{underlying_partition, Composition, Partition};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_u64(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `"num/den"`, denominator always written.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse {
        line: 0,
        message: format!("bad rational {s:?}"),
    };
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Index type of an expansion: a partition or a composition.
pub trait BasisIndex: Clone + Ord + Hash + fmt::Display {
    const INDEXING: &'static str;

    fn size(&self) -> usize;
    fn parts(&self) -> &[u32];
    fn product(&self, other: &Self) -> Self;
    fn unit() -> Self;
    fn from_parts(parts: Vec<u32>) -> Result<Self>;
}

impl BasisIndex for Partition {
    const INDEXING: &'static str = "partition";

    fn size(&self) -> usize {
        Partition::size(self)
    }
    fn parts(&self) -> &[u32] {
        Partition::parts(self)
    }
    fn product(&self, other: &Self) -> Self {
        self.merge(other)
    }
    fn unit() -> Self {
        Partition::empty()
    }
    fn from_parts(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse {
                line: 0,
                message: format!("partition index {parts:?} is not weakly decreasing"),
            });
        }
        Partition::new(parts)
    }
}

impl BasisIndex for Composition {
    const INDEXING: &'static str = "composition";

    fn size(&self) -> usize {
        Composition::size(self)
    }
    fn parts(&self) -> &[u32] {
        Composition::parts(self)
    }
    fn product(&self, other: &Self) -> Self {
        self.concat(other)
    }
    fn unit() -> Self {
        Composition::empty()
    }
    fn from_parts(parts: Vec<u32>) -> Result<Self> {
        Composition::new(parts)
    }
}

/// A homogeneous element of degree `degree`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion<K: BasisIndex> {
    degree: usize,
    terms: BTreeMap<K, Rational>,
}

pub type ESym = Expansion<Partition>;
pub type CompExpansion = Expansion<Composition>;

impl<K: BasisIndex> Expansion<K> {
    pub fn zero(degree: usize) -> Self {
        Expansion {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(K::unit(), Rational::one())
    }

    pub fn monomial(key: K, coeff: Rational) -> Self {
        let mut e = Self::zero(key.size());
        e.push(key, coeff);
        e
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (K, Rational)>) -> Result<Self> {
        let mut e = Self::zero(degree);
        for (k, c) in terms {
            e.add_term(k, c)?;
        }
        Ok(e)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending index order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    /// Terms in graded reverse-lexicographic order, the serialization order.
    pub fn terms_display_order(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// `f|_𝒞`: the sum of the coefficients over a set of indices.
    pub fn coeff_set<'a>(&self, keys: impl IntoIterator<Item = &'a K>) -> Rational
    where
        K: 'a,
    {
        keys.into_iter()
            .filter_map(|k| self.terms.get(k))
            .fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn add_term(&mut self, key: K, coeff: Rational) -> Result<()> {
        if key.size() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: key.size(),
            });
        }
        self.push(key, coeff);
        Ok(())
    }

    /// Adds without checking the index size.
    pub(crate) fn push(&mut self, key: K, coeff: Rational) {
        debug_assert_eq!(key.size(), self.degree);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_degree(&self, other: &Self) -> Result<usize> {
        if self.degree == other.degree || other.is_zero() {
            Ok(self.degree)
        } else if self.is_zero() {
            Ok(other.degree)
        } else {
            Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            })
        }
    }

    /// In-place `self += other`.
    pub fn accumulate(&mut self, other: &Self) -> Result<()> {
        self.degree = self.check_degree(other)?;
        for (k, c) in &other.terms {
            self.push(k.clone(), c.clone());
        }
        Ok(())
    }

    /// In-place `self += scale * other`.
    pub fn accumulate_scaled(&mut self, other: &Self, scale: &Rational) -> Result<()> {
        self.degree = self.check_degree(other)?;
        if scale.is_zero() {
            return Ok(());
        }
        for (k, c) in &other.terms {
            self.push(k.clone(), c * scale);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.accumulate(other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.accumulate_scaled(other, &-Rational::one())?;
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        Expansion {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Expansion {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    /// Bilinear product; composition indices concatenate and partition
    /// indices merge.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                out.push(k1.product(k2), c1 * c2);
            }
        }
        out
    }

    /// Whether every coefficient has denominator 1.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Human-readable form such as `3 e[3] + 1 e[2,1]`. With a cap, at most
    /// `cap` terms are printed followed by an elision marker.
    pub fn to_table(&self, cap: Option<usize>) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let total = self.len();
        let shown = cap.unwrap_or(total).min(total);
        let mut out = String::new();
        for (i, (k, c)) in self.terms_display_order().take(shown).enumerate() {
            let mag = c.abs();
            let mag = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            let sign = c.is_negative();
            match (i, sign) {
                (0, false) => {}
                (0, true) => out.push('-'),
                (_, false) => out.push_str(" + "),
                (_, true) => out.push_str(" - "),
            }
            out.push_str(&format!("{mag} e{k}"));
        }
        if shown < total {
            out.push_str(&format!(" + ... ({} more terms, {total} total)", total - shown));
        }
        out
    }

    pub fn to_json_value(&self) -> ExpansionJson {
        ExpansionJson {
            degree: self.degree,
            basis: "e".to_string(),
            indexing: K::INDEXING.to_string(),
            terms: self
                .terms_display_order()
                .map(|(k, c)| TermJson {
                    index: k.parts().to_vec(),
                    coeff: format_rational(c),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("expansion serializes")
    }

    pub fn from_json_value(value: &ExpansionJson) -> Result<Self> {
        let bad = |message: String| Error::Parse { line: 0, message };
        if value.basis != "e" {
            return Err(bad(format!("unsupported basis {:?}", value.basis)));
        }
        if value.indexing != K::INDEXING {
            return Err(bad(format!(
                "expected {} indexing, found {:?}",
                K::INDEXING,
                value.indexing
            )));
        }
        let mut e = Self::zero(value.degree);
        for t in &value.terms {
            let key = K::from_parts(t.index.clone())?;
            let c = parse_rational(&t.coeff)?;
            if e.terms.contains_key(&key) {
                return Err(bad(format!("duplicate index {key}")));
            }
            e.add_term(key, c)?;
        }
        Ok(e)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: ExpansionJson = serde_json::from_str(s)?;
        Self::from_json_value(&v)
    }
}

impl<K: BasisIndex> fmt::Display for Expansion<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table(None))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionJson {
    pub degree: usize,
    pub basis: String,
    pub indexing: String,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub index: Vec<u32>,
    pub coeff: String,
}

impl CompExpansion {
    /// Sums coefficients of compositions sharing an underlying partition.
    pub fn project(&self) -> ESym {
        let mut out = ESym::zero(self.degree);
        for (k, c) in &self.terms {
            out.push(underlying_partition(k), c.clone());
        }
        out
    }

    pub fn coeff_composition(&self, key: &Composition) -> Rational {
        self.coeff(key)
    }
}

/// Outcome of an e-positivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Positivity {
    pub positive: bool,
    /// The lexicographically smallest index with a negative coefficient.
    pub witness: Option<(Partition, Rational)>,
}

impl ESym {
    pub fn coeff_partition(&self, key: &Partition) -> Rational {
        self.coeff(key)
    }

    pub fn is_e_positive(&self) -> Positivity {
        let witness = self
            .terms
            .iter()
            .find(|(_, c)| c.is_negative())
            .map(|(k, c)| (k.clone(), c.clone()));
        Positivity {
            positive: witness.is_none(),
            witness,
        }
    }

    /// `e_1^k`.
    pub fn e1_power(k: usize) -> ESym {
        ESym::monomial(Partition::from_sorted(vec![1; k]), Rational::one())
    }
}

/// Elementary expansions of `p_1, ..., p_n` by Newton's identities
/// `p_n = (-1)^{n-1} n e_n + Σ_{i<n} (-1)^{n-1-i} e_{n-i} p_i`.
pub fn power_sum_rows(n: usize) -> Vec<ESym> {
    let mut rows: Vec<ESym> = vec![ESym::one()];
    for m in 1..=n {
        let sign = |k: usize| if k.is_multiple_of(2) { int(1) } else { int(-1) };
        let mut p = ESym::monomial(Partition::from_sorted(vec![m as u32]), sign(m - 1) * int(m as i64));
        for i in 1..m {
            let e = ESym::monomial(Partition::from_sorted(vec![(m - i) as u32]), sign(m - 1 - i));
            p.accumulate(&e.mul(&rows[i])).expect("same degree");
        }
        rows.push(p);
    }
    rows
}

/// Elementary expansion of the power sum `p_λ`.
pub fn power_to_elementary(lambda: &Partition) -> ESym {
    let max = lambda.parts().first().copied().unwrap_or(0) as usize;
    let rows = power_sum_rows(max);
    power_to_elementary_with(lambda, &rows)
}

pub(crate) fn power_to_elementary_with(lambda: &Partition, rows: &[ESym]) -> ESym {
    lambda
        .parts()
        .iter()
        .fold(ESym::one(), |acc, &p| acc.mul(&rows[p as usize]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }
    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }
    fn e(terms: &[(&str, i64)]) -> ESym {
        let deg = p(terms[0].0).size();
        ESym::from_terms(deg, terms.iter().map(|(k, v)| (p(k), int(*v)))).unwrap()
    }

    #[test]
    fn add_and_scale() {
        let two = ESym::monomial(p("2"), int(2));
        let three = ESym::monomial(p("2"), int(3));
        assert_eq!(two.add(&three).unwrap(), ESym::monomial(p("2"), int(5)));
        assert!(ESym::monomial(p("21"), int(1)).scale(&int(0)).is_zero());
        let e3 = ESym::monomial(p("3"), int(1));
        assert!(e3.add(&e3.neg()).unwrap().is_zero());
        assert!(matches!(two.add(&e3), Err(Error::DegreeMismatch { left: 2, right: 3 })));
        assert_eq!(ESym::zero(7).add(&e3).unwrap(), e3);
    }

    #[test]
    fn products() {
        let a = ESym::monomial(p("21"), int(1));
        let b = ESym::monomial(p("32"), int(1));
        assert_eq!(a.mul(&b), ESym::monomial(p("3221"), int(1)));
        let x1 = ESym::monomial(p("1"), int(1));
        let x2 = ESym::monomial(p("2"), int(2));
        assert_eq!(x1.mul(&x2), ESym::monomial(p("21"), int(2)));
        let f = CompExpansion::monomial(c("13"), int(1));
        let g = CompExpansion::monomial(c("2"), int(1));
        assert_eq!(f.mul(&g), CompExpansion::monomial(c("132"), int(1)));
    }

    #[test]
    fn projection_and_coefficients() {
        let (a, b, cc) = (int(5), int(7), int(11));
        let f = CompExpansion::from_terms(4, [(c("211"), a.clone()), (c("121"), b.clone()), (c("13"), cc.clone())])
            .unwrap();
        assert_eq!(f.coeff_composition(&c("211")), a);
        assert_eq!(f.coeff_composition(&c("112")), int(0));
        let g = f.project();
        assert_eq!(g.coeff_partition(&p("211")), &a + &b);
        assert_eq!(g.coeff_partition(&p("31")), cc);
        assert_eq!(f.coeff_set([c("211"), c("121"), c("112")].iter()), &a + &b);

        let path3 = CompExpansion::from_terms(3, [(c("3"), int(3)), (c("12"), int(1))]).unwrap();
        assert_eq!(path3.project(), e(&[("3", 3), ("21", 1)]));
        assert!(CompExpansion::zero(4).project().is_zero());
    }

    #[test]
    fn positivity() {
        let p4 = e(&[("4", 4), ("31", 2), ("22", 2)]);
        assert_eq!(
            p4.is_e_positive(),
            Positivity {
                positive: true,
                witness: None
            }
        );
        let claw = e(&[("4", 4), ("31", 5), ("22", -2), ("211", 1)]);
        let v = claw.is_e_positive();
        assert!(!v.positive);
        assert_eq!(v.witness, Some((p("22"), int(-2))));
        assert!(ESym::zero(3).is_e_positive().positive);
    }

    #[test]
    fn newton() {
        assert_eq!(power_to_elementary(&p("1")), e(&[("1", 1)]));
        assert_eq!(power_to_elementary(&p("2")), e(&[("11", 1), ("2", -2)]));
        assert_eq!(power_to_elementary(&p("21")), e(&[("111", 1), ("21", -2)]));
        // p_3 = e_1^3 - 3 e_2 e_1 + 3 e_3
        assert_eq!(power_to_elementary(&p("3")), e(&[("111", 1), ("21", -3), ("3", 3)]));
    }

    #[test]
    fn table_and_json() {
        let f = e(&[("3", 3), ("21", 1)]);
        assert_eq!(f.to_table(None), "3 e[3] + 1 e[2,1]");
        let claw = e(&[("4", 4), ("31", 5), ("22", -2), ("211", 1)]);
        assert_eq!(claw.to_table(None), "4 e[4] + 5 e[3,1] - 2 e[2,2] + 1 e[2,1,1]");
        assert_eq!(
            claw.to_table(Some(2)),
            "4 e[4] + 5 e[3,1] + ... (2 more terms, 4 total)"
        );
        assert_eq!(
            f.to_json(),
            r#"{"degree":3,"basis":"e","indexing":"partition","terms":[{"index":[3],"coeff":"3/1"},{"index":[2,1],"coeff":"1/1"}]}"#
        );
        assert_eq!(ESym::from_json(&f.to_json()).unwrap(), f);
        let half = ESym::monomial(p("2"), ratio(-1, 2));
        assert_eq!(half.to_table(None), "-1/2 e[2]");
        assert!(ESym::from_json(
            r#"{"degree":3,"basis":"e","indexing":"partition","terms":[{"index":[1,2],"coeff":"1/1"}]}"#
        )
        .is_err());
    }
}
