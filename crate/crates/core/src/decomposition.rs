//! The `e_1`-graded split `X_{T_{(b+2)b2}} = Y_2 e_1^2 + Y_1 e_1 + Y_0`.
//!
//! Each piece lives in the free algebra on compositions. `Y_0` is built twice,
//! once from the coefficient `f(K)` and once from the four-sum form, so the two
//! can be compared key by key.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{from_u64, int, ratio, CompExpansion, ESym, Rational};
use crate::combinatorics::{enumerate_no_ones, enumerate_no_ones_with_prefix, shifted_product, w_weight, Composition};
use crate::csf::csf_trinacria;
use crate::error::{Error, Result};

/// `r_i = i / (i - 1)`.
pub fn r(i: u32) -> Rational {
    debug_assert!(i >= 2);
    ratio(i as i64, i as i64 - 1)
}

/// `δ_x = 4 χ(x = 2) + (3/2) χ(x = 3)`.
pub fn delta(x: u32) -> Rational {
    match x {
        2 => int(4),
        3 => ratio(3, 2),
        _ => Rational::zero(),
    }
}

pub fn check_b(b: usize) -> Result<()> {
    if b == 0 {
        Err(Error::InvalidB(b))
    } else {
        Ok(())
    }
}

/// Levels `l ∈ {1, 2, 3}` for which `K` has a suffix of size `b + l`, paired
/// with the leading part of that suffix.
pub fn suffix_levels(k: &Composition, b: usize) -> Vec<(usize, u32)> {
    (1..=3)
        .filter_map(|l| {
            k.split_suffix(b + l)
                .filter(|(i, _)| !i.is_empty())
                .and_then(|(_, j)| j.first().map(|j1| (l, j1)))
        })
        .collect()
}

/// Whether `K` has a suffix of size `b + 2` or `b + 3`.
pub fn in_k0(k: &Composition, b: usize) -> bool {
    k.has_suffix_of_size(b + 2) || k.has_suffix_of_size(b + 3)
}

/// `f(K) = 2 r_{k1} + 4 r_{k2} χ(k1 = 2) + (3/2) r_{k2} χ(k1 = 3)
///         - r_{k1} Σ_l l r_{j1} χ(K = IJ, |J| = b + l)`.
pub fn f_coeff(k: &Composition, b: usize) -> Result<Rational> {
    check_b(b)?;
    let n = 2 * b + 7;
    if k.size() != n || !k.has_no_ones() || k.is_empty() {
        return Err(Error::NotInFamily {
            composition: k.to_string(),
            size: n,
        });
    }
    let parts = k.parts();
    let k1 = parts[0];
    let mut f = int(2) * r(k1);
    if k1 == 2 || k1 == 3 {
        f += delta(k1) * r(parts[1]);
    }
    for (l, j1) in suffix_levels(k, b) {
        f -= int(l as i64) * r(k1) * r(j1);
    }
    Ok(f)
}

/// `l_K = Σ_{l ∈ L_K} min(l, 7 - l)` over the prefix levels `l ∈ [6]`.
pub fn y1_level_weight(k: &Composition, b: usize) -> u64 {
    (1..=6)
        .filter(|&l| k.has_prefix_of_size(b + l))
        .map(|l| l.min(7 - l) as u64)
        .sum()
}

fn collect(degree: usize, terms: Vec<(Composition, Rational)>) -> CompExpansion {
    let mut out = CompExpansion::zero(degree);
    for (k, c) in terms {
        out.push(k, c);
    }
    out
}

/// `Y_2 = Σ_{K ∈ W_{2b+5}} (2 + χ(k1 = 2)) w_{1K} e_K
///        - Σ_{l=1}^{3} Σ_{K ∈ W_{2b+5}(b+6-l)} l w_{1K} e_K`.
pub fn compute_y2(b: usize) -> Result<CompExpansion> {
    check_b(b)?;
    let n = 2 * b + 5;
    let mut out = CompExpansion::zero(n);
    for k in enumerate_no_ones(n) {
        let lead = if k.first() == Some(2) { 3 } else { 2 };
        out.push(k.clone(), from_u64(lead * shifted_product(&k)));
    }
    for l in 1..=3u64 {
        for k in enumerate_no_ones_with_prefix(n, b + 6 - l as usize) {
            let c = from_u64(l * shifted_product(&k));
            out.push(k, -c);
        }
    }
    Ok(out)
}

/// The four summands of `Y_1`, kept apart for the charging certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Y1Parts {
    /// `Σ_{K ∈ W_{2b+6}} (2 w_K + w_{2K}) e_K`
    pub y11: CompExpansion,
    /// `Σ_{I ∈ W_{2b+4}} (w_{4I} + w_I) e_{2I}`
    pub y12: CompExpansion,
    /// `Σ_{I ∈ W_{2b+3}} w_{3I} e_{3I}`
    pub y13: CompExpansion,
    /// `Σ_{l=1}^{6} Σ_{K ∈ W_{2b+6}(b+l)} min(l, 7-l) w_K e_K`
    pub n: CompExpansion,
}

impl Y1Parts {
    pub fn total(&self) -> Result<CompExpansion> {
        self.y11.add(&self.y12)?.add(&self.y13)?.sub(&self.n)
    }
}

pub fn compute_y1_parts(b: usize) -> Result<Y1Parts> {
    check_b(b)?;
    let n = 2 * b + 6;
    let w_n = enumerate_no_ones(n);
    let y11 = collect(
        n,
        w_n.iter()
            .map(|k| (k.clone(), from_u64(2 * w_weight(k) + w_weight(&k.prepend(2)))))
            .collect(),
    );
    let y12 = collect(
        n,
        enumerate_no_ones(n - 2)
            .into_iter()
            .map(|i| {
                let c = w_weight(&i.prepend(4)) + w_weight(&i);
                (i.prepend(2), from_u64(c))
            })
            .collect(),
    );
    let y13 = collect(
        n,
        enumerate_no_ones(n - 3)
            .into_iter()
            .map(|i| {
                let k = i.prepend(3);
                let c = w_weight(&k);
                (k, from_u64(c))
            })
            .collect(),
    );
    let mut neg = CompExpansion::zero(n);
    for l in 1..=6usize {
        for k in enumerate_no_ones_with_prefix(n, b + l) {
            let c = (l.min(7 - l) as u64) * w_weight(&k);
            neg.push(k, from_u64(c));
        }
    }
    Ok(Y1Parts { y11, y12, y13, n: neg })
}

pub fn compute_y1(b: usize) -> Result<CompExpansion> {
    compute_y1_parts(b)?.total()
}

/// `Y_0 = Σ_{K ∈ W_{2b+7}} f(K) ∏ (k_i - 1) e_K`. Every coefficient must come
/// out integral; a fractional one is reported as an error.
pub fn compute_y0(b: usize) -> Result<CompExpansion> {
    check_b(b)?;
    let n = 2 * b + 7;
    let terms: Vec<(Composition, Rational)> = enumerate_no_ones(n)
        .into_par_iter()
        .map(|k| {
            let c = f_coeff(&k, b)? * from_u64(shifted_product(&k));
            if !c.is_integer() {
                return Err(Error::NonIntegral {
                    index: k.to_string(),
                    coeff: c.to_string(),
                });
            }
            Ok((k, c))
        })
        .collect::<Result<_>>()?;
    Ok(collect(n, terms))
}

/// `Y_0` from the four-sum form
/// `Σ 2 w_K e_K + Σ 4 w_I e_{2I} + Σ 3 w_I e_{3I} - Σ_l Σ l w_I w_J e_{IJ}`.
pub fn compute_y0_four_sum(b: usize) -> Result<CompExpansion> {
    check_b(b)?;
    let n = 2 * b + 7;
    let mut out = CompExpansion::zero(n);
    for k in enumerate_no_ones(n) {
        let c = from_u64(2 * w_weight(&k));
        out.push(k, c);
    }
    for i in enumerate_no_ones(n - 2) {
        let c = from_u64(4 * w_weight(&i));
        out.push(i.prepend(2), c);
    }
    for i in enumerate_no_ones(n - 3) {
        let c = from_u64(3 * w_weight(&i));
        out.push(i.prepend(3), c);
    }
    for l in 1..=3usize {
        let js = enumerate_no_ones(b + l);
        for i in enumerate_no_ones(b + 7 - l) {
            for j in &js {
                let c = from_u64(l as u64 * w_weight(&i) * w_weight(j));
                out.push(i.concat(j), -c);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct YDecomposition {
    pub b: usize,
    pub y2: CompExpansion,
    pub y1: CompExpansion,
    pub y0: CompExpansion,
}

impl YDecomposition {
    pub fn compute(b: usize) -> Result<Self> {
        Ok(YDecomposition {
            b,
            y2: compute_y2(b)?,
            y1: compute_y1(b)?,
            y0: compute_y0(b)?,
        })
    }

    /// `ρ(Y_2) e_1^2 + ρ(Y_1) e_1 + ρ(Y_0)`.
    pub fn reconstruct(&self) -> Result<ESym> {
        let mut out = self.y2.project().mul(&ESym::e1_power(2));
        out.accumulate(&self.y1.project().mul(&ESym::e1_power(1)))?;
        out.accumulate(&self.y0.project())?;
        Ok(out)
    }
}

pub fn reconstruct(b: usize) -> Result<ESym> {
    YDecomposition::compute(b)?.reconstruct()
}

/// Whether the reconstruction equals the trinacria formula for `(b+2, b, 2)`.
pub fn reconstruction_matches_formula(b: usize) -> Result<bool> {
    Ok(reconstruct(b)? == csf_trinacria(b + 2, b, 2)?)
}

/// Indicator as a rational, for readability in closed forms.
pub fn chi(cond: bool) -> Rational {
    if cond {
        Rational::one()
    } else {
        Rational::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_coeff(&c("9"), 1).unwrap(), ratio(9, 4));
        assert_eq!(f_coeff(&c("54"), 1).unwrap(), ratio(-5, 2));
        assert_eq!(f_coeff(&c("27"), 1).unwrap(), ratio(26, 3));
        assert!(f_coeff(&c("8"), 1).is_err());
        assert!(f_coeff(&c("81"), 1).is_err());
        assert!(f_coeff(&c("9"), 0).is_err());
    }

    #[test]
    fn y_examples() {
        let y2 = compute_y2(1).unwrap();
        assert_eq!(y2.coeff(&c("7")), int(12));
        assert_eq!(y2.coeff(&c("25")), int(12));
        let y1 = compute_y1(1).unwrap();
        assert_eq!(y1.coeff(&c("8")), int(30));
        assert_eq!(y1.coeff(&c("26")), int(46));
        let y0 = compute_y0(1).unwrap();
        assert_eq!(y0.coeff(&c("54")), int(-30));
        assert_eq!(y0.coeff(&c("9")), int(18));
        assert!(compute_y2(0).is_err());
    }

    #[test]
    fn y0_forms_agree_small() {
        for b in 1..=3 {
            assert_eq!(compute_y0(b).unwrap(), compute_y0_four_sum(b).unwrap(), "b = {b}");
        }
    }

    #[test]
    fn reconstruction_small() {
        for b in 1..=3 {
            assert!(reconstruction_matches_formula(b).unwrap(), "b = {b}");
        }
    }

    #[test]
    fn helpers() {
        assert_eq!(r(2), int(2));
        assert_eq!(delta(3), ratio(3, 2));
        assert_eq!(delta(5), int(0));
        assert_eq!(suffix_levels(&c("54"), 1), vec![(3, 4)]);
        assert!(in_k0(&c("54"), 1));
        assert!(!in_k0(&c("9"), 1));
        assert_eq!(y1_level_weight(&c("26"), 1), 1);
    }
}
