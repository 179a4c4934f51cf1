//! `Y_0` certificate: the progressive repair.
//!
//! For `K ∈ 𝒲_{2b+7}` with a suffix `J` of size `b + l_K`, `l_K ∈ {2, 3}`,
//! write `K = IJ` and `φ(K) = JI`. Negative coefficients `f(K) < 0` are paired
//! with `f(φ(K))`; the remaining deficits are covered by an involution `ξ` on
//! `𝒦⁻` and extra donors `U`, `V` from `ℋ = {H : f(H) ≥ 0, φ⁻¹(H) = ∅}`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::{assembly_step, final_positivity, CertificateReport, Mutation, StepRecord};
use crate::algebra::{from_u64, int, ESym, Rational};
use crate::combinatorics::{enumerate_no_ones, shifted_product, underlying_partition, Composition};
use crate::decomposition::{check_b, compute_y0, delta, f_coeff, r};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Y0Class {
    A,
    B1,
    B2,
    C1,
    C2,
    C3,
    D1,
    D2,
    D3,
    D4,
    E1,
    E2,
    E3,
    E4,
    E5,
    NonNegative,
}

impl Y0Class {
    pub fn label(self) -> &'static str {
        match self {
            Y0Class::A => "A",
            Y0Class::B1 => "B1",
            Y0Class::B2 => "B2",
            Y0Class::C1 => "C1",
            Y0Class::C2 => "C2",
            Y0Class::C3 => "C3",
            Y0Class::D1 => "D1",
            Y0Class::D2 => "D2",
            Y0Class::D3 => "D3",
            Y0Class::D4 => "D4",
            Y0Class::E1 => "E1",
            Y0Class::E2 => "E2",
            Y0Class::E3 => "E3",
            Y0Class::E4 => "E4",
            Y0Class::E5 => "E5",
            Y0Class::NonNegative => "NONNEG",
        }
    }

    /// Classes on which `ξ` is the identity and `F(K) ≥ 0` suffices.
    pub fn solved_coarsely(self) -> bool {
        matches!(self, Y0Class::A | Y0Class::B1 | Y0Class::C1 | Y0Class::D1 | Y0Class::E5)
    }

    /// Classes on which `ξ` is the identity and one donor `U` is needed.
    pub fn needs_donor(self) -> bool {
        matches!(self, Y0Class::D4 | Y0Class::E3 | Y0Class::E4)
    }
}

impl fmt::Display for Y0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The factorization `K = IJ` with `|J| = b + l_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub l: usize,
    pub i: Composition,
    pub j: Composition,
}

impl Factorization {
    pub fn of(k: &Composition, b: usize) -> Result<Self> {
        let not_factorable = || Error::NotFactorable {
            composition: k.to_string(),
            b,
        };
        let found: Vec<(usize, Composition, Composition)> = [2, 3]
            .into_iter()
            .filter_map(|l| {
                k.split_suffix(b + l)
                    .filter(|(i, j)| !i.is_empty() && !j.is_empty())
                    .map(|(i, j)| (l, i, j))
            })
            .collect();
        match found.as_slice() {
            [(l, i, j)] => Ok(Factorization {
                l: *l,
                i: i.clone(),
                j: j.clone(),
            }),
            _ => Err(not_factorable()),
        }
    }

    fn i1(&self) -> u32 {
        self.i.first().unwrap_or(0)
    }

    fn j1(&self) -> u32 {
        self.j.first().unwrap_or(0)
    }

    /// `i_2`, read inside `I` (always present since `|I| ≥ b + 4` and `i_1 ≤ 4`
    /// whenever it is used).
    fn i2(&self) -> Option<u32> {
        self.i.part(1)
    }

    /// `j_2` as the part after `j_1` in `JI`.
    fn j2(&self) -> Option<u32> {
        self.j.part(1).or(self.i.first())
    }
}

fn need(x: Option<u32>, k: &Composition, b: usize) -> Result<u32> {
    x.ok_or_else(|| Error::NotFactorable {
        composition: k.to_string(),
        b,
    })
}

/// `φ(IJ) = JI`.
pub fn phi(k: &Composition, b: usize) -> Result<Composition> {
    let fac = Factorization::of(k, b)?;
    Ok(fac.j.concat(&fac.i))
}

/// `F(K) = f(K) + f(φ(K))`.
pub fn f_value(k: &Composition, b: usize) -> Result<Rational> {
    Ok(f_coeff(k, b)? + f_coeff(&phi(k, b)?, b)?)
}

/// The refined class of `K` among `𝒦⁻`, or `NonNegative`.
pub fn classify_kminus(k: &Composition, b: usize) -> Result<Y0Class> {
    check_b(b)?;
    let n = 2 * b + 7;
    if k.size() != n || !k.has_no_ones() {
        return Err(Error::NotInFamily {
            composition: k.to_string(),
            size: n,
        });
    }
    let Ok(fac) = Factorization::of(k, b) else {
        return Ok(Y0Class::NonNegative);
    };
    let (l, i1, j1) = (fac.l, fac.i1(), fac.j1());
    let i2 = fac.i2().unwrap_or(0);
    let j2 = fac.j.part(1).unwrap_or(0);
    let class = match (l, i1) {
        (3, 2) if j1 == 3 && i2 >= 6 => Y0Class::A,
        // f = (3/2) r_{i2} - 3 here, which vanishes at i2 = 2.
        (2, 3) if j1 == 2 && i2 >= 3 => {
            if j2 >= 3 {
                Y0Class::B1
            } else {
                Y0Class::B2
            }
        }
        (3, 3) if j1 + 3 <= 3 * i2 => match j1 {
            2 => Y0Class::C2,
            4 => Y0Class::C3,
            _ => Y0Class::C1,
        },
        (3, 2) if j1 == 2 => match j2 {
            2 => Y0Class::D1,
            3 => Y0Class::D2,
            4 if i2 >= 4 => Y0Class::D3,
            _ => Y0Class::D4,
        },
        (_, i1) if i1 >= 4 => {
            let k3 = k.part(2).unwrap_or(0);
            match (l, i1, i2) {
                (2, 4, i2) if j1 == 3 && i2 >= 3 => Y0Class::E1,
                (2, 4, 2) if j1 >= 4 && k3 == 2 => Y0Class::E2,
                (2, 4, 2) if j1 >= 4 => Y0Class::E3,
                (2, 4, 3) if j1 == 4 || j1 == 5 => Y0Class::E4,
                _ => Y0Class::E5,
            }
        }
        _ => Y0Class::NonNegative,
    };
    Ok(class)
}

/// `F(K)` from its closed form, valid when `l_K + i_1 ≥ 5`:
/// `Σ_{h ∈ {i, j}} (2 r_{h1} + δ_{h1} r_{h2}) - l_K r_{i1} r_{j1}
///  - r_{i1} r_{j2} χ(1 ∈ L_K) - (7 - l_K - i_1) r_{j1} r_{i2} χ(i_1 ≤ 4)`.
pub fn f_value_closed_form(k: &Composition, b: usize) -> Result<Rational> {
    let fac = Factorization::of(k, b)?;
    let (l, i1, j1) = (fac.l as i64, fac.i1(), fac.j1());
    let mut v = int(2) * r(i1) + int(2) * r(j1);
    if matches!(i1, 2 | 3) {
        v += delta(i1) * r(need(fac.i2(), k, b)?);
    }
    if matches!(j1, 2 | 3) {
        v += delta(j1) * r(need(fac.j2(), k, b)?);
    }
    v -= int(l) * r(i1) * r(j1);
    if l == 3 && j1 == 2 {
        v -= r(i1) * r(need(fac.j.part(1), k, b)?);
    }
    if i1 <= 4 {
        v -= int(7 - l - i1 as i64) * r(j1) * r(need(fac.i2(), k, b)?);
    }
    Ok(v)
}

/// Membership in `𝒮_2` by its two cases, with the value `F(K)` they give:
/// `(8 - 3 r_{i2} r_{j1} - 2 r_{j1}) / 3`.
fn s2_case(fac: &Factorization) -> Option<Rational> {
    let (i1, i2, j1) = (fac.i1(), fac.i2()?, fac.j1());
    let hit = fac.l == 2 && i1 == 4 && ((i2 == 2 && j1 >= 4) || (i2 == 3 && (j1 == 4 || j1 == 5)));
    hit.then(|| (int(8) - int(3) * r(i2) * r(j1) - int(2) * r(j1)) / int(3))
}

/// Membership in `𝒮_3` by its three cases, with the value `F(K)` they give.
fn s3_case(fac: &Factorization) -> Option<Rational> {
    if fac.l != 3 {
        return None;
    }
    let (i1, i2, j1, j2) = (fac.i1(), fac.i2()?, fac.j1(), fac.j.part(1));
    match (i1, j1) {
        (3, 2) => {
            let j2 = j2?;
            (5 * i2 <= j2 + 3).then(|| (int(5) * r(j2) - r(i2) - int(4)) / int(2))
        }
        (3, 4) if i2 >= 3 => Some((r(i2) - int(2)) / int(6)),
        (2, 2) => {
            let j2 = j2?;
            (j2 >= 3).then(|| int(2) * (r(j2) - int(2)))
        }
        _ => None,
    }
}

fn comp(parts: &[u32]) -> Composition {
    Composition::from_vec(parts.to_vec())
}

/// The rest of `k` after the leading parts `lead`, if `k` starts with them.
fn strip(k: &Composition, lead: &[u32]) -> Option<Composition> {
    k.parts().starts_with(lead).then(|| comp(&k.parts()[lead.len()..]))
}

/// `k = lead · P · mid · Q` with `|P| = p`; returns `(P, Q)`.
fn pq(k: &Composition, lead: &[u32], p: usize, mid: &[u32]) -> Option<(Composition, Composition)> {
    let (pp, rest) = strip(k, lead)?.split_at_size(p)?;
    Some((pp, strip(&rest, mid)?))
}

/// `ξ(K)` on `𝒦⁻`, following the class of `K`.
pub fn xi(k: &Composition, class: Y0Class, b: usize) -> Option<Composition> {
    let j = |parts: [&Composition; 4]| Composition::join(parts);
    let (two, three, four) = (comp(&[2]), comp(&[3]), comp(&[4]));
    match class {
        Y0Class::C2 => {
            let (p, q) = pq(k, &[3], b + 1, &[2])?;
            Some(j([&three, &q, &two, &p]))
        }
        Y0Class::C3 => {
            let (p, q) = pq(k, &[3], b + 1, &[4])?;
            Some(j([&four, &p, &three, &q]))
        }
        Y0Class::E1 => {
            let (p, q) = pq(k, &[4], b + 1, &[3])?;
            Some(j([&three, &p, &four, &q]))
        }
        Y0Class::D2 => {
            let (p, q) = pq(k, &[2], b + 2, &[2, 3])?;
            Some(j([&three, &p, &comp(&[2, 2]), &q]))
        }
        Y0Class::B2 => {
            let (p, q) = pq(k, &[3], b + 2, &[2, 2])?;
            Some(j([&two, &p, &comp(&[2, 3]), &q]))
        }
        Y0Class::D3 => {
            let (p, q) = pq(k, &[2], b + 2, &[2, 4])?;
            Some(j([&comp(&[4, 2, 2]), &q, &p, &Composition::empty()]))
        }
        Y0Class::E2 => {
            let rest = strip(k, &[4, 2, 2])?;
            let (q, p) = rest.split_suffix(b + 2)?;
            Some(j([&two, &p, &comp(&[2, 4]), &q]))
        }
        Y0Class::NonNegative => None,
        _ => Some(k.clone()),
    }
}

/// The donor `U ∈ ℋ` of a class in `ℱ_2`: `22Q j_2 P` for `K = 2P2j_2Q`, and
/// `S4T` for `K = 4ST` with `|S| = b + 1`.
pub fn donor_u(k: &Composition, class: Y0Class, b: usize) -> Option<Composition> {
    match class {
        Y0Class::D4 => {
            let (p, rest) = strip(k, &[2])?.split_at_size(b + 2)?;
            let j2q = strip(&rest, &[2])?;
            let (j2, q) = (j2q.first()?, j2q.tail());
            Some(Composition::join([&comp(&[2, 2]), &q, &comp(&[j2]), &p]))
        }
        Y0Class::E3 | Y0Class::E4 => {
            let (s, t) = strip(k, &[4])?.split_at_size(b + 1)?;
            Some(Composition::join([&s, &comp(&[4]), &t]))
        }
        _ => None,
    }
}

/// The extra donor `V = 22Q4P` for `K = 2P24Q ∈ 𝒟_3`.
pub fn donor_v(k: &Composition, b: usize) -> Option<Composition> {
    let (p, q) = pq(k, &[2], b + 2, &[2, 4])?;
    Some(Composition::join([&comp(&[2, 2]), &q, &comp(&[4]), &p]))
}

pub fn certify_y0(b: usize) -> Result<CertificateReport> {
    certify_y0_with(b, Mutation::None)
}

pub fn certify_y0_with(b: usize, mutation: Mutation) -> Result<CertificateReport> {
    check_b(b)?;
    let n = 2 * b + 7;
    let all = enumerate_no_ones(n);
    let f: HashMap<Composition, Rational> = all
        .par_iter()
        .map(|k| Ok((k.clone(), f_coeff(k, b)?)))
        .collect::<Result<_>>()?;
    let fk = |k: &Composition| f.get(k).cloned().unwrap_or_else(Rational::zero);
    let mut report = CertificateReport::new(b, "Y0");

    // K = IJ is unique on 𝒦₀.
    let mut step = StepRecord::new("factorization");
    let mut factor: BTreeMap<&Composition, Factorization> = BTreeMap::new();
    for k in &all {
        let both = k.has_suffix_of_size(b + 2) && k.has_suffix_of_size(b + 3);
        step.check(!both, || format!("{k} has suffixes of sizes b+2 and b+3"));
        if let Ok(fac) = Factorization::of(k, b) {
            factor.insert(k, fac);
        }
    }
    step.stat("k0", factor.len() as u64);
    report.push(step);

    // Classification against the sign of f.
    let mut step = StepRecord::new("prop-f-sign");
    let mut classes: BTreeMap<&Composition, Y0Class> = BTreeMap::new();
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for k in &all {
        let class = classify_kminus(k, b)?;
        let negative = fk(k).is_negative();
        step.check((class != Y0Class::NonNegative) == negative, || {
            format!("{k}: class {class} but f = {}", fk(k))
        });
        if class != Y0Class::NonNegative {
            step.check(factor.contains_key(k), || format!("{k} is negative outside K0"));
            classes.insert(k, class);
            *counts.entry(class.label()).or_default() += 1;
        }
    }
    step.stat("kminus", classes.len() as u64);
    for (label, c) in counts {
        step.stat(label, c);
    }
    report.push(step);

    // φ is injective, keeps the partition, and f(φ(K)) ≥ 0 on 𝒦⁻.
    let mut step = StepRecord::new("phi");
    let mut images: HashMap<Composition, &Composition> = HashMap::new();
    for (k, fac) in &factor {
        let h = fac.j.concat(&fac.i);
        step.check(underlying_partition(&h) == underlying_partition(k), || {
            format!("φ({k}) = {h} changes the partition")
        });
        if let Some(other) = images.insert(h.clone(), k) {
            step.fail(format!("φ({k}) = φ({other}) = {h}"));
        }
    }
    for k in classes.keys() {
        let h = phi(k, b)?;
        let v = fk(&h);
        step.check(!v.is_negative(), || format!("f(φ({k})) = f({h}) = {v} < 0"));
    }
    report.push(step);
    let in_h = |u: &Composition| !fk(u).is_negative() && !images.contains_key(u);

    // The closed form of F on l_K + i_1 ≥ 5.
    let mut step = StepRecord::new("f-closed-form");
    for (k, fac) in &factor {
        if fac.l + fac.i1() as usize >= 5 {
            let direct = f_value(k, b)?;
            let closed = f_value_closed_form(k, b)?;
            step.check(direct == closed, || format!("{k}: F = {direct}, closed form {closed}"));
        }
    }
    report.push(step);

    // 𝒮_2 and 𝒮_3 by their cases.
    let mut s2 = StepRecord::new("s2-characterization");
    let mut s3 = StepRecord::new("s3-characterization");
    for (k, fac) in &factor {
        let big_f = f_value(k, b)?;
        let in_s = fk(k).is_negative() && big_f.is_negative();
        let (step, case) = if fac.l == 2 {
            (&mut s2, s2_case(fac))
        } else {
            (&mut s3, s3_case(fac))
        };
        step.check(in_s == case.is_some(), || {
            format!("{k}: F = {big_f}, f = {}, case match {}", fk(k), case.is_some())
        });
        if let Some(v) = case {
            step.check(v == big_f, || format!("{k}: F = {big_f}, case formula {v}"));
        }
    }
    report.push(s2);
    report.push(s3);

    // ξ is an involution on 𝒦⁻ with the stated class pairs.
    let mut step = StepRecord::new("xi-involution");
    let mut partner: BTreeMap<&Composition, Composition> = BTreeMap::new();
    for (&k, &class) in &classes {
        let Some(x) = xi(k, class, b) else {
            step.fail(format!("ξ undefined at {k} ({class})"));
            continue;
        };
        let x_class = classes.get(&x).copied();
        let expected = match class {
            Y0Class::C2 => Some(Y0Class::C2),
            Y0Class::C3 => Some(Y0Class::E1),
            Y0Class::E1 => Some(Y0Class::C3),
            Y0Class::D2 => Some(Y0Class::B2),
            Y0Class::B2 => Some(Y0Class::D2),
            Y0Class::D3 => Some(Y0Class::E2),
            Y0Class::E2 => Some(Y0Class::D3),
            other => Some(other),
        };
        // 3P22Q with p1 = 2 has f = 0 and stays outside 𝒦⁻.
        let zero_partner = class == Y0Class::D2 && x_class.is_none() && fk(&x).is_zero();
        step.check(x_class == expected || zero_partner, || {
            format!("ξ({k}) = {x} lies in {x_class:?}, expected {expected:?}")
        });
        let back = if zero_partner {
            xi(&x, Y0Class::B2, b)
        } else {
            x_class.and_then(|c| xi(&x, c, b))
        };
        step.check(back.as_ref() == Some(k), || format!("ξ(ξ({k})) = {back:?}"));
        partner.insert(k, x);
    }
    report.push(step);

    // Bundles of compositions whose f-values are added together.
    struct Bundle {
        members: Vec<Composition>,
    }
    let mut bundles: Vec<Bundle> = Vec::new();
    let mut donors: Vec<(Composition, &Composition)> = Vec::new();

    let mut fixed = StepRecord::new("fixed-points");
    for (&k, &class) in &classes {
        if !(class.solved_coarsely() || class.needs_donor()) {
            continue;
        }
        let big_f = f_value(k, b)?;
        let mut members = vec![k.clone(), phi(k, b)?];
        if class.solved_coarsely() {
            fixed.check(!big_f.is_negative(), || format!("{k} ({class}): F = {big_f} < 0"));
            bundles.push(Bundle { members });
            continue;
        }
        let Some(u) = donor_u(k, class, b) else {
            fixed.fail(format!("{k} ({class}): no donor"));
            continue;
        };
        let total = &big_f + fk(&u);
        fixed.check(total.is_positive(), || {
            format!("{k} ({class}): F + f(U) = {total} with U = {u}")
        });
        fixed.check(in_h(&u), || format!("{k} ({class}): donor {u} is not in H"));
        donors.push((u.clone(), k));
        members.push(u);
        bundles.push(Bundle { members });
    }
    report.push(fixed);

    let mut pairs = StepRecord::new("pairs");
    for (&k, &class) in &classes {
        if class.solved_coarsely() || class.needs_donor() {
            continue;
        }
        let Some(x) = partner.get(k) else { continue };
        // Each pair once, from its C2, C3, D2 or D3 side.
        if !matches!(class, Y0Class::C2 | Y0Class::C3 | Y0Class::D2 | Y0Class::D3) {
            continue;
        }
        if class == Y0Class::C2 && x < k {
            continue;
        }
        let big_f = f_value(k, b)?;
        if x == k {
            pairs.check(big_f.is_positive(), || {
                format!("{k} ({class}) is fixed by ξ with F = {big_f}")
            });
            bundles.push(Bundle {
                members: vec![k.clone(), phi(k, b)?],
            });
            continue;
        }
        let mut members = vec![k.clone(), phi(k, b)?, x.clone(), phi(x, b)?];
        let mut total = big_f + f_value(x, b)?;
        let strict = class != Y0Class::D3;
        if class == Y0Class::D3 && mutation != Mutation::SkipD3Donor {
            match donor_v(k, b) {
                Some(v) => {
                    total += fk(&v);
                    pairs.check(in_h(&v), || format!("{k} (D3): donor {v} is not in H"));
                    donors.push((v.clone(), k));
                    members.push(v);
                }
                None => pairs.fail(format!("{k} (D3): no donor V")),
            }
        }
        let ok = if strict {
            total.is_positive()
        } else {
            !total.is_negative()
        };
        pairs.check(ok, || format!("{k} ({class}) with ξ = {x}: total {total}"));
        bundles.push(Bundle { members });
    }
    report.push(pairs);

    // Donors are pairwise distinct.
    let mut step = StepRecord::new("donor-registry");
    let mut seen: HashMap<&Composition, &Composition> = HashMap::new();
    for (u, k) in &donors {
        if let Some(other) = seen.insert(u, k) {
            step.fail(format!("donor {u} used by {other} and {k}"));
        } else {
            step.check(true, String::new);
        }
    }
    step.stat("donors", donors.len() as u64);
    report.push(step);

    // Bundles are disjoint, share a partition, and have nonnegative totals;
    // everything else has f ≥ 0.
    let mut step = StepRecord::new("coverage");
    let mut used: HashSet<&Composition> = HashSet::new();
    let mut assembled = ESym::zero(n);
    for bundle in &bundles {
        let lambda = underlying_partition(&bundle.members[0]);
        let mut total = Rational::zero();
        for m in &bundle.members {
            step.check(used.insert(m), || format!("{m} belongs to two bundles"));
            step.check(underlying_partition(m) == lambda, || {
                format!("{m} is not a rearrangement of {}", bundle.members[0])
            });
            total += fk(m);
        }
        step.check(!total.is_negative(), || {
            format!("bundle at {} sums to {total}", bundle.members[0])
        });
        let weight = from_u64(shifted_product(&bundle.members[0]));
        assembled.push(lambda, total * weight);
    }
    for k in &all {
        if used.contains(k) {
            continue;
        }
        let v = fk(k);
        step.check(!v.is_negative(), || format!("{k} is uncovered with f = {v}"));
        assembled.push(underlying_partition(k), v * from_u64(shifted_product(k)));
    }
    step.stat("bundles", bundles.len() as u64);
    report.push(step);

    let y0 = compute_y0(b)?;
    report.push(assembly_step("assembly", &assembled, &y0));
    let (step, witness) = final_positivity(&y0);
    report.push(step);
    Ok(report.finish(witness))
}
