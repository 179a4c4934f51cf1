//! `Y_1` certificate: the charging argument.
//!
//! Compositions `K ∈ W_{2b+6}` are sorted by their prefix levels
//! `L_K = {l ∈ [6] : K has a prefix of size b + l}`. Those whose `Y_11 - N`
//! coefficient can be negative fall into four families `F_3, ..., F_6`; each
//! family is split into charge groups `𝒜`, and every group borrows positive
//! `Y_12` terms (from `ℬ`) and `Y_13` terms (from `𝒞`) to cover its deficit.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};

use super::{assembly_step, final_positivity, CertificateReport, Mutation, StepRecord};
use crate::algebra::{from_u64, int, ratio, CompExpansion, ESym, Rational};
use crate::combinatorics::{
    enumerate_no_ones, prefix_l, shifted_product, underlying_partition, w_prime, w_weight, Composition, LevelSet,
    Partition,
};
use crate::decomposition::{check_b, compute_y1_parts, y1_level_weight, Y1Parts};
use crate::error::{Error, Result};

/// A composition written as `α I β J`, where `I` is the core and `J` the tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactoredComposition {
    pub alpha: Composition,
    pub core: Composition,
    pub beta: Composition,
    pub tail: Composition,
}

impl FactoredComposition {
    pub fn new(alpha: Composition, core: Composition, beta: Composition, tail: Composition) -> Self {
        FactoredComposition {
            alpha,
            core,
            beta,
            tail,
        }
    }

    pub fn flatten(&self) -> Composition {
        Composition::join([&self.alpha, &self.core, &self.beta, &self.tail])
    }

    /// `αβ`, the parts outside the core and tail.
    pub fn outer(&self) -> Composition {
        self.alpha.concat(&self.beta)
    }

    /// `K(i_1)`: the core replaced by its first part, the tail removed.
    pub fn reduced(&self) -> Option<Composition> {
        let i1 = self.core.first()?;
        Some(Composition::join([&self.alpha, &Composition::single(i1), &self.beta]))
    }
}

impl fmt::Display for FactoredComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}|{}", self.alpha, self.core, self.beta, self.tail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    F3,
    F4,
    F5,
    F6,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::F3, Family::F4, Family::F5, Family::F6];

    pub fn index(self) -> usize {
        match self {
            Family::F3 => 3,
            Family::F4 => 4,
            Family::F5 => 5,
            Family::F6 => 6,
        }
    }

    /// Whether a level set belongs to this family.
    pub fn contains(self, levels: LevelSet) -> bool {
        let sets: &[&[usize]] = match self {
            Family::F3 => &[&[1, 3]],
            Family::F4 => &[&[1, 4], &[2, 4]],
            Family::F5 => &[&[2, 5], &[3, 5], &[1, 3, 5]],
            Family::F6 => &[&[3, 6], &[4, 6], &[1, 3, 6], &[1, 4, 6], &[2, 4, 6]],
        };
        sets.iter().any(|s| LevelSet::from_levels(s) == levels)
    }

    pub fn of(levels: LevelSet) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.contains(levels))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.index())
    }
}

/// One charge group `(𝒜, ℬ, 𝒞)` with the closed-form value the argument
/// claims for `c(𝒜, ℬ, 𝒞)`.
#[derive(Clone, Debug)]
pub struct ChargeGroup {
    pub family: Family,
    pub label: String,
    pub theta: Partition,
    pub a: Vec<FactoredComposition>,
    pub b: Vec<FactoredComposition>,
    pub c: Vec<FactoredComposition>,
    pub expected: Rational,
    /// Whether the claim is `c > 0` rather than `c ≥ 0`.
    pub strict: bool,
}

impl ChargeGroup {
    fn id(&self) -> String {
        match self.a.first() {
            Some(k) => format!("{} {} at {}", self.family, self.label, k),
            None => format!("{} {} (empty)", self.family, self.label),
        }
    }

    fn core(&self) -> Result<&FactoredComposition> {
        self.a
            .first()
            .ok_or_else(|| Error::MalformedGroup(format!("{} has no members", self.label)))
    }

    /// Shared core and tail, nonempty core, `ρ(αβ) = θ` on `𝒜`,
    /// `ρ(2 α'β') = θ` on `ℬ`, `ρ(3 α'β') = θ` on `𝒞`, `ℬ ⊆ 𝒜(2)`, `𝒞 ⊆ 𝒜(3)`,
    /// and the expected sizes.
    pub fn check_structure(&self, b: usize) -> std::result::Result<(), String> {
        let first = self.core().map_err(|e| e.to_string())?;
        if first.core.is_empty() {
            return Err("empty core".into());
        }
        let n = 2 * b + 6;
        let members = self.a.iter().chain(&self.b).chain(&self.c);
        for m in members {
            if m.core != first.core || m.tail != first.tail {
                return Err(format!("{m} does not share core and tail"));
            }
        }
        let mut seen = HashSet::new();
        for m in &self.a {
            let k = m.flatten();
            if k.size() != n || !k.has_no_ones() {
                return Err(format!("{m} is not in W_{n}"));
            }
            if !seen.insert(k) {
                return Err(format!("{m} repeated"));
            }
            if underlying_partition(&m.outer()) != self.theta {
                return Err(format!("{m}: ρ(αβ) != {}", self.theta));
            }
        }
        for (donors, part, size) in [(&self.b, 2u32, n - 2), (&self.c, 3u32, n - 3)] {
            let mut seen = HashSet::new();
            for h in donors {
                let flat = h.flatten();
                if flat.size() != size || !flat.has_no_ones() {
                    return Err(format!("{h} is not in W_{size}"));
                }
                if !seen.insert(flat) {
                    return Err(format!("{h} repeated"));
                }
                if underlying_partition(&h.outer().prepend(part)) != self.theta {
                    return Err(format!("{h}: ρ({part}α'β') != {}", self.theta));
                }
                if !self.a.iter().any(|a| removes_part(a, h, part)) {
                    return Err(format!("{h} is not obtained by removing a {part} from a member"));
                }
            }
        }
        Ok(())
    }
}

/// Whether `h` is `a` with one part `part` removed from `α` or from `β`.
fn removes_part(a: &FactoredComposition, h: &FactoredComposition, part: u32) -> bool {
    let removed = |from: &Composition, to: &Composition| {
        let p = from.parts();
        (0..p.len()).any(|i| {
            p[i] == part && to.parts().len() + 1 == p.len() && {
                let mut v = p.to_vec();
                v.remove(i);
                v == to.parts()
            }
        })
    };
    (a.beta == h.beta && removed(&a.alpha, &h.alpha)) || (a.alpha == h.alpha && removed(&a.beta, &h.beta))
}

/// `c(𝒜, ℬ, 𝒞) = Σ_𝒜 (2 - l_K) w_{K(i1)} + Σ_ℬ w_{H(i1)}
///               + (2|𝒜| + 4|ℬ| + (3/2)|𝒞|)(i1 - 1) w_{1θ}`.
pub fn c_value(group: &ChargeGroup, b: usize) -> Result<Rational> {
    let first = group.core()?;
    let i1 = first
        .core
        .first()
        .ok_or_else(|| Error::MalformedGroup(format!("{}: empty core", group.label)))?;
    let reduced_weight = |m: &FactoredComposition| -> Result<u64> {
        m.reduced()
            .map(|r| w_weight(&r))
            .ok_or_else(|| Error::MalformedGroup(format!("{m}: empty core")))
    };
    let mut c = Rational::zero();
    for k in &group.a {
        let l = y1_level_weight(&k.flatten(), b) as i64;
        c += int(2 - l) * from_u64(reduced_weight(k)?);
    }
    for h in &group.b {
        c += from_u64(reduced_weight(h)?);
    }
    let count = int(2 * group.a.len() as i64 + 4 * group.b.len() as i64) + ratio(3 * group.c.len() as i64, 2);
    let w1theta = shifted_product(&Composition::from(group.theta.clone()));
    c += count * int(i1 as i64 - 1) * from_u64(w1theta);
    Ok(c)
}

/// `w'_{IJ}` for the group's core and tail.
pub fn group_w_prime(group: &ChargeGroup) -> Result<u64> {
    let first = group.core()?;
    w_prime(&first.core.concat(&first.tail))
}

/// Expansions `s(𝒜, ℬ, 𝒞)` is read from.
pub struct Y1Sources {
    pub y11_minus_n: CompExpansion,
    pub y12: CompExpansion,
    pub y13: CompExpansion,
}

impl Y1Sources {
    pub fn new(parts: &Y1Parts) -> Result<Self> {
        Ok(Y1Sources {
            y11_minus_n: parts.y11.sub(&parts.n)?,
            y12: parts.y12.clone(),
            y13: parts.y13.clone(),
        })
    }
}

/// `s(𝒜, ℬ, 𝒞) = (Y_11 - N)|_𝒜 + Y_12|_{2ℬ} + Y_13|_{3𝒞}`, read off the
/// expansions themselves.
pub fn s_value(group: &ChargeGroup, sources: &Y1Sources) -> Rational {
    s_value_with(group, sources, Mutation::None)
}

fn s_value_with(group: &ChargeGroup, sources: &Y1Sources, mutation: Mutation) -> Rational {
    let mut s = Rational::zero();
    for k in &group.a {
        s += sources.y11_minus_n.coeff(&k.flatten());
    }
    if mutation != Mutation::DropY12 {
        for h in &group.b {
            s += sources.y12.coeff(&h.flatten().prepend(2));
        }
    }
    for h in &group.c {
        s += sources.y13.coeff(&h.flatten().prepend(3));
    }
    s
}

fn comp(parts: &[u32]) -> Composition {
    Composition::from_vec(parts.to_vec())
}

fn fc(alpha: &[u32], core: &Composition, beta: &[u32], tail: &Composition) -> FactoredComposition {
    FactoredComposition::new(comp(alpha), core.clone(), comp(beta), tail.clone())
}

fn twos(k: usize) -> Vec<u32> {
    vec![2; k]
}

fn with(prefix: &[u32], rest: &[u32]) -> Vec<u32> {
    let mut v = prefix.to_vec();
    v.extend_from_slice(rest);
    v
}

/// `W_m`, empty when `m < 0`.
fn w_set(m: isize) -> Vec<Composition> {
    if m < 0 {
        Vec::new()
    } else {
        enumerate_no_ones(m as usize)
    }
}

fn nonempty(m: isize) -> Vec<Composition> {
    w_set(m).into_iter().filter(|c| !c.is_empty()).collect()
}

struct GroupBuilder {
    family: Family,
    groups: Vec<ChargeGroup>,
}

impl GroupBuilder {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        label: &str,
        theta: &[u32],
        a: Vec<FactoredComposition>,
        b: Vec<FactoredComposition>,
        c: Vec<FactoredComposition>,
        expected: Rational,
        strict: bool,
    ) {
        self.groups.push(ChargeGroup {
            family: self.family,
            label: label.to_string(),
            theta: Partition::new(theta.to_vec()).expect("positive parts"),
            a,
            b,
            c,
            expected,
            strict,
        });
    }
}

fn first(c: &Composition) -> i64 {
    c.first().expect("nonempty core") as i64
}

fn groups_f3(b: usize) -> Vec<ChargeGroup> {
    let b = b as isize;
    let mut g = GroupBuilder {
        family: Family::F3,
        groups: Vec::new(),
    };
    let tails: Vec<_> = w_set(b + 3).into_iter().filter(|j| j.first() >= Some(4)).collect();
    for i in nonempty(b + 1) {
        for j in &tails {
            g.push(
                "I2J",
                &[2],
                vec![fc(&[], &i, &[2], j)],
                vec![fc(&[], &i, &[], j)],
                vec![],
                int(5 * first(&i) - 6),
                true,
            );
        }
    }
    g.groups
}

fn groups_f4(b: usize) -> Vec<ChargeGroup> {
    let d = b.div_ceil(2);
    let b = b as isize;
    let mut g = GroupBuilder {
        family: Family::F4,
        groups: Vec::new(),
    };
    let tails: Vec<_> = w_set(b + 2).into_iter().filter(|j| j.first() >= Some(3)).collect();
    for j in &tails {
        for i in nonempty(b + 1).into_iter().filter(|i| first(i) >= 3) {
            g.push(
                "A0",
                &[3],
                vec![fc(&[], &i, &[3], j)],
                vec![],
                vec![fc(&[], &i, &[], j)],
                int(3 * first(&i) - 7),
                true,
            );
        }
        for k in 1..=d {
            let label = format!("A_{k}");
            for i in w_set(b + 1 - 2 * k as isize) {
                let theta = with(&twos(k), &[3]);
                if i.is_empty() {
                    let three = comp(&[3]);
                    g.push(
                        &label,
                        &twos(k),
                        vec![fc(&twos(k), &three, &[], j), fc(&[], &three, &twos(k), j)],
                        vec![fc(&[], &three, &twos(k - 1), j)],
                        vec![],
                        int(2),
                        true,
                    );
                } else if first(&i) >= 3 {
                    g.push(
                        &label,
                        &theta,
                        vec![fc(&twos(k), &i, &[3], j), fc(&[], &i, &with(&[3], &twos(k)), j)],
                        vec![fc(&[], &i, &with(&[3], &twos(k - 1)), j)],
                        vec![],
                        int(4 * (first(&i) - 2)),
                        true,
                    );
                }
            }
        }
        for p in nonempty(b + 2) {
            if ends_in_three_then_twos(&p) {
                continue;
            }
            g.push(
                &format!("A_{}", d + 1),
                &[2],
                vec![fc(&[], &p, &[2], j)],
                vec![fc(&[], &p, &[], j)],
                vec![],
                int(4 * first(&p) - 6),
                true,
            );
        }
    }
    g.groups
}

/// Whether `P = I 3 2^t` for some `t ≥ 0` with `I` empty or `i_1 ≥ 3`.
fn ends_in_three_then_twos(p: &Composition) -> bool {
    let parts = p.parts();
    let mut end = parts.len();
    while end > 0 && parts[end - 1] == 2 {
        end -= 1;
    }
    if end == 0 || parts[end - 1] != 3 {
        return false;
    }
    let i = &parts[..end - 1];
    i.is_empty() || i[0] >= 3
}

fn groups_f5(b: usize) -> Vec<ChargeGroup> {
    let bu = b;
    let b = b as isize;
    let mut g = GroupBuilder {
        family: Family::F5,
        groups: Vec::new(),
    };
    for j in &nonempty(b + 1) {
        for i in nonempty(b + 2) {
            if first(&i) >= 3 && i.last() >= Some(3) {
                g.push(
                    "A0",
                    &[3],
                    vec![fc(&[], &i, &[3], j)],
                    vec![],
                    vec![fc(&[], &i, &[], j)],
                    int(3 * first(&i) - 7),
                    true,
                );
            }
        }
        for i in nonempty(b + 3) {
            if i.last() >= Some(4) {
                g.push(
                    "A1",
                    &[2],
                    vec![fc(&[], &i, &[2], j)],
                    vec![fc(&[], &i, &[], j)],
                    vec![],
                    int(4 * first(&i) - 6),
                    true,
                );
            }
        }
        for i in w_set(b - 2) {
            if i.is_empty() {
                let two = comp(&[2]);
                g.push(
                    "A2",
                    &[3, 2],
                    vec![fc(&[], &two, &[2, 3], j), fc(&[], &two, &[3, 2], j)],
                    vec![fc(&[], &two, &[3], j)],
                    vec![],
                    int(0),
                    false,
                );
            } else {
                g.push(
                    "A2",
                    &[3, 2, 2],
                    vec![fc(&[2], &i, &[2, 3], j), fc(&[2], &i, &[3, 2], j)],
                    vec![fc(&[2], &i, &[3], j)],
                    vec![],
                    int(0),
                    false,
                );
            }
        }
        for k in 3..=bu {
            let label = format!("A_{k}");
            let ku = k as u32;
            for i in w_set(b - k as isize) {
                if i.is_empty() {
                    let core = comp(&[ku]);
                    g.push(
                        &label,
                        &[3, 2],
                        vec![
                            fc(&[2], &core, &[3], j),
                            fc(&[], &core, &[2, 3], j),
                            fc(&[], &core, &[3, 2], j),
                        ],
                        vec![fc(&[], &core, &[3], j)],
                        vec![],
                        int(4 * (k as i64 - 3)),
                        false,
                    );
                } else {
                    let mut theta = vec![ku, 3, 2];
                    theta.sort_unstable_by(|x, y| y.cmp(x));
                    g.push(
                        &label,
                        &theta,
                        vec![
                            fc(&[2], &i, &[ku, 3], j),
                            fc(&[ku], &i, &[2, 3], j),
                            fc(&[ku], &i, &[3, 2], j),
                        ],
                        vec![fc(&[ku], &i, &[3], j)],
                        vec![],
                        int(4 * (first(&i) - 1) * (k as i64 - 3)),
                        false,
                    );
                }
            }
        }
        for q in nonempty(b + 1) {
            g.push(
                "E135",
                &[2, 2],
                vec![fc(&[], &q, &[2, 2], j)],
                vec![fc(&[], &q, &[2], j)],
                vec![],
                int(3 * (first(&q) - 2)),
                false,
            );
        }
    }
    g.groups
}

fn groups_f6(b: usize) -> Vec<ChargeGroup> {
    let bu = b;
    let b = b as isize;
    let mut g = GroupBuilder {
        family: Family::F6,
        groups: Vec::new(),
    };
    for j in &nonempty(b) {
        // Class 1: {2Ik3J, 3Ik2J, kI23J, kI32J}, k ≥ 4.
        for k in 4..=(bu + 1) {
            let ku = k as u32;
            let kk = k as i64;
            let mut theta = vec![ku, 3, 2];
            theta.sort_unstable_by(|x, y| y.cmp(x));
            for i in w_set(b + 1 - k as isize) {
                if i.is_empty() {
                    let core = comp(&[ku]);
                    g.push(
                        "class1",
                        &[3, 2],
                        vec![
                            fc(&[2], &core, &[3], j),
                            fc(&[3], &core, &[2], j),
                            fc(&[], &core, &[2, 3], j),
                            fc(&[], &core, &[3, 2], j),
                        ],
                        vec![fc(&[3], &core, &[], j), fc(&[], &core, &[3], j)],
                        vec![fc(&[2], &core, &[], j), fc(&[], &core, &[2], j)],
                        int(17 * kk - 27),
                        true,
                    );
                } else {
                    g.push(
                        "class1",
                        &theta,
                        vec![
                            fc(&[2], &i, &[ku, 3], j),
                            fc(&[3], &i, &[ku, 2], j),
                            fc(&[ku], &i, &[2, 3], j),
                            fc(&[ku], &i, &[3, 2], j),
                        ],
                        vec![fc(&[3], &i, &[ku], j), fc(&[ku], &i, &[3], j)],
                        vec![fc(&[2], &i, &[ku], j), fc(&[ku], &i, &[2], j)],
                        int((17 * kk - 27) * (first(&i) - 1)),
                        true,
                    );
                }
            }
        }
        // Class 2: {2Ik2J, kI22J}, k ≥ 4.
        for k in 4..=(bu + 2) {
            let ku = k as u32;
            let kk = k as i64;
            for i in w_set(b + 2 - k as isize) {
                if i.is_empty() {
                    let core = comp(&[ku]);
                    g.push(
                        "class2",
                        &[2, 2],
                        vec![fc(&[2], &core, &[2], j), fc(&[], &core, &[2, 2], j)],
                        vec![fc(&[2], &core, &[], j), fc(&[], &core, &[2], j)],
                        vec![],
                        int(7 * kk - 10),
                        true,
                    );
                } else {
                    g.push(
                        "class2",
                        &[ku, 2, 2],
                        vec![fc(&[2], &i, &[ku, 2], j), fc(&[ku], &i, &[2, 2], j)],
                        vec![fc(&[2], &i, &[ku], j), fc(&[ku], &i, &[2], j)],
                        vec![],
                        int((7 * kk - 10) * (first(&i) - 1)),
                        true,
                    );
                }
            }
        }
        // Class 3: {2I33J, 3I23J, 3I32J}.
        for i in w_set(b - 2) {
            if i.is_empty() {
                let core = comp(&[3]);
                g.push(
                    "class3",
                    &[3, 2],
                    vec![
                        fc(&[2], &core, &[3], j),
                        fc(&[], &core, &[2, 3], j),
                        fc(&[], &core, &[3, 2], j),
                    ],
                    vec![fc(&[], &core, &[3], j)],
                    vec![fc(&[2], &core, &[], j), fc(&[], &core, &[2], j)],
                    int(6),
                    true,
                );
            } else {
                g.push(
                    "class3",
                    &[3, 3, 2],
                    vec![
                        fc(&[2], &i, &[3, 3], j),
                        fc(&[3], &i, &[2, 3], j),
                        fc(&[3], &i, &[3, 2], j),
                    ],
                    vec![fc(&[3], &i, &[3], j)],
                    vec![fc(&[2], &i, &[3], j), fc(&[3], &i, &[2], j)],
                    int(6 * (first(&i) - 1)),
                    true,
                );
            }
        }
        // Class 4: {2I23J, 2I32J, 3I22J}.
        for i in nonempty(b - 1) {
            g.push(
                "class4",
                &[3, 2, 2],
                vec![
                    fc(&[2], &i, &[2, 3], j),
                    fc(&[2], &i, &[3, 2], j),
                    fc(&[3], &i, &[2, 2], j),
                ],
                vec![fc(&[2], &i, &[3], j), fc(&[3], &i, &[2], j)],
                vec![fc(&[2], &i, &[2], j)],
                int(2 * (first(&i) - 1)),
                true,
            );
        }
        // Class 5: I3J with i_1, i_{-1} ≥ 3.
        for i in nonempty(b + 3) {
            if first(&i) >= 3 && i.last() >= Some(3) {
                g.push(
                    "class5",
                    &[3],
                    vec![fc(&[], &i, &[3], j)],
                    vec![],
                    vec![fc(&[], &i, &[], j)],
                    int(3 * first(&i) - 7),
                    true,
                );
            }
        }
        // Class 6: I2J with i_1, i_{-1} ≥ 4.
        for i in nonempty(b + 4) {
            if first(&i) >= 4 && i.last() >= Some(4) {
                g.push(
                    "class6",
                    &[2],
                    vec![fc(&[], &i, &[2], j)],
                    vec![fc(&[], &i, &[], j)],
                    vec![],
                    int(5 * first(&i) - 6),
                    true,
                );
            }
        }
        // Class 7: 2I22J, charged with core 2I.
        for i in nonempty(b) {
            let core = i.prepend(2);
            g.push(
                "class7",
                &[2, 2],
                vec![fc(&[], &core, &[2, 2], j)],
                vec![fc(&[], &core, &[2], j)],
                vec![],
                int(0),
                false,
            );
        }
    }
    g.groups
}

/// Every charge group for a given `b`.
pub fn charge_groups(b: usize) -> Vec<ChargeGroup> {
    let mut out = groups_f3(b);
    out.extend(groups_f4(b));
    out.extend(groups_f5(b));
    out.extend(groups_f6(b));
    out
}

/// The closed forms of `∪ℬ` and `∪𝒞` for each family, as predicates on
/// `H ∈ W_{2b+4}` and `H ∈ W_{2b+3}`.
fn donor_union_contains(family: Family, is_b: bool, h: &Composition, b: usize) -> bool {
    let after = |p: usize| h.split_at_size(p).and_then(|(_, j)| j.first());
    let prefix = |p: usize| h.split_at_size(p).filter(|(i, j)| !i.is_empty() && !j.is_empty());
    let h1 = h.first().unwrap_or(0);
    match (family, is_b) {
        (Family::F3, true) => after(b + 1) >= Some(4),
        (Family::F3, false) => false,
        (Family::F4, true) => after(b + 2) >= Some(3),
        (Family::F4, false) => after(b + 1) >= Some(3) && h1 >= 3,
        (Family::F5, true) => prefix(b + 3).is_some(),
        (Family::F5, false) => h1 >= 3 && prefix(b + 2).is_some_and(|(i, _)| i.last() >= Some(3)),
        (Family::F6, true) => prefix(b + 4).is_some(),
        (Family::F6, false) => prefix(b + 3).is_some(),
    }
}

pub fn certify_y1(b: usize) -> Result<CertificateReport> {
    certify_y1_with(b, Mutation::None)
}

pub fn certify_y1_with(b: usize, mutation: Mutation) -> Result<CertificateReport> {
    check_b(b)?;
    let n = 2 * b + 6;
    let parts = compute_y1_parts(b)?;
    let y1 = parts.total()?;
    let sources = Y1Sources::new(&parts)?;
    let all = enumerate_no_ones(n);
    let mut report = CertificateReport::new(b, "Y1");

    // Level sets: no two adjacent levels, and the twenty nonempty E_S.
    let mut step = StepRecord::new("level-sets");
    let mut by_levels: BTreeMap<LevelSet, Vec<&Composition>> = BTreeMap::new();
    for k in &all {
        let levels = prefix_l(k, b);
        step.check(!levels.has_adjacent(), || format!("{k} has adjacent levels {levels}"));
        by_levels.entry(levels).or_default().push(k);
    }
    let nonempty_sets = by_levels.keys().filter(|s| !s.is_empty()).count();
    step.stat("nonempty_level_sets", nonempty_sets as u64);
    step.check(nonempty_sets <= 20, || format!("{nonempty_sets} nonempty level sets"));
    report.push(step);

    // Pointwise nonnegativity outside the four families.
    let mut step = StepRecord::new("pointwise-nonneg");
    let pointwise = |s: &LevelSet| {
        s.len() <= 1
            || [&[1, 5][..], &[1, 6], &[2, 6]]
                .iter()
                .any(|t| LevelSet::from_levels(t) == *s)
    };
    for (levels, members) in &by_levels {
        if !pointwise(levels) {
            continue;
        }
        for k in members {
            let v = sources.y11_minus_n.coeff(k);
            step.check(!v.is_negative(), || format!("(Y11 - N) at {k} is {v}"));
        }
    }
    report.push(step);

    // Charge groups.
    let groups = charge_groups(b);
    let mut step = StepRecord::new("group-structure");
    let mut well_formed = vec![false; groups.len()];
    for (idx, g) in groups.iter().enumerate() {
        well_formed[idx] = match g.check_structure(b) {
            Ok(()) => step.check(true, String::new),
            Err(e) => step.check(false, || format!("{}: {e}", g.id())),
        };
    }
    let mut per_family: BTreeMap<String, u64> = BTreeMap::new();
    for g in &groups {
        *per_family.entry(g.family.to_string()).or_default() += 1;
    }
    for (f, count) in per_family {
        step.stat(&format!("groups_{f}"), count);
    }
    report.push(step);

    // Each family is the disjoint union of its groups.
    let mut step = StepRecord::new("family-partition");
    for family in Family::ALL {
        let expected: BTreeSet<&Composition> = by_levels
            .iter()
            .filter(|(s, _)| family.contains(**s))
            .flat_map(|(_, m)| m.iter().copied())
            .collect();
        let mut covered: BTreeSet<Composition> = BTreeSet::new();
        for g in groups.iter().filter(|g| g.family == family) {
            for a in &g.a {
                let k = a.flatten();
                step.check(expected.contains(&k), || format!("{family}: {a} is outside the family"));
                let fresh = covered.insert(k);
                step.check(fresh, || format!("{family}: {a} lies in two groups"));
            }
        }
        for k in &expected {
            step.check(covered.contains(*k), || format!("{family}: {k} is in no group"));
        }
        step.stat(&format!("size_{family}"), expected.len() as u64);
    }
    report.push(step);

    // s = c w' and the claimed sign of c.
    let mut step = StepRecord::new("group-values");
    for (idx, g) in groups.iter().enumerate() {
        if !well_formed[idx] {
            continue;
        }
        let c = c_value(g, b)?;
        let w = from_u64(group_w_prime(g)?);
        let s = s_value_with(g, &sources, mutation);
        step.check(s == &c * &w, || format!("{}: s = {s} but c w' = {}", g.id(), &c * &w));
        step.check(c == g.expected, || {
            format!("{}: c = {c}, closed form gives {}", g.id(), g.expected)
        });
        let sign_ok = if g.strict { c.is_positive() } else { !c.is_negative() };
        step.check(sign_ok, || format!("{}: c = {c} has the wrong sign", g.id()));
    }
    report.push(step);

    // Donor sets are disjoint and their unions have the closed forms.
    let mut disjoint = StepRecord::new("donor-disjointness");
    let mut unions = StepRecord::new("donor-unions");
    let mut used_b: HashMap<Composition, usize> = HashMap::new();
    let mut used_c: HashMap<Composition, usize> = HashMap::new();
    for (idx, g) in groups.iter().enumerate() {
        for h in &g.b {
            let prev = used_b.insert(h.flatten(), idx);
            disjoint.check(prev.is_none(), || format!("B donor {h} used twice"));
        }
        for h in &g.c {
            let prev = used_c.insert(h.flatten(), idx);
            disjoint.check(prev.is_none(), || format!("C donor {h} used twice"));
        }
    }
    for (is_b, used, size) in [(true, &used_b, n - 2), (false, &used_c, n - 3)] {
        let name = if is_b { "B" } else { "C" };
        for family in Family::ALL {
            let got: BTreeSet<&Composition> = used
                .iter()
                .filter(|(_, &g)| groups[g].family == family)
                .map(|(h, _)| h)
                .collect();
            let want: Vec<Composition> = enumerate_no_ones(size)
                .into_iter()
                .filter(|h| donor_union_contains(family, is_b, h, b))
                .collect();
            unions.check(got.len() == want.len() && want.iter().all(|h| got.contains(h)), || {
                format!(
                    "{name}_{} has {} members, closed form has {}",
                    family.index(),
                    got.len(),
                    want.len()
                )
            });
        }
    }
    report.push(disjoint);
    report.push(unions);

    // Reassemble Y1: group sums plus untouched terms.
    let mut assembled = ESym::zero(n);
    let mut consumed: HashSet<Composition> = HashSet::new();
    for g in &groups {
        let Some(first) = g.a.first() else { continue };
        let s = s_value_with(g, &sources, mutation);
        assembled.push(underlying_partition(&first.flatten()), s);
        consumed.extend(g.a.iter().map(FactoredComposition::flatten));
    }
    let mut leftover = StepRecord::new("leftover-nonneg");
    for (k, v) in sources.y11_minus_n.terms() {
        if consumed.contains(k) {
            continue;
        }
        leftover.check(!v.is_negative(), || format!("(Y11 - N) at {k} is {v}"));
        assembled.push(underlying_partition(k), v.clone());
    }
    let donors = [(&sources.y12, 2u32, &used_b), (&sources.y13, 3u32, &used_c)];
    for (source, part, used) in donors {
        for (key, v) in source.terms() {
            let donor = key.tail();
            debug_assert_eq!(key.first(), Some(part));
            if used.contains_key(&donor) {
                if mutation == Mutation::DropY12 && part == 2 {
                    assembled.push(underlying_partition(key), v.clone());
                }
                continue;
            }
            leftover.check(!v.is_negative(), || format!("Y1{part} at {key} is {v}"));
            assembled.push(underlying_partition(key), v.clone());
        }
    }
    report.push(leftover);
    report.push(assembly_step("assembly", &assembled, &y1));

    let (step, witness) = final_positivity(&y1);
    report.push(step);
    Ok(report.finish(witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn single(
        family: Family,
        a: FactoredComposition,
        bs: Vec<FactoredComposition>,
        cs: Vec<FactoredComposition>,
        theta: &[u32],
    ) -> ChargeGroup {
        ChargeGroup {
            family,
            label: "test".into(),
            theta: Partition::new(theta.to_vec()).unwrap(),
            a: vec![a],
            b: bs,
            c: cs,
            expected: int(0),
            strict: false,
        }
    }

    #[test]
    fn charge_values_on_known_groups() {
        // I3J with i1 = 3: c = 3 * 3 - 7.
        let b = 4;
        let (i, j) = (c("32"), c("33"));
        let g = single(
            Family::F4,
            fc(&[], &i, &[3], &j),
            vec![],
            vec![fc(&[], &i, &[], &j)],
            &[3],
        );
        assert_eq!(c_value(&g, b).unwrap(), int(2));
        // I22J with i1 = 2 (levels 1, 3, 5): c = 3(2 - 2).
        let (i, j) = (c("23"), c("32"));
        let g = single(
            Family::F5,
            fc(&[], &i, &[2, 2], &j),
            vec![fc(&[], &i, &[2], &j)],
            vec![],
            &[2, 2],
        );
        assert_eq!(c_value(&g, b).unwrap(), int(0));
        // Class 1 with k = 4, i1 = 2: (17 * 4 - 27)(2 - 1).
        let b = 5;
        let (i, j) = (c("2"), c("23"));
        let g = ChargeGroup {
            family: Family::F6,
            label: "class1".into(),
            theta: Partition::new(vec![4, 3, 2]).unwrap(),
            a: vec![
                fc(&[2], &i, &[4, 3], &j),
                fc(&[3], &i, &[4, 2], &j),
                fc(&[4], &i, &[2, 3], &j),
                fc(&[4], &i, &[3, 2], &j),
            ],
            b: vec![fc(&[3], &i, &[4], &j), fc(&[4], &i, &[3], &j)],
            c: vec![fc(&[2], &i, &[4], &j), fc(&[4], &i, &[2], &j)],
            expected: int(41),
            strict: true,
        };
        assert_eq!(g.check_structure(b), Ok(()));
        assert_eq!(c_value(&g, b).unwrap(), int(41));
        let sources = Y1Sources::new(&compute_y1_parts(b).unwrap()).unwrap();
        let w = from_u64(group_w_prime(&g).unwrap());
        assert_eq!(s_value(&g, &sources), int(41) * w);
    }

    #[test]
    fn structure_rejects_bad_donor() {
        let (i, j) = (c("32"), c("33"));
        let good = single(
            Family::F4,
            fc(&[], &i, &[3], &j),
            vec![],
            vec![fc(&[], &i, &[], &j)],
            &[3],
        );
        assert_eq!(good.check_structure(4), Ok(()));
        let bad = single(
            Family::F4,
            fc(&[], &i, &[3], &j),
            vec![fc(&[], &i, &[], &j)],
            vec![],
            &[3],
        );
        assert!(bad.check_structure(4).is_err());
    }

    #[test]
    fn verified_small_b() {
        for b in 1..=5 {
            let r = certify_y1(b).unwrap();
            assert!(r.verified, "{}", r.to_table());
        }
    }

    #[test]
    fn dropping_y12_is_caught() {
        let r = certify_y1_with(4, Mutation::DropY12).unwrap();
        assert!(!r.verified);
        assert!(!r.step("group-values").unwrap().passed());
    }
}
