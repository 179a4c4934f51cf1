//! `Y_2` certificate: an eleven-set split of `W_{2b+5}` and the swap
//! `φ(IJ) = JI` (`|I| = b + 3`) that cancels the negative coefficients.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::{assembly_step, final_positivity, CertificateReport, Mutation, StepRecord};
use crate::algebra::{from_u64, int, CompExpansion, ESym};
use crate::combinatorics::{
    enumerate_no_ones, enumerate_no_ones_with_prefix, shifted_product, underlying_partition, Composition,
};
use crate::decomposition::{check_b, compute_y2};
use crate::error::Result;

/// Names of the eleven sets, in the order they are reported.
pub const Y2_SETS: [&str; 11] = ["A2", "A30", "A31", "A32", "A", "A40", "A41", "B", "A5", "C", "D"];

/// Every set among the eleven whose defining condition `K` satisfies.
pub fn y2_memberships(k: &Composition, b: usize) -> Vec<&'static str> {
    let mut out = Vec::new();
    let k1 = k.first().unwrap_or(0);
    // (prefix, suffix) at a split of size b + d.
    let split = |d: usize| k.split_at_size(b + d).filter(|(_, j)| !j.is_empty());
    if let Some((_, j)) = split(2) {
        if j.first() >= Some(4) {
            out.push("A2");
        }
    }
    if let Some((_, j)) = split(3) {
        let j1 = j.first().unwrap_or(0);
        if k1 == 2 && j1 >= 3 {
            out.push("A30");
        }
        if k1 == 2 && j1 == 2 {
            out.push("A31");
        }
        if k1 == 3 {
            out.push("A32");
        }
        if k1 >= 4 {
            out.push("A");
        }
    }
    if let Some((i, _)) = split(4) {
        let last = i.last().unwrap_or(0);
        if k1 >= 3 {
            out.push("A40");
        }
        if k1 == 2 && last == 2 {
            out.push("A41");
        }
        if k1 == 2 && last >= 3 {
            out.push("B");
        }
    }
    if let Some((i, _)) = split(5) {
        let last = i.last().unwrap_or(0);
        if last == 3 {
            out.push("A5");
        }
        if last >= 4 {
            out.push("C");
        }
    }
    if (2..=5).all(|d| split(d).is_none()) {
        out.push("D");
    }
    out
}

/// `c_K = lead - Σ_{l ∈ L_K} l`, `L_K = {l ∈ [3] : K has a prefix of size b + 6 - l}`,
/// with `lead = 2 + χ(k_1 = 2)` (or `2` under the mutation).
fn c_k(k: &Composition, b: usize, mutation: Mutation) -> i64 {
    let lead = if k.first() == Some(2) && mutation != Mutation::DropLeadingTwoBonus {
        3
    } else {
        2
    };
    let levels: i64 = (1..=3)
        .filter(|&l| k.has_prefix_of_size(b + 6 - l))
        .map(|l| l as i64)
        .sum();
    lead - levels
}

fn y2_input(b: usize, mutation: Mutation) -> Result<CompExpansion> {
    if mutation != Mutation::DropLeadingTwoBonus {
        return compute_y2(b);
    }
    let n = 2 * b + 5;
    let mut out = CompExpansion::zero(n);
    for k in enumerate_no_ones(n) {
        let c = c_k(&k, b, mutation) * shifted_product(&k) as i64;
        out.push(k, int(c));
    }
    Ok(out)
}

/// `φ(IJ) = JI` with `|I| = b + 3`.
fn swap(k: &Composition, b: usize) -> Option<Composition> {
    k.split_at_size(b + 3).map(|(i, j)| j.concat(&i))
}

pub fn certify_y2(b: usize) -> Result<CertificateReport> {
    certify_y2_with(b, Mutation::None)
}

pub fn certify_y2_with(b: usize, mutation: Mutation) -> Result<CertificateReport> {
    check_b(b)?;
    let n = 2 * b + 5;
    let y2 = y2_input(b, mutation)?;
    let all = enumerate_no_ones(n);
    let mut report = CertificateReport::new(b, "Y2");

    // The eleven sets partition W_{2b+5}.
    let mut step = StepRecord::new("set-partition");
    let mut sets: BTreeMap<&str, BTreeSet<Composition>> = Y2_SETS.iter().map(|&s| (s, BTreeSet::new())).collect();
    for k in &all {
        let m = y2_memberships(k, b);
        if step.check(m.len() == 1, || format!("{k} lies in {m:?}")) {
            sets.get_mut(m[0]).unwrap().insert(k.clone());
        }
    }
    for (name, s) in &sets {
        step.stat(name, s.len() as u64);
    }
    report.push(step);

    // φ maps A31 -> A41, A32 -> A5, A -> A2, bijectively W(b+3) -> W(b+2).
    let mut step = StepRecord::new("swap-bijection");
    let domain = enumerate_no_ones_with_prefix(n, b + 3);
    let codomain: BTreeSet<Composition> = enumerate_no_ones_with_prefix(n, b + 2).into_iter().collect();
    let images: BTreeSet<Composition> = domain.iter().filter_map(|k| swap(k, b)).collect();
    step.check(images.len() == domain.len() && images == codomain, || {
        "swap is not a bijection from W(b+3) onto W(b+2)".to_string()
    });
    for (from, to) in [("A31", "A41"), ("A32", "A5"), ("A", "A2")] {
        let image: BTreeSet<Composition> = sets[from].iter().filter_map(|k| swap(k, b)).collect();
        step.check(image == sets[to], || format!("swap({from}) != {to}"));
        for k in &sets[from] {
            let h = swap(k, b).expect("domain element");
            step.check(shifted_product(&h) == shifted_product(k), || {
                format!("w_1H != w_1K for K = {k}, H = {h}")
            });
        }
    }
    report.push(step);

    // The coefficient table.
    let mut step = StepRecord::new("coefficient-table");
    for k in &all {
        let ck = c_k(k, b, mutation);
        step.check(y2.coeff(k) == int(ck * shifted_product(k) as i64), || {
            format!("Y2 coefficient at {k} is not c_K w_1K")
        });
    }
    let chi = |k: &Composition| i64::from(k.first() == Some(2));
    for (name, members) in &sets {
        for k in members {
            let ck = c_k(k, b, mutation);
            let (got, want) = match *name {
                "A31" | "A32" => (ck + c_k(&swap(k, b).unwrap(), b, mutation), 0),
                "A" => (ck + c_k(&swap(k, b).unwrap(), b, mutation), 1),
                "A30" | "A40" => (ck, 0),
                "B" => (ck, 1),
                "C" => (ck, 1 + chi(k)),
                "D" => (ck, 2 + chi(k)),
                _ => continue,
            };
            step.check(got == want, || format!("{name}: {k} gives {got}, expected {want}"));
        }
    }
    report.push(step);

    // Reassemble Y2 from the positive form.
    let mut assembled = ESym::zero(n);
    let mut positive_terms = 0u64;
    for (name, members) in &sets {
        for k in members {
            let c = match *name {
                "A" | "B" => 1,
                "C" => 1 + chi(k),
                "D" => 2 + chi(k),
                _ => continue,
            };
            if c > 0 {
                positive_terms += 1;
            }
            assembled.push(underlying_partition(k), from_u64(c as u64 * shifted_product(k)));
        }
    }
    let mut step = assembly_step("positive-assembly", &assembled, &y2);
    step.stat("positive_terms", positive_terms);
    debug_assert!(assembled.terms().all(|(_, c)| *c >= num_rational::BigRational::zero()));
    report.push(step);

    let (step, witness) = final_positivity(&y2);
    report.push(step);
    Ok(report.finish(witness))
}
