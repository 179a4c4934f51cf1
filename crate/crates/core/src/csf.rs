//! Chromatic symmetric functions: a brute-force oracle and the closed forms
//! for paths, spiders and trinacrias.

use std::collections::HashMap;

use num_traits::One;
use rayon::prelude::*;

use crate::algebra::{from_u64, int, power_sum_rows, power_to_elementary_with, CompExpansion, ESym};
use crate::combinatorics::{enumerate_path_support, w_weight, Partition};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default limit on the number of edge subsets the oracle enumerates.
pub const DEFAULT_ORACLE_BUDGET: u64 = 1 << 24;

const CHUNK_BITS: u32 = 12;

/// `X_G` by the default budget; see [`csf_oracle_with_budget`].
pub fn csf_oracle(g: &Graph) -> Result<ESym> {
    csf_oracle_with_budget(g, DEFAULT_ORACLE_BUDGET)
}

/// `X_G = Σ_{S⊆E} (-1)^{|S|} p_{λ(S)}`, where `λ(S)` lists the component sizes
/// of the spanning subgraph `(V, S)`, converted to the elementary basis.
/// Refuses graphs with more than `budget` edge subsets.
pub fn csf_oracle_with_budget(g: &Graph, budget: u64) -> Result<ESym> {
    let m = g.edge_count();
    if m >= 64 || (1u64 << m) > budget {
        return Err(Error::OracleBudget { edges: m, budget });
    }
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let total: u64 = 1 << m;
    let chunk: u64 = 1 << CHUNK_BITS.min(m as u32);

    let counts = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut local: HashMap<Vec<u32>, i64> = HashMap::new();
            let mut parent = vec![0usize; n];
            for mask in c * chunk..(c + 1) * chunk {
                for (v, p) in parent.iter_mut().enumerate() {
                    *p = v;
                }
                for (i, &(u, v)) in edges.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                        if ru != rv {
                            parent[ru] = rv;
                        }
                    }
                }
                let mut sizes = vec![0u32; n];
                for v in 0..n {
                    let r = find(&mut parent, v);
                    sizes[r] += 1;
                }
                let mut lambda: Vec<u32> = sizes.into_iter().filter(|&s| s > 0).collect();
                lambda.sort_unstable_by(|a, b| b.cmp(a));
                let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
                *local.entry(lambda).or_insert(0) += sign;
            }
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });

    let rows = power_sum_rows(n);
    let mut out = ESym::zero(n);
    for (lambda, coeff) in counts {
        if coeff == 0 {
            continue;
        }
        let p = power_to_elementary_with(&Partition::from_sorted(lambda), &rows);
        out.accumulate_scaled(&p, &int(coeff))?;
    }
    Ok(out)
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// `X_{P_n} = Σ_I w_I e_I` in the free algebra. Only compositions whose
/// non-leading parts are at least 2 carry nonzero weight, so only those are
/// stored.
pub fn csf_path(n: usize) -> CompExpansion {
    let mut out = CompExpansion::zero(n);
    for comp in enumerate_path_support(n) {
        let w = w_weight(&comp);
        out.push(comp, from_u64(w));
    }
    out
}

/// Projected path expansions `X_{P_0}, ..., X_{P_n}`.
pub fn path_table(n: usize) -> Vec<ESym> {
    (0..=n).map(|k| csf_path(k).project()).collect()
}

/// `𝒫_i = X_{P_i} X_{P_{n-i}}`.
fn path_pair(paths: &[ESym], n: usize, i: usize) -> ESym {
    paths[i].mul(&paths[n - i])
}

fn sorted_legs(a: usize, b: usize, c: usize) -> Result<(usize, usize, usize)> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::InvalidLegs(a, b, c));
    }
    let mut legs = [a, b, c];
    legs.sort_unstable_by(|x, y| y.cmp(x));
    Ok((legs[0], legs[1], legs[2]))
}

/// The spider with three legs:
/// `X_{P_n} + Σ_{i=1}^{c} (𝒫_i - 𝒫_{b+i})`, `n = a+b+c+1`, legs sorted.
pub fn csf_spider_abc(a: usize, b: usize, c: usize) -> Result<ESym> {
    let (a, b, c) = sorted_legs(a, b, c)?;
    let n = a + b + c + 1;
    let paths = path_table(n);
    let mut out = paths[n].clone();
    for i in 1..=c {
        out.accumulate(&path_pair(&paths, n, i))?;
        out = out.sub(&path_pair(&paths, n, b + i))?;
    }
    Ok(out)
}

/// The trinacria `T_{abc}`:
/// `2𝒫_0 + Σ_{i=1}^{c+1} (𝒫_i - 𝒫_{b+i}) + Σ_{i=1}^{c} (𝒫_i - 𝒫_{b+i+1}) - 𝒫_{a+1}`
/// with `n = a+b+c+3`, legs sorted.
pub fn csf_trinacria(a: usize, b: usize, c: usize) -> Result<ESym> {
    let (a, b, c) = sorted_legs(a, b, c)?;
    let n = a + b + c + 3;
    let paths = path_table(n);
    let minus_one = -num_rational::BigRational::one();
    let mut out = paths[n].scale(&int(2));
    for i in 1..=c + 1 {
        out.accumulate(&path_pair(&paths, n, i))?;
        out.accumulate_scaled(&path_pair(&paths, n, b + i), &minus_one)?;
    }
    for i in 1..=c {
        out.accumulate(&path_pair(&paths, n, i))?;
        out.accumulate_scaled(&path_pair(&paths, n, b + i + 1), &minus_one)?;
    }
    out.accumulate_scaled(&path_pair(&paths, n, a + 1), &minus_one)?;
    Ok(out)
}

/// The six graphs of a triple-deletion instance, with
/// `e¹ = {t2, t3}`, `e² = {t1, t3}`, `e³ = {t1, t2}`.
#[derive(Clone, Debug)]
pub struct TripleDeletion {
    pub g1: Graph,
    pub g3: Graph,
    pub g12: Graph,
    pub g13: Graph,
    pub g23: Graph,
    pub g123: Graph,
}

impl TripleDeletion {
    pub fn new(g: &Graph, t1: usize, t2: usize, t3: usize) -> Result<Self> {
        let n = g.vertex_count();
        if [t1, t2, t3].iter().any(|&t| t >= n) || !g.is_stable(&[t1, t2, t3]) {
            return Err(Error::NotStable(t1, t2, t3));
        }
        let e1 = (t2, t3);
        let e2 = (t1, t3);
        let e3 = (t1, t2);
        let add = |g: &Graph, es: &[(usize, usize)]| -> Result<Graph> {
            es.iter().try_fold(g.clone(), |acc, &(u, v)| acc.with_edge(u, v))
        };
        Ok(TripleDeletion {
            g1: add(g, &[e1])?,
            g3: add(g, &[e3])?,
            g12: add(g, &[e1, e2])?,
            g13: add(g, &[e1, e3])?,
            g23: add(g, &[e2, e3])?,
            g123: add(g, &[e1, e2, e3])?,
        })
    }
}

/// Checks `X_{G12} = X_{G1} + X_{G23} - X_{G3}` and
/// `X_{G123} = X_{G13} + X_{G23} - X_{G3}` with the oracle.
pub fn verify_triple_deletion(g: &Graph, t1: usize, t2: usize, t3: usize) -> Result<bool> {
    let td = TripleDeletion::new(g, t1, t2, t3)?;
    let x = |h: &Graph| csf_oracle(h);
    let (x1, x3, x12, x13, x23, x123) = (
        x(&td.g1)?,
        x(&td.g3)?,
        x(&td.g12)?,
        x(&td.g13)?,
        x(&td.g23)?,
        x(&td.g123)?,
    );
    let rhs12 = x1.add(&x23)?.sub(&x3)?;
    let rhs123 = x13.add(&x23)?.sub(&x3)?;
    Ok(x12 == rhs12 && x123 == rhs123)
}

/// The instance that reduces a trinacria to spiders: `T_{abc}` with its
/// triangle removed (three disjoint paths) and the triangle as the triple,
/// ordered so that the full graph is `G123 = T_{abc}`.
pub fn spider_reduction_triple(a: usize, b: usize, c: usize) -> (Graph, [usize; 3]) {
    let t = Graph::trinacria(a, b, c);
    let g = t.without_edge(0, 1).without_edge(0, 2).without_edge(1, 2);
    (g, [1, 2, 0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ESym;

    fn e(terms: &[(&str, i64)]) -> ESym {
        let deg = terms[0].0.parse::<Partition>().unwrap().size();
        ESym::from_terms(deg, terms.iter().map(|(k, v)| (k.parse().unwrap(), int(*v)))).unwrap()
    }

    #[test]
    fn oracle_small_graphs() {
        assert_eq!(csf_oracle(&Graph::path(3)).unwrap(), e(&[("3", 3), ("21", 1)]));
        assert_eq!(csf_oracle(&Graph::trinacria(0, 0, 0)).unwrap(), e(&[("3", 6)]));
        let claw = Graph::spider(&"111".parse().unwrap());
        assert_eq!(
            csf_oracle(&claw).unwrap(),
            e(&[("4", 4), ("31", 5), ("22", -2), ("211", 1)])
        );
        assert_eq!(csf_oracle(&Graph::empty(2)).unwrap(), e(&[("11", 1)]));
        assert_eq!(csf_oracle(&Graph::empty(0)).unwrap(), ESym::one());
    }

    #[test]
    fn oracle_budget_refusal() {
        let err = csf_oracle_with_budget(&Graph::path(6), 16).unwrap_err();
        assert!(matches!(err, Error::OracleBudget { edges: 5, budget: 16 }));
        assert!(csf_oracle_with_budget(&Graph::path(5), 16).is_ok());
    }

    #[test]
    fn path_formula() {
        assert_eq!(csf_path(2).project(), e(&[("2", 2)]));
        let p3 = csf_path(3);
        assert_eq!(p3.coeff(&"12".parse().unwrap()), int(1));
        assert_eq!(p3.coeff(&"111".parse().unwrap()), int(0));
        assert_eq!(p3.project(), e(&[("3", 3), ("21", 1)]));
        assert_eq!(csf_path(4).project(), e(&[("4", 4), ("31", 2), ("22", 2)]));
        assert_eq!(csf_path(0), CompExpansion::one());
    }

    #[test]
    fn spider_and_trinacria_small() {
        assert_eq!(
            csf_spider_abc(1, 1, 1).unwrap(),
            e(&[("4", 4), ("31", 5), ("22", -2), ("211", 1)])
        );
        assert_eq!(
            csf_spider_abc(1, 2, 1).unwrap(),
            csf_oracle(&Graph::spider(&"211".parse().unwrap())).unwrap()
        );
        assert_eq!(
            csf_trinacria(1, 1, 1).unwrap(),
            csf_oracle(&Graph::trinacria(1, 1, 1)).unwrap()
        );
        assert!(matches!(csf_trinacria(1, 0, 1), Err(Error::InvalidLegs(1, 0, 1))));
        assert!(csf_spider_abc(0, 1, 1).is_err());
    }

    #[test]
    fn triple_deletion_examples() {
        assert!(verify_triple_deletion(&Graph::empty(3), 0, 1, 2).unwrap());
        assert!(verify_triple_deletion(&Graph::path(5), 0, 2, 4).unwrap());
        let (g, [t1, t2, t3]) = spider_reduction_triple(1, 1, 1);
        assert!(verify_triple_deletion(&g, t1, t2, t3).unwrap());
        let td = TripleDeletion::new(&g, t1, t2, t3).unwrap();
        assert_eq!(td.g123, Graph::trinacria(1, 1, 1));
        assert!(matches!(
            verify_triple_deletion(&Graph::path(3), 0, 1, 2),
            Err(Error::NotStable(0, 1, 2))
        ));
    }
}
