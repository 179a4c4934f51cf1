use std::collections::BTreeSet;

use proptest::prelude::*;

use csfkit::algebra::ratio;
use csfkit::certify::y2::y2_memberships;
use csfkit::combinatorics::{
    enumerate_all, enumerate_no_ones, enumerate_path_support, underlying_partition, w_prime, w_weight,
};
use csfkit::csf::{csf_oracle, verify_triple_deletion};
use csfkit::{CompExpansion, Composition, ESym, Graph, Partition};

fn composition() -> impl Strategy<Value = Composition> {
    prop::collection::vec(1u32..=14, 0..7).prop_map(|p| Composition::new(p).unwrap())
}

fn comp_expansion(degree: usize) -> impl Strategy<Value = CompExpansion> {
    let keys = enumerate_all(degree);
    prop::collection::vec((0..keys.len(), -9i64..=9, 1i64..=4), 0..6).prop_map(move |terms| {
        let terms = terms.into_iter().map(|(i, n, d)| (keys[i].clone(), ratio(n, d)));
        CompExpansion::from_terms(degree, terms).unwrap()
    })
}

fn esym(degree: usize) -> impl Strategy<Value = ESym> {
    comp_expansion(degree).prop_map(|c| c.project())
}

fn graph(max_vertices: usize, density: f64) -> impl Strategy<Value = Graph> {
    (1..=max_vertices).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        prop::collection::vec(prop::bool::weighted(density), pairs.len()).prop_map(move |keep| {
            let edges = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| *e);
            Graph::new(n, edges).unwrap()
        })
    })
}

fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let shift = g.vertex_count();
    let edges = g.edges().chain(h.edges().map(|(u, v)| (u + shift, v + shift)));
    Graph::new(shift + h.vertex_count(), edges).unwrap()
}

#[test]
fn enumeration_invariants() {
    for n in 0..=14 {
        let all = enumerate_all(n);
        assert_eq!(all.len(), if n == 0 { 1 } else { 1 << (n - 1) });
        let distinct: BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|c| c.size() == n));
        assert!(all.windows(2).all(|w| w[0] < w[1]));

        let no_ones = enumerate_no_ones(n);
        let filtered: Vec<_> = all.iter().filter(|c| c.has_no_ones()).cloned().collect();
        assert_eq!(no_ones, filtered);

        let support = enumerate_path_support(n);
        let filtered: Vec<_> = all.iter().filter(|c| w_weight(c) != 0).cloned().collect();
        assert_eq!(support.len(), filtered.len(), "n = {n}");
    }
}

proptest! {
    #[test]
    fn composition_text_round_trip(c in composition()) {
        let back: Composition = c.to_string().parse().unwrap();
        prop_assert_eq!(&back, &c);
        let p = underlying_partition(&c);
        prop_assert_eq!(p.size(), c.size());
        prop_assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
        let back: Partition = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn weight_factors_through_first_part(c in composition()) {
        prop_assume!(!c.is_empty());
        let first = c.first().unwrap() as u64;
        prop_assert_eq!(w_weight(&c), first * w_prime(&c).unwrap());
    }

    #[test]
    fn esym_json_round_trip(x in esym(6)) {
        let back = ESym::from_json(&x.to_json()).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(back.to_json(), x.to_json());
    }

    #[test]
    fn projection_is_multiplicative(a in comp_expansion(4), b in comp_expansion(3)) {
        prop_assert_eq!(a.mul(&b).project(), a.project().mul(&b.project()));
        prop_assert_eq!(a.add(&a).unwrap().project(), a.project().scale(&ratio(2, 1)));
    }

    #[test]
    fn edge_list_round_trip(g in graph(9, 0.4)) {
        let back = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn disjoint_union_multiplies(g in graph(5, 0.5), h in graph(4, 0.5)) {
        let joined = csf_oracle(&disjoint_union(&g, &h)).unwrap();
        let product = csf_oracle(&g).unwrap().mul(&csf_oracle(&h).unwrap());
        prop_assert_eq!(joined, product);
    }

    #[test]
    fn triple_deletion_under_relabeling(g in graph(7, 0.3), seed in 0usize..1000) {
        let n = g.vertex_count();
        let stable: Vec<[usize; 3]> = (0..n)
            .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [a, b, c])))
            .filter(|t| g.is_stable(t))
            .collect();
        prop_assume!(!stable.is_empty());
        let [a, b, c] = stable[seed % stable.len()];
        for (t1, t2, t3) in [(a, b, c), (b, c, a), (c, a, b), (b, a, c)] {
            prop_assert!(verify_triple_deletion(&g, t1, t2, t3).unwrap());
        }
    }

    #[test]
    fn y2_sets_are_disjoint(b in 1usize..=6, pick in any::<prop::sample::Index>()) {
        let all = enumerate_no_ones(2 * b + 5);
        let k = pick.get(&all);
        prop_assert_eq!(y2_memberships(k, b).len(), 1, "{} at b = {}", k, b);
    }
}
