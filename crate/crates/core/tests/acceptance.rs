//! Acceptance suite: one pass/fail line per criterion, with timings.
//!
//! All comparisons are exact over the rationals (tolerance zero). Each
//! criterion also carries a wall-clock limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use csfkit::algebra::ESym;
use csfkit::certify::{
    certify_y0, certify_y0_with, certify_y1, certify_y1_with, certify_y2, certify_y2_with, Mutation,
};
use csfkit::combinatorics::{enumerate_no_ones, Partition};
use csfkit::csf::{csf_oracle, csf_path, csf_spider_abc, csf_trinacria, verify_triple_deletion};
use csfkit::decomposition::{compute_y0, compute_y0_four_sum, reconstruct};
use csfkit::graph::Graph;

/// Exact equality; no numeric slack anywhere in this suite.
const TOLERANCE: i64 = 0;
const RANDOM_GRAPHS: usize = 30;
const SEED: u64 = 0x7a1c_2b5e;

type Check = fn() -> Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: Check,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn path_formula_vs_oracle() -> Result<String, String> {
    for n in 1..=12 {
        let formula = csf_path(n).project();
        let oracle = csf_oracle(&Graph::path(n)).map_err(err)?;
        ensure(formula == oracle, || format!("P_{n}: formula and oracle differ"))?;
    }
    let p2 = csf_path(2).project().to_table(None);
    let p3 = csf_path(3).project().to_table(None);
    ensure(p2 == "2 e[2]", || format!("X_P2 printed as {p2:?}"))?;
    ensure(p3 == "3 e[3] + 1 e[2,1]", || format!("X_P3 printed as {p3:?}"))?;
    Ok("n = 1..12 agree; X_P2, X_P3 byte-match".into())
}

fn random_graph(rng: &mut StdRng) -> Graph {
    loop {
        let n = rng.gen_range(3..=8);
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.3) {
                    g.add_edge(u, v).expect("valid edge");
                }
            }
        }
        // Three triangle edges are added on top; keep the oracle cheap.
        if g.edge_count() <= 12 {
            return g;
        }
    }
}

fn triple_deletion() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut triples = 0;
    let mut graphs = 0;
    while graphs < RANDOM_GRAPHS {
        let g = random_graph(&mut rng);
        let n = g.vertex_count();
        let mut found = false;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if !g.is_stable(&[a, b, c]) {
                        continue;
                    }
                    found = true;
                    for (t1, t2, t3) in [(a, b, c), (b, c, a), (c, a, b)] {
                        let ok = verify_triple_deletion(&g, t1, t2, t3).map_err(err)?;
                        ensure(ok, || {
                            format!("fails on {:?} with ({t1}, {t2}, {t3})", g.to_edge_list())
                        })?;
                        triples += 1;
                    }
                }
            }
        }
        if found {
            graphs += 1;
        }
    }
    Ok(format!("{graphs} graphs, {triples} labeled triples"))
}

fn spider_and_trinacria() -> Result<String, String> {
    let mut cases = 0;
    for a in 1..=4 {
        for b in 1..=a {
            for c in 1..=b {
                let legs = Partition::new(vec![a as u32, b as u32, c as u32]).map_err(err)?;
                let spider = csf_spider_abc(a, b, c).map_err(err)?;
                let spider_oracle = csf_oracle(&Graph::spider(&legs)).map_err(err)?;
                ensure(spider == spider_oracle, || format!("spider ({a},{b},{c}) differs"))?;
                let tri = csf_trinacria(a, b, c).map_err(err)?;
                let tri_oracle = csf_oracle(&Graph::trinacria(a, b, c)).map_err(err)?;
                ensure(tri == tri_oracle, || format!("trinacria ({a},{b},{c}) differs"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} leg triples, spider and trinacria"))
}

fn reconstruction() -> Result<String, String> {
    for b in 1..=10 {
        let y = reconstruct(b).map_err(err)?;
        let formula = csf_trinacria(b + 2, b, 2).map_err(err)?;
        ensure(y == formula, || format!("b = {b}: reconstruction differs from formula"))?;
        if b <= 5 {
            let oracle = csf_oracle(&Graph::trinacria(b + 2, b, 2)).map_err(err)?;
            ensure(y == oracle, || format!("b = {b}: reconstruction differs from oracle"))?;
        }
    }
    Ok("oracle b = 1..5, formula b = 1..10".into())
}

fn certificates() -> Result<String, String> {
    for b in 1..=10 {
        let reports = [
            certify_y2(b).map_err(err)?,
            certify_y1(b).map_err(err)?,
            certify_y0(b).map_err(err)?,
        ];
        for r in &reports {
            ensure(r.verified, || r.to_table())?;
        }
    }
    Ok("Y2, Y1, Y0 verified for b = 1..10".into())
}

fn theorem() -> Result<String, String> {
    for b in 1..=10 {
        let x = csf_trinacria(b + 2, b, 2).map_err(err)?;
        let verdict = x.is_e_positive();
        ensure(verdict.positive, || {
            format!("b = {b}: negative at {:?}", verdict.witness)
        })?;
    }
    Ok("X_T(b+2,b,2) e-positive for b = 1..10".into())
}

fn sharpness() -> Result<String, String> {
    let mut out = Vec::new();
    for (a, b, c) in [(1, 1, 1), (2, 2, 2), (3, 3, 2), (3, 2, 2)] {
        let x: ESym = csf_oracle(&Graph::trinacria(a, b, c)).map_err(err)?;
        let verdict = x.is_e_positive();
        let Some((p, coeff)) = verdict.witness else {
            return Err(format!("T_{a}{b}{c} is e-positive"));
        };
        ensure(x == csf_trinacria(a, b, c).map_err(err)?, || {
            format!("T_{a}{b}{c}: formula differs")
        })?;
        out.push(format!("T{a}{b}{c}: e{p} = {coeff}"));
    }
    Ok(out.join("; "))
}

fn structure() -> Result<String, String> {
    let sizes: Vec<usize> = (0..=25).map(|n| enumerate_no_ones(n).len()).collect();
    ensure(sizes[0] == 1 && sizes[1] == 0, || "W_0, W_1 sizes wrong".into())?;
    for n in 2..=25 {
        ensure(sizes[n] == sizes[n - 1] + sizes[n - 2], || {
            format!("|W_{n}| = {}", sizes[n])
        })?;
    }
    for b in 1..=10 {
        let y0 = compute_y0(b).map_err(err)?;
        ensure(y0.is_integral(), || format!("b = {b}: Y0 not integral"))?;
        if b <= 8 {
            ensure(y0 == compute_y0_four_sum(b).map_err(err)?, || {
                format!("b = {b}: Y0 forms differ")
            })?;
        }
    }
    Ok(format!(
        "|W_25| = {}; Y0 integral b <= 10; Y0 forms agree b <= 8",
        sizes[25]
    ))
}

fn negative_controls() -> Result<String, String> {
    for b in 1..=6 {
        let r = certify_y2_with(b, Mutation::DropLeadingTwoBonus).map_err(err)?;
        ensure(!r.verified, || format!("Y2 mutant passes at b = {b}"))?;
        let r = certify_y1_with(b + 1, Mutation::DropY12).map_err(err)?;
        ensure(!r.verified, || format!("Y1 mutant passes at b = {}", b + 1))?;
    }
    // The D3 mutant only bites where D3 is nonempty (|Q| = b - 3 needs b != 4).
    let mut bitten = Vec::new();
    for b in 3..=8 {
        let r = certify_y0_with(b, Mutation::SkipD3Donor).map_err(err)?;
        let d3 = r
            .step("prop-f-sign")
            .and_then(|s| s.stats.get("D3"))
            .and_then(|v| v.as_u64())
            .unwrap_or(0);
        ensure((d3 > 0) == !r.verified, || {
            format!("Y0 mutant at b = {b}: D3 = {d3}, verified = {}", r.verified)
        })?;
        if d3 > 0 {
            bitten.push(b);
        }
    }
    ensure(!bitten.is_empty(), || "Y0 mutant never applies".into())?;
    Ok(format!("Y2, Y1 mutants rejected; Y0 mutant rejected at b = {bitten:?}"))
}

fn main() -> ExitCode {
    assert_eq!(TOLERANCE, 0);
    let criteria = [
        Criterion {
            id: 1,
            name: "path formula vs oracle",
            limit: Duration::from_secs(10),
            run: path_formula_vs_oracle,
        },
        Criterion {
            id: 2,
            name: "triple deletion",
            limit: Duration::from_secs(60),
            run: triple_deletion,
        },
        Criterion {
            id: 3,
            name: "spider and trinacria formulas",
            limit: Duration::from_secs(120),
            run: spider_and_trinacria,
        },
        Criterion {
            id: 4,
            name: "reconstruction",
            limit: Duration::from_secs(120),
            run: reconstruction,
        },
        Criterion {
            id: 5,
            name: "certificates",
            limit: Duration::from_secs(300),
            run: certificates,
        },
        Criterion {
            id: 6,
            name: "e-positivity b = 1..10",
            limit: Duration::from_secs(60),
            run: theorem,
        },
        Criterion {
            id: 7,
            name: "sharpness witnesses",
            limit: Duration::from_secs(60),
            run: sharpness,
        },
        Criterion {
            id: 8,
            name: "structural properties",
            limit: Duration::from_secs(120),
            run: structure,
        },
        Criterion {
            id: 9,
            name: "negative controls",
            limit: Duration::from_secs(120),
            run: negative_controls,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => Err(format!("{detail}; took {elapsed:.2?}, limit {:?}", c.limit)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {} ({elapsed:.2?}) {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {} ({elapsed:.2?}) {why}", c.id, c.name);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
