//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test -p treebdy-core --test acceptance -- --nocapture`.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use treebdy_core::coeff::CoefficientGroup;
use treebdy_core::distributions::{
    check_diagram, check_prop_k, enumerate_invariant, from_cycle, to_cycle, validate,
    Distribution,
};
use treebdy_core::generators::{self, SplitMix64};
use treebdy_core::graph::Graph;
use treebdy_core::homology::{h1_basis_z, h1_elements, Chain};
use treebdy_core::linalg::{integer_kernel_basis, kernel_mod, smith_normal_form, Matrix};
use treebdy_core::tree::{expand, DEFAULT_NODE_CAP};
use treebdy_core::{Int, IntMatrix};

fn conclude(criterion: usize, name: &str, pass: bool, elapsed: Duration, budget: Option<Duration>) {
    let within = budget.map_or(true, |b| elapsed <= b);
    let verdict = if pass && within { "PASS" } else { "FAIL" };
    println!(
        "ACCEPTANCE {criterion} ({name}): {verdict} [{elapsed:.2?}{}]",
        budget.map_or(String::new(), |b| format!(" / budget {b:.2?}"))
    );
    assert!(pass, "criterion {criterion} ({name}) failed");
    assert!(within, "criterion {criterion} ({name}) exceeded its runtime budget: {elapsed:.2?}");
}

fn groups() -> Vec<CoefficientGroup> {
    ["Z/2", "Z/3", "Z/4", "Z/2+Z/2"].iter().map(|s| s.parse().unwrap()).collect()
}

fn corpus() -> Vec<Graph> {
    generators::connected_multigraphs(4, 6)
}

fn expected_count(g: &Graph, m: &CoefficientGroup) -> u128 {
    let rank = (1 - g.euler_characteristic()) as u32;
    m.order().unwrap().pow(rank)
}

/// Criterion 1: the worked example on the theta graph, exactly.
#[test]
fn criterion_1_paper_worked_example() {
    let start = Instant::now();
    let g = generators::theta();
    let z = CoefficientGroup::integers();
    let alpha =
        Chain::from_named(&g, &z, &[("a".into(), 1), ("b".into(), 2), ("c".into(), -3)]).unwrap();
    let d = from_cycle(&g, &alpha).unwrap();
    let mut pass = d.sigma().is_zero();
    for (name, value) in
        [("a", 1), ("b", 2), ("c", -3), ("a~", -1), ("b~", -2), ("c~", 3)]
    {
        let e = g.edge_by_name(name).unwrap();
        pass &= d.lambda(e) == &z.from_int(value);
    }
    pass &= validate(&g, &d).all_pass();
    conclude(1, "paper worked example", pass, start.elapsed(), Some(Duration::from_secs(1)));
}

/// Criterion 2: the cycle <-> mass-zero-distribution bijection over the full
/// corpus and all four coefficient groups, with exact counts.
#[test]
fn criterion_2_theorem_bijection_sweep() {
    let start = Instant::now();
    let corpus = corpus();
    let groups = groups();
    let mut pass = true;
    let mut pairs = 0usize;
    'outer: for g in &corpus {
        for m in &groups {
            pairs += 1;
            let cycles = h1_elements(g, m).unwrap();
            let dists = enumerate_invariant(g, m, true).unwrap();
            let expected = expected_count(g, m);
            if cycles.len() as u128 != expected || dists.len() as u128 != expected {
                eprintln!(
                    "count mismatch on {} over {m}: cycles {}, dists {}, expected {expected}",
                    g.to_canonical_text(),
                    cycles.len(),
                    dists.len()
                );
                pass = false;
                break 'outer;
            }
            let dist_set: BTreeSet<Distribution> = dists.into_iter().collect();
            let image_set: BTreeSet<Distribution> =
                cycles.iter().map(|a| from_cycle(g, a).unwrap()).collect();
            // injective (set size), lands in and exhausts the enumeration
            if image_set.len() != cycles.len() || image_set != dist_set {
                eprintln!("bijection failure on {} over {m}", g.to_canonical_text());
                pass = false;
                break 'outer;
            }
            let cycle_set: BTreeSet<Chain> = cycles.into_iter().collect();
            for d in &dist_set {
                let alpha = to_cycle(g, d).unwrap();
                if !cycle_set.contains(&alpha) || &from_cycle(g, &alpha).unwrap() != d {
                    eprintln!("round-trip failure on {} over {m}", g.to_canonical_text());
                    pass = false;
                    break 'outer;
                }
            }
        }
    }
    println!("  criterion 2 swept {} (graph, group) pairs over {} graphs", pairs, corpus.len());
    conclude(2, "theorem bijection sweep", pass, start.elapsed(), Some(Duration::from_secs(60)));
}

/// Criterion 3: the commuting square holds as an exact integer matrix
/// identity on the corpus plus 100 random graphs.
#[test]
fn criterion_3_diagram_identity() {
    let start = Instant::now();
    let mut pass = corpus().iter().all(check_diagram);
    let mut rng = SplitMix64(0x5eed_0003);
    for _ in 0..100 {
        let g = generators::random_connected_graph(&mut rng, 6, 8);
        if !check_diagram(&g) {
            eprintln!("diagram fails on {}", g.to_canonical_text());
            pass = false;
        }
    }
    conclude(3, "commuting diagram", pass, start.elapsed(), None);
}

/// Criterion 4: total-mass statement both ways — no chi-torsion forces
/// sigma = 0 across the corpus, and the uniform labeling on K6 over Z/3 is a
/// nonzero-mass invariant distribution with sigma = 2.
#[test]
fn criterion_4_total_mass_both_ways() {
    let start = Instant::now();
    let mut pass = true;

    // (a) across the corpus, whenever M lacks chi(G)-torsion
    let mut checked = 0usize;
    'outer: for g in &corpus() {
        for m in &groups() {
            if m.has_k_torsion(g.euler_characteristic()) {
                continue;
            }
            checked += 1;
            let all = enumerate_invariant(g, m, false).unwrap();
            if !all.iter().all(Distribution::is_mass_zero) {
                eprintln!(
                    "nonzero total mass without chi-torsion on {} over {m}",
                    g.to_canonical_text()
                );
                pass = false;
                break 'outer;
            }
        }
    }
    println!("  criterion 4a: {checked} torsion-free (graph, group) pairs, all mass zero");

    // (b) the counterexample family: K6 (q = 4), M = Z/(q-1), lambda = 1
    let k6 = generators::complete(6);
    let z3: CoefficientGroup = "Z/3".parse().unwrap();
    let uniform = Distribution::new(
        &k6,
        z3.clone(),
        vec![z3.from_int(1); k6.edge_count()],
        z3.from_int(2),
    )
    .unwrap();
    let report = validate(&k6, &uniform);
    pass &= report.all_pass() && report.sigma_consistent;
    pass &= uniform.sigma() == &z3.from_int(2) && !uniform.is_mass_zero();
    pass &= z3.has_k_torsion(k6.euler_characteristic()); // chi = -9

    conclude(4, "total mass both ways", pass, start.elapsed(), None);
}

/// Criterion 5: ker(T − I) has rank 1 − chi and equals span{alpha − alpha~}
/// on every corpus graph with min degree >= 3, plus the named graphs.
#[test]
fn criterion_5_kernel_comparison() {
    let start = Instant::now();
    let mut graphs: Vec<Graph> = corpus().into_iter().filter(|g| g.min_degree() >= 3).collect();
    graphs.push(generators::theta());
    graphs.push(generators::complete(4));
    graphs.push(generators::complete(6));
    graphs.push(generators::complete_bipartite(3, 3));
    let mut pass = true;
    for g in &graphs {
        let r = check_prop_k(g);
        let expected_rank = (1 - g.euler_characteristic()) as usize;
        if !(r.hypothesis_met
            && r.isomorphism()
            && r.kernel_rank == expected_rank
            && r.h1_rank == expected_rank)
        {
            eprintln!("kernel comparison fails on {}: {r:?}", g.to_canonical_text());
            pass = false;
        }
    }
    println!("  criterion 5 checked {} graphs with min degree >= 3", graphs.len());
    conclude(5, "ker(T - I) comparison", pass, start.elapsed(), Some(Duration::from_secs(30)));
}

/// Criterion 6: depth-6 slices satisfy the cone additivity relations exactly
/// for 20 (graph, random cycle) pairs, and single-entry mutations are caught.
#[test]
fn criterion_6_cover_additivity() {
    let start = Instant::now();
    let pool = [
        generators::theta(),
        generators::complete(4),
        generators::complete_bipartite(3, 3),
        generators::bouquet(2),
        generators::bouquet(3),
        generators::cycle(3),
        generators::cycle(5),
    ];
    let z = CoefficientGroup::integers();
    let mut rng = SplitMix64(0x5eed_0006);
    let mut pass = true;
    for i in 0..20 {
        let g = &pool[i % pool.len()];
        let basis = h1_basis_z(g);
        // random small cycle, not identically zero
        let mut alpha = Chain::zero(g, z.clone(), treebdy_core::Support::PosEdges);
        loop {
            for b in &basis {
                let k = rng.range_i64(-3, 3);
                let coeffs = b.coeffs().iter().map(|c| z.int_scale(k, c)).collect::<Vec<_>>();
                alpha = alpha.add(&Chain::new(z.clone(), treebdy_core::Support::PosEdges, coeffs));
            }
            if !alpha.is_zero() {
                break;
            }
        }
        let dist = from_cycle(g, &alpha).unwrap();
        let slice = expand(g, 0, 6, DEFAULT_NODE_CAP).unwrap();
        let report = slice.check_additivity(g, &dist);
        if !report.all_pass() {
            eprintln!("additivity fails on {}: {report:?}", g.to_canonical_text());
            pass = false;
            continue;
        }
        // sensitivity: one flipped label must be detected from a slice based
        // at the mutated edge's origin
        let target = rng.below(g.edge_count() as u64) as usize;
        let e = treebdy_core::EdgeId(target);
        let mut lambda = dist.lambda_all().to_vec();
        lambda[target] = z.add(&lambda[target], &z.from_int(1));
        let mutated = Distribution::new(g, z.clone(), lambda, dist.sigma().clone()).unwrap();
        let slice = expand(g, g.origin(e), 6, DEFAULT_NODE_CAP).unwrap();
        if slice.check_additivity(g, &mutated).all_pass() {
            eprintln!(
                "mutation of {} not detected on {}",
                g.edge_name(e),
                g.to_canonical_text()
            );
            pass = false;
        }
    }
    conclude(6, "cover additivity", pass, start.elapsed(), Some(Duration::from_secs(30)));
}

/// Criterion 7: Smith normal form property sweep plus kernel_mod against
/// brute force over every matrix shape up to 3x4 with entries in [-2, 2].
#[test]
fn criterion_7_exact_linalg_properties() {
    let start = Instant::now();
    let mut pass = true;

    // 200 random matrices: u*a*v = d, unimodularity, divisibility chain,
    // kernel vectors annihilated.
    let mut rng = SplitMix64(0x5eed_0007);
    for _ in 0..200 {
        let rows = 1 + rng.below(8) as usize;
        let cols = 1 + rng.below(8) as usize;
        let a = common::random_matrix(&mut rng, rows, cols, -20, 20);
        let r = smith_normal_form(&a);
        pass &= r.u.mul(&a).mul(&r.v) == r.d;
        pass &= r.u.det().abs() == Int::from(1);
        pass &= r.v.det().abs() == Int::from(1);
        pass &= r.d.is_diagonal();
        let factors = r.invariant_factors();
        for w in factors.windows(2) {
            pass &= (&w[1] % &w[0]).is_zero();
        }
        for v in integer_kernel_basis(&a) {
            pass &= a.mul_vec(&v).iter().all(num_traits::Zero::is_zero);
        }
        if !pass {
            eprintln!("SNF property failure on {a:?}");
            break;
        }
    }

    // kernel_mod == brute force for every matrix with entries in [-2, 2] and
    // every shape (rows <= 3, cols <= 4), n in {2, 3}. Both sides depend only
    // on the matrix mod n, so the sweep enumerates every residue pattern and
    // tests it through an in-range lift; shapes with few enough entries are
    // additionally swept over every literal [-2, 2] matrix.
    'residues: for n in [2u64, 3] {
        for rows in 1..=3usize {
            for cols in 1..=4usize {
                let cells = rows * cols;
                let mut pattern = vec![0u64; cells];
                loop {
                    let a: Matrix<i64> = Matrix::from_fn(rows, cols, |i, j| {
                        pattern[i * cols + j] as i64
                    });
                    let gens = kernel_mod(&a, n).unwrap();
                    let got = common::span_mod(&gens, cols, n);
                    if got != common::brute_kernel_mod(&a, n) {
                        eprintln!("kernel_mod mismatch, n={n}, a={a:?}");
                        pass = false;
                        break 'residues;
                    }
                    let mut i = cells;
                    loop {
                        if i == 0 {
                            break;
                        }
                        i -= 1;
                        pattern[i] += 1;
                        if pattern[i] < n {
                            break;
                        }
                        pattern[i] = 0;
                    }
                    if pattern.iter().all(|&x| x == 0) {
                        break;
                    }
                }
            }
        }
    }

    // full [-2, 2] sweep where it is cheap (shapes with at most 6 entries):
    // exercises every literal lift, including negative entries.
    'lifts: for rows in 1..=3usize {
        for cols in 1..=2usize {
            let cells = rows * cols;
            let mut entry = vec![-2i64; cells];
            loop {
                let a: Matrix<i64> =
                    Matrix::from_fn(rows, cols, |i, j| entry[i * cols + j]);
                for n in [2u64, 3] {
                    let gens = kernel_mod(&a, n).unwrap();
                    if common::span_mod(&gens, cols, n) != common::brute_kernel_mod(&a, n) {
                        eprintln!("kernel_mod lift mismatch, n={n}, a={a:?}");
                        pass = false;
                        break 'lifts;
                    }
                }
                let mut i = cells;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    entry[i] += 1;
                    if entry[i] <= 2 {
                        break;
                    }
                    entry[i] = -2;
                }
                if entry.iter().all(|&x| x == -2) {
                    break;
                }
            }
        }
    }

    // and the same agreement through the BigInt alias on a smaller shape
    for code in 0..5i64.pow(4) {
        let mut c = code;
        let a = IntMatrix::from_fn(2, 2, |_, _| {
            let e = c % 5 - 2;
            c /= 5;
            Int::from(e)
        });
        for n in [2u64, 3] {
            let gens = kernel_mod(&a, n).unwrap();
            pass &= common::span_mod(&gens, 2, n) == common::brute_kernel_mod(&a, n);
        }
    }

    conclude(7, "exact linear algebra properties", pass, start.elapsed(), None);
}
