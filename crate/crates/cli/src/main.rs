//! `treebdy`: first homology of finite connected graphs and invariant
//! distributions on the boundary of the universal covering tree.
//!
//! Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 usage or
//! input error.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use treebdy_core::coeff::CoefficientGroup;
use treebdy_core::distributions::{
    check_diagram, check_prop_k, check_prop_l3, enumerate_invariant, from_cycle, ker_t_minus_i,
    validate, Distribution, L3Outcome,
};
use treebdy_core::graph::Graph;
use treebdy_core::homology::{
    h1_basis_z, h1_element_count, h1_elements, h1_group, reduce_chain, Chain,
};
use treebdy_core::tree::expand;

use render::{chain_map, element_json, group_json, lambda_map, vector_map};

#[derive(Parser)]
#[command(name = "treebdy", version, about = "Graph homology and boundary distributions on the universal covering tree", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Graph file (see README for the format)
    graph: PathBuf,
    /// Emit a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// First homology: rank, structure over the coefficient group, basis cycles
    Homology {
        #[command(flatten)]
        common: CommonArgs,
        /// Coefficient group (Z, Z^r, Z/n, or sums like Z/2+Z/4)
        #[arg(long, default_value = "Z")]
        group: String,
    },
    /// Check the cycle/distribution bijection, the commuting diagram, the
    /// total-mass statement, and cone additivity on a covering-tree slice
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Finite coefficient group (enumeration-based checks)
        #[arg(long)]
        group: String,
        /// Depth of the covering-tree slice
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Base vertex for the slice (default: first vertex of the file)
        #[arg(long)]
        base: Option<String>,
        /// Node cap for the slice
        #[arg(long, default_value_t = treebdy_core::tree::DEFAULT_NODE_CAP)]
        cap: usize,
        /// Write the slice in DOT format, cone masses from the first integer
        /// basis cycle
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// ker(T - I) of the transfer operator and its comparison with H1(G, Z)
    Ktheory {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Construct, validate, and enumerate invariant distributions
    Distributions {
        #[command(flatten)]
        common: CommonArgs,
        /// Coefficient group
        #[arg(long, default_value = "Z")]
        group: String,
        /// Build the distribution of this cycle, e.g. "a+2b-3c"
        #[arg(long)]
        cycle: Option<String>,
        /// Enumerate all invariant distributions (finite groups)
        #[arg(long)]
        enumerate: bool,
        /// Restrict enumeration to total mass zero
        #[arg(long)]
        mass_zero: bool,
    },
}

enum Failure {
    /// Usage or input problem: exit 2.
    Input(String),
    /// A mathematical check failed: exit 1.
    Check(String),
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Homology { common, group } => cmd_homology(&common, &group),
        Command::Verify { common, group, depth, base, cap, dot } => {
            cmd_verify(&common, &group, depth, base.as_deref(), cap, dot.as_deref())
        }
        Command::Ktheory { common } => cmd_ktheory(&common),
        Command::Distributions { common, group, cycle, enumerate, mass_zero } => {
            cmd_distributions(&common, &group, cycle.as_deref(), enumerate, mass_zero)
        }
    }
}

fn load_graph(path: &PathBuf) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Graph::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_group(spec: &str) -> Result<CoefficientGroup, Failure> {
    spec.parse().map_err(input)
}

fn cmd_homology(common: &CommonArgs, group: &str) -> Result<(), Failure> {
    let g = load_graph(&common.graph)?;
    let m = parse_group(group)?;
    let basis = h1_basis_z(&g);
    let h1 = h1_group(&g, &m);
    let count = h1_element_count(&g, &m).ok();
    let generators: Vec<Chain> = basis.iter().map(|b| reduce_chain(b, &m)).collect();

    if common.json {
        let report = json!({
            "schema": 1,
            "command": "homology",
            "graph": g.to_json(),
            "group": group_json(&m),
            "h1": {
                "rank_z": basis.len(),
                "group": group_json(&h1),
                "element_count": count.as_ref().map(|c| element_json(&CoefficientGroup::integers().element(vec![c.clone()], vec![]))),
                "basis": basis.iter().map(|b| chain_map(&g, b)).collect::<Vec<_>>(),
                "generators": generators.iter().map(|c| chain_map(&g, c)).collect::<Vec<_>>(),
            },
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("graph: {g}");
        println!("coefficients: {m}");
        println!("H1 rank over Z: {}", basis.len());
        println!("H1(G, M) = {h1}");
        if let Some(c) = &count {
            println!("element count: {c}");
        }
        println!("basis cycles:");
        for (i, b) in basis.iter().enumerate() {
            println!("  z{} = {}", i + 1, b.display_with(&g));
        }
        if m != CoefficientGroup::integers() && !basis.is_empty() {
            println!("generators over {m}:");
            for (i, c) in generators.iter().enumerate() {
                println!("  g{} = {}", i + 1, c.display_with(&g));
            }
        }
    }
    Ok(())
}

struct CheckLine {
    name: &'static str,
    pass: bool,
    detail: String,
    json: serde_json::Value,
}

fn cmd_verify(
    common: &CommonArgs,
    group: &str,
    depth: usize,
    base: Option<&str>,
    cap: usize,
    dot: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let g = load_graph(&common.graph)?;
    let m = parse_group(group)?;
    if !m.is_finite() {
        return Err(Failure::Input(format!(
            "verify enumerates distributions and needs a finite group; {m} is infinite"
        )));
    }
    let base_vertex = match base {
        Some(name) => g
            .vertex_index(name)
            .ok_or_else(|| Failure::Input(format!("unknown base vertex `{name}`")))?,
        None => 0,
    };

    let mut checks: Vec<CheckLine> = Vec::new();

    // 1. cycle <-> mass-zero distribution bijection, with exact counts
    let cycles = h1_elements(&g, &m).map_err(input)?;
    let mass_zero = enumerate_invariant(&g, &m, true).map_err(input)?;
    let expected = h1_element_count(&g, &m).map_err(input)?;
    let counts_ok =
        expected == cycles.len().into() && expected == mass_zero.len().into();
    let images: std::collections::BTreeSet<Distribution> =
        cycles.iter().map(|a| from_cycle(&g, a).expect("enumerated chains are cycles")).collect();
    let dist_set: std::collections::BTreeSet<Distribution> = mass_zero.iter().cloned().collect();
    let bijection_ok = images.len() == cycles.len() && images == dist_set;
    let roundtrip_ok = mass_zero.iter().all(|d| {
        treebdy_core::distributions::to_cycle(&g, d)
            .map(|a| from_cycle(&g, &a).as_ref() == Ok(d))
            .unwrap_or(false)
    });
    checks.push(CheckLine {
        name: "theorem1-bijection",
        pass: counts_ok && bijection_ok && roundtrip_ok,
        detail: format!(
            "{} cycles <-> {} mass-zero distributions (expected {expected})",
            cycles.len(),
            mass_zero.len()
        ),
        json: json!({
            "cycles": cycles.len(),
            "mass_zero_distributions": mass_zero.len(),
            "expected": expected.to_string(),
            "injective_and_onto": bijection_ok,
            "round_trip": roundtrip_ok,
        }),
    });

    // 2. the commuting square behind well-definedness
    let diagram = check_diagram(&g);
    checks.push(CheckLine {
        name: "diagram-commutes",
        pass: diagram,
        detail: "(I - T*) . phi1 = bar . phi0 . boundary".into(),
        json: json!({ "identity": "(I - T*) . phi1 = bar . phi0 . boundary", "holds": diagram }),
    });

    // 3. total mass: chi-torsion controls sigma != 0
    let l3 = check_prop_l3(&g, &m).map_err(input)?;
    let (l3_detail, l3_json) = match &l3.outcome {
        L3Outcome::Enumerated { total, mass_zero, witness } => {
            let detail = match witness {
                Some(w) => format!(
                    "chi = {}, {} of {} invariant labelings have sigma = 0; witness sigma = {}",
                    l3.chi,
                    mass_zero,
                    total,
                    w.sigma()
                ),
                None => format!(
                    "chi = {}, all {} invariant labelings have sigma = 0",
                    l3.chi, total
                ),
            };
            let wjson = witness.as_ref().map(|w| {
                json!({ "sigma": element_json(w.sigma()), "lambda": lambda_map(&g, w) })
            });
            (
                detail,
                json!({
                    "chi": l3.chi,
                    "has_chi_torsion": l3.has_chi_torsion,
                    "total": total,
                    "mass_zero": mass_zero,
                    "witness": wjson,
                }),
            )
        }
        L3Outcome::Symbolic { mass_zero_forced } => (
            format!("chi = {}, symbolic: mass zero forced = {mass_zero_forced}", l3.chi),
            json!({ "chi": l3.chi, "has_chi_torsion": l3.has_chi_torsion, "mass_zero_forced": mass_zero_forced }),
        ),
    };
    checks.push(CheckLine { name: "total-mass", pass: !l3.violated(), detail: l3_detail, json: l3_json });

    // 4. cone additivity on the covering-tree slice, for every enumerated
    //    invariant labeling
    let slice = expand(&g, base_vertex, depth, cap).map_err(input)?;
    let all_dists = enumerate_invariant(&g, &m, false).map_err(input)?;
    let mut additivity_failures = 0usize;
    let mut first_failure = None;
    for (i, d) in all_dists.iter().enumerate() {
        let report = slice.check_additivity(&g, d);
        if !report.all_pass() {
            additivity_failures += 1;
            if first_failure.is_none() {
                first_failure = Some((i, report));
            }
        }
    }
    checks.push(CheckLine {
        name: "tree-additivity",
        pass: additivity_failures == 0,
        detail: format!(
            "{} distributions x {} nodes (depth {depth}, base {}){}",
            all_dists.len(),
            slice.node_count(),
            g.vertex_name(base_vertex),
            match &first_failure {
                Some((i, r)) => format!(
                    "; first failure at distribution #{i}: {} interior／{} pair failures",
                    r.interior_failures.len(),
                    r.base_pair_failures.len()
                ),
                None => String::new(),
            }
        ),
        json: json!({
            "distributions": all_dists.len(),
            "slice_nodes": slice.node_count(),
            "depth": depth,
            "base": g.vertex_name(base_vertex),
            "failures": additivity_failures,
        }),
    });

    if let Some(path) = dot {
        let basis = h1_basis_z(&g);
        let dist = match basis.first() {
            Some(alpha) => from_cycle(&g, alpha).expect("basis elements are cycles"),
            None => Distribution::zero(&g, &CoefficientGroup::integers()),
        };
        std::fs::write(path, slice.to_dot(&g, Some(&dist)))
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }

    let all_pass = checks.iter().all(|c| c.pass);
    if common.json {
        let report = json!({
            "schema": 1,
            "command": "verify",
            "graph": g.to_json(),
            "group": group_json(&m),
            "depth": depth,
            "base": g.vertex_name(base_vertex),
            "checks": checks.iter().map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.json })).collect::<Vec<_>>(),
            "all_pass": all_pass,
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("graph: {g}");
        println!("coefficients: {m}; slice depth {depth}, base {}", g.vertex_name(base_vertex));
        for c in &checks {
            println!("[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        println!("{}", if all_pass { "all checks passed" } else { "CHECKS FAILED" });
    }
    if all_pass {
        Ok(())
    } else {
        let first = checks.iter().find(|c| !c.pass).expect("some check failed");
        Err(Failure::Check(format!("{}: {}", first.name, first.detail)))
    }
}

fn cmd_ktheory(common: &CommonArgs) -> Result<(), Failure> {
    let g = load_graph(&common.graph)?;
    let report = check_prop_k(&g);
    let basis = ker_t_minus_i(&g);

    if common.json {
        let out = json!({
            "schema": 1,
            "command": "ktheory",
            "graph": g.to_json(),
            "kernel_rank": report.kernel_rank,
            "h1_rank": report.h1_rank,
            "min_degree": report.min_degree,
            "hypothesis_met": report.hypothesis_met,
            "images_in_kernel": report.images_in_kernel,
            "injective": report.injective,
            "subgroup_equal": report.subgroup_equal,
            "isomorphism": report.isomorphism(),
            "basis": basis.iter().map(|v| vector_map(&g, v)).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
    } else {
        println!("graph: {g}");
        println!("ker(T - I) rank: {} (1 - chi = {})", report.kernel_rank, 1 - g.euler_characteristic());
        println!(
            "min degree: {} ({})",
            report.min_degree,
            if report.hypothesis_met { "hypothesis met" } else { "hypothesis NOT met; comparison reported, not asserted" }
        );
        println!("images alpha - alpha~ in kernel: {}", yesno(report.images_in_kernel));
        println!("injective on the cycle basis: {}", yesno(report.injective));
        println!("subgroup equality span = ker(T - I): {}", yesno(report.subgroup_equal));
        println!(
            "isomorphism H1(G, Z) -> ker(T - I): {}",
            if report.isomorphism() { "confirmed" } else { "not confirmed" }
        );
        println!("kernel basis:");
        for (i, v) in basis.iter().enumerate() {
            println!("  k{} = {}", i + 1, render::render_vector(&g, v));
        }
    }

    if report.hypothesis_met && !report.isomorphism() {
        return Err(Failure::Check(
            "min degree >= 3 but H1(G, Z) and ker(T - I) differ".into(),
        ));
    }
    Ok(())
}

fn cmd_distributions(
    common: &CommonArgs,
    group: &str,
    cycle: Option<&str>,
    enumerate: bool,
    mass_zero: bool,
) -> Result<(), Failure> {
    let g = load_graph(&common.graph)?;
    let m = parse_group(group)?;

    if let Some(expr) = cycle {
        if !m.is_coordinate_cyclic() {
            return Err(Failure::Input(format!(
                "--cycle uses integer coefficients, which need a cyclic group (Z or Z/n), not {m}"
            )));
        }
        let terms = render::parse_cycle_expr(expr).map_err(Failure::Input)?;
        let alpha = Chain::from_named(&g, &m, &terms)
            .ok_or_else(|| Failure::Input(format!("cycle `{expr}` names an unknown or reversed edge")))?;
        let dist = from_cycle(&g, &alpha).map_err(input)?;
        let report = validate(&g, &dist);
        if common.json {
            let out = json!({
                "schema": 1,
                "command": "distributions",
                "mode": "construct",
                "graph": g.to_json(),
                "group": group_json(&m),
                "cycle": chain_map(&g, &alpha),
                "lambda": lambda_map(&g, &dist),
                "sigma": element_json(dist.sigma()),
                "validation": {
                    "vertex_relations": report.vertex_ok.iter().all(|&b| b),
                    "edge_pair_relations": report.edge_pair_ok.iter().all(|&b| b),
                    "sigma_consistent": report.sigma_consistent,
                    "pass": report.all_pass(),
                },
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
        } else {
            println!("graph: {g}");
            println!("cycle: {}", alpha.display_with(&g));
            println!("lambda:");
            for e in g.edges() {
                println!("  {} = {}", g.edge_name(e), dist.lambda(e));
            }
            println!("sigma = {}", dist.sigma());
            println!(
                "validation: vertex relations {}, edge pairs {}, sigma consistent {}",
                yesno(report.vertex_ok.iter().all(|&b| b)),
                yesno(report.edge_pair_ok.iter().all(|&b| b)),
                yesno(report.sigma_consistent),
            );
        }
        return Ok(());
    }

    if enumerate {
        let dists = enumerate_invariant(&g, &m, mass_zero).map_err(input)?;
        if common.json {
            let out = json!({
                "schema": 1,
                "command": "distributions",
                "mode": "enumerate",
                "graph": g.to_json(),
                "group": group_json(&m),
                "mass_zero_only": mass_zero,
                "count": dists.len(),
                "distributions": dists.iter().map(|d| json!({
                    "sigma": element_json(d.sigma()),
                    "lambda": lambda_map(&g, d),
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
        } else {
            println!("graph: {g}");
            println!(
                "invariant distributions over {m}{}: {}",
                if mass_zero { " with sigma = 0" } else { "" },
                dists.len()
            );
            for (i, d) in dists.iter().enumerate() {
                let values: Vec<String> = g
                    .edges()
                    .map(|e| format!("{}={}", g.edge_name(e), d.lambda(e)))
                    .collect();
                println!("  #{i}: sigma={} {}", d.sigma(), values.join(" "));
            }
        }
        return Ok(());
    }

    Err(Failure::Input("nothing to do: pass --cycle EXPR or --enumerate".into()))
}

fn yesno(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
