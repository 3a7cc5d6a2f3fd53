//! Command-line interface: boundary complexes, triangulation enumeration,
//! pasting-cell enumeration, simplicial-object generators, and Segal-type
//! checks with deterministic output and exit codes
//! (0 = all checks pass, 1 = a mathematical check failed, 2 = usage error).

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;

use segalis::backends::Field;
use segalis::checker::{
    check_higher_excision, check_triangulation_independence, dk_equivalence_report,
    is_lower_d_segal, is_upper_d_segal, pathspace_report,
};
use segalis::complexes::{boundary_complex, ComplexJson, Side};
use segalis::orientals::{cells, check_omega_axioms, cells_dot, CellJson};
use segalis::simplicial::{
    dold_kan_inverse, nerve_of_category, partial_monoid_object, s_construction, ChainComplex,
    FiniteCategory, PartialMonoid, SimplicialObject, SimplicialObjectJson,
};
use segalis::triangulations::{epsilon_string, flip_graph, stasheff_tamari_poset};

#[derive(Parser)]
#[command(
    name = "segalis",
    about = "Cyclic-polytope combinatorics, pasting cells, and higher Segal checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Guard on the largest vertex label accepted.
    #[arg(long, global = true, default_value_t = 8)]
    max_n: usize,
    /// Guard on the largest dimension accepted.
    #[arg(long, global = true, default_value_t = 4)]
    max_d: usize,
    /// Dimension cutoff for groupoid enumerations.
    #[arg(long, global = true, default_value_t = 1)]
    cutoff: usize,
    /// Seed for seeded constructions (reserved; all output is deterministic).
    #[arg(long, global = true, default_value_t = 0x5ECA11)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Lower,
    Upper,
}

#[derive(Subcommand)]
enum Command {
    /// Print the lower or upper boundary complex of a cyclic polytope.
    Boundary {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = SideArg::Lower)]
        side: SideArg,
    },
    /// Enumerate triangulations of C([n], d) via bistellar flips.
    Triangulations {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// What to emit: count, list, graph (flip graph), or hasse
        /// (Stasheff–Tamari covering relations).
        #[arg(long, default_value = "count")]
        emit: String,
    },
    /// Enumerate pasting cells of the cyclic-polytope ω-category.
    Oriental {
        #[arg(long)]
        n: usize,
        /// Cell dimension to enumerate (omit with --axioms).
        #[arg(long)]
        d: Option<usize>,
        /// Verify the ω-category axioms instead of listing cells.
        #[arg(long)]
        axioms: bool,
    },
    /// Generate simplicial-object fixtures.
    Gen {
        #[command(subcommand)]
        generator: Generator,
    },
    /// Run Segal-type checks on a simplicial object.
    Check(CheckArgs),
}

#[derive(Subcommand)]
enum Generator {
    /// Nerve of a finite category.
    Nerve {
        /// Which category: "z2" (the two-element group) or "arrow" (the
        /// poset 0 < 1).
        #[arg(long, default_value = "z2")]
        kind: String,
        #[arg(long, default_value_t = 4)]
        trunc: usize,
    },
    /// Composable arrays of the disjoint-union partial monoid on subsets of
    /// a k-element set.
    Pmonoid {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        trunc: usize,
    },
    /// Dold–Kan inverse of a chain complex with zero differentials and the
    /// given dimensions (degree 0 first).
    Doldkan {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        trunc: usize,
    },
    /// Waldhausen-style S-construction over 𝔽_p (summary output; groupoid
    /// objects are generated in process, not serialized).
    Sdot {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        trunc: usize,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// Path to a simplicial-object JSON file (FinSet or Vect backend).
    #[arg(long)]
    input: Option<String>,
    /// Check the lower d-Segal condition.
    #[arg(long)]
    lower: Option<usize>,
    /// Check the upper d-Segal condition.
    #[arg(long)]
    upper: Option<usize>,
    /// Check the truncation/horn/chain triple equivalence at level m.
    #[arg(long)]
    dk: Option<usize>,
    /// Check the path-space criteria at the given d.
    #[arg(long)]
    pathspace: Option<usize>,
    /// Check triangulation independence (requires --n and --d).
    #[arg(long)]
    independence: bool,
    /// Check higher excision at the given d.
    #[arg(long)]
    excision: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    match &cli.command {
        Command::Boundary { n, d, side } => {
            guard(*n, *d, cli)?;
            let side = match side {
                SideArg::Lower => Side::Lower,
                SideArg::Upper => Side::Upper,
            };
            let k = boundary_complex(*n, *d, side).map_err(|e| e.to_string())?;
            match cli.format {
                Format::Json => {
                    let j = ComplexJson::from(&k);
                    println!("{}", serde_json::to_string(&j).expect("serializable"));
                }
                _ => {
                    println!(
                        "facets {}",
                        k.facet_vec().iter().map(|f| f.to_string()).join(",")
                    );
                }
            }
            Ok(true)
        }
        Command::Triangulations { n, d, emit } => {
            guard(*n, *d, cli)?;
            let graph = flip_graph(*n, *d).map_err(|e| e.to_string())?;
            match (emit.as_str(), cli.format) {
                ("count", Format::Json) => {
                    println!("{{\"n\":{n},\"d\":{d},\"count\":{}}}", graph.nodes.len());
                }
                ("count", _) => println!("{}", graph.nodes.len()),
                ("list", _) => {
                    for t in &graph.nodes {
                        println!(
                            "{}",
                            t.as_complex().facet_vec().iter().map(|f| f.to_string()).join(",")
                        );
                    }
                }
                ("graph", Format::Dot) => print!("{}", flip_graph_dot(&graph, *n)),
                ("graph", _) => {
                    for (a, b, s) in &graph.edges {
                        println!("{a} -- {b} via {s}");
                    }
                }
                ("hasse", _) => {
                    let poset = stasheff_tamari_poset(*n, *d).map_err(|e| e.to_string())?;
                    // Flip-graph edges, oriented by the up-flip order.
                    for (a, b, s) in &graph.edges {
                        let (lo, hi) = if poset.leq[*a][*b] { (*a, *b) } else { (*b, *a) };
                        println!("{lo} < {hi} via {s}");
                    }
                }
                _ => return Err(format!("unknown emit mode '{emit}'")),
            }
            Ok(true)
        }
        Command::Oriental { n, d, axioms } => {
            guard(*n, 0, cli)?;
            if *axioms {
                let report = check_omega_axioms(*n, *n).map_err(|e| e.to_string())?;
                if report.passed() {
                    println!(
                        "all axioms verified ({} cells, {} compositions)",
                        report.cells_checked, report.compositions_checked
                    );
                    Ok(true)
                } else {
                    for v in &report.violations {
                        println!("violation: {v}");
                    }
                    Ok(false)
                }
            } else {
                let d = d.ok_or_else(|| "provide --d or --axioms".to_string())?;
                let cs = cells(*n, d).map_err(|e| e.to_string())?;
                match cli.format {
                    Format::Json => {
                        let js: Vec<CellJson> = cs.iter().map(CellJson::from).collect();
                        println!("{}", serde_json::to_string(&js).expect("serializable"));
                    }
                    Format::Dot => print!("{}", cells_dot(&cs)),
                    Format::Text => {
                        println!("{} cells", cs.len());
                        for c in &cs {
                            println!(
                                "{}",
                                c.complex().facet_vec().iter().map(|f| f.to_string()).join(",")
                            );
                        }
                    }
                }
                Ok(true)
            }
        }
        Command::Gen { generator } => {
            let json = match generator {
                Generator::Nerve { kind, trunc } => {
                    let cat = match kind.as_str() {
                        "z2" => FiniteCategory::from_monoid(&[vec![0, 1], vec![1, 0]])
                            .expect("valid monoid"),
                        "arrow" => FiniteCategory::arrow(),
                        other => return Err(format!("unknown nerve kind '{other}'")),
                    };
                    let x = nerve_of_category(&cat, *trunc).map_err(|e| e.to_string())?;
                    SimplicialObjectJson::from_object(&x)
                }
                Generator::Pmonoid { k, trunc } => {
                    let m = PartialMonoid::disjoint_union(*k);
                    let x = partial_monoid_object(&m, *trunc).map_err(|e| e.to_string())?;
                    SimplicialObjectJson::from_object(&x)
                }
                Generator::Doldkan { dims, trunc } => {
                    let c = zero_differential_complex(dims);
                    let x = dold_kan_inverse(&c, *trunc).map_err(|e| e.to_string())?;
                    SimplicialObjectJson::from_object(&x)
                }
                Generator::Sdot { p, trunc } => {
                    let x = s_construction(*p, *trunc, cli.cutoff).map_err(|e| e.to_string())?;
                    // Groupoid levels are summarized, not serialized.
                    let mut line = String::new();
                    for lvl in 0..=x.truncation() {
                        let g = match x.object(lvl) {
                            segalis::backends::BackendObject::Groupoid(g) => g,
                            _ => unreachable!(),
                        };
                        let _ = write!(line, "S_{lvl}: {} objects, {} morphisms; ", g.n_obj, g.n_mor());
                    }
                    println!("{}", line.trim_end_matches("; "));
                    return Ok(true);
                }
            };
            println!("{}", serde_json::to_string(&json).expect("serializable"));
            Ok(true)
        }
        Command::Check(args) => run_check(cli, args),
    }
}

fn zero_differential_complex(dims: &[usize]) -> ChainComplex {
    let field = Field::Q;
    let diffs = (0..dims.len().saturating_sub(1))
        .map(|k| segalis::backends::Mat::zero(field, dims[k], dims[k + 1]))
        .collect();
    ChainComplex { field, dims: dims.to_vec(), diffs }
}

fn load_object(path: &str) -> Result<SimplicialObject, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let json: SimplicialObjectJson =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {path}: {e}"))?;
    json.into_object().map_err(|e| e.to_string())
}

fn run_check(cli: &Cli, args: &CheckArgs) -> Result<bool, String> {
    let x = match &args.input {
        Some(path) => load_object(path)?,
        None => return Err("check requires --input".into()),
    };
    // Each requested check contributes a (name, passed, detail) row.
    let mut rows: Vec<(String, bool, String)> = Vec::new();
    if let Some(d) = args.lower {
        let r = is_lower_d_segal(&x, d).map_err(|e| e.to_string())?;
        let witness = r
            .levels
            .iter()
            .find(|l| !l.holds)
            .map(|l| format!("fails at n={}: {}", l.n, l.diagnostic))
            .unwrap_or_else(|| format!("levels {}..={}", r.checked_from, r.checked_to));
        rows.push((r.condition.clone(), r.holds, witness));
    }
    if let Some(d) = args.upper {
        let r = is_upper_d_segal(&x, d).map_err(|e| e.to_string())?;
        let witness = r
            .levels
            .iter()
            .find(|l| !l.holds)
            .map(|l| format!("fails at n={}: {}", l.n, l.diagnostic))
            .unwrap_or_else(|| format!("levels {}..={}", r.checked_from, r.checked_to));
        rows.push((r.condition.clone(), r.holds, witness));
    }
    if let Some(m) = args.dk {
        let r = dk_equivalence_report(&x, m).map_err(|e| e.to_string())?;
        rows.push((
            format!("truncation triple equivalence at m={m}"),
            r.all_equivalent,
            format!(
                "segal={}, horns={}, chains={}",
                r.segal_2m, r.horns_iso, r.chains_vanish
            ),
        ));
    }
    if let Some(d) = args.pathspace {
        let r = pathspace_report(&x, d).map_err(|e| e.to_string())?;
        for (name, a, b) in &r.statements {
            rows.push((name.clone(), a == b, format!("lhs={a}, rhs={b}")));
        }
    }
    if args.independence {
        let (n, d) = match (args.n, args.d) {
            (Some(n), Some(d)) => (n, d),
            _ => return Err("--independence requires --n and --d".into()),
        };
        guard(n, d, cli)?;
        let r = check_triangulation_independence(&x, n, d).map_err(|e| e.to_string())?;
        rows.push((
            r.condition.clone(),
            r.holds,
            format!("{} triangulations", r.levels.len()),
        ));
    }
    if let Some(d) = args.excision {
        let r = check_higher_excision(&x, d).map_err(|e| e.to_string())?;
        rows.push((
            format!("higher excision at d={d}"),
            r.equivalent,
            format!(
                "segal={}, cubes={} ({} cubes checked)",
                r.segal_side, r.cube_side, r.cubes_checked
            ),
        ));
    }
    if rows.is_empty() {
        return Err("no checks requested".into());
    }
    let all = rows.iter().all(|(_, ok, _)| *ok);
    match cli.format {
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|(name, ok, detail)| {
                    serde_json::json!({"check": name, "passed": ok, "detail": detail})
                })
                .collect();
            let doc = serde_json::json!({"checks": items, "all_passed": all});
            println!("{}", serde_json::to_string(&doc).expect("serializable"));
        }
        _ => {
            for (name, ok, detail) in &rows {
                println!("{} {} ({detail})", if *ok { "PASS" } else { "FAIL" }, name);
            }
        }
    }
    Ok(all)
}

fn guard(n: usize, d: usize, cli: &Cli) -> Result<(), String> {
    if n > cli.max_n {
        return Err(format!("n={n} exceeds guard --max-n={}", cli.max_n));
    }
    if d > cli.max_d {
        return Err(format!("d={d} exceeds guard --max-d={}", cli.max_d));
    }
    Ok(())
}

fn flip_graph_dot(graph: &segalis::triangulations::FlipGraph, n: usize) -> String {
    let mut out = String::from("graph flips {\n");
    for (i, t) in graph.nodes.iter().enumerate() {
        let label = t
            .as_complex()
            .facet_vec()
            .iter()
            .map(|f| epsilon_string(f, n))
            .join("|");
        let _ = writeln!(out, "  t{i} [label=\"{label}\"];");
    }
    for (a, b, s) in &graph.edges {
        let _ = writeln!(out, "  t{a} -- t{b} [label=\"{s}\"];");
    }
    out.push_str("}\n");
    out
}
