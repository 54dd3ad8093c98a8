//! Command-line front end for the 2-distance coloring toolkit.
//!
//! Exit codes: 0 all checks pass, 1 counterexample or invariant breach,
//! 2 usage or input error.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dist2_core::classify::{
    classify, detect_configurations, min_counterexample_screen, ClassParams, ScreenVerdict,
    Section,
};
use dist2_core::coloring::{
    chi2_exact, feasible_coloring, greedy_2distance, validate_partial, verify_bound,
    BoundVerdict, Outcome, Theorem, DEFAULT_BUDGET,
};
use dist2_core::discharge::{self, fmt_charge, RuleSetId};
use dist2_core::generate::{pinned_corpus, Kind};
use dist2_core::graph::Graph;
use dist2_core::harness;
use dist2_core::recolor::heavy_first_driver;

#[derive(Parser)]
#[command(name = "dist2", about = "2-distance coloring, classification and discharging on embedded planar graphs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Main,
    Main2,
}

impl From<TheoremArg> for Theorem {
    fn from(t: TheoremArg) -> Theorem {
        match t {
            TheoremArg::Main => Theorem::Main,
            TheoremArg::Main2 => Theorem::Main2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SectionArg {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Args)]
struct GraphInput {
    /// Graph file in rotation or adjacency format; '-' reads stdin.
    file: String,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from a spec such as 'cycle(5)', 'wheel(10)',
    /// 'tree(9,42)' or 'subdivide(k4,2)'.
    Generate {
        spec: String,
        /// Seed for 'tree(n)' specs written without one.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file (stdout by default).
        #[arg(short, long)]
        out: Option<String>,
    },
    /// Exact 2-distance chromatic number with witness and clique bound.
    Chi2 {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Write the witness coloring here.
        #[arg(long)]
        witness: Option<String>,
    },
    /// Find a 2-distance coloring within a color budget, or first-fit
    /// greedy in a vertex order.
    Color {
        #[command(flatten)]
        input: GraphInput,
        /// Color budget for the exact search.
        #[arg(long, conflicts_with = "greedy")]
        ell: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// First-fit greedy instead of exact search.
        #[arg(long)]
        greedy: bool,
        /// Comma-separated vertex order for --greedy (default 0..n-1).
        #[arg(long)]
        order: Option<String>,
        /// Heavy-first completion driver: color the heavy vertices,
        /// then extend over the light ones at budget Delta + k.
        #[arg(long, conflicts_with_all = ["greedy", "ell"])]
        driver: bool,
        /// Classification k for --driver (default 7).
        #[arg(long)]
        k: Option<usize>,
        /// Write the recoloring stage log here (--driver only).
        #[arg(long)]
        stage_log: Option<String>,
        #[arg(long)]
        witness: Option<String>,
    },
    /// Classification table, forbidden-configuration findings and the
    /// minimal-counterexample screen.
    Classify {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum)]
        section: SectionArg,
        /// Override the classification k (defaults to the section's).
        #[arg(long)]
        k: Option<usize>,
        /// Override Delta (defaults to the graph's maximum degree).
        #[arg(long)]
        delta_override: Option<usize>,
        /// Write the per-vertex dump here.
        #[arg(long)]
        dump: Option<String>,
        /// Write the findings here.
        #[arg(long)]
        findings: Option<String>,
    },
    /// Run a discharging rule set and report charges.
    Discharge {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum)]
        ruleset: SectionArg,
        #[arg(long)]
        delta_override: Option<usize>,
        /// Write the transfer ledger here.
        #[arg(long)]
        ledger: Option<String>,
        /// Write the charge report here.
        #[arg(long)]
        report: Option<String>,
    },
    /// Verify one of the two bounds on a graph.
    Verify {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Verify a bound across the pinned corpus.
    CorpusRun {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(short, long)]
        out: Option<String>,
    },
}

fn read_graph(input: &GraphInput) -> Result<Graph, String> {
    let text = if input.file == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        buf
    } else {
        fs::read_to_string(&input.file).map_err(|e| format!("reading {}: {e}", input.file))?
    };
    Graph::parse(&text).map_err(|e| format!("parsing {}: {e}", input.file))
}

fn write_out(path: &Option<String>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| format!("writing {p}: {e}")),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn section_of(arg: SectionArg) -> Section {
    match arg {
        SectionArg::A => Section::A,
        SectionArg::B => Section::B,
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Generate { spec, seed, out } => {
            let kind = match Kind::parse(&spec) {
                Ok(k) => k,
                Err(e) => {
                    // allow 'tree(n)' plus --seed
                    let retry = spec
                        .strip_prefix("tree(")
                        .and_then(|rest| rest.strip_suffix(')'))
                        .and_then(|ns| ns.trim().parse::<usize>().ok())
                        .zip(seed)
                        .map(|(n, seed)| Kind::Tree { n, seed });
                    retry.ok_or_else(|| e.to_string())?
                }
            };
            let g = kind.generate().map_err(|e| e.to_string())?;
            write_out(&out, &format!("# {kind}\n{}", g.serialize()))?;
            Ok(0)
        }
        Command::Chi2 {
            input,
            budget,
            witness,
        } => {
            let g = read_graph(&input)?;
            let r = chi2_exact(&g, budget);
            if r.exact {
                println!("chi2 = {}", r.upper);
            } else {
                println!("chi2 in [{}, {}] (budget exhausted)", r.lower, r.upper);
            }
            println!(
                "clique lower bound {} ({})",
                r.clique.len(),
                if r.clique_tight() { "tight" } else { "not tight" }
            );
            let conflicts = validate_partial(&g, &r.witness).map_err(|e| e.to_string())?;
            if !conflicts.is_empty() {
                return Err("internal error: invalid witness".into());
            }
            if let Some(path) = witness {
                fs::write(&path, r.witness.to_witness_text())
                    .map_err(|e| format!("writing {path}: {e}"))?;
            }
            Ok(0)
        }
        Command::Color {
            input,
            ell,
            budget,
            greedy,
            order,
            driver,
            k,
            stage_log,
            witness,
        } => {
            let g = read_graph(&input)?;
            let result = if greedy {
                let order: Vec<u32> = match order {
                    Some(s) => s
                        .split(',')
                        .map(|t| t.trim().parse().map_err(|_| format!("bad order token '{t}'")))
                        .collect::<Result<_, _>>()?,
                    None => (0..g.vertex_count() as u32).collect(),
                };
                greedy_2distance(&g, &order).map_err(|e| e.to_string())?
            } else if driver {
                let params = match k {
                    Some(k) => ClassParams::new(k, g.max_degree().max(1)),
                    None => ClassParams::for_graph(&g, 7),
                };
                let (result, outcome) =
                    heavy_first_driver(&g, params, budget).map_err(|e| e.to_string())?;
                if let Some(path) = &stage_log {
                    let mut text = String::new();
                    for r in &outcome.log {
                        text.push_str(&r.to_string());
                        text.push('\n');
                    }
                    fs::write(path, text).map_err(|e| format!("writing {path}: {e}"))?;
                }
                println!("budget Delta + k = {}", params.ell());
                result
            } else {
                let ell = ell.ok_or("one of --ell, --greedy or --driver is required")?;
                feasible_coloring(&g, ell, budget)
            };
            match result.outcome {
                Outcome::Found => {
                    println!("coloring found with {} colors", result.colors_used);
                    let pc = result.coloring.expect("found result carries coloring");
                    let conflicts = validate_partial(&g, &pc).map_err(|e| e.to_string())?;
                    if !conflicts.is_empty() {
                        return Err("internal error: invalid coloring".into());
                    }
                    if let Some(path) = witness {
                        fs::write(&path, pc.to_witness_text())
                            .map_err(|e| format!("writing {path}: {e}"))?;
                    }
                    Ok(0)
                }
                Outcome::Infeasible => {
                    println!("infeasible: no coloring within the budget exists");
                    Ok(0)
                }
                Outcome::BudgetExhausted => {
                    println!("inconclusive: search budget exhausted");
                    Ok(0)
                }
            }
        }
        Command::Classify {
            input,
            section,
            k,
            delta_override,
            dump,
            findings,
        } => {
            let g = read_graph(&input)?;
            let section = section_of(section);
            let k = k.unwrap_or_else(|| section.k());
            let params = match delta_override {
                Some(d) => ClassParams::new(k, d),
                None => ClassParams::for_graph(&g, k),
            };
            let table = classify(&g, params);
            write_out(&dump, &table.dump())?;
            let found = detect_configurations(&g, section);
            let mut text = String::new();
            for f in &found {
                text.push_str(&f.render());
                text.push('\n');
            }
            write_out(&findings, &text)?;
            let theorem = match section {
                Section::A => Theorem::Main,
                Section::B => Theorem::Main2,
            };
            match min_counterexample_screen(&g, theorem) {
                ScreenVerdict::Passed => println!("screen passed (inconclusive)"),
                ScreenVerdict::CannotBeCounterexample(reasons) => {
                    println!("cannot be a minimal counterexample ({} reasons)", reasons.len());
                    for r in reasons {
                        println!("  {r}");
                    }
                }
            }
            Ok(0)
        }
        Command::Discharge {
            input,
            ruleset,
            delta_override,
            ledger,
            report,
        } => {
            let g = read_graph(&input)?;
            let id = match ruleset {
                SectionArg::A => RuleSetId::A,
                SectionArg::B => RuleSetId::B,
            };
            let (outcome, _initial, rep) =
                discharge::run_discharge(&g, id, delta_override).map_err(|e| e.to_string())?;
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "conservation: total {} at every phase",
                fmt_charge(outcome.state.total())
            );
            println!(
                "verdict: {}",
                if rep.all_nonnegative() {
                    "all nonnegative"
                } else {
                    "negative charges present"
                }
            );
            write_out(&ledger, &discharge::render_ledger(&outcome.ledger))?;
            write_out(&report, &rep.render_text(&outcome.ledger))?;
            Ok(0)
        }
        Command::Verify {
            input,
            theorem,
            budget,
        } => {
            let g = read_graph(&input)?;
            let r = verify_bound(&g, theorem.into(), budget);
            println!(
                "theorem {}: Delta = {}, bound = {}",
                r.theorem.name(),
                r.delta,
                r.bound
            );
            if r.planarity_unverified {
                println!("planarity unverified (no accepted embedding)");
            }
            match r.verdict {
                BoundVerdict::Holds { colors_used } => {
                    println!("holds: witness coloring with {colors_used} colors");
                    Ok(0)
                }
                BoundVerdict::HypothesisFailure(reasons) => {
                    for reason in reasons {
                        println!("hypothesis failure: {reason}");
                    }
                    Ok(0)
                }
                BoundVerdict::Counterexample { serialized } => {
                    println!("COUNTEREXAMPLE: bound violated on a hypothesis-satisfying input");
                    print!("{serialized}");
                    Ok(1)
                }
                BoundVerdict::Inconclusive(why) => {
                    println!("inconclusive: {why}");
                    Ok(0)
                }
            }
        }
        Command::CorpusRun {
            theorem,
            budget,
            format,
            out,
        } => {
            let corpus = pinned_corpus();
            let report = harness::run_verify(&corpus, theorem.into(), budget);
            let text = match format {
                FormatArg::Text => harness::render_text(&report),
                FormatArg::Structured => harness::render_structured(&report),
            };
            write_out(&out, &text)?;
            Ok(if report.any_counterexample() { 1 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
