use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use densesat_core::combinatorics::{to_fixed, to_scientific};
use densesat_core::harness::{read_rows, run_grid, scaling_report, BenchGrid, CsvSink};
use densesat_core::{
    best_case_instance, brute_force_count, brute_force_models, count_models, expected_overlaps,
    find_solution, p_overlap, parse_dimacs, per_literal_counts, random_instance,
    worst_case_instance, write_dimacs, ClauseWidth, DensityType, EngineConfig, Error, Formula,
    GenSpec, Lit, LiteralPriority, OracleLimit, OverlapQuery, TripleModel, TupleSize, Verdict,
};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;

#[derive(Parser)]
#[command(
    name = "densesat",
    version,
    about = "Exact model counting for dense CNF formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count models of a DIMACS file ("-" reads stdin).
    Count {
        cnf: PathBuf,
        /// Print engine statistics.
        #[arg(long)]
        stats: bool,
        /// Abort if the pattern store would grow beyond N entries.
        #[arg(long, value_name = "N")]
        max_patterns: Option<usize>,
    },
    /// Find one satisfying assignment.
    Solve {
        cnf: PathBuf,
        /// Literal order to try, e.g. "3,-1,2"; must mention every variable once.
        #[arg(long, allow_hyphen_values = true)]
        priority: Option<String>,
        /// Seed for pseudorandom polarities when no priority is given.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "N")]
        max_patterns: Option<usize>,
    },
    /// Number of models in which each literal is true.
    Lits {
        cnf: PathBuf,
        #[arg(long, value_name = "N")]
        max_patterns: Option<usize>,
    },
    /// Generate an instance.
    #[command(group(ArgGroup::new("width").args(["k", "density_type"])))]
    #[command(group(ArgGroup::new("family").args(["best_case", "worst_case"])))]
    Gen {
        #[arg(long)]
        n: u32,
        /// Clause count (implied by n and k for --worst-case).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<u32>,
        /// 0.9N or xRootN, e.g. 7RootN.
        #[arg(long)]
        density_type: Option<DensityType>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Clauses that pairwise clash (m <= k).
        #[arg(long)]
        best_case: bool,
        /// Clauses whose every subset overlaps (m = n - k + 1).
        #[arg(long)]
        worst_case: bool,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count by truth-table enumeration.
    Oracle {
        cnf: PathBuf,
        #[arg(long, default_value_t = 24)]
        max_n: u32,
        /// List every model.
        #[arg(long)]
        models: bool,
    },
    /// Exact probability that two random clauses overlap.
    Poverlap {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        kc: u32,
        #[arg(long)]
        kd: u32,
        /// Clause count, for the expected number of overlapping tuples.
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        tuple_size: u8,
        #[arg(long, value_enum, default_value_t = TripleArg::Pairwise)]
        triple_model: TripleArg,
    },
    /// Run a benchmark grid and write one CSV row per run.
    Bench {
        /// "desk", "full", or "n=100,200;m=100,1000;dt=0.9N,7RootN".
        #[arg(long, default_value = "desk")]
        grid: BenchGrid,
        #[arg(long, default_value_t = 1)]
        repeats: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "N")]
        max_patterns: Option<usize>,
        /// Output CSV; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Scaling report from a benchmark CSV.
    Report { csv: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum TripleArg {
    Pairwise,
    Wider,
}

fn read_input(path: &Path) -> anyhow::Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        return Ok(buf);
    }
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<Formula> {
    let bytes = read_input(path)?;
    match parse_dimacs(&bytes) {
        Ok(parsed) => {
            for w in &parsed.diagnostics.warnings {
                eprintln!("{}: {w}", path.display());
            }
            Ok(parsed.formula)
        }
        Err(diag) => {
            for d in diag.errors.iter().chain(&diag.warnings) {
                eprintln!("{}: {d}", path.display());
            }
            bail!("{} is not a valid DIMACS CNF file", path.display())
        }
    }
}

fn engine_config(max_patterns: Option<usize>) -> EngineConfig {
    EngineConfig {
        max_pattern_store: max_patterns,
        collect_stats: false,
    }
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn verdict_exit(verdict: Verdict) -> u8 {
    if verdict.is_satisfiable() {
        EXIT_SAT
    } else {
        EXIT_UNSAT
    }
}

fn parse_priority(num_vars: u32, text: &str) -> anyhow::Result<LiteralPriority> {
    let lits = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: i32 = t.parse().with_context(|| format!("bad literal {t:?}"))?;
            Ok(Lit::new(v)?)
        })
        .collect::<anyhow::Result<Vec<Lit>>>()?;
    Ok(LiteralPriority::new(num_vars, lits)?)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Count {
            cnf,
            stats,
            max_patterns,
        } => {
            let formula = load(&cnf)?;
            let mut config = engine_config(max_patterns);
            config.collect_stats = stats;
            let count = count_models(&formula, &config)?;
            println!("solutions {}", count.solutions);
            println!("verdict {}", count.verdict);
            if let Some(s) = &count.stats {
                let m = formula.len();
                println!("clauses_processed {}", s.clauses_processed);
                println!("overlap_count {}", s.overlap_count);
                println!("overlap_ratio {:.6}", s.overlap_ratio(m));
                println!("pattern_store_size {}", s.pattern_store_size);
                println!("merges_attempted {}", s.merges_attempted);
                println!("mean_merge_scan {:.4}", s.mean_merge_scan());
                println!("early_terminated {}", s.early_terminated);
                if let Some(at) = s.terminated_at_clause {
                    println!("terminated_at_clause {at}");
                }
            }
            Ok(verdict_exit(count.verdict))
        }
        Command::Solve {
            cnf,
            priority,
            seed,
            max_patterns,
        } => {
            let formula = load(&cnf)?;
            let n = formula.num_vars();
            let priority = match priority {
                Some(p) => parse_priority(n, &p)?,
                None => LiteralPriority::seeded(n, seed),
            };
            match find_solution(&formula, &priority, &engine_config(max_patterns)) {
                Ok(sol) => {
                    println!("s SATISFIABLE");
                    let lits: Vec<String> = sol
                        .assignment
                        .literals()
                        .iter()
                        .map(|l| l.to_string())
                        .collect();
                    if lits.is_empty() {
                        println!("v 0");
                    } else {
                        println!("v {} 0", lits.join(" "));
                    }
                    eprintln!("count calls: {}", sol.count_calls);
                    Ok(EXIT_SAT)
                }
                Err(Error::Unsatisfiable) => {
                    println!("s UNSATISFIABLE");
                    Ok(EXIT_UNSAT)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Lits { cnf, max_patterns } => {
            let formula = load(&cnf)?;
            let report = per_literal_counts(&formula, &engine_config(max_patterns))?;
            for e in &report.entries {
                println!("{} has {} solutions", e.lit, e.solutions);
            }
            Ok(0)
        }
        Command::Gen {
            n,
            m,
            k,
            density_type,
            seed,
            best_case,
            worst_case,
            output,
        } => {
            let width = match (k, density_type) {
                (Some(k), _) => ClauseWidth::Literals(k),
                (None, Some(dt)) => ClauseWidth::Density(dt),
                (None, None) => bail!("one of --k or --density-type is required"),
            };
            let k = GenSpec {
                num_vars: n,
                num_clauses: 0,
                width,
                seed,
            }
            .k()?;
            let formula = if worst_case {
                let f = worst_case_instance(n, k)?;
                if let Some(m) = m.filter(|&m| m != f.len()) {
                    bail!(
                        "the worst case with n = {n}, k = {k} has {} clauses, not {m}",
                        f.len()
                    );
                }
                f
            } else {
                let m = m.context("--m is required")?;
                if best_case {
                    best_case_instance(n, k, m, seed)?
                } else {
                    random_instance(&GenSpec {
                        num_vars: n,
                        num_clauses: m,
                        width,
                        seed,
                    })?
                }
            };
            let mut out = open_output(output.as_deref())?;
            out.write_all(write_dimacs(&formula).as_bytes())?;
            out.flush()?;
            Ok(0)
        }
        Command::Oracle { cnf, max_n, models } => {
            let formula = load(&cnf)?;
            let limit = OracleLimit::new(max_n)?;
            let count = if models {
                let all = brute_force_models(&formula, limit)?;
                for a in &all {
                    println!("{a}");
                }
                BigUint::from(all.len())
            } else {
                brute_force_count(&formula, limit)?
            };
            let verdict = Verdict::from_count(&count);
            println!("solutions {count}");
            println!("verdict {verdict}");
            Ok(verdict_exit(verdict))
        }
        Command::Poverlap {
            n,
            kc,
            kd,
            m,
            tuple_size,
            triple_model,
        } => {
            let mut q = OverlapQuery::new(n, kc, kd);
            let p = p_overlap(&q)?;
            println!("p_overlap {p}");
            println!("p_overlap_decimal {}", to_fixed(&p, 10));
            println!("p_overlap_scientific {}", to_scientific(&p, 3));
            if let Some(m) = m {
                q = q.with_m(m);
                let tuple = match (tuple_size, triple_model) {
                    (2, _) => TupleSize::Pair,
                    (_, TripleArg::Pairwise) => TupleSize::Triple(TripleModel::PairwiseSquared),
                    (_, TripleArg::Wider) => TupleSize::Triple(TripleModel::WiderIntersection),
                };
                let e = expected_overlaps(&q, tuple)?;
                println!("expected_overlaps {}", to_scientific(&e, 3));
                println!("expected_overlaps_decimal {}", to_fixed(&e, 4));
            }
            Ok(0)
        }
        Command::Bench {
            grid,
            repeats,
            seed,
            max_patterns,
            output,
        } => {
            let mut sink = CsvSink::new(open_output(output.as_deref())?);
            let rows = run_grid(&grid, repeats, seed, &engine_config(max_patterns), |row| {
                eprintln!(
                    "n={} m={} {} run {}: {:.4}s",
                    row.n, row.m, row.density_type, row.run_index, row.wall_time_seconds
                );
                sink.write(row)
            })?;
            eprint!("{}", scaling_report(&rows));
            Ok(0)
        }
        Command::Report { csv } => {
            let bytes = read_input(&csv)?;
            let rows = read_rows(&bytes[..])?;
            print!("{}", scaling_report(&rows));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
