use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use adeg::amplify::{verify_amplifier_pipeline, Middle};
use adeg::boolfn::{BooleanFunction, Builtin};
use adeg::cache::{Cache, CACHE_DIR_ENV};
use adeg::degrees::Analyzer;
use adeg::error::{Error, Result};
use adeg::experiments::{
    composition_table, default_composition_grid, gadget_census, parse_pairs, pipeline_suite,
    pipeline_to_csv, pipeline_to_jsonl, rows_to_csv, rows_to_jsonl, Manifest, PipelineConfig,
};
use adeg::expr::parse_function;
use adeg::gadgets::{
    majority_projection, simulate, verify_circuit, Gate2, MajorityBase, MajoritySearch,
};
use adeg::lp::SolveMode;
use adeg::rational::{self, Rational};
use adeg::spectral::{spectral_sensitivity, write_edge_csv};

#[derive(Parser)]
#[command(
    name = "adeg",
    version,
    about = "Approximate-degree composition laboratory"
)]
struct Cli {
    /// LP arithmetic for degree searches.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Degree measures with certificates and spectral sensitivity.
    Analyze {
        expr: String,
        #[arg(long, default_value = "1/3")]
        eps: String,
        /// Also write the sensitivity graph as CSV edges.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Dual witness for adeg_eps(f) ≥ degree, or a refuting approximant.
    Dual {
        expr: String,
        #[arg(long, default_value = "1/3")]
        eps: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        one_sided: bool,
    },
    /// AND₂ and OR₂ circuits of gates of the given base function.
    SimulateGates { expr: String },
    /// Gadget checks over all (or sampled) base functions of one arity.
    Census {
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Composition table over `f | g` pairs (default: the built-in grid).
    ComposeTable {
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long, default_value = "1/3")]
        eps: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Leave the runtime column blank for byte-comparable output.
        #[arg(long)]
        no_runtime: bool,
    },
    /// Amplifier pipeline on f ∘ M_t ∘ g.
    Amplify {
        #[arg(long)]
        outer: String,
        #[arg(long)]
        inner: String,
        /// `maj`, `and`, or an expression for a given middle function.
        #[arg(long, default_value = "maj")]
        middle: String,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value = "1/3")]
        eps: String,
        #[arg(long, default_value = "1/4")]
        delta: String,
    },
    /// Amplifier pipeline over the default grid.
    Pipeline {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Random search for MAJ_n as a projection of base^d.
    MajProjection {
        #[arg(long)]
        n: usize,
        /// `maj3` or `and2oor2`.
        #[arg(long, default_value = "maj3")]
        base: String,
        #[arg(long, default_value_t = 8)]
        d_max: usize,
        #[arg(long)]
        attempts: Option<u64>,
    },
    /// Result cache maintenance.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Drop temporary and unreadable entries.
    Gc {
        /// Cache directory (default: the environment variable).
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

/// Output text plus whether every internal check passed.
struct Outcome {
    text: String,
    ok: bool,
}

fn pretty(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn eps_arg(s: &str) -> Result<Rational> {
    rational::parse(s)
}

fn analyzer(cli: &Cli) -> Result<Analyzer> {
    let mode = match cli.mode {
        Mode::Exact => SolveMode::Exact,
        Mode::Float => SolveMode::float(),
    };
    Ok(Analyzer::new(mode).with_cache(Cache::from_env()?))
}

fn measure<T: serde::Serialize>(r: Result<T>, first_err: &mut Option<Error>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).unwrap_or(Value::Null),
        Err(e) => {
            let v = json!({ "error": e.to_string() });
            first_err.get_or_insert(e);
            v
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze { expr, eps, edges } => {
            let f = parse_function(expr)?;
            let eps = eps_arg(eps)?;
            let an = analyzer(cli)?;
            if let Some(path) = edges {
                write_edge_csv(&f, fs::File::create(path)?)?;
            }
            let mut err = None;
            let v = json!({
                "expr": expr,
                "function": f.to_tt_literal(),
                "arity": f.arity(),
                "epsilon": rational::format(&eps),
                "exact_degree": measure(an.exact_degree(&f), &mut err),
                "approx_degree": measure(an.approx_degree(&f, &eps), &mut err),
                "sign_degree": measure(an.sign_degree(&f), &mut err),
                "one_sided_degree": measure(an.one_sided_approx_degree(&f, &eps), &mut err),
                "spectral": measure(spectral_sensitivity(&f, 1e-12), &mut err),
            });
            let text = pretty(&v)?;
            match err {
                Some(e) => {
                    emit(cli, &text)?;
                    Err(e)
                }
                None => Ok(Outcome { text, ok: true }),
            }
        }
        Command::Dual {
            expr,
            eps,
            degree,
            one_sided,
        } => {
            let f = parse_function(expr)?;
            let eps = eps_arg(eps)?;
            let an = analyzer(cli)?;
            let out = if *one_sided {
                an.one_sided_witness(&f, &eps, *degree)?
            } else {
                an.dual_witness(&f, &eps, *degree)?
            };
            Ok(Outcome {
                text: pretty(&out)?,
                ok: true,
            })
        }
        Command::SimulateGates { expr } => {
            let h = parse_function(expr)?;
            let mut ok = true;
            let mut circuits = Vec::new();
            for (gate, kind) in [(Gate2::And, Builtin::And), (Gate2::Or, Builtin::Or)] {
                let mut c = simulate(&h, gate)?;
                ok &= verify_circuit(&mut c, &BooleanFunction::builtin(kind, 2)?)?;
                let projection = c.to_projection()?;
                circuits.push(json!({ "gate": gate, "circuit": c, "projection": projection }));
            }
            Ok(Outcome {
                text: pretty(&json!({ "base": h.to_tt_literal(), "circuits": circuits }))?,
                ok,
            })
        }
        Command::Census {
            arity,
            sample,
            format,
        } => {
            let r = gadget_census(*arity, *sample, cli.seed)?;
            let manifest = Manifest::new(
                "census",
                sample.map(|_| cli.seed),
                json!({ "arity": arity, "sample": sample }),
            );
            let text = match format {
                Format::Csv => r.to_csv(&manifest)?,
                Format::Json => pretty(&json!({ "manifest": manifest, "report": r }))?,
            };
            eprintln!(
                "census t={}: {}/{} passed{}",
                r.arity,
                r.passed,
                r.qualifying,
                r.expected
                    .map(|e| format!(" (expected {e})"))
                    .unwrap_or_default()
            );
            Ok(Outcome {
                text,
                ok: r.all_passed(),
            })
        }
        Command::ComposeTable {
            pairs,
            eps,
            format,
            no_runtime,
        } => {
            let eps = eps_arg(eps)?;
            let grid = match pairs {
                Some(p) => parse_pairs(&fs::read_to_string(p)?)?,
                None => default_composition_grid(),
            };
            let an = analyzer(cli)?;
            let rows = composition_table(&an, &grid, &eps);
            let names: Vec<String> = grid
                .iter()
                .map(|(f, g)| format!("{} | {}", f.name, g.name))
                .collect();
            let manifest = Manifest::new(
                "compose-table",
                Some(cli.seed),
                json!({ "epsilon": rational::format(&eps), "pairs": names, "mode": format!("{:?}", an.mode) }),
            );
            let text = match format {
                Format::Csv => rows_to_csv(&rows, &manifest, !no_runtime)?,
                Format::Json => rows_to_jsonl(&rows, &manifest)?,
            };
            Ok(Outcome {
                text,
                ok: rows.iter().all(|r| r.sandwich_ok),
            })
        }
        Command::Amplify {
            outer,
            inner,
            middle,
            t,
            eps,
            delta,
        } => {
            let f = parse_function(outer)?;
            let g = parse_function(inner)?;
            let middle = match middle.to_ascii_lowercase().as_str() {
                "maj" => Middle::Maj,
                "and" => Middle::And,
                _ => Middle::Given(parse_function(middle)?),
            };
            let an = analyzer(cli)?;
            let r = verify_amplifier_pipeline(
                &an,
                &f,
                &g,
                *t,
                &eps_arg(eps)?,
                &eps_arg(delta)?,
                &middle,
            )?;
            Ok(Outcome {
                text: pretty(&r)?,
                ok: r.passed,
            })
        }
        Command::Pipeline { format } => {
            let config = PipelineConfig::default();
            let an = analyzer(cli)?;
            let runs = pipeline_suite(&an, &config);
            let manifest = Manifest::new("pipeline", None, serde_json::to_value(&config)?);
            let text = match format {
                Format::Csv => pipeline_to_csv(&runs, &manifest)?,
                Format::Json => pipeline_to_jsonl(&runs, &manifest)?,
            };
            Ok(Outcome {
                text,
                ok: runs.iter().all(|r| r.passed()),
            })
        }
        Command::MajProjection {
            n,
            base,
            d_max,
            attempts,
        } => {
            let base: MajorityBase = base.parse()?;
            let mut search = MajoritySearch::new(*n, base, *d_max, cli.seed);
            if let Some(a) = attempts {
                search.attempts_per_depth = *a;
            }
            let p = majority_projection(&search)?;
            let ok = p.verify()?;
            Ok(Outcome {
                text: pretty(&p)?,
                ok,
            })
        }
        Command::Cache {
            action: CacheAction::Gc { dir },
        } => {
            let cache = match dir {
                Some(d) => Cache::open(d)?,
                None => Cache::from_env()?.ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "no cache directory: pass --dir or set {CACHE_DIR_ENV}"
                    ))
                })?,
            };
            let report = cache.gc()?;
            Ok(Outcome {
                text: pretty(&report)?,
                ok: true,
            })
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = run(&cli).and_then(|o| {
        emit(&cli, &o.text)?;
        Ok(o.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: an internal check failed; see the output for details");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
