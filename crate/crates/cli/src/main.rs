use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qcrystal::fnalg::{parse_elem, Algebra};
use qcrystal::ratfield::parse_rat;
use qcrystal::repth::{parse_rep, verify_uq_relations};
use qcrystal::soibelman::Cutoffs;
use qcrystal_cli::{emit, run_suite, soibelman_entry, CheckReport, EntryMode, EntryOptions, Format, Params, SuiteError, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "qcrystal", about = "Exact checks for crystal lattices of quantized function algebras")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Rank n of sl_{n+1}; suites run every supported rank when omitted.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite, or `all`.
    Run {
        suite: String,
        /// Extra suite parameter, e.g. `--param power=2`.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
    /// List the suites.
    List,
    /// Compare both operator pipelines on one generator.
    Soibelman {
        #[arg(long, default_value = "1/2")]
        q: String,
        #[arg(long, default_value_t = 16)]
        cutoff: usize,
        #[arg(long, default_value_t = 8)]
        window: usize,
        /// Generator indices `i,j`.
        #[arg(long, default_value = "1,1")]
        entry: String,
        #[arg(long, value_enum, default_value = "float")]
        mode: EntryMode,
        /// Use `t^{min(i-j,0)} u_ij` instead of `u_ij`.
        #[arg(long)]
        scaled: bool,
        /// Reduced word for the longest Weyl element, e.g. `2,1,2`.
        #[arg(long)]
        word: Option<String>,
    },
    /// Compare the two q -> 0 limits on every generator.
    CrystalLimit {
        #[arg(long)]
        scaled: bool,
        #[arg(long, default_value = "leading")]
        mode: String,
        #[arg(long, default_value_t = 16)]
        cutoff: usize,
        #[arg(long, default_value_t = 8)]
        window: usize,
        /// Skip the numeric extrapolation cross-check.
        #[arg(long)]
        no_numeric: bool,
        #[arg(long)]
        word: Option<String>,
    },
    /// Compare both pipelines on every generator at a fixed q.
    Compare {
        #[arg(long, default_value = "1/10")]
        q: String,
        #[arg(long, default_value_t = 16)]
        cutoff: usize,
        #[arg(long, default_value_t = 8)]
        window: usize,
        /// Also compare in exact square-root arithmetic.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        word: Option<String>,
    },
    /// Normal form of an element of O_t(SL(n+1)), e.g. `star(u12)*u21`.
    NormalForm { expr: String },
    /// Build a module such as `hw(tensor(fund(1),fund(1)),2)` and check its relations.
    Module { expr: String },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_params(raw: &[String]) -> Result<Params, String> {
    raw.iter()
        .map(|kv| kv.split_once('=').map(|(k, v)| (k.trim().to_string(), v.trim().to_string())).ok_or_else(|| format!("expected KEY=VALUE, got {kv:?}")))
        .collect()
}

fn execute(cli: &Cli) -> Result<Vec<CheckReport>, ExitCode> {
    let mut params = Params::new();
    params.insert("seed".into(), cli.seed.to_string());
    if let Some(n) = cli.n {
        params.insert("n".into(), n.to_string());
    }
    let suite = |name: &str, params: &Params| run_suite(name, params).map_err(|e: SuiteError| usage(e));
    match &cli.command {
        Command::Run { suite: name, params: extra } => {
            params.extend(parse_params(extra).map_err(usage)?);
            suite(name, &params)
        }
        Command::List => Ok(qcrystal_cli::SUITES
            .iter()
            .map(|s| CheckReport::new("suite", &[("name", s.to_string())]).skipped("not run"))
            .collect()),
        Command::Soibelman { q, cutoff, window, entry, mode, scaled, word } => {
            let q = parse_rat(q).map_err(usage)?;
            let (i, j) = entry
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)))
                .ok_or_else(|| usage(format!("bad entry {entry:?}, expected i,j")))?;
            let opts = EntryOptions {
                n: cli.n.unwrap_or(2),
                q,
                cutoffs: Cutoffs { cutoff: *cutoff, window: *window },
                entry: (i, j),
                mode: *mode,
                scaled: *scaled,
                word: word.clone(),
            };
            soibelman_entry(&opts).map(|r| vec![r]).map_err(usage)
        }
        Command::CrystalLimit { scaled, mode, cutoff, window, no_numeric, word } => {
            params.insert("scaled".into(), scaled.to_string());
            params.insert("mode".into(), mode.clone());
            params.insert("cutoff".into(), cutoff.to_string());
            params.insert("window".into(), window.to_string());
            params.insert("numeric".into(), (!no_numeric).to_string());
            if let Some(w) = word {
                params.insert("word".into(), w.clone());
            }
            suite("crystal-limit", &params)
        }
        Command::Compare { q, cutoff, window, exact, word } => {
            params.insert("q".into(), q.clone());
            params.insert("cutoff".into(), cutoff.to_string());
            params.insert("window".into(), window.to_string());
            params.insert("exact-cutoff".into(), cutoff.to_string());
            params.insert("exact-window".into(), window.to_string());
            params.insert("modes".into(), if *exact { "float,exact" } else { "float" }.into());
            if let Some(w) = word {
                params.insert("word".into(), w.clone());
            }
            suite("pipelines", &params)
        }
        Command::NormalForm { expr } => {
            let n = cli.n.unwrap_or(1);
            if n == 0 {
                return Err(usage("rank must be positive"));
            }
            let x = parse_elem(&Algebra::new(n), expr).map_err(usage)?;
            Ok(vec![CheckReport::new("normal-form", &[("n", n.to_string()), ("expr", expr.clone())]).verdict(true, x.to_string())])
        }
        Command::Module { expr } => {
            let rep = parse_rep(expr).and_then(|e| e.build()).map_err(usage)?;
            let rel = verify_uq_relations(&rep);
            let weights: Vec<String> = rep.weights.iter().map(|w| w.to_string()).collect();
            let base = CheckReport::new("module", &[("expr", expr.clone())]);
            let witness = match &rel.failure {
                None => format!("dim {}, weights {}, {} relations hold", rep.dim(), weights.join(" "), rel.checked),
                Some(f) => f.clone(),
            };
            Ok(vec![base.verdict(rel.passed(), witness)])
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Err(code) => code,
        Ok(reports) => {
            let mut text = emit(&reports, cli.format);
            if cli.format == Format::Json {
                text.push('\n');
            }
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if reports.iter().any(CheckReport::failed) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
