mod selftest;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcrt_core::format::{elements_to_strings, poly_to_strings, read_json, write_json, PolyFile, SpecFile, WordFile};
use qcrt_core::rankmetric::random_error;
use qcrt_core::sim::{self, ExperimentConfig, FamilySource};
use qcrt_core::{decode_extended, CodeParams, Error, LinPoly, Outcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const EXIT_USAGE: u8 = 1;
const EXIT_DECODE_FAILURE: u8 = 2;
const EXIT_SEARCH_EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(name = "qcrt", version, about = "q-CRT rank-metric codes: generation, coding and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    alpha: usize,
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long)]
    m: usize,
    /// Degree of the subfield holding the modulus coefficients.
    #[arg(long, default_value_t = 1)]
    l: usize,
}

impl ParamArgs {
    fn params(&self) -> qcrt_core::Result<CodeParams> {
        CodeParams::new(self.n, self.k, self.alpha, self.q, self.m, self.l)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a code (family, k, A) as JSON.
    Gen {
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated modulus q-degrees summing to n.
        #[arg(long, value_delimiter = ',')]
        profile: Option<Vec<usize>>,
        /// Number of balanced blocks when no profile is given.
        #[arg(long, default_value_t = 4)]
        blocks: usize,
        /// Use the family X^{q^L}, X^{q^m} - X (requires n = L + m).
        #[arg(long, value_name = "L")]
        two_block: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        attempts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a message (or a random one) and optionally add a rank-r error.
    Encode {
        #[arg(long)]
        spec: PathBuf,
        /// Message file `{"coeffs": [...]}`; random when absent.
        #[arg(long)]
        message: Option<PathBuf>,
        #[arg(long)]
        error_rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a received word; prints the outcome and diagnostics as JSON.
    Decode {
        #[arg(long)]
        spec: PathBuf,
        /// Word file `{"symbols": [...]}`.
        #[arg(long)]
        word: PathBuf,
        /// Decoding radius; defaults to the largest admissible one.
        #[arg(long)]
        r_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo experiment from a JSON configuration.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        r_min: Option<usize>,
        #[arg(long)]
        r_max: Option<usize>,
        /// CSV output; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the theoretical success probability table as CSV.
    Prob {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        r_min: usize,
        #[arg(long)]
        r_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run reduced property suites over the core algorithms.
    Selftest {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct EncodeOutput {
    message: Vec<String>,
    symbols: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Vec<String>>,
}

#[derive(Serialize)]
struct DecodeOutput {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<qcrt_core::FailureReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_weight: Option<usize>,
    diagnostics: qcrt_core::decoder::Diagnostics,
}

fn emit(out: Option<&PathBuf>, text: &str) -> qcrt_core::Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: Option<&PathBuf>, value: &T) -> qcrt_core::Result<()> {
    match out {
        Some(p) => write_json(p, value),
        None => {
            let mut text = serde_json::to_string_pretty(value)?;
            text.push('\n');
            emit(None, &text)
        }
    }
}

fn run(cmd: Command) -> qcrt_core::Result<u8> {
    match cmd {
        Command::Gen {
            params,
            profile,
            blocks,
            two_block,
            attempts,
            seed,
            out,
        } => {
            let mut cfg = ExperimentConfig::new(params.params()?, 1, 0, 0, seed);
            cfg.profile = profile;
            cfg.blocks = blocks;
            cfg.family_attempts = attempts;
            if let Some(l) = two_block {
                cfg.family = FamilySource::TwoBlock { l };
            }
            let spec = sim::build_spec(&cfg)?;
            emit_json(out.as_ref(), &SpecFile::of(&spec))?;
        }
        Command::Encode {
            spec,
            message,
            error_rank,
            seed,
            out,
        } => {
            let spec = read_json::<SpecFile>(&spec)?.load()?;
            let ctx = spec.context().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = match message {
                Some(path) => read_json::<PolyFile>(path)?.load(&ctx)?,
                None => LinPoly::random(&ctx, spec.k(), &mut rng),
            };
            let mut word = spec.encode(&p)?;
            let error = match error_rank {
                Some(r) => {
                    let e = random_error(&ctx, spec.n(), r, &mut rng)?;
                    word = word.add(&ctx, &e);
                    Some(elements_to_strings(&ctx, &e))
                }
                None => None,
            };
            let output = EncodeOutput {
                message: poly_to_strings(&p),
                symbols: WordFile::of(&ctx, &word).symbols,
                error,
            };
            emit_json(out.as_ref(), &output)?;
        }
        Command::Decode { spec, word, r_max, out } => {
            let spec = read_json::<SpecFile>(&spec)?.load()?;
            let ctx = spec.context().clone();
            let y = read_json::<WordFile>(&word)?.load(&ctx)?;
            let r_max = r_max.unwrap_or_else(|| sim::admissible_radius(&spec));
            let res = decode_extended(&spec, &y, r_max)?;
            let (status, reason, message, error_weight, code) = match &res.outcome {
                Outcome::Success { message, error_weight } => {
                    ("success", None, Some(poly_to_strings(message)), Some(*error_weight), 0)
                }
                Outcome::Failure(r) => ("failure", Some(*r), None, None, EXIT_DECODE_FAILURE),
            };
            let output = DecodeOutput {
                status,
                reason,
                message,
                error_weight,
                diagnostics: res.diagnostics,
            };
            emit_json(out.as_ref(), &output)?;
            return Ok(code);
        }
        Command::Simulate {
            config,
            seed,
            trials,
            r_min,
            r_max,
            out,
            svg,
        } => {
            let mut cfg: ExperimentConfig = read_json(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(r) = r_min {
                cfg.r_min = r;
            }
            if let Some(r) = r_max {
                cfg.r_max = r;
            }
            let exp = sim::run_experiment(&cfg)?;
            match &out {
                Some(p) => sim::emit_csv(&exp.rows, p)?,
                None => sim::write_csv(&exp.rows, io::stdout().lock())?,
            }
            if let Some(p) = svg {
                sim::emit_svg(&exp.rows, &exp.radii, p)?;
            }
        }
        Command::Prob {
            params,
            r_min,
            r_max,
            out,
        } => {
            let p = params.params()?;
            let r_max = r_max.unwrap_or(p.n - p.k_alpha());
            if r_min > r_max {
                return Err(Error::InvalidParams("r_min exceeds r_max".into()));
            }
            let mut text = String::from("r,probability\n");
            for r in r_min..=r_max {
                text.push_str(&format!("{},{}\n", r, sim::theoretical(&p, r)));
            }
            emit(out.as_ref(), &text)?;
        }
        Command::Selftest { trials, seed } => {
            return Ok(if selftest::run(trials, seed) { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::FamilySearchExhausted { .. } => EXIT_SEARCH_EXHAUSTED,
                _ => EXIT_USAGE,
            })
        }
    }
}
