//! Command-line front end: lens-space invariant tables, zeta values by
//! any of the three routes, classification of forms, the separation
//! experiment, and the self-test suites.

mod output;

use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;
use tylens_core::distinguish::{self, ExperimentConfig};
use tylens_core::error::Error;
use tylens_core::form::{Bicharacter, SymmetricForm};
use tylens_core::gauss;
use tylens_core::selftest::{self, Level};
use tylens_core::tycat::{self, TYData};

/// Exit codes: 2 parse failure, 3 degenerate form, 4 unsupported closed
/// form, 5 oracle mismatch or unseparated pair, 6 self-test failure.
const EXIT_PARSE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;
const EXIT_MISMATCH: u8 = 5;
const EXIT_SELFTEST: u8 = 6;

#[derive(Parser)]
#[command(
    name = "tylens",
    about = "Exact lens-space invariants of Tambara-Yamagami categories",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FormArgs {
    /// Cyclic factors, e.g. `2,12`.
    #[arg(long)]
    group: String,
    /// Gram matrix rows, e.g. `1/3,0;0,2/3`.
    #[arg(long)]
    gram: String,
}

impl FormArgs {
    fn parse_form(&self) -> Result<SymmetricForm, Error> {
        SymmetricForm::parse_literal(&format!("group={}; gram={}", self.group, self.gram))
    }
}

#[derive(Clone, Copy, PartialEq, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Lens-space invariants |L_k| of TY(A, chi, nu) over a k range.
    Lens {
        #[command(flatten)]
        form: FormArgs,
        /// +1 or -1.
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        /// Range `a..b` (inclusive) or a single k.
        #[arg(long, default_value = "0..8")]
        k: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// zeta_k values by the chosen route(s).
    Zeta {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value = "0..8")]
        k: String,
        /// brute, prin, closed, or all (all compares the routes).
        #[arg(long, default_value = "all")]
        method: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Complete classification invariants of a nondegenerate form.
    Classify {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Pairwise separation of all TY categories up to an order bound.
    Distinguish {
        #[arg(long, default_value_t = 27)]
        max_order: u64,
        /// Scan k = 0..=k_max; defaults to 8 * max_order.
        #[arg(long)]
        k_max: Option<u64>,
        /// Include even group orders (separation is then conjectural,
        /// not theorem-backed).
        #[arg(long)]
        allow_even: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (0 = default).
        #[arg(long, default_value_t = 0)]
        parallelism: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Run the verification suites.
    Selftest {
        /// quick or full.
        #[arg(long, default_value = "quick")]
        level: String,
        /// Comma-separated suite ids (default: all for the level).
        #[arg(long)]
        suites: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, e: impl std::fmt::Display) -> CliError {
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn form_error(e: Error) -> CliError {
    match e {
        Error::DegenerateForm(_) => CliError::new(EXIT_DEGENERATE, e),
        Error::Unsupported(_) => CliError::new(EXIT_UNSUPPORTED, e),
        _ => CliError::new(EXIT_PARSE, e),
    }
}

fn parse_k_range(s: &str) -> Result<(u64, u64), CliError> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let lo = a
            .trim()
            .parse()
            .map_err(|_| CliError::new(EXIT_PARSE, format!("bad k range `{s}`")))?;
        let hi = b
            .trim()
            .trim_start_matches('=')
            .trim()
            .parse()
            .map_err(|_| CliError::new(EXIT_PARSE, format!("bad k range `{s}`")))?;
        if hi < lo {
            return Err(CliError::new(EXIT_PARSE, format!("empty k range `{s}`")));
        }
        Ok((lo, hi))
    } else {
        let k = s
            .parse()
            .map_err(|_| CliError::new(EXIT_PARSE, format!("bad k `{s}`")))?;
        Ok((k, k))
    }
}

fn parse_nu(s: &str) -> Result<i8, CliError> {
    match s.trim() {
        "+1" | "1" => Ok(1),
        "-1" => Ok(-1),
        other => Err(CliError::new(
            EXIT_PARSE,
            format!("nu must be +1 or -1, got `{other}`"),
        )),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Lens {
            form,
            nu,
            k,
            format,
            output,
        } => {
            let nu = parse_nu(&nu)?;
            let (lo, hi) = parse_k_range(&k)?;
            let chi = form
                .parse_form()
                .map_err(form_error)
                .and_then(|f| Bicharacter::new(f).map_err(form_error))?;
            let data = TYData::new(chi, nu).map_err(|e| CliError::new(EXIT_PARSE, e))?;
            let seq =
                tycat::lens_sequence(&data, hi).map_err(|e| CliError::new(EXIT_MISMATCH, e))?;
            let rows: Vec<output::LensRow> = (lo..=hi)
                .map(|k| output::LensRow::new(k, &seq[k as usize]))
                .collect();
            output::emit_lens(&rows, format, output.as_deref())
                .map_err(|e| CliError::new(EXIT_PARSE, e))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Zeta {
            form,
            k,
            method,
            format,
            output,
        } => {
            let (lo, hi) = parse_k_range(&k)?;
            let chi = form
                .parse_form()
                .map_err(form_error)
                .and_then(|f| Bicharacter::new(f).map_err(form_error))?;
            let methods: Vec<&str> = match method.as_str() {
                "all" => vec!["brute", "prin", "closed"],
                "brute" | "prin" | "closed" => vec![method.as_str()],
                other => {
                    return Err(CliError::new(
                        EXIT_PARSE,
                        format!("unknown method `{other}` (brute|prin|closed|all)"),
                    ))
                }
            };
            let closed_supported = {
                let facs = tylens_core::arith::factorize(chi.group().order());
                matches!(facs.as_slice(), [(p, _)] if p % 2 == 1)
            };
            if method == "closed" && !closed_supported {
                return Err(CliError::new(
                    EXIT_UNSUPPORTED,
                    "closed form requires an odd prime-power group order",
                ));
            }
            let mut rows = Vec::new();
            let mut mismatch = false;
            for kk in lo..=hi {
                let mut row = output::ZetaRow::new(kk);
                let mut values = Vec::new();
                for m in &methods {
                    let v = match *m {
                        "brute" => Some(
                            gauss::zeta_bruteforce(&chi, kk)
                                .map_err(|e| CliError::new(EXIT_MISMATCH, e))?,
                        ),
                        "prin" => Some(
                            gauss::zeta_via_prin(&chi, kk)
                                .map_err(|e| CliError::new(EXIT_MISMATCH, e))?,
                        ),
                        "closed" if closed_supported => Some(
                            gauss::zeta_closed_form_p(&chi, kk)
                                .map_err(|e| CliError::new(EXIT_UNSUPPORTED, e))?,
                        ),
                        _ => None,
                    };
                    if let Some(v) = v {
                        row.set(m, &v);
                        values.push(v);
                    }
                }
                if values.windows(2).any(|w| w[0] != w[1]) {
                    mismatch = true;
                    row.mark_mismatch();
                }
                rows.push(row);
            }
            output::emit_zeta(&rows, format, output.as_deref())
                .map_err(|e| CliError::new(EXIT_PARSE, e))?;
            if mismatch && method == "all" {
                return Err(CliError::new(EXIT_MISMATCH, "zeta routes disagree"));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { form } => {
            let chi = form
                .parse_form()
                .map_err(form_error)
                .and_then(|f| Bicharacter::new(f).map_err(form_error))?;
            let w = tylens_core::classify::wall_invariants(&chi)
                .map_err(|e| CliError::new(EXIT_MISMATCH, e))?;
            println!("{}", w.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Distinguish {
            max_order,
            k_max,
            allow_even,
            seed,
            parallelism,
            format,
            output,
        } => {
            let mut max_order = max_order;
            if let Ok(cap) = std::env::var("TY_MAX_ORDER") {
                if let Ok(cap) = cap.parse::<u64>() {
                    max_order = max_order.min(cap);
                }
            }
            let mut config = ExperimentConfig::new(max_order);
            config.k_max = k_max.unwrap_or(8 * max_order).max(2);
            config.odd_only = !allow_even;
            config.seed = seed;
            config.parallelism = parallelism;
            if allow_even {
                eprintln!(
                    "note: even orders included; absence of unseparated pairs is conjectural, not theorem-backed"
                );
            }
            let report =
                distinguish::run(&config).map_err(|e| CliError::new(EXIT_MISMATCH, e))?;
            output::emit_distinguish(&report, format, output.as_deref())
                .map_err(|e| CliError::new(EXIT_PARSE, e))?;
            if report.unseparated > 0 || report.member_agreement_failures > 0 {
                return Err(CliError::new(
                    EXIT_MISMATCH,
                    format!(
                        "{} unseparated pairs, {} member disagreements",
                        report.unseparated, report.member_agreement_failures
                    ),
                ));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { level, suites } => {
            let level = match level.as_str() {
                "quick" => Level::Quick,
                "full" => Level::Full,
                other => {
                    return Err(CliError::new(
                        EXIT_PARSE,
                        format!("level must be quick or full, got `{other}`"),
                    ))
                }
            };
            let results = match suites {
                Some(list) => {
                    let ids: Result<Vec<u8>, _> =
                        list.split(',').map(|t| t.trim().parse::<u8>()).collect();
                    let ids = ids.map_err(|_| {
                        CliError::new(EXIT_PARSE, format!("bad suite list `{list}`"))
                    })?;
                    selftest::run_suites(level, &ids)
                }
                None => selftest::run_all(level),
            };
            let mut all_passed = true;
            for r in &results {
                println!(
                    "suite {}: {} - {} ({:.2}s)",
                    r.id,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.detail,
                    r.seconds
                );
                all_passed &= r.passed;
            }
            if !all_passed {
                let failures: Vec<serde_json::Value> = results
                    .iter()
                    .filter(|r| !r.passed)
                    .map(|r| r.to_json())
                    .collect();
                eprintln!("{}", serde_json::json!({ "failed_suites": failures }));
                return Err(CliError::new(EXIT_SELFTEST, "self-test failures"));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
