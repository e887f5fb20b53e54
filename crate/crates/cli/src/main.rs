mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hhg_core::certify::scan::scan;
use hhg_core::certify::{certify, ueg_lower_bound, CertifyOptions};
use hhg_core::coordinates::{fit_distance_formula, product_decomposition};
use hhg_core::group::{cayley_ball, random_element, GeneratingSet, Word};
use hhg_core::hhs::axioms::check_axioms;
use hhg_core::hhs::validators::structural_validators;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use report::{
    base_ledger, emit, load, opt_f64, to_csv, to_json, Envelope, Failure, Loaded, SCHEMA_VERSION,
};

#[derive(Parser)]
#[command(
    name = "hhglab",
    version,
    about = "Hierarchically hyperbolic group lab"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Structure file, or the name of a built-in structure.
    #[arg(value_name = "STRUCTURE")]
    structure: Option<String>,
    /// Same as the positional argument.
    #[arg(long = "structure", value_name = "PATH")]
    structure_flag: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl Common {
    fn load(&self) -> Result<Loaded, Failure> {
        match (&self.structure_flag, &self.structure) {
            (Some(a), Some(b)) if a != b => {
                Err(Failure::Usage("two different structures given".into()))
            }
            (Some(s), _) | (None, Some(s)) => load(s),
            (None, None) => Err(Failure::Usage("a structure is required".into())),
        }
    }

    fn json_only(&self) -> Result<(), Failure> {
        match self.format {
            Format::Json => Ok(()),
            Format::Csv => Err(Failure::Usage("this command only writes JSON".into())),
        }
    }
}

#[derive(Args)]
struct GensetArgs {
    /// Comma-separated words; the standard generators when omitted.
    #[arg(long)]
    genset: Option<String>,
    /// Add inverses to the generating set.
    #[arg(long)]
    symmetrize: bool,
}

impl GensetArgs {
    fn resolve(&self, loaded: &Loaded, default_symmetric: bool) -> Result<GeneratingSet, Failure> {
        let m = loaded.structure.group();
        match &self.genset {
            None => Ok(GeneratingSet::standard(
                m,
                self.symmetrize || default_symmetric,
            )),
            Some(text) => {
                let words: Vec<Word> = text
                    .split(',')
                    .map(str::trim)
                    .filter(|w| !w.is_empty())
                    .map(|w| m.parse_word(w))
                    .collect::<Result<_, _>>()?;
                Ok(GeneratingSet::new(m, &words, self.symmetrize)?)
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sampled axiom checks and structural validators.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 500)]
        budget: usize,
    },
    /// Growth certificate for one generating set.
    Certify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        genset: GensetArgs,
        #[arg(long, default_value_t = hhg_core::certify::DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Certificates for every small generating set.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long = "scan-size", default_value_t = 2)]
        scan_size: usize,
        #[arg(long = "scan-length", default_value_t = 2)]
        scan_length: usize,
        /// Radius at which generation is certified.
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long)]
        symmetrize: bool,
        #[arg(long, default_value_t = hhg_core::certify::DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Distance-formula fit over random pairs.
    Distance {
        #[command(flatten)]
        common: Common,
        /// Threshold of the distance-formula sum.
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// Product decomposition of the unbounded domains.
    Decompose {
        #[command(flatten)]
        common: Common,
    },
    /// Ball counts `β_X(n)`; the symmetrized standard set by default.
    Growth {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        genset: GensetArgs,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
}

#[derive(Serialize)]
struct CheckReport {
    passed: bool,
    axioms: hhg_core::hhs::axioms::AxiomReport,
    validators: hhg_core::hhs::validators::ValidatorReport,
}

#[derive(Serialize)]
struct CertifyReport<'a> {
    certificate: &'a hhg_core::certify::GrowthCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda0_bound: Option<f64>,
}

#[derive(Serialize)]
struct DistanceReport {
    fit: hhg_core::coordinates::DistanceFit,
    radius: usize,
}

#[derive(Serialize)]
struct GrowthRow {
    n: usize,
    count: u64,
    log_count_over_n: Option<f64>,
}

#[derive(Serialize)]
struct GrowthReport {
    generating_set: String,
    rows: Vec<GrowthRow>,
}

#[derive(Serialize)]
struct ErrorReport {
    error: String,
}

fn envelope<'a, T: Serialize>(
    command: &'a str,
    loaded: &'a Loaded,
    seed: u64,
    ledger: &'a hhg_core::certify::ConstantLedger,
    report: T,
) -> Envelope<'a, T> {
    Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        structure: loaded.structure.name(),
        structure_sha256: &loaded.sha256,
        seed,
        ledger,
        report,
    }
}

fn summary(common: &Common, line: &str) {
    if common.out.is_some() {
        println!("{line}");
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check { common, budget } => {
            common.json_only()?;
            let loaded = common.load()?;
            let s = &loaded.structure;
            let axioms = check_axioms(s, budget, common.seed);
            let validators = structural_validators(s);
            let passed = axioms.passed() && axioms.extras_passed() && validators.passed();
            let failing = axioms.failing_axioms();
            let ledger = base_ledger(s);
            let rep = CheckReport {
                passed,
                axioms,
                validators,
            };
            emit(
                common.out.as_ref(),
                &to_json(&envelope("check", &loaded, common.seed, &ledger, &rep)),
            )?;
            if passed {
                summary(&common, &format!("{}: all checks pass", s.name()));
                Ok(())
            } else {
                Err(Failure::Fail(format!(
                    "{}: failing axioms {failing:?}",
                    s.name()
                )))
            }
        }
        Command::Certify {
            common,
            genset,
            depth,
        } => {
            common.json_only()?;
            let loaded = common.load()?;
            let s = &loaded.structure;
            let x = genset.resolve(&loaded, false)?;
            let opts = CertifyOptions {
                depth,
                ..CertifyOptions::default()
            };
            match certify(s, &x, &opts) {
                Ok(cert) => {
                    let rep = CertifyReport {
                        certificate: &cert,
                        lambda0_bound: ueg_lower_bound(&cert).ok(),
                    };
                    emit(
                        common.out.as_ref(),
                        &to_json(&envelope(
                            "certify",
                            &loaded,
                            common.seed,
                            &cert.ledger,
                            &rep,
                        )),
                    )?;
                    let detail = cert
                        .pair()
                        .map(|p| format!(" ({}, {})", p.u_text, p.w_text))
                        .unwrap_or_default();
                    summary(
                        &common,
                        &format!(
                            "{} {}: {}{detail}",
                            s.name(),
                            cert.generating_set,
                            cert.variant_name()
                        ),
                    );
                    Ok(())
                }
                Err(e) => {
                    let ledger = base_ledger(s);
                    let rep = ErrorReport {
                        error: e.to_string(),
                    };
                    emit(
                        common.out.as_ref(),
                        &to_json(&envelope("certify", &loaded, common.seed, &ledger, &rep)),
                    )?;
                    Err(e.into())
                }
            }
        }
        Command::Scan {
            common,
            scan_size,
            scan_length,
            radius,
            symmetrize,
            depth,
        } => {
            let loaded = common.load()?;
            let s = &loaded.structure;
            let opts = CertifyOptions {
                depth,
                ..CertifyOptions::default()
            };
            let rep = scan(s, scan_size, scan_length, radius, symmetrize, &opts)?;
            let ledger = base_ledger(s);
            let text = match common.format {
                Format::Json => to_json(&envelope("scan", &loaded, common.seed, &ledger, &rep)),
                Format::Csv => {
                    let header = [
                        "generating_set",
                        "variant",
                        "word_length_bound",
                        "lambda_estimate",
                        "lambda0_bound",
                        "ledger_M",
                        "structure_sha256",
                        "schema_version",
                    ];
                    let tail = |row: &mut Vec<String>| {
                        row.push(ledger.m.to_string());
                        row.push(loaded.sha256.clone());
                        row.push(SCHEMA_VERSION.to_string());
                    };
                    let mut rows: Vec<Vec<String>> = rep
                        .rows
                        .iter()
                        .map(|r| {
                            let mut row = vec![
                                r.generating_set.clone(),
                                r.variant.clone(),
                                r.word_length_bound
                                    .map(|l| l.to_string())
                                    .unwrap_or_default(),
                                opt_f64(r.lambda_estimate),
                                opt_f64(r.lambda0_bound),
                            ];
                            tail(&mut row);
                            row
                        })
                        .collect();
                    if !rep.rows.is_empty() {
                        let max_len = rep.rows.iter().filter_map(|r| r.word_length_bound).max();
                        let mut row = vec![
                            "summary".to_string(),
                            if rep.summary.all_rows_meet_bound {
                                "pass"
                            } else {
                                "fail"
                            }
                            .to_string(),
                            max_len.map(|l| l.to_string()).unwrap_or_default(),
                            opt_f64(rep.summary.min_lambda_estimate),
                            rep.summary.ledger_bound.to_string(),
                        ];
                        tail(&mut row);
                        rows.push(row);
                    }
                    to_csv(&header, &rows)
                }
            };
            emit(common.out.as_ref(), &text)?;
            summary(
                &common,
                &format!("{}: {} generating sets scanned", s.name(), rep.rows.len()),
            );
            if rep.summary.all_rows_meet_bound {
                Ok(())
            } else {
                Err(Failure::Fail("some scan rows failed".into()))
            }
        }
        Command::Distance {
            common,
            s: threshold,
            pairs,
            radius,
        } => {
            common.json_only()?;
            let loaded = common.load()?;
            let st = &loaded.structure;
            let m = st.group();
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let samples: Vec<(Word, Word)> = (0..pairs)
                .map(|_| {
                    (
                        random_element(m, radius, &mut rng),
                        random_element(m, radius, &mut rng),
                    )
                })
                .collect();
            let fit = fit_distance_formula(st, &samples, threshold)?;
            let ledger = base_ledger(st);
            summary(
                &common,
                &format!("{}: K = {}, C = {}", st.name(), fit.k, fit.c),
            );
            let rep = DistanceReport { fit, radius };
            emit(
                common.out.as_ref(),
                &to_json(&envelope("distance", &loaded, common.seed, &ledger, &rep)),
            )
        }
        Command::Decompose { common } => {
            common.json_only()?;
            let loaded = common.load()?;
            let st = &loaded.structure;
            let dec = product_decomposition(st)?;
            let ledger = base_ledger(st);
            summary(
                &common,
                &format!("{}: {} blocks", st.name(), dec.blocks.len()),
            );
            emit(
                common.out.as_ref(),
                &to_json(&envelope("decompose", &loaded, common.seed, &ledger, &dec)),
            )
        }
        Command::Growth { common, genset, n } => {
            let loaded = common.load()?;
            let st = &loaded.structure;
            let m = st.group();
            let x = genset.resolve(&loaded, true)?;
            let ball = cayley_ball(m, &x, n)?;
            let rows: Vec<GrowthRow> = ball
                .counts
                .iter()
                .enumerate()
                .map(|(k, &c)| GrowthRow {
                    n: k,
                    count: c,
                    log_count_over_n: (k > 0).then(|| (c as f64).ln() / k as f64),
                })
                .collect();
            let text = match common.format {
                Format::Json => {
                    let ledger = base_ledger(st);
                    let rep = GrowthReport {
                        generating_set: x.encode(m),
                        rows,
                    };
                    to_json(&envelope("growth", &loaded, common.seed, &ledger, &rep))
                }
                Format::Csv => to_csv(
                    &["n", "count", "log_count_over_n"],
                    &rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.n.to_string(),
                                r.count.to_string(),
                                opt_f64(r.log_count_over_n),
                            ]
                        })
                        .collect::<Vec<_>>(),
                ),
            };
            summary(&common, &format!("{}: β({n}) = {}", st.name(), ball.count));
            emit(common.out.as_ref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code() as u8)
        }
    }
}
