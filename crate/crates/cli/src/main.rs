use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;
use stepanov_core::field::{self, ApSpec, PrimeFieldCtx, ResidueTable};
use stepanov_core::scan::{self, KMode, LemmaScanOptions, ScanConfig};
use stepanov_core::stepanov::{
    build_constraint_system, build_literal_constant_system, derive_params, same_row_space,
    solve_auxiliary, verify_lemma_commonsol, SystemSpec,
};
use stepanov_core::svdet::{
    block_constant_check, hankel_binom_det, verify_sv_identity, SvMatrixSpec,
};

/// Exact-arithmetic toolkit for power residue bounds over prime fields.
#[derive(Parser)]
#[command(name = "stepanov", version, about)]
struct Cli {
    /// RNG seed for randomized scans; identical seeds give identical reports.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, env = "STEPANOV_JOBS", default_value_t = 0)]
    jobs: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KModeArg {
    /// Distinct prime divisors of p - 1.
    PrimeDivisors,
    /// Every divisor k >= 2 of p - 1.
    AllDivisors,
    /// A single k, skipping primes where k does not divide p - 1.
    Fixed,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a as a k-th power residue, non-residue, or zero mod p.
    Residue {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        a: u64,
    },
    /// Least k-th power non-residue in the progression bn + c.
    LeastNonresidue {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        b: u64,
        #[arg(long, default_value_t = 1)]
        c: u64,
    },
    /// Scan the least non-residue value against 7/sqrt(5) b sqrt((p-1)/k) + 4b + c.
    ScanTheorem(ScanArgs),
    /// Scan run lengths against 7/sqrt(5) sqrt((p-1)/k) + 4.
    ScanCorollary(ScanArgs),
    /// Randomized auxiliary-polynomial construction scan.
    ScanLemma {
        /// Half-open prime range lo..hi.
        #[arg(long, default_value = "101..500")]
        primes: String,
        #[arg(long, default_value_t = 4)]
        min_t: u64,
        #[arg(long, default_value_t = 120)]
        max_t: u64,
        /// Randomized systems per prime.
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
    /// Build the auxiliary polynomial for one system and verify the root bound.
    StepanovBuild {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        t: u64,
        /// Comma-separated distinct shifts a_i.
        #[arg(long)]
        shifts: String,
        /// Comma-separated nonzero targets theta_i.
        #[arg(long)]
        targets: String,
        /// Also report whether the published closed-form constraint constants
        /// span the same row space as the derived system.
        #[arg(long)]
        diagnose: bool,
    },
    /// Verify det(V) = C * prod (a_i - a_j)^(D^2) for one point tuple.
    SvVerify {
        /// Exponent T on each (x + a_i); must equal (d + 1)(r - 1).
        #[arg(long = "T")]
        t_exp: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u64,
        /// Comma-separated integer points, e.g. 3,-9.
        #[arg(long)]
        points: String,
        /// Also check the constant is nonzero mod this prime.
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Binomial Hankel determinant against its closed form.
    Hankel {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        l: u64,
    },
    /// Factor the determinant constant into block determinants.
    BlockConstant {
        #[arg(long = "T")]
        t_exp: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        r: u64,
    },
}

#[derive(clap::Args)]
struct ScanArgs {
    /// Half-open prime range lo..hi.
    #[arg(long, default_value = "5..10000")]
    primes: String,
    #[arg(long, value_enum, default_value_t = KModeArg::PrimeDivisors)]
    k_mode: KModeArg,
    /// k for --k-mode fixed.
    #[arg(long)]
    k: Option<u64>,
    /// Semicolon-separated (b,c) pairs, e.g. 1,1;2,3.
    #[arg(long, default_value = "1,1")]
    grid: String,
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| anyhow!("prime range must look like 5..1000 (half-open)"))?;
    Ok((lo.trim().parse()?, hi.trim().parse()?))
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| x.trim().parse().context("expected a comma-separated list of integers"))
        .collect()
}

fn parse_int_list(s: &str) -> Result<Vec<BigInt>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map(BigInt::from)
                .context("expected a comma-separated list of integers")
        })
        .collect()
}

fn parse_grid(s: &str) -> Result<Vec<(u64, u64)>> {
    s.split(';')
        .map(|pair| {
            let (b, c) = pair
                .split_once(',')
                .ok_or_else(|| anyhow!("grid pairs must look like b,c"))?;
            Ok((b.trim().parse()?, c.trim().parse()?))
        })
        .collect()
}

fn scan_config(args: &ScanArgs, seed: u64, jobs: usize) -> Result<ScanConfig> {
    let (prime_lo, prime_hi) = parse_range(&args.primes)?;
    let k_mode = match args.k_mode {
        KModeArg::PrimeDivisors => KMode::PrimeDivisorsOnly,
        KModeArg::AllDivisors => KMode::AllDivisors,
        KModeArg::Fixed => KMode::Fixed(
            args.k
                .ok_or_else(|| anyhow!("--k-mode fixed requires --k"))?,
        ),
    };
    Ok(ScanConfig {
        prime_lo,
        prime_hi,
        k_mode,
        ap_grid: parse_grid(&args.grid)?,
        rng_seed: seed,
        jobs,
    })
}

/// One-row CSV for the non-tabular subcommands.
fn flat_csv(pairs: &[(&str, String)]) -> String {
    let header: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
    let row: Vec<String> = pairs
        .iter()
        .map(|(_, v)| {
            if v.contains(',') || v.contains('"') {
                format!("\"{}\"", v.replace('"', "\"\""))
            } else {
                v.clone()
            }
        })
        .collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

fn render(format: Format, pairs: Vec<(&str, serde_json::Value)>) -> String {
    match format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = pairs
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
            let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map)).unwrap();
            s.push('\n');
            s
        }
        Format::Csv => {
            let flat: Vec<(&str, String)> = pairs
                .iter()
                .map(|(k, v)| {
                    let s = match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    (*k, s)
                })
                .collect();
            flat_csv(&flat)
        }
    }
}

fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Returns the report text and whether every checked claim held.
fn run(cli: &Cli) -> Result<(String, bool)> {
    let format = cli.format;
    match &cli.cmd {
        Cmd::Residue { p, k, a } => {
            let ctx = PrimeFieldCtx::new(*p)?;
            let class = match ResidueTable::new(&ctx, *k)?.classify(*a) {
                None => "zero",
                Some(true) => "residue",
                Some(false) => "nonresidue",
            };
            let out = render(
                format,
                vec![
                    ("p", json!(p)),
                    ("k", json!(k)),
                    ("a", json!(a % p)),
                    ("class", json!(class)),
                ],
            );
            Ok((out, true))
        }
        Cmd::LeastNonresidue { p, k, b, c } => {
            let ctx = PrimeFieldCtx::new(*p)?;
            let ap = ApSpec::new(*b, *c, &ctx)?;
            let res = field::least_nonresidue_in_ap(&ctx, *k, ap)?;
            let out = render(
                format,
                vec![
                    ("p", json!(p)),
                    ("k", json!(k)),
                    ("b", json!(b)),
                    ("c", json!(c)),
                    ("index", json!(res.index)),
                    ("value", json!(res.value.to_string())),
                ],
            );
            Ok((out, true))
        }
        Cmd::ScanTheorem(args) => {
            let config = scan_config(args, cli.seed, cli.jobs)?;
            let rows = scan::scan_theorem(&config)?;
            let summary = scan::theorem_summary(&rows);
            let ok = summary.violations == 0;
            let out = match format {
                Format::Csv => scan::csv_string(&rows)?,
                Format::Json => scan::json_string(&config, &rows, summary),
            };
            Ok((out, ok))
        }
        Cmd::ScanCorollary(args) => {
            let config = scan_config(args, cli.seed, cli.jobs)?;
            let rows = scan::scan_corollary(&config)?;
            let summary = scan::corollary_summary(&rows);
            let ok = summary.violations == 0;
            let out = match format {
                Format::Csv => scan::csv_string(&rows)?,
                Format::Json => scan::json_string(&config, &rows, summary),
            };
            Ok((out, ok))
        }
        Cmd::ScanLemma {
            primes,
            min_t,
            max_t,
            samples,
        } => {
            let (prime_lo, prime_hi) = parse_range(primes)?;
            let config = ScanConfig {
                prime_lo,
                prime_hi,
                k_mode: KMode::AllDivisors,
                ap_grid: vec![(1, 1)],
                rng_seed: cli.seed,
                jobs: cli.jobs,
            };
            let opts = LemmaScanOptions {
                min_t: *min_t,
                max_t: *max_t,
                samples_per_prime: *samples,
            };
            let report = scan::scan_lemma(&config, opts)?;
            let summary = scan::lemma_summary(&report);
            let ok = report.failures == 0;
            let out = match format {
                Format::Csv => scan::csv_string(&report.rows)?,
                Format::Json => scan::json_string(&config, &report.rows, summary),
            };
            Ok((out, ok))
        }
        Cmd::StepanovBuild {
            p,
            t,
            shifts,
            targets,
            diagnose,
        } => {
            let ctx = PrimeFieldCtx::new(*p)?;
            let spec = SystemSpec::new(ctx, *t, parse_u64_list(shifts)?, parse_u64_list(targets)?)?;
            let params = derive_params(spec.t(), spec.r())?;
            let aux = solve_auxiliary(&spec, &params)?;
            let report = verify_lemma_commonsol(&spec)?;
            let mut pairs = vec![
                ("p", json!(p)),
                ("t", json!(t)),
                ("r", json!(spec.r())),
                ("multiplicity", json!(params.multiplicity)),
                ("padding", json!(params.padding)),
                ("g_degree", json!(params.g_degree)),
                ("shift_exponent", json!(params.shift_exponent)),
                ("degree_bound", json!(params.degree_bound)),
                ("feasible", json!(params.feasible)),
                ("fallback_r", json!(params.fallback_r)),
                ("g_coeffs", json!(aux.g_coeffs)),
                ("f_degree", json!(report.f_degree)),
                ("common_roots", json!(report.common_roots)),
                ("multiplicity_ok", json!(report.multiplicity_ok)),
                ("count_bound", json!(report.count_bound)),
                ("stated_bound_holds", json!(report.stated_bound_holds)),
                ("pass", json!(report.pass)),
            ];
            if *diagnose {
                let derived = build_constraint_system(&spec, &params)?;
                let literal = build_literal_constant_system(&spec, &params)?;
                pairs.push((
                    "literal_constants_same_row_space",
                    json!(same_row_space(&derived, &literal, spec.ctx().p())),
                ));
            }
            if format == Format::Csv {
                // flatten the nested lists for the one-row layout
                for (k, v) in pairs.iter_mut() {
                    if *k == "g_coeffs" {
                        *v = json!(aux
                            .g_coeffs
                            .iter()
                            .map(|g| joined(g))
                            .collect::<Vec<_>>()
                            .join(";"));
                    } else if *k == "common_roots" {
                        *v = json!(joined(&report.common_roots));
                    }
                }
            }
            let ok = report.pass;
            Ok((render(format, pairs), ok))
        }
        Cmd::SvVerify {
            t_exp,
            d,
            r,
            points,
            modulus,
        } => {
            let spec = SvMatrixSpec::new(*t_exp, *d, *r, parse_int_list(points)?)?;
            let report = verify_sv_identity(&spec, *modulus)?;
            let ok = report.matches && report.constant_nonzero_mod_p != Some(false);
            let out = render(
                format,
                vec![
                    ("T", json!(t_exp)),
                    ("d", json!(d)),
                    ("r", json!(r)),
                    ("points", json!(points)),
                    ("det", json!(report.det_value.to_string())),
                    ("predicted", json!(report.predicted.to_string())),
                    ("constant", json!(report.constant.to_string())),
                    ("matches", json!(report.matches)),
                    (
                        "constant_nonzero_mod_p",
                        json!(report.constant_nonzero_mod_p),
                    ),
                ],
            );
            Ok((out, ok))
        }
        Cmd::Hankel { n, m, l } => {
            let report = hankel_binom_det(*n, *m, *l)?;
            let out = render(
                format,
                vec![
                    ("n", json!(n)),
                    ("m", json!(m)),
                    ("l", json!(l)),
                    ("det", json!(report.direct.to_string())),
                    ("closed_form", json!(report.closed_form.to_string())),
                    ("matches", json!(report.matches)),
                ],
            );
            Ok((out, report.matches))
        }
        Cmd::BlockConstant { t_exp, d, r } => {
            let report = block_constant_check(*t_exp, *d, *r)?;
            let out = render(
                format,
                vec![
                    ("T", json!(t_exp)),
                    ("d", json!(d)),
                    ("r", json!(r)),
                    (
                        "block_dets",
                        json!(report
                            .block_dets
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()),
                    ),
                    ("constant", json!(report.constant.to_string())),
                    ("matches", json!(report.matches)),
                ],
            );
            Ok((out, report.matches))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Cmd::ScanLemma { samples, .. } = &cli.cmd {
        if *samples == 0 {
            eprintln!("error: --samples must be at least 1");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((text, ok)) => {
            if let Err(e) = emit(&cli, &text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
