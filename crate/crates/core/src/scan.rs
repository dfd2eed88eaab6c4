//! Scan driver: sweep prime ranges, compare oracle results against the
//! square-root bound and its run-length corollary, stress the auxiliary
//! polynomial construction on randomized systems, and render reports.
//!
//! Determinism contract: identical config (including seed) produces
//! byte-identical CSV/JSON output, regardless of worker count, because work
//! is partitioned by prime, RNG streams are derived per (seed, p, sample),
//! and results are merged in input order.

use crate::field::{
    primes_in_range, ApSpec, FieldError, PrimeFieldCtx, ResidueClass, ResidueTable,
};
use crate::stepanov::{
    derive_params, quadratic_gate, verify_lemma_commonsol, StepanovError, SystemSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Stepanov(#[from] StepanovError),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KMode {
    /// Every divisor k >= 2 of p - 1.
    AllDivisors,
    /// Only k equal to this value (skipping primes where it does not divide p - 1).
    Fixed(u64),
    /// Distinct prime divisors of p - 1 (the default; fast).
    PrimeDivisorsOnly,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanConfig {
    /// Half-open interval [prime_lo, prime_hi).
    pub prime_lo: u64,
    pub prime_hi: u64,
    pub k_mode: KMode,
    /// (b, c) pairs to scan.
    pub ap_grid: Vec<(u64, u64)>,
    pub rng_seed: u64,
    /// Worker count; 0 means the rayon default.
    pub jobs: usize,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<(), ScanError> {
        if self.prime_lo < 5 {
            return Err(ScanError::InvalidConfig(
                "prime range must start at 5 or above".into(),
            ));
        }
        if self.prime_hi <= self.prime_lo {
            return Err(ScanError::InvalidConfig("empty prime range".into()));
        }
        if self.ap_grid.is_empty() {
            return Err(ScanError::InvalidConfig("ap_grid must be nonempty".into()));
        }
        if self.ap_grid.iter().any(|&(b, _)| b == 0) {
            return Err(ScanError::InvalidConfig("step b must be >= 1".into()));
        }
        Ok(())
    }

    fn ks_for(&self, ctx: &PrimeFieldCtx) -> Vec<u64> {
        match self.k_mode {
            KMode::AllDivisors => ctx
                .divisors_p_minus_1()
                .into_iter()
                .filter(|&k| k >= 2)
                .collect(),
            KMode::Fixed(k) => {
                if k >= 2 && (ctx.p() - 1) % k == 0 {
                    vec![k]
                } else {
                    vec![]
                }
            }
            KMode::PrimeDivisorsOnly => ctx.prime_divisors_p_minus_1(),
        }
    }

    fn sorted_grid(&self) -> Vec<(u64, u64)> {
        let mut g = self.ap_grid.clone();
        g.sort_unstable();
        g.dedup();
        g
    }

    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        if self.jobs == 0 {
            f()
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.jobs)
                .build()
                .expect("thread pool")
                .install(f)
        }
    }
}

/// Largest u with 5 u^2 <= q.
fn floor_sqrt_div5(q: u128) -> u64 {
    let mut u = ((q as f64 / 5.0).sqrt()) as u64;
    while 5 * (u as u128 + 1) * (u as u128 + 1) <= q {
        u += 1;
    }
    while u > 0 && 5 * (u as u128) * (u as u128) > q {
        u -= 1;
    }
    u
}

/// Largest integer <= 7/sqrt(5) * b * sqrt(t) + 4b + c, exactly.
///
/// An integer L satisfies L <= 7/sqrt(5)*b*sqrt(t) + 4b + c iff
/// L <= this value, so the floor form keeps `holds` an exact comparison.
pub fn theorem_bound_floor(b: u64, c: u64, t: u64) -> u64 {
    4 * b + c + floor_sqrt_div5(49 * b as u128 * b as u128 * t as u128)
}

/// Largest integer <= 7/sqrt(5) * sqrt(t) + 4, exactly.
pub fn corollary_bound_floor(t: u64) -> u64 {
    4 + floor_sqrt_div5(49 * t as u128)
}

fn brauer_bound(p: u64) -> f64 {
    (2.0 * p as f64).sqrt() + 2.0
}

fn hudson_bound(p: u64, b: u64) -> f64 {
    let (p, b) = (p as f64, b as f64);
    2f64.powf(2.75) * b.powf(2.5) * p.powf(0.4) + 6.0 * b.powi(3) * p.powf(0.2) + 2.0 * b * b
}

/// One (p, k, b, c) cell of the least-non-residue scan.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BoundRow {
    pub p: u64,
    pub k: u64,
    pub b: u64,
    pub c: u64,
    pub t: u64,
    pub least_index: u64,
    pub least_value: u64,
    pub thm_bound: u64,
    pub brauer_bound: f64,
    pub hudson_bound: f64,
    pub holds: bool,
    pub margin: i64,
    pub beats_brauer: bool,
    pub beats_hudson: bool,
}

pub fn scan_theorem(config: &ScanConfig) -> Result<Vec<BoundRow>, ScanError> {
    config.validate()?;
    let primes = primes_in_range(config.prime_lo, config.prime_hi);
    let grid = config.sorted_grid();
    let rows: Vec<Vec<BoundRow>> = config.install(|| {
        primes
            .par_iter()
            .map(|&p| {
                let ctx = PrimeFieldCtx::new(p).expect("sieve yields primes");
                let mut out = Vec::new();
                for k in config.ks_for(&ctx) {
                    let table = ResidueTable::new(&ctx, k).expect("k divides p - 1");
                    let t = (p - 1) / k;
                    for &(b, c) in &grid {
                        let ap = ApSpec::new(b, c, &ctx).expect("b >= 1, b < p after reduction");
                        let hit = table.least_nonresidue_in_ap(ap).expect("k >= 2");
                        let least_value = hit.value as u64;
                        let thm_bound = theorem_bound_floor(b, c % p, t);
                        let brauer = brauer_bound(p);
                        let hudson = hudson_bound(p, b);
                        out.push(BoundRow {
                            p,
                            k,
                            b,
                            c,
                            t,
                            least_index: hit.index,
                            least_value,
                            thm_bound,
                            brauer_bound: brauer,
                            hudson_bound: hudson,
                            holds: least_value <= thm_bound,
                            margin: thm_bound as i64 - least_value as i64,
                            beats_brauer: (thm_bound as f64) < brauer,
                            beats_hudson: (thm_bound as f64) < hudson,
                        });
                    }
                }
                out
            })
            .collect()
    });
    Ok(rows.into_iter().flatten().collect())
}

/// One (p, k, b, c) cell of the run-length scan.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunRow {
    pub p: u64,
    pub k: u64,
    pub b: u64,
    pub c: u64,
    pub t: u64,
    pub residue_run: u64,
    pub nonresidue_run: u64,
    /// Longest run of terms sharing one power-character value. This is what
    /// the run-length bound actually controls: a run of r terms with a common
    /// character theta forms common roots of {(x + a_i)^t - theta}. Raw
    /// non-residue runs for k > 2 mix characters and can be far longer (for
    /// p = 23, k = 11 the non-residues form one run of 20).
    pub class_run: u64,
    pub run_bound: u64,
    pub holds: bool,
}

pub fn scan_corollary(config: &ScanConfig) -> Result<Vec<RunRow>, ScanError> {
    config.validate()?;
    let primes = primes_in_range(config.prime_lo, config.prime_hi);
    let grid = config.sorted_grid();
    let rows: Vec<Vec<RunRow>> = config.install(|| {
        primes
            .par_iter()
            .map(|&p| {
                let ctx = PrimeFieldCtx::new(p).expect("sieve yields primes");
                let mut out = Vec::new();
                for k in config.ks_for(&ctx) {
                    let table = ResidueTable::new(&ctx, k).expect("k divides p - 1");
                    let t = (p - 1) / k;
                    let run_bound = corollary_bound_floor(t);
                    for &(b, c) in &grid {
                        let ap = ApSpec::new(b, c, &ctx).expect("valid ap");
                        let residue_run = table.longest_run_in_ap(ap, ResidueClass::Residue);
                        let nonresidue_run = table.longest_run_in_ap(ap, ResidueClass::NonResidue);
                        let class_run = table.longest_class_run_in_ap(ap);
                        debug_assert!(residue_run <= class_run);
                        debug_assert!(k != 2 || nonresidue_run <= class_run);
                        out.push(RunRow {
                            p,
                            k,
                            b,
                            c,
                            t,
                            residue_run,
                            nonresidue_run,
                            class_run,
                            run_bound,
                            holds: class_run <= run_bound,
                        });
                    }
                }
                out
            })
            .collect()
    });
    Ok(rows.into_iter().flatten().collect())
}

/// One randomized system checked against the construction.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct LemmaRow {
    pub p: u64,
    pub k: u64,
    pub t: u64,
    pub r: u64,
    pub common_roots: u64,
    pub f_degree: u64,
    pub count_bound: u64,
    pub multiplicity_ok: bool,
    pub stated_bound_holds: bool,
    pub pass: bool,
    /// |nu(S)| * (r - 1) / t, for tightness analysis.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaScanReport {
    pub rows: Vec<LemmaRow>,
    pub samples: usize,
    pub failures: usize,
    pub max_ratio: f64,
}

/// Knobs specific to the randomized system scan.
#[derive(Debug, Clone, Copy)]
pub struct LemmaScanOptions {
    /// Skip (p, k) pairs whose t = (p-1)/k falls outside [min_t, max_t].
    pub min_t: u64,
    pub max_t: u64,
    pub samples_per_prime: usize,
}

impl Default for LemmaScanOptions {
    fn default() -> Self {
        Self {
            min_t: 4,
            max_t: 120,
            samples_per_prime: 1,
        }
    }
}

fn sample_system(ctx: &PrimeFieldCtx, t: u64, k: u64, rng: &mut ChaCha8Rng, residue_targets: bool) -> Option<SystemSpec> {
    let p = ctx.p();
    // r anywhere inside the quadratic gate, kept only if Condition 3 verifies
    let candidates: Vec<u64> = (2..=64)
        .take_while(|&r| quadratic_gate(t, r))
        .filter(|&r| derive_params(t, r).is_ok_and(|p| p.feasible))
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let r = candidates[rng.gen_range(0..candidates.len())];
    let mut shifts: Vec<u64> = Vec::with_capacity(r as usize);
    while shifts.len() < r as usize {
        let a = rng.gen_range(0..p);
        if !shifts.contains(&a) {
            shifts.push(a);
        }
    }
    let targets: Vec<u64> = (0..r)
        .map(|_| {
            if residue_targets {
                let rho = rng.gen_range(1..p);
                ctx.pow(rho, k)
            } else {
                rng.gen_range(1..p)
            }
        })
        .collect();
    SystemSpec::new(ctx.clone(), t, shifts, targets).ok()
}

/// Randomized check of the root-count bound across a prime range.
pub fn scan_lemma(config: &ScanConfig, opts: LemmaScanOptions) -> Result<LemmaScanReport, ScanError> {
    config.validate()?;
    let primes = primes_in_range(config.prime_lo, config.prime_hi);
    let rows: Vec<Vec<LemmaRow>> = config.install(|| {
        primes
            .par_iter()
            .map(|&p| {
                let ctx = PrimeFieldCtx::new(p).expect("sieve yields primes");
                let mut out = Vec::new();
                // candidate exponents with p > 2t: every k >= 3, plus k = 2 when
                // p - 1 < p holds trivially (it always does)
                let ks: Vec<u64> = ctx
                    .divisors_p_minus_1()
                    .into_iter()
                    .filter(|&k| k >= 2)
                    .filter(|&k| {
                        let t = (p - 1) / k;
                        t >= opts.min_t && t <= opts.max_t && p > 2 * t
                    })
                    .collect();
                if ks.is_empty() {
                    return out;
                }
                for sample in 0..opts.samples_per_prime {
                    let mut rng = ChaCha8Rng::seed_from_u64(
                        config
                            .rng_seed
                            .wrapping_mul(0x9e3779b97f4a7c15)
                            .wrapping_add(p)
                            .wrapping_add((sample as u64) << 32),
                    );
                    let k = ks[rng.gen_range(0..ks.len())];
                    let t = (p - 1) / k;
                    // half residue-structured targets, half fully random
                    let residue_targets = sample % 2 == 0;
                    let Some(sys) = sample_system(&ctx, t, k, &mut rng, residue_targets) else {
                        continue;
                    };
                    let report = verify_lemma_commonsol(&sys).expect("feasible sampled system");
                    let nu = report.common_roots.len() as u64;
                    out.push(LemmaRow {
                        p,
                        k,
                        t,
                        r: sys.r(),
                        common_roots: nu,
                        f_degree: report.f_degree,
                        count_bound: report.count_bound,
                        multiplicity_ok: report.multiplicity_ok,
                        stated_bound_holds: report.stated_bound_holds,
                        pass: report.pass,
                        ratio: nu as f64 * (sys.r() - 1) as f64 / t as f64,
                    });
                }
                out
            })
            .collect()
    });
    let rows: Vec<LemmaRow> = rows.into_iter().flatten().collect();
    let samples = rows.len();
    let failures = rows.iter().filter(|r| !r.pass).count();
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0f64, f64::max);
    Ok(LemmaScanReport {
        rows,
        samples,
        failures,
        max_ratio,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub violations: usize,
    pub max_margin_ratio: f64,
}

#[derive(Debug, Serialize)]
struct JsonReport<'a, R: Serialize> {
    config: &'a ScanConfig,
    rows: &'a [R],
    summary: Summary,
}

pub fn theorem_summary(rows: &[BoundRow]) -> Summary {
    Summary {
        violations: rows.iter().filter(|r| !r.holds).count(),
        max_margin_ratio: rows
            .iter()
            .map(|r| r.least_value as f64 / r.thm_bound as f64)
            .fold(0.0, f64::max),
    }
}

pub fn corollary_summary(rows: &[RunRow]) -> Summary {
    Summary {
        violations: rows.iter().filter(|r| !r.holds).count(),
        max_margin_ratio: rows
            .iter()
            .map(|r| r.class_run as f64 / r.run_bound as f64)
            .fold(0.0, f64::max),
    }
}

pub fn lemma_summary(report: &LemmaScanReport) -> Summary {
    Summary {
        violations: report.failures,
        max_margin_ratio: report.max_ratio,
    }
}

/// Rows as CSV with a header, one row per line, integers in decimal.
pub fn csv_string<R: Serialize>(rows: &[R]) -> Result<String, ScanError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| {
        ScanError::InvalidConfig(format!("csv flush: {e}"))
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// {config, rows, summary} as pretty JSON.
pub fn json_string<R: Serialize>(
    config: &ScanConfig,
    rows: &[R],
    summary: Summary,
) -> String {
    let report = JsonReport {
        config,
        rows,
        summary,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("serializable report");
    s.push('\n');
    s
}
