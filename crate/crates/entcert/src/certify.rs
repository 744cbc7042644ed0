//! Certification verdicts with statistical margins, and parameter sweeps
//! with Monte Carlo count-noise bands.
//!
//! The test is one-sided: exceeding log₂d certifies entanglement and
//! reaching 2log₂d certifies maximal entanglement, but failing either
//! proves nothing, so the weakest verdict is `Inconclusive`, never
//! "separable".

use rayon::prelude::*;
use serde::Serialize;

use crate::bases::{BasisPair, PairSet};
use crate::error::{Error, Result};
use crate::measure::{joint_probabilities, normalize_counts, simulate_counts, JointProbTable};
use crate::metrics::{
    analytic_mi_sum_rho_c, analytic_mi_sum_werner, default_pearson_values, delta_mi,
    mutual_information, pearson, pearson_values_canonical,
};
use crate::qcore::DensityMatrix;
use crate::states::{self, StateFamily};

/// Certification outcome. Ordered so that a larger verdict is stronger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Inconclusive,
    Entangled,
    MaximallyEntangledConsistent,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Inconclusive => "inconclusive",
            Verdict::Entangled => "entangled",
            Verdict::MaximallyEntangledConsistent => "maximally-entangled-consistent",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which correlation measure backed a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mi,
    /// Pearson-based certification rests on a conjecture for the
    /// entanglement threshold (the maximal-correlation statement is
    /// proven).
    PearsonConjecture,
}

/// The pair of thresholds for a given local dimension.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Thresholds {
    /// Certifies entanglement when strictly exceeded: log₂d.
    pub ent: f64,
    /// Certifies maximal entanglement when reached: 2log₂d.
    pub max: f64,
}

impl Thresholds {
    pub fn mi(d: usize) -> Thresholds {
        let ent = (d as f64).log2();
        Thresholds {
            ent,
            max: 2.0 * ent,
        }
    }

    pub fn pearson() -> Thresholds {
        Thresholds { ent: 1.0, max: 2.0 }
    }
}

fn verdict_with_margin(sum: f64, sigma: f64, thresholds: Thresholds) -> Verdict {
    // strict inequality on the lower edge: sitting exactly at the
    // threshold is inconclusive
    if sum - 2.0 * sigma > thresholds.ent {
        if sum + 2.0 * sigma >= thresholds.max {
            Verdict::MaximallyEntangledConsistent
        } else {
            Verdict::Entangled
        }
    } else {
        Verdict::Inconclusive
    }
}

/// Verdict for a mutual-information sum with a 2σ margin:
/// entangled iff sum − 2σ > log₂d; additionally consistent with maximal
/// entanglement iff the 2σ interval covers 2log₂d.
pub fn certify_mi(sum: f64, sigma: f64, d: usize) -> Verdict {
    verdict_with_margin(sum, sigma, Thresholds::mi(d))
}

/// Same margin logic against the Pearson thresholds 1 and 2. The
/// entanglement statement is conjectural; reports carry that flag.
pub fn certify_pearson(sum: f64, sigma: f64) -> Verdict {
    verdict_with_margin(sum, sigma, Thresholds::pearson())
}

/// Full certification record for one (family, d, p) point.
#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub family: StateFamily,
    pub d: usize,
    pub p: f64,
    pub pair_set: PairSet,
    pub pair_labels: Vec<String>,
    pub method: Method,
    /// Per-pair mutual informations (bits) or Pearson coefficients.
    pub per_pair: Vec<f64>,
    pub sum: f64,
    pub sigma: f64,
    /// True when computed from exact tables (σ = 0), false when from one
    /// simulated counts table per pair.
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_total: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub threshold_ent: f64,
    pub threshold_max: f64,
    pub verdict: Verdict,
    /// True when the certification criterion itself is conjectural
    /// (Pearson) rather than proven (mutual information).
    pub conjecture: bool,
    /// False when qudit outcome values 0..d−1 had to be used for the
    /// Pearson coefficient (no canonical assignment exists for d > 2).
    pub canonical_values: bool,
}

impl CertificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Short human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "family={} d={} p={}\npairs: {}\nmethod: {}{}\n",
            self.family,
            self.d,
            self.p,
            self.pair_labels.join(", "),
            match self.method {
                Method::Mi => "mutual information",
                Method::PearsonConjecture => "Pearson coefficient (conjectured threshold)",
            },
            if self.exact {
                " [exact tables]"
            } else {
                " [simulated counts]"
            }
        ));
        for (label, v) in self.pair_labels.iter().zip(&self.per_pair) {
            out.push_str(&format!("  {label}: {v:.6}\n"));
        }
        out.push_str(&format!(
            "sum = {:.6} ± {:.6} (2σ margin), thresholds: entangled > {:.6}, maximal = {:.6}\n",
            self.sum,
            2.0 * self.sigma,
            self.threshold_ent,
            self.threshold_max
        ));
        if self.method == Method::PearsonConjecture && !self.canonical_values {
            out.push_str("note: non-canonical outcome values 0..d-1 used for d > 2\n");
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

fn exact_tables(rho: &DensityMatrix, pairs: &[BasisPair]) -> Result<Vec<JointProbTable>> {
    pairs.iter().map(|p| joint_probabilities(rho, p)).collect()
}

/// Certify one state with the mutual-information method.
///
/// Exact mode computes the sums from exact tables with σ = 0. Sampled
/// mode simulates one Poissonian counts table per pair (budget `n_total`
/// each) and combines the per-pair propagated uncertainties linearly.
/// Requires exactly two pairs: the thresholds are proven for a single
/// pair of complementary observables.
pub fn certify_state_mi(
    family: StateFamily,
    d: usize,
    p: f64,
    pair_set: PairSet,
    sampling: Option<(u64, u64)>, // (n_total, seed)
) -> Result<CertificationReport> {
    let pairs = pair_set.build(d)?;
    if pairs.len() != 2 {
        return Err(Error::Param(format!(
            "certification needs exactly 2 complementary pairs, pair set '{pair_set}' has {}",
            pairs.len()
        )));
    }
    let rho = states::build(family, d, p)?;
    let tables = exact_tables(&rho, &pairs)?;
    let thresholds = Thresholds::mi(d);

    let (per_pair, sigma, exact, n_total, seed) = match sampling {
        None => {
            let mi: Vec<f64> = tables.iter().map(mutual_information).collect();
            (mi, 0.0, true, None, None)
        }
        Some((n_total, seed)) => {
            let mut mi = Vec::with_capacity(tables.len());
            let mut sigma = 0.0;
            for (k, table) in tables.iter().enumerate() {
                let counts = simulate_counts(table, n_total, mix_seed(seed, k as u64, 0, 0))?;
                let norm = normalize_counts(&counts)?;
                mi.push(mutual_information(&norm.probs));
                sigma += delta_mi(&counts)?;
            }
            (mi, sigma, false, Some(n_total), Some(seed))
        }
    };
    let sum = per_pair.iter().sum();
    Ok(CertificationReport {
        family,
        d,
        p,
        pair_set,
        pair_labels: pairs.iter().map(|p| p.label()).collect(),
        method: Method::Mi,
        per_pair,
        sum,
        sigma,
        exact,
        n_total,
        seed,
        threshold_ent: thresholds.ent,
        threshold_max: thresholds.max,
        verdict: certify_mi(sum, sigma, d),
        conjecture: false,
        canonical_values: true,
    })
}

/// Certify one state with the Pearson method; mirrors
/// [`certify_state_mi`] but sums Pearson coefficients against the
/// thresholds 1 and 2. In sampled mode σ is the std dev of the sum over
/// `trials` repeated count simulations.
pub fn certify_state_pearson(
    family: StateFamily,
    d: usize,
    p: f64,
    pair_set: PairSet,
    sampling: Option<(u64, u32, u64)>, // (n_total, trials, seed)
) -> Result<CertificationReport> {
    let pairs = pair_set.build(d)?;
    if pairs.len() != 2 {
        return Err(Error::Param(format!(
            "certification needs exactly 2 complementary pairs, pair set '{pair_set}' has {}",
            pairs.len()
        )));
    }
    let rho = states::build(family, d, p)?;
    let tables = exact_tables(&rho, &pairs)?;
    let values = default_pearson_values(d);
    let thresholds = Thresholds::pearson();

    let exact_coeffs: Vec<f64> = tables
        .iter()
        .map(|t| pearson(t, &values, &values))
        .collect::<Result<_>>()?;

    let (per_pair, sigma, exact, n_total, seed) = match sampling {
        None => (exact_coeffs, 0.0, true, None, None),
        Some((n_total, trials, seed)) => {
            if trials < 2 {
                return Err(Error::Param("sampled Pearson needs trials >= 2".into()));
            }
            let mut sums = Vec::with_capacity(trials as usize);
            let mut last = exact_coeffs.clone();
            for t in 0..trials {
                let mut coeffs = Vec::with_capacity(tables.len());
                for (k, table) in tables.iter().enumerate() {
                    let counts =
                        simulate_counts(table, n_total, mix_seed(seed, k as u64, t as u64, 1))?;
                    let norm = normalize_counts(&counts)?;
                    coeffs.push(pearson(&norm.probs, &values, &values)?);
                }
                sums.push(coeffs.iter().sum::<f64>());
                last = coeffs;
            }
            let mean = sums.iter().sum::<f64>() / sums.len() as f64;
            let var =
                sums.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (sums.len() - 1) as f64;
            (last, var.sqrt(), false, Some(n_total), Some(seed))
        }
    };
    let sum = per_pair.iter().sum();
    Ok(CertificationReport {
        family,
        d,
        p,
        pair_set,
        pair_labels: pairs.iter().map(|p| p.label()).collect(),
        method: Method::PearsonConjecture,
        per_pair,
        sum,
        sigma,
        exact,
        n_total,
        seed,
        threshold_ent: thresholds.ent,
        threshold_max: thresholds.max,
        verdict: certify_pearson(sum, sigma),
        conjecture: true,
        canonical_values: pearson_values_canonical(d),
    })
}

/// One grid point of a sweep: exact values plus the Monte Carlo band.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub family: StateFamily,
    pub d: usize,
    pub p: f64,
    pub pair_set: PairSet,
    pub pair_labels: Vec<String>,
    /// Exact per-pair mutual informations (bits).
    pub mi_per_pair: Vec<f64>,
    /// Exact sum over all pairs.
    pub sum: f64,
    /// Closed-form value where one exists (rho_c, rho_w with two pairs).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic_sum: Option<f64>,
    /// Mean of the simulated per-trial sums.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sim_mean: Option<f64>,
    /// Std dev of the simulated per-trial sums (band = mean ± 2σ).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub threshold_ent: f64,
    pub threshold_max: f64,
    /// Two-pair runs only; multi-basis sums have no certified threshold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

/// Sweep configuration; `exact` skips the Monte Carlo trials.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: StateFamily,
    pub d: usize,
    pub p_grid: Vec<f64>,
    pub pair_set: PairSet,
    pub n_total: u64,
    pub trials: u32,
    pub seed: u64,
    pub exact: bool,
}

impl SweepConfig {
    pub fn new(family: StateFamily, d: usize, p_grid: Vec<f64>) -> SweepConfig {
        SweepConfig {
            family,
            d,
            p_grid,
            pair_set: PairSet::default_for(d),
            n_total: crate::measure::DEFAULT_N_TOTAL,
            trials: 40,
            seed: 0,
            exact: false,
        }
    }
}

/// Evenly spaced grid start, start+step, … up to stop (inclusive within
/// half a step).
pub fn p_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step <= 0.0 || !step.is_finite() {
        return Err(Error::Param(format!("grid step {step} must be > 0")));
    }
    if stop < start {
        return Err(Error::Param(format!("grid stop {stop} < start {start}")));
    }
    let n = ((stop - start) / step).round() as usize;
    let mut grid = Vec::with_capacity(n + 1);
    let mut k = 0usize;
    loop {
        let p = start + k as f64 * step;
        if p > stop + step * 0.5 {
            break;
        }
        grid.push(p.min(stop));
        k += 1;
    }
    Ok(grid)
}

/// Deterministic per-(pair, point, trial) seed derivation (splitmix-style
/// finalizer), so results do not depend on scheduling.
pub(crate) fn mix_seed(seed: u64, a: u64, b: u64, c: u64) -> u64 {
    let mut x = seed
        ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ b.wrapping_mul(0xBF58_476D_1CE4_E5B9)
        ^ c.wrapping_mul(0x94D0_49BB_1331_11EB);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn analytic_for(family: StateFamily, pair_count: usize, d: usize, p: f64) -> Option<f64> {
    if pair_count != 2 {
        return None;
    }
    match family {
        StateFamily::RhoC => Some(analytic_mi_sum_rho_c(d, p)),
        StateFamily::RhoW => Some(analytic_mi_sum_werner(d, p)),
        StateFamily::MaxEntangled => Some(2.0 * (d as f64).log2()),
        _ => None,
    }
}

/// Run a parameter sweep: per grid point the exact per-pair mutual
/// informations, the closed-form value where one exists, and (unless
/// `exact`) `trials` simulated counting runs giving a mean ± 2σ band.
///
/// Grid points run in parallel; every trial draws from a stream derived
/// from (seed, point, trial, pair), so output is reproducible for a fixed
/// seed regardless of thread count.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    if !config.exact && config.trials < 2 {
        return Err(Error::Param(format!(
            "sweep needs trials >= 2, got {}",
            config.trials
        )));
    }
    if config.p_grid.is_empty() {
        return Err(Error::Param("empty p grid".into()));
    }
    let pairs = config.pair_set.build(config.d)?;
    let thresholds = Thresholds::mi(config.d);
    let labels: Vec<String> = pairs.iter().map(|p| p.label()).collect();

    config
        .p_grid
        .par_iter()
        .enumerate()
        .map(|(point_idx, &p)| {
            let rho = states::build(config.family, config.d, p)?;
            let tables = exact_tables(&rho, &pairs)?;
            let mi_per_pair: Vec<f64> = tables.iter().map(mutual_information).collect();
            let sum: f64 = mi_per_pair.iter().sum();
            let analytic_sum = analytic_for(config.family, pairs.len(), config.d, p);

            let (sim_mean, sigma) = if config.exact {
                (None, None)
            } else {
                let mut sums = Vec::with_capacity(config.trials as usize);
                for trial in 0..config.trials {
                    let mut s = 0.0;
                    for (k, table) in tables.iter().enumerate() {
                        let stream =
                            mix_seed(config.seed, point_idx as u64, trial as u64, k as u64);
                        let counts = simulate_counts(table, config.n_total, stream)?;
                        let norm = normalize_counts(&counts)?;
                        s += mutual_information(&norm.probs);
                    }
                    sums.push(s);
                }
                let mean = sums.iter().sum::<f64>() / sums.len() as f64;
                let var =
                    sums.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (sums.len() - 1) as f64;
                (Some(mean), Some(var.sqrt()))
            };

            let verdict = if pairs.len() == 2 {
                Some(match (sim_mean, sigma) {
                    (Some(m), Some(s)) => certify_mi(m, s, config.d),
                    _ => certify_mi(sum, 0.0, config.d),
                })
            } else {
                None
            };

            Ok(SweepRecord {
                family: config.family,
                d: config.d,
                p,
                pair_set: config.pair_set,
                pair_labels: labels.clone(),
                mi_per_pair,
                sum,
                analytic_sum,
                sim_mean,
                sigma,
                threshold_ent: thresholds.ent,
                threshold_max: thresholds.max,
                verdict,
            })
        })
        .collect()
}

/// Stable CSV header for sweep records.
pub const SWEEP_CSV_HEADER: &str =
    "family,d,p,pair_labels,mi_ab,mi_cd,sum,sigma,analytic_sum,threshold,verdict";

fn opt_to_csv(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One header row then one row per grid point. `mi_ab`/`mi_cd` are the
/// first two per-pair values; `sum` covers all pairs of the set;
/// `threshold` is the entanglement threshold log₂d. Missing values
/// (exact-mode σ, no closed form, multi-basis verdict) are empty cells.
pub fn sweep_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.family,
            r.d,
            r.p,
            r.pair_labels.join(";"),
            r.mi_per_pair[0],
            r.mi_per_pair[1],
            r.sum,
            opt_to_csv(r.sigma),
            opt_to_csv(r.analytic_sum),
            r.threshold_ent,
            r.verdict.map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    out
}

pub fn sweep_to_json(records: &[SweepRecord]) -> String {
    serde_json::to_string_pretty(records).expect("sweep serialization cannot fail")
}
