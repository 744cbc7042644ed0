//! Joint outcome statistics: exact probability tables for a state under
//! a basis pair, Poissonian coincidence-count simulation, and count
//! normalization with propagated per-cell uncertainties.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::bases::BasisPair;
use crate::error::{Error, Result};
use crate::qcore::DensityMatrix;

/// Probability-sum drift beyond which a table signals a broken state or
/// basis instead of round-off.
pub const SUM_TOL: f64 = 1e-8;

/// Negative cells larger than this in magnitude are treated as errors;
/// smaller ones are clipped to zero.
pub const CLIP_TOL: f64 = 1e-12;

/// Default total coincidence count per basis pair
/// (order of 800 counts/s × 10 s integration).
pub const DEFAULT_N_TOTAL: u64 = 8000;

/// d×d table of joint outcome probabilities, row = system-1 outcome.
/// Deserialization re-runs the construction checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawTable")]
pub struct JointProbTable {
    dim: usize,
    /// Row-major cells, index a·d + b.
    cells: Vec<f64>,
    basis1: String,
    basis2: String,
}

#[derive(Deserialize)]
struct RawTable {
    dim: usize,
    cells: Vec<f64>,
    basis1: String,
    basis2: String,
}

impl TryFrom<RawTable> for JointProbTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        JointProbTable::new(raw.dim, raw.cells, raw.basis1, raw.basis2)
    }
}

impl JointProbTable {
    /// Build from raw cells: clips tiny negatives, renormalizes small
    /// drift of the total, errors when the total is off by more than
    /// [`SUM_TOL`].
    pub fn new(
        dim: usize,
        mut cells: Vec<f64>,
        basis1: impl Into<String>,
        basis2: impl Into<String>,
    ) -> Result<Self> {
        if cells.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {}x{} cells, got {}",
                dim,
                dim,
                cells.len()
            )));
        }
        for (i, c) in cells.iter_mut().enumerate() {
            if !c.is_finite() {
                return Err(Error::Numerical(format!("cell {i} is not finite")));
            }
            if *c < 0.0 {
                if *c < -CLIP_TOL {
                    return Err(Error::Numerical(format!(
                        "cell {i} = {c:.3e} is negative beyond the clip tolerance"
                    )));
                }
                *c = 0.0;
            }
        }
        let sum: f64 = cells.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::Numerical(format!(
                "joint probabilities sum to {sum}, off by more than {SUM_TOL}"
            )));
        }
        for c in cells.iter_mut() {
            *c /= sum;
        }
        Ok(Self {
            dim,
            cells,
            basis1: basis1.into(),
            basis2: basis2.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cell(&self, a: usize, b: usize) -> f64 {
        self.cells[a * self.dim + b]
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn basis1_label(&self) -> &str {
        &self.basis1
    }

    pub fn basis2_label(&self) -> &str {
        &self.basis2
    }

    /// Marginal distribution of the system-1 outcome.
    pub fn marginal1(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|a| (0..self.dim).map(|b| self.cell(a, b)).sum())
            .collect()
    }

    /// Marginal distribution of the system-2 outcome.
    pub fn marginal2(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|b| (0..self.dim).map(|a| self.cell(a, b)).sum())
            .collect()
    }

    /// CSV with metadata comment lines, one header row, then one row per
    /// system-1 outcome.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# basis1={} basis2={}\n", self.basis1, self.basis2);
        out.push_str(&csv_matrix_body(self.dim, |a, b| {
            format!("{}", self.cell(a, b))
        }));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serialization cannot fail")
    }
}

fn csv_matrix_body(dim: usize, cell: impl Fn(usize, usize) -> String) -> String {
    let mut out = String::from("outcome");
    for b in 0..dim {
        out.push_str(&format!(",{b}"));
    }
    out.push('\n');
    for a in 0..dim {
        out.push_str(&format!("{a}"));
        for b in 0..dim {
            out.push(',');
            out.push_str(&cell(a, b));
        }
        out.push('\n');
    }
    out
}

/// Exact joint outcome probabilities
/// p(a, b) = (⟨a| ⊗ ⟨b|) ρ (|a⟩ ⊗ |b⟩) for a basis pair.
///
/// Contracts the system-1 ket first (cost O(d⁵) overall instead of the
/// naive O(d⁶)), verifies each cell is real up to round-off and clips
/// tiny negatives; the finished table must sum to 1 within [`SUM_TOL`].
pub fn joint_probabilities(rho: &DensityMatrix, pair: &BasisPair) -> Result<JointProbTable> {
    let d = rho.local_dim();
    if pair.dim() != d {
        return Err(Error::Dimension(format!(
            "basis pair dim {} does not match state local dim {d}",
            pair.dim()
        )));
    }
    let m = rho.entries();
    let mut cells = vec![0.0f64; d * d];
    let mut partial = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for (a, x) in pair.system1().kets().iter().enumerate() {
        // partial[k, k'] = Σ_{j,j'} x̄[j] ρ[(j,k),(j',k')] x[j']
        partial.fill(Complex64::new(0.0, 0.0));
        for j in 0..d {
            let xj = x.amp(j).conj();
            if xj.norm_sqr() == 0.0 {
                continue;
            }
            for jp in 0..d {
                let w = xj * x.amp(jp);
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..d {
                    let row = j * d + k;
                    for kp in 0..d {
                        partial[(k, kp)] += w * m[(row, jp * d + kp)];
                    }
                }
            }
        }
        for (b, y) in pair.system2().kets().iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                let yk = y.amp(k).conj();
                if yk.norm_sqr() == 0.0 {
                    continue;
                }
                for kp in 0..d {
                    acc += yk * partial[(k, kp)] * y.amp(kp);
                }
            }
            if acc.im.abs() > 1e-10 {
                return Err(Error::Numerical(format!(
                    "probability cell ({a},{b}) has imaginary part {:.3e}",
                    acc.im
                )));
            }
            cells[a * d + b] = acc.re;
        }
    }
    JointProbTable::new(d, cells, pair.system1().label(), pair.system2().label())
}

/// d×d table of simulated coincidence counts. `total` is the realized
/// sum of the cells; `nominal_n` the requested count budget.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawCounts")]
pub struct CountsTable {
    dim: usize,
    counts: Vec<u64>,
    total: u64,
    nominal_n: u64,
    seed: u64,
    basis1: String,
    basis2: String,
}

#[derive(Deserialize)]
struct RawCounts {
    dim: usize,
    counts: Vec<u64>,
    nominal_n: u64,
    seed: u64,
    basis1: String,
    basis2: String,
}

impl TryFrom<RawCounts> for CountsTable {
    type Error = Error;

    fn try_from(raw: RawCounts) -> Result<Self> {
        CountsTable::new(
            raw.dim,
            raw.counts,
            raw.nominal_n,
            raw.seed,
            raw.basis1,
            raw.basis2,
        )
    }
}

impl CountsTable {
    pub fn new(
        dim: usize,
        counts: Vec<u64>,
        nominal_n: u64,
        seed: u64,
        basis1: impl Into<String>,
        basis2: impl Into<String>,
    ) -> Result<Self> {
        if counts.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {}x{} counts, got {}",
                dim,
                dim,
                counts.len()
            )));
        }
        let total = counts.iter().sum();
        Ok(Self {
            dim,
            counts,
            total,
            nominal_n,
            seed,
            basis1: basis1.into(),
            basis2: basis2.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self, a: usize, b: usize) -> u64 {
        self.counts[a * self.dim + b]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Realized total Σ counts.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn nominal_n(&self) -> u64 {
        self.nominal_n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn basis1_label(&self) -> &str {
        &self.basis1
    }

    pub fn basis2_label(&self) -> &str {
        &self.basis2
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# basis1={} basis2={} seed={} n={}\n",
            self.basis1, self.basis2, self.seed, self.nominal_n
        );
        out.push_str(&csv_matrix_body(self.dim, |a, b| {
            format!("{}", self.count(a, b))
        }));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("counts serialization cannot fail")
    }
}

/// Draw each cell independently as Poisson(n_total · p_cell) from a
/// ChaCha stream seeded with `seed`; identical inputs give identical
/// tables. The realized total is the sum of the draws, not `n_total`.
pub fn simulate_counts(table: &JointProbTable, n_total: u64, seed: u64) -> Result<CountsTable> {
    if n_total < 1 {
        return Err(Error::Param("n_total must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = table.dim();
    let mut counts = Vec::with_capacity(d * d);
    for &p in table.cells() {
        let lambda = n_total as f64 * p;
        if lambda <= 0.0 {
            counts.push(0);
        } else {
            let draw: f64 = Poisson::new(lambda)
                .map_err(|e| Error::Param(format!("bad Poisson rate {lambda}: {e}")))?
                .sample(&mut rng);
            counts.push(draw.round().max(0.0) as u64);
        }
    }
    CountsTable::new(
        d,
        counts,
        n_total,
        seed,
        table.basis1_label(),
        table.basis2_label(),
    )
}

/// A normalized counts table with one propagated uncertainty per cell.
#[derive(Debug, Clone)]
pub struct NormalizedCounts {
    pub probs: JointProbTable,
    /// Δp per cell, row-major like the table.
    pub dp: Vec<f64>,
}

/// Normalize counts to probabilities p_i = N_i/N_tot with linear
/// relative-error propagation Δp_i = p_i(ΔN_i/N_i + ΔN_tot/N_tot),
/// ΔN = √N. Zero-count cells get p = 0 and Δp = 0 (their ΔN_i
/// contribution vanishes), accepted as a small desk-scale bias.
pub fn normalize_counts(c: &CountsTable) -> Result<NormalizedCounts> {
    let n_tot = c.total();
    if n_tot == 0 {
        return Err(Error::EmptyData("counts table has zero total".into()));
    }
    let n_tot_f = n_tot as f64;
    let rel_tot = 1.0 / n_tot_f.sqrt();
    let mut cells = Vec::with_capacity(c.counts().len());
    let mut dp = Vec::with_capacity(c.counts().len());
    for &n in c.counts() {
        if n == 0 {
            cells.push(0.0);
            dp.push(0.0);
        } else {
            let n_f = n as f64;
            let p = n_f / n_tot_f;
            cells.push(p);
            dp.push(p * (1.0 / n_f.sqrt() + rel_tot));
        }
    }
    let probs = JointProbTable::new(c.dim(), cells, c.basis1_label(), c.basis2_label())?;
    Ok(NormalizedCounts { probs, dp })
}
