//! Correlation metrics over joint outcome tables: mutual information and
//! Pearson coefficient, closed-form oracles for two state families,
//! count-noise error propagation, and the d = 2 comparison witness.
//!
//! Conventions: log base 2 everywhere, 0·log 0 = 0.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::bases::BasisPair;
use crate::error::{Error, Result};
use crate::measure::{joint_probabilities, normalize_counts, CountsTable, JointProbTable};
use crate::qcore::DensityMatrix;

fn xlog2(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// Mutual information of a joint table in bits:
/// I = Σ_{a,b} p(a,b) log₂[ p(a,b) / (p(a)·p(b)) ], marginals taken from
/// the table itself. Degenerate cells follow the 0·log 0 convention.
pub fn mutual_information(table: &JointProbTable) -> f64 {
    let d = table.dim();
    let m1 = table.marginal1();
    let m2 = table.marginal2();
    let mut bits = 0.0;
    for a in 0..d {
        for b in 0..d {
            let p = table.cell(a, b);
            if p > 0.0 {
                bits += p * (p / (m1[a] * m2[b])).log2();
            }
        }
    }
    bits
}

/// Per-pair mutual information and its total for a list of settings.
#[derive(Debug, Clone, Serialize)]
pub struct MiSum {
    pub per_pair: Vec<f64>,
    pub sum: f64,
}

/// Measure `rho` in every pair and sum the mutual informations.
/// Needs at least two pairs of the state's dimension.
pub fn mi_sum(rho: &DensityMatrix, pairs: &[BasisPair]) -> Result<MiSum> {
    if pairs.len() < 2 {
        return Err(Error::Param(format!(
            "mi_sum needs at least 2 basis pairs, got {}",
            pairs.len()
        )));
    }
    let mut per_pair = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let table = joint_probabilities(rho, pair)?;
        per_pair.push(mutual_information(&table));
    }
    let sum = per_pair.iter().sum();
    Ok(MiSum { per_pair, sum })
}

/// Closed-form mutual-information sum (computational + any complementary
/// partner) for the family mixing maximal entanglement with computational
/// classical correlations:
/// log₂d + ((1−p)(d−1)/d)·log₂(1−p) + ((1+(d−1)p)/d)·log₂(1+(d−1)p),
/// with the 0·log 0 limits at p ∈ {0, 1}.
pub fn analytic_mi_sum_rho_c(d: usize, p: f64) -> f64 {
    let df = d as f64;
    (df).log2() + (df - 1.0) / df * xlog2(1.0 - p) + xlog2(1.0 + (df - 1.0) * p) / df
}

/// Closed-form mutual-information sum for the Werner family:
/// 2·[ ((1+(d−1)p)/d)·log₂(1+(d−1)p) + ((1−p)(d−1)/d)·log₂(1−p) ].
pub fn analytic_mi_sum_werner(d: usize, p: f64) -> f64 {
    let df = d as f64;
    2.0 * (xlog2(1.0 + (df - 1.0) * p) / df + (df - 1.0) / df * xlog2(1.0 - p))
}

/// Pearson coefficient of the joint distribution induced by assigning
/// real outcome values to each side:
/// C = (⟨AB⟩ − ⟨A⟩⟨B⟩) / (σ_A σ_B).
///
/// Errors when either marginal has zero variance (correlation undefined).
pub fn pearson(table: &JointProbTable, values1: &[f64], values2: &[f64]) -> Result<f64> {
    let d = table.dim();
    if values1.len() != d || values2.len() != d {
        return Err(Error::Dimension(format!(
            "outcome value lists must have length {d}"
        )));
    }
    let m1 = table.marginal1();
    let m2 = table.marginal2();
    let mean1: f64 = m1.iter().zip(values1).map(|(p, v)| p * v).sum();
    let mean2: f64 = m2.iter().zip(values2).map(|(p, v)| p * v).sum();
    let var1: f64 = m1
        .iter()
        .zip(values1)
        .map(|(p, v)| p * (v - mean1).powi(2))
        .sum();
    let var2: f64 = m2
        .iter()
        .zip(values2)
        .map(|(p, v)| p * (v - mean2).powi(2))
        .sum();
    if var1 <= 1e-14 || var2 <= 1e-14 {
        return Err(Error::Degenerate(format!(
            "marginal variances ({var1:.3e}, {var2:.3e}) too small for a Pearson coefficient"
        )));
    }
    let mut cov = 0.0;
    for a in 0..d {
        for b in 0..d {
            cov += table.cell(a, b) * (values1[a] - mean1) * (values2[b] - mean2);
        }
    }
    Ok(cov / (var1.sqrt() * var2.sqrt()))
}

/// Default outcome values per side: ±1 for d = 2 (the canonical spin
/// convention); 0..d−1 otherwise (a non-canonical choice — no standard
/// assignment exists for qudits, see [`pearson_values_canonical`]).
pub fn default_pearson_values(d: usize) -> Vec<f64> {
    if d == 2 {
        vec![1.0, -1.0]
    } else {
        (0..d).map(|v| v as f64).collect()
    }
}

/// Whether [`default_pearson_values`] is the canonical ±1 assignment.
pub fn pearson_values_canonical(d: usize) -> bool {
    d == 2
}

/// Propagated uncertainty of a table's mutual information from Poissonian
/// counting noise: ΔI = (1/ln 2) Σ_i Δp_i·|ln p_i + 1|, with Δp from
/// [`normalize_counts`]; zero-count cells contribute nothing.
///
/// The absolute value is taken per term for a conservative bound (the
/// propagation otherwise cancels terms of opposite sign).
pub fn delta_mi(counts: &CountsTable) -> Result<f64> {
    let norm = normalize_counts(counts)?;
    let ln2 = std::f64::consts::LN_2;
    let mut acc = 0.0;
    for (p, dp) in norm.probs.cells().iter().zip(norm.dp.iter()) {
        if *p > 0.0 {
            acc += dp * (p.ln() + 1.0).abs();
        }
    }
    Ok(acc / ln2)
}

/// Expectation value Tr(Wρ) of the two-qubit comparison witness
/// W = I − σ_z⊗σ_z − σ_x⊗σ_x; a negative value certifies entanglement.
pub fn witness_expectation(rho: &DensityMatrix) -> Result<f64> {
    if rho.local_dim() != 2 {
        return Err(Error::Dimension(format!(
            "the witness is defined for d = 2, got d = {}",
            rho.local_dim()
        )));
    }
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let neg = Complex64::new(-1.0, 0.0);
    // I − σz⊗σz − σx⊗σx in the computational product basis
    #[rustfmt::skip]
    let w = DMatrix::from_row_slice(4, 4, &[
        z,   z,   z,   neg,
        z,   one * 2.0, neg, z,
        z,   neg, one * 2.0, z,
        neg, z,   z,   z,
    ]);
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for k in 0..4 {
            tr += w[(i, k)] * rho.entry(k, i);
        }
    }
    if tr.im.abs() > 1e-10 {
        return Err(Error::Numerical(format!(
            "witness expectation has imaginary part {:.3e}",
            tr.im
        )));
    }
    Ok(tr.re)
}

/// Locate the p where a monotone curve crosses `target` by bisection on
/// [lo, hi], to within `tol` in p. Returns None when the endpoints do not
/// bracket the target.
pub fn bisect_crossing(
    f: impl Fn(f64) -> f64,
    target: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Option<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo) - target, f(hi) - target);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid) - target;
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// The p where the closed-form Werner mutual-information sum crosses the
/// entanglement threshold log₂d, to 1e-6.
pub fn werner_threshold_crossing(d: usize) -> Option<f64> {
    bisect_crossing(
        |p| analytic_mi_sum_werner(d, p),
        (d as f64).log2(),
        0.0,
        1.0,
        1e-6,
    )
}
