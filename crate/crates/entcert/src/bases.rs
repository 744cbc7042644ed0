//! Measurement bases: computational, Fourier, σx/σy tensor bases, and the
//! explicit d = 3 and d = 4 mutually-unbiased collections with their
//! correlation-partner bases.
//!
//! Two bases are mutually unbiased when every cross overlap satisfies
//! |⟨a|c⟩|² = 1/d; measuring one then gives no information about the
//! other. The partner basis restoring perfect correlation with a given
//! system-1 basis on Σ_j|jj⟩/√d is the entrywise complex conjugate.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::Ket;

/// Orthonormality tolerance for constructed bases.
pub const ORTHO_TOL: f64 = 1e-10;

/// Unbiasedness tolerance |⟨a|c⟩|² − 1/d for collection validation.
pub const UNBIASED_TOL: f64 = 1e-10;

/// An ordered orthonormal basis of a d-dimensional local system,
/// defining one local observable.
#[derive(Debug, Clone)]
pub struct Basis {
    dim: usize,
    label: String,
    kets: Vec<Ket>,
}

impl Basis {
    /// Build and validate: exactly d kets of dimension d, pairwise
    /// orthonormal within [`ORTHO_TOL`]. The error names the first
    /// offending vector.
    pub fn new(label: impl Into<String>, kets: Vec<Ket>) -> Result<Self> {
        let label = label.into();
        let dim = kets.len();
        if dim < 2 {
            return Err(Error::Dimension(format!(
                "basis '{label}' needs at least 2 kets"
            )));
        }
        for (k, ket) in kets.iter().enumerate() {
            if ket.dim() != dim {
                return Err(Error::Shape(format!(
                    "basis '{label}': ket {k} has dimension {} but the basis has {dim} kets",
                    ket.dim()
                )));
            }
        }
        for i in 0..dim {
            for j in i..dim {
                let ip = kets[i].inner(&kets[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                let defect = (ip - Complex64::new(target, 0.0)).norm();
                if defect > ORTHO_TOL {
                    return Err(Error::Construction(format!(
                        "basis '{label}': kets {i} and {j} fail orthonormality, |⟨{i}|{j}⟩ − δ| = {defect:.3e}"
                    )));
                }
            }
        }
        Ok(Self { dim, label, kets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kets(&self) -> &[Ket] {
        &self.kets
    }

    pub fn ket(&self, k: usize) -> &Ket {
        &self.kets[k]
    }

    /// Entrywise complex conjugate of every ket, labeled `label*`.
    /// On Σ_j|jj⟩/√d this is the system-2 basis giving the identity
    /// permutation of outcomes against `self` on system 1.
    pub fn conjugate_partner(&self) -> Basis {
        let kets = self.kets.iter().map(Ket::conjugate).collect();
        Basis {
            dim: self.dim,
            label: format!("{}*", self.label),
            kets,
        }
    }

    /// Same collection of rays (each ket matches one ket of `other` up to
    /// global phase, in some order). Labels are ignored.
    pub fn same_rays_up_to_order(&self, other: &Basis, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let mut used = vec![false; self.dim];
        'outer: for mine in &self.kets {
            for (j, theirs) in other.kets.iter().enumerate() {
                if !used[j] && mine.same_ray(theirs, tol) {
                    used[j] = true;
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    /// Relabeled copy with kets reordered by `perm` (new index k holds
    /// old ket perm[k]).
    pub fn permuted(&self, perm: &[usize], label: impl Into<String>) -> Result<Basis> {
        if perm.len() != self.dim {
            return Err(Error::Dimension("permutation length mismatch".into()));
        }
        let mut kets = Vec::with_capacity(self.dim);
        for &p in perm {
            if p >= self.dim {
                return Err(Error::Dimension("permutation index out of range".into()));
            }
            kets.push(self.kets[p].clone());
        }
        Basis::new(label, kets)
    }

    /// JSON document {dim, label, kets: [[[re,im],…],…]}.
    pub fn to_json(&self) -> String {
        let raw = RawBasis {
            dim: self.dim,
            label: self.label.clone(),
            kets: self
                .kets
                .iter()
                .map(|k| (0..k.dim()).map(|i| [k.amp(i).re, k.amp(i).im]).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("basis serialization cannot fail")
    }

    /// Load and re-validate from the document written by [`Basis::to_json`].
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawBasis =
            serde_json::from_str(s).map_err(|e| Error::Shape(format!("bad basis JSON: {e}")))?;
        if raw.kets.len() != raw.dim {
            return Err(Error::Shape(format!(
                "basis JSON: dim {} but {} kets",
                raw.dim,
                raw.kets.len()
            )));
        }
        let kets = raw
            .kets
            .iter()
            .map(|amps| Ket::new(amps.iter().map(|a| Complex64::new(a[0], a[1])).collect()))
            .collect::<Result<Vec<_>>>()?;
        Basis::new(raw.label, kets)
    }
}

#[derive(Serialize, Deserialize)]
struct RawBasis {
    dim: usize,
    label: String,
    kets: Vec<Vec<[f64; 2]>>,
}

/// One bipartite measurement setting: a basis per subsystem.
#[derive(Debug, Clone)]
pub struct BasisPair {
    system1: Basis,
    system2: Basis,
}

impl BasisPair {
    pub fn new(system1: Basis, system2: Basis) -> Result<Self> {
        if system1.dim() != system2.dim() {
            return Err(Error::Dimension(format!(
                "basis pair dims differ: {} vs {}",
                system1.dim(),
                system2.dim()
            )));
        }
        Ok(Self { system1, system2 })
    }

    /// Pair measuring the same basis on both sides.
    pub fn same(basis: Basis) -> Self {
        Self {
            system2: basis.clone(),
            system1: basis,
        }
    }

    /// Pair of a basis with its conjugate partner on system 2.
    pub fn with_conjugate_partner(basis: Basis) -> Self {
        Self {
            system2: basis.conjugate_partner(),
            system1: basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.system1.dim()
    }

    pub fn system1(&self) -> &Basis {
        &self.system1
    }

    pub fn system2(&self) -> &Basis {
        &self.system2
    }

    pub fn label(&self) -> String {
        format!("{}|{}", self.system1.label(), self.system2.label())
    }
}

/// Standard unit vectors e_0 … e_{d−1}.
pub fn computational_basis(d: usize) -> Result<Basis> {
    if d < 2 {
        return Err(Error::Dimension(format!(
            "computational basis needs d >= 2, got {d}"
        )));
    }
    let kets = (0..d)
        .map(|j| {
            let mut amps = vec![Complex64::new(0.0, 0.0); d];
            amps[j] = Complex64::new(1.0, 0.0);
            Ket::new(amps)
        })
        .collect::<Result<Vec<_>>>()?;
    Basis::new("comp", kets)
}

/// Discrete Fourier basis |f_j⟩ = (1/√d) Σ_k ω^{kj}|k⟩, ω = exp(2πi/d).
/// Unbiased to the computational basis in every dimension.
pub fn fourier_basis(d: usize) -> Result<Basis> {
    if d < 2 {
        return Err(Error::Dimension(format!(
            "Fourier basis needs d >= 2, got {d}"
        )));
    }
    let kets = (0..d)
        .map(|j| {
            let norm = 1.0 / (d as f64).sqrt();
            let amps = (0..d)
                .map(|k| Complex64::from_polar(norm, 2.0 * PI * (k * j % d) as f64 / d as f64))
                .collect();
            Ket::new(amps)
        })
        .collect::<Result<Vec<_>>>()?;
    Basis::new("fourier", kets)
}

fn single_qubit_pm(sign: f64, phase_im: bool) -> Ket {
    let s = 1.0 / 2f64.sqrt();
    let second = if phase_im {
        Complex64::new(0.0, sign * s)
    } else {
        Complex64::new(sign * s, 0.0)
    };
    Ket::new(vec![Complex64::new(s, 0.0), second]).expect("unit by construction")
}

fn sigma_tensor_basis(n: usize, label: &str, phase_im: bool) -> Result<Basis> {
    if n < 1 {
        return Err(Error::Dimension(format!(
            "σ tensor basis needs n >= 1, got {n}"
        )));
    }
    let d = 1usize << n;
    let plus = single_qubit_pm(1.0, phase_im);
    let minus = single_qubit_pm(-1.0, phase_im);
    let kets = (0..d)
        .map(|k| {
            // bit n−1−q of k picks the factor for qubit slot q (slot 0 most
            // significant), so γ₁ is the leading binary digit of k.
            let mut ket: Option<Ket> = None;
            for q in 0..n {
                let bit = (k >> (n - 1 - q)) & 1;
                let factor = if bit == 0 {
                    plus.clone()
                } else {
                    minus.clone()
                };
                ket = Some(match ket {
                    None => factor,
                    Some(acc) => acc.tensor(&factor),
                });
            }
            ket.expect("n >= 1")
        })
        .collect();
    Basis::new(label, kets)
}

/// σx product basis on n qubits: |c_k⟩ with per-qubit factors
/// (|0⟩ ± |1⟩)/√2 chosen by the binary digits of k (leading digit first).
pub fn sigma_x_basis(n: usize) -> Result<Basis> {
    sigma_tensor_basis(n, "sx", false)
}

/// σy product basis on n qubits: per-qubit factors (|0⟩ ± i|1⟩)/√2
/// ordered by the binary digits of k.
pub fn sigma_y_basis(n: usize) -> Result<Basis> {
    sigma_tensor_basis(n, "sy", true)
}

/// Result of an unbiasedness check between two bases.
#[derive(Debug, Clone, Serialize)]
pub struct UnbiasednessCheck {
    pub unbiased: bool,
    /// Worst |  |⟨a|c⟩|² − 1/d  | over all d² overlaps.
    pub max_deviation: f64,
}

/// Brute-force check that every overlap satisfies |⟨a|c⟩|² = 1/d within
/// `tol`; reports the worst deviation either way.
pub fn check_mutually_unbiased(b1: &Basis, b2: &Basis, tol: f64) -> Result<UnbiasednessCheck> {
    if b1.dim() != b2.dim() {
        return Err(Error::Dimension(format!(
            "cannot compare bases of dims {} and {}",
            b1.dim(),
            b2.dim()
        )));
    }
    let target = 1.0 / b1.dim() as f64;
    let mut worst = 0.0f64;
    for a in b1.kets() {
        for c in b2.kets() {
            let dev = (a.inner(c).norm_sqr() - target).abs();
            if dev > worst {
                worst = dev;
            }
        }
    }
    Ok(UnbiasednessCheck {
        unbiased: worst <= tol,
        max_deviation: worst,
    })
}

/// A full set of complementary measurement settings for one dimension:
/// pairwise mutually unbiased system-1 bases, each with the system-2
/// partner that restores a one-cell-per-row joint table on Σ_j|jj⟩/√d.
#[derive(Debug, Clone)]
pub struct MubCollection {
    dim: usize,
    label: String,
    pairs: Vec<BasisPair>,
}

impl MubCollection {
    /// Validates pairwise unbiasedness of the system-1 bases and the
    /// perfect-correlation property of every pair.
    pub fn new(label: impl Into<String>, pairs: Vec<BasisPair>) -> Result<Self> {
        let label = label.into();
        if pairs.len() < 2 {
            return Err(Error::Construction(format!(
                "collection '{label}' needs at least two pairs"
            )));
        }
        let dim = pairs[0].dim();
        if pairs.iter().any(|p| p.dim() != dim) {
            return Err(Error::Dimension(format!(
                "collection '{label}' mixes dimensions"
            )));
        }
        for i in 0..pairs.len() {
            for j in (i + 1)..pairs.len() {
                let chk =
                    check_mutually_unbiased(pairs[i].system1(), pairs[j].system1(), UNBIASED_TOL)?;
                if !chk.unbiased {
                    return Err(Error::Construction(format!(
                        "collection '{label}': system-1 bases '{}' and '{}' are not mutually unbiased (worst deviation {:.3e})",
                        pairs[i].system1().label(),
                        pairs[j].system1().label(),
                        chk.max_deviation
                    )));
                }
            }
        }
        for pair in &pairs {
            validate_perfect_correlation(pair)?;
        }
        Ok(Self { dim, label, pairs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn pairs(&self) -> &[BasisPair] {
        &self.pairs
    }
}

/// On ψ = Σ_j|jj⟩/√d the amplitude of outcome (a, b) in a pair (X, Y) is
/// ⟨x_a|ȳ_b⟩/√d, so the joint table must be a permutation matrix with
/// cells 1/d for the pair to be perfectly correlated. Checked directly,
/// without building the joint state.
fn validate_perfect_correlation(pair: &BasisPair) -> Result<()> {
    let d = pair.dim();
    let mut col_used = vec![false; d];
    for (a, x) in pair.system1().kets().iter().enumerate() {
        let mut hits = 0usize;
        for (b, y) in pair.system2().kets().iter().enumerate() {
            let p = x.inner(&y.conjugate()).norm_sqr() / d as f64;
            if p > 0.5 / d as f64 {
                if (p - 1.0 / d as f64).abs() > UNBIASED_TOL {
                    return Err(Error::Construction(format!(
                        "pair '{}': cell ({a},{b}) = {p:.6} is neither 0 nor 1/d",
                        pair.label()
                    )));
                }
                if col_used[b] {
                    return Err(Error::Construction(format!(
                        "pair '{}': column {b} hit twice",
                        pair.label()
                    )));
                }
                col_used[b] = true;
                hits += 1;
            } else if p > UNBIASED_TOL {
                return Err(Error::Construction(format!(
                    "pair '{}': stray mass {p:.3e} in cell ({a},{b})",
                    pair.label()
                )));
            }
        }
        if hits != 1 {
            return Err(Error::Construction(format!(
                "pair '{}': row {a} has {hits} unit cells instead of 1",
                pair.label()
            )));
        }
    }
    Ok(())
}

fn omega3(k: i32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0)
}

fn qutrit_ket(phases: [i32; 3]) -> Result<Ket> {
    // Published with prefactor 1/3; renormalized to 1/√3 so the kets are
    // unit vectors (orthonormality is a hard invariant here).
    let n = 1.0 / 3f64.sqrt();
    Ket::new(
        phases
            .iter()
            .map(|&p| omega3(p) * Complex64::new(n, 0.0))
            .collect(),
    )
}

fn qutrit_basis(label: &str, rows: [[i32; 3]; 3]) -> Result<Basis> {
    let kets = rows
        .iter()
        .map(|&r| qutrit_ket(r))
        .collect::<Result<Vec<_>>>()?;
    Basis::new(label, kets)
}

/// The four complementary settings for d = 3: computational plus three
/// phase bases, each paired with the system-2 basis that restores a
/// permutation joint table on the maximally entangled state (the same
/// basis for comp and the Fourier set, the conjugate basis for the other
/// two).
pub fn mub_collection_d3() -> Result<MubCollection> {
    let comp = computational_basis(3)?;
    // exponent patterns of ω in each ket component
    let f3a = qutrit_basis("F3a", [[0, 0, 0], [0, 1, 2], [0, 2, 1]])?;
    let f3b = qutrit_basis("F3b", [[0, 1, 1], [0, 2, 0], [0, 0, 2]])?;
    let f3c = qutrit_basis("F3c", [[0, 2, 2], [0, 1, 0], [0, 0, 1]])?;
    MubCollection::new(
        "mub-d3",
        vec![
            BasisPair::same(comp),
            BasisPair::same(f3a),
            BasisPair::with_conjugate_partner(f3b),
            BasisPair::with_conjugate_partner(f3c),
        ],
    )
}

/// System-2 partner for the d = 3 third setting as published (a phase and
/// ket-order variant of the conjugate basis). Used in tests to confirm
/// the conjugation rule reproduces it.
pub fn d3_published_partner_b() -> Result<Basis> {
    let n = 1.0 / 3f64.sqrt();
    let kets = vec![
        Ket::new(vec![omega3(1) * n, omega3(0) * n, omega3(0) * n])?,
        Ket::new(vec![omega3(0) * n, omega3(0) * n, omega3(1) * n])?,
        Ket::new(vec![omega3(0) * n, omega3(1) * n, omega3(0) * n])?,
    ];
    Basis::new("F3b-partner-published", kets)
}

/// As [`d3_published_partner_b`] but for the fourth setting (ω² phases).
pub fn d3_published_partner_c() -> Result<Basis> {
    let n = 1.0 / 3f64.sqrt();
    let kets = vec![
        Ket::new(vec![omega3(2) * n, omega3(0) * n, omega3(0) * n])?,
        Ket::new(vec![omega3(0) * n, omega3(0) * n, omega3(2) * n])?,
        Ket::new(vec![omega3(0) * n, omega3(2) * n, omega3(0) * n])?,
    ];
    Basis::new("F3c-partner-published", kets)
}

fn ququart_ket(entries: [Complex64; 4]) -> Result<Ket> {
    Ket::new(
        entries
            .iter()
            .map(|z| z * Complex64::new(0.5, 0.0))
            .collect(),
    )
}

fn ququart_basis(label: &str, rows: [[Complex64; 4]; 4]) -> Result<Basis> {
    let kets = rows
        .iter()
        .map(|&r| ququart_ket(r))
        .collect::<Result<Vec<_>>>()?;
    Basis::new(label, kets)
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const NEG: Complex64 = Complex64::new(-1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);
const NEG_I: Complex64 = Complex64::new(0.0, -1.0);

fn d4_block_a() -> Result<Basis> {
    ququart_basis(
        "F4a",
        [
            [ONE, ONE, ONE, ONE],
            [ONE, ONE, NEG, NEG],
            [ONE, NEG, NEG, ONE],
            [ONE, NEG, ONE, NEG],
        ],
    )
}

fn d4_block_b() -> Result<Basis> {
    ququart_basis(
        "F4b",
        [
            [ONE, NEG, NEG_I, NEG_I],
            [ONE, NEG, I, I],
            [ONE, ONE, I, NEG_I],
            [ONE, ONE, NEG_I, I],
        ],
    )
}

fn d4_block_c() -> Result<Basis> {
    ququart_basis(
        "F4c",
        [
            [ONE, NEG_I, NEG_I, NEG],
            [ONE, NEG_I, I, ONE],
            [ONE, I, I, NEG],
            [ONE, I, NEG_I, ONE],
        ],
    )
}

/// Fourth block exactly as published. Its first ket is inconsistent with
/// the other three (overlap² = 1/4 instead of 0), so [`Basis::new`]
/// rejects it; the error names the kets.
fn d4_block_d_transcribed() -> Result<Basis> {
    ququart_basis(
        "F4d",
        [
            [ONE, NEG_I, ONE, NEG_I],
            [ONE, NEG_I, ONE, I],
            [ONE, I, ONE, NEG_I],
            [ONE, I, NEG, I],
        ],
    )
}

/// Fourth block with the first ket replaced by the unique unit-modulus
/// vector orthogonal to the other three, [1, −i, −1, −i]/2 (the published
/// row has the sign of the third entry flipped).
fn d4_block_d_corrected() -> Result<Basis> {
    ququart_basis(
        "F4d-corr",
        [
            [ONE, NEG_I, NEG, NEG_I],
            [ONE, NEG_I, ONE, I],
            [ONE, I, ONE, NEG_I],
            [ONE, I, NEG, I],
        ],
    )
}

fn d4_collection_from_blocks(label: &str, block_d: Basis) -> Result<MubCollection> {
    let comp = computational_basis(4)?;
    MubCollection::new(
        label,
        vec![
            BasisPair::same(comp),
            // F4a is real, so its conjugate partner is itself.
            BasisPair::with_conjugate_partner(d4_block_a()?),
            BasisPair::with_conjugate_partner(d4_block_b()?),
            BasisPair::with_conjugate_partner(d4_block_c()?),
            BasisPair::with_conjugate_partner(block_d),
        ],
    )
}

/// The five d = 4 settings from the published table, transcribed
/// verbatim. The fourth block fails orthonormality, so this returns a
/// `Construction` error identifying the offending vectors; use
/// [`mub_collection_d4_corrected`] for a working collection.
pub fn mub_collection_d4() -> Result<MubCollection> {
    d4_collection_from_blocks("mub-d4", d4_block_d_transcribed()?)
}

/// The five d = 4 settings with the fourth block's first vector replaced
/// by the orthogonality-restoring correction. Passes full validation.
pub fn mub_collection_d4_corrected() -> Result<MubCollection> {
    d4_collection_from_blocks("mub-d4-corrected", d4_block_d_corrected()?)
}

/// Named selections of complementary basis pairs used by certification
/// runs and sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairSet {
    /// (comp, comp) + (σx, σx); needs d = 2^n.
    #[serde(rename = "comp,sx")]
    CompSx,
    /// (comp, comp) + (fourier, conjugate fourier); any d ≥ 2.
    #[serde(rename = "comp,fourier")]
    CompFourier,
    /// All four d = 3 settings.
    #[serde(rename = "mub3")]
    Mub3,
    /// All five d = 4 settings (corrected fourth block).
    #[serde(rename = "mub4")]
    Mub4,
}

impl PairSet {
    /// Default per dimension: σx for powers of two, Fourier otherwise.
    pub fn default_for(d: usize) -> PairSet {
        if d.is_power_of_two() {
            PairSet::CompSx
        } else {
            PairSet::CompFourier
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PairSet::CompSx => "comp,sx",
            PairSet::CompFourier => "comp,fourier",
            PairSet::Mub3 => "mub3",
            PairSet::Mub4 => "mub4",
        }
    }

    /// Materialize the basis pairs for dimension `d`.
    pub fn build(&self, d: usize) -> Result<Vec<BasisPair>> {
        match self {
            PairSet::CompSx => {
                if !d.is_power_of_two() || d < 2 {
                    return Err(Error::Dimension(format!(
                        "pair set comp,sx needs d = 2^n, got {d}"
                    )));
                }
                let n = d.trailing_zeros() as usize;
                Ok(vec![
                    BasisPair::same(computational_basis(d)?),
                    BasisPair::same(sigma_x_basis(n)?),
                ])
            }
            PairSet::CompFourier => Ok(vec![
                BasisPair::same(computational_basis(d)?),
                BasisPair::with_conjugate_partner(fourier_basis(d)?),
            ]),
            PairSet::Mub3 => {
                if d != 3 {
                    return Err(Error::Dimension(format!(
                        "pair set mub3 needs d = 3, got {d}"
                    )));
                }
                Ok(mub_collection_d3()?.pairs().to_vec())
            }
            PairSet::Mub4 => {
                if d != 4 {
                    return Err(Error::Dimension(format!(
                        "pair set mub4 needs d = 4, got {d}"
                    )));
                }
                Ok(mub_collection_d4_corrected()?.pairs().to_vec())
            }
        }
    }
}

impl std::str::FromStr for PairSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "comp,sx" | "sx" => Ok(PairSet::CompSx),
            "comp,fourier" | "fourier" => Ok(PairSet::CompFourier),
            "mub3" => Ok(PairSet::Mub3),
            "mub4" => Ok(PairSet::Mub4),
            other => Err(Error::Param(format!(
                "unknown pair set '{other}' (expected comp,sx | comp,fourier | mub3 | mub4)"
            ))),
        }
    }
}

impl std::fmt::Display for PairSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
