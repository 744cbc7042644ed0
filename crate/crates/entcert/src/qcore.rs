//! Complex linear-algebra primitives: kets, density matrices, Kronecker
//! products and the qubit-pair ↔ qudit slot mapping.
//!
//! Index convention, shared by the whole crate: in a bipartite joint
//! space the system-1 index is the more significant one, i.e. the joint
//! basis state |a⟩|b⟩ sits at row a·d + b. Kronecker products follow the
//! same rule (the left factor is the more significant index), and for
//! multi-qubit registers slot 0 is the most significant qubit.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod eigen;

pub use eigen::hermitian_eigenvalues;

/// Hard cap on the joint dimension D = d·d of a density matrix.
/// Covers local dimensions up to d = 64 (d = 32 ⇒ D = 1024).
pub const MAX_TOTAL_DIM: usize = 4096;

/// Entrywise tolerance for Hermiticity and trace checks.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Unit-norm tolerance for kets.
pub const NORM_TOL: f64 = 1e-10;

/// Lower bound on the minimum eigenvalue of a valid density matrix.
pub const PSD_TOL: f64 = -1e-8;

fn all_finite(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Kronecker product with the left operand as the more significant index:
/// `(A ⊗ B)[(i_a·rows_b + i_b, j_a·cols_b + j_b)] = A[i_a,j_a]·B[i_b,j_b]`.
///
/// Accepts rectangular operands, so column vectors (kets) work too.
pub fn tensor_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// A normalized pure state of a d-level system.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: DVector<Complex64>,
}

impl Ket {
    /// Build a ket from amplitudes, requiring finite entries and unit
    /// Euclidean norm within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("ket must have dimension >= 1".into()));
        }
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::Numerical("non-finite amplitude in ket".into()));
        }
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Numerical(format!(
                "ket norm {norm} deviates from 1 by more than {NORM_TOL}"
            )));
        }
        Ok(Self { amplitudes: v })
    }

    /// Build a ket from unnormalized amplitudes by rescaling to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Numerical(format!(
                "cannot normalize vector with norm {norm}"
            )));
        }
        Self::new((v / Complex64::new(norm, 0.0)).iter().copied().collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amp(&self, i: usize) -> Complex64 {
        self.amplitudes[i]
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Entrywise complex conjugate (still unit norm).
    pub fn conjugate(&self) -> Ket {
        Ket {
            amplitudes: self.amplitudes.map(|z| z.conj()),
        }
    }

    /// Inner product ⟨self|other⟩ (conjugate-linear in `self`).
    pub fn inner(&self, other: &Ket) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Tensor product |self⟩ ⊗ |other⟩, self as the more significant slot.
    pub fn tensor(&self, other: &Ket) -> Ket {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in self.amplitudes.iter() {
            for b in other.amplitudes.iter() {
                out.push(a * b);
            }
        }
        Ket {
            amplitudes: DVector::from_vec(out),
        }
    }

    /// Projector |self⟩⟨self| as a dense matrix.
    pub fn projector(&self) -> DMatrix<Complex64> {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    /// True when the two kets describe the same ray: equal entrywise after
    /// aligning the global phase on the largest-magnitude component.
    pub fn same_ray(&self, other: &Ket, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let (mut k_max, mut best) = (0usize, 0.0f64);
        for (k, z) in self.amplitudes.iter().enumerate() {
            if z.norm() > best {
                best = z.norm();
                k_max = k;
            }
        }
        let a = self.amplitudes[k_max];
        let b = other.amplitudes[k_max];
        if b.norm() < tol {
            return false;
        }
        // phase aligning other onto self
        let phase = (a / a.norm()) * (b.conj() / b.norm());
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .all(|(x, y)| (x - y * phase).norm() <= tol)
    }
}

/// Serialized form of a complex matrix: rows of [re, im] pairs.
pub(crate) fn matrix_to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub(crate) fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<DMatrix<Complex64>> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(Error::Shape("empty matrix".into()));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Shape("ragged rows in matrix".into()));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// Density operator of a bipartite d × d qudit pair: Hermitian, unit
/// trace, positive semidefinite, acting on a D = d² dimensional space.
///
/// Hermiticity and trace are enforced at construction; positivity is
/// checked by [`validate_density`], which the state constructors satisfy
/// by building convex mixtures of projectors.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    local_dim: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(local_dim: usize, entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::Shape(format!(
                "density matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let total = entries.nrows();
        if local_dim < 2 || total != local_dim * local_dim {
            return Err(Error::Dimension(format!(
                "total dimension {total} is not local_dim^2 = {}",
                local_dim * local_dim
            )));
        }
        if total > MAX_TOTAL_DIM {
            return Err(Error::Dimension(format!(
                "total dimension {total} exceeds the supported cap {MAX_TOTAL_DIM}"
            )));
        }
        if !all_finite(&entries) {
            return Err(Error::Numerical(
                "non-finite entry in density matrix".into(),
            ));
        }
        let herm = hermiticity_defect(&entries);
        if herm > HERMITICITY_TOL {
            return Err(Error::Numerical(format!(
                "Hermiticity defect {herm:.3e} exceeds {HERMITICITY_TOL}"
            )));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > HERMITICITY_TOL || tr.im.abs() > HERMITICITY_TOL {
            return Err(Error::Numerical(format!(
                "trace {tr} deviates from 1 beyond {HERMITICITY_TOL}"
            )));
        }
        Ok(Self { local_dim, entries })
    }

    /// Pure state ρ = |ψ⟩⟨ψ| from a joint ket of dimension d².
    pub fn from_joint_ket(local_dim: usize, psi: &Ket) -> Result<Self> {
        Self::new(local_dim, psi.projector())
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn total_dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Convex mixture w·self + (1−w)·other. Both operands must share
    /// dimensions and w must lie in [0, 1].
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if self.local_dim != other.local_dim {
            return Err(Error::Dimension(format!(
                "cannot mix states with local dims {} and {}",
                self.local_dim, other.local_dim
            )));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Param(format!("mixing weight {w} outside [0, 1]")));
        }
        let entries =
            &self.entries * Complex64::new(w, 0.0) + &other.entries * Complex64::new(1.0 - w, 0.0);
        DensityMatrix::new(self.local_dim, entries)
    }

    /// JSON document {local_dim, entries: [[[re,im],…],…]}.
    pub fn to_json(&self) -> String {
        let raw = RawDensityMatrix {
            local_dim: self.local_dim,
            entries: matrix_to_rows(&self.entries),
        };
        serde_json::to_string(&raw).expect("density matrix serialization cannot fail")
    }

    /// Load from the JSON document produced by [`DensityMatrix::to_json`].
    /// All construction invariants are re-checked.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: RawDensityMatrix = serde_json::from_str(s)
            .map_err(|e| Error::Shape(format!("bad density matrix JSON: {e}")))?;
        Self::new(raw.local_dim, rows_to_matrix(&raw.entries)?)
    }
}

#[derive(Serialize, Deserialize)]
struct RawDensityMatrix {
    local_dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let diff = (m[(i, j)] - m[(j, i)].conj()).norm();
            if diff > worst {
                worst = diff;
            }
        }
    }
    worst
}

/// Outcome of [`validate_density`]: the three measured defects plus the
/// verdict at the requested tolerance (the eigenvalue check uses
/// [`PSD_TOL`] as its floor).
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Diagnose an arbitrary square complex matrix as a density operator:
/// Hermiticity defect (max entrywise |m − m†|), trace defect |Tr m − 1|,
/// and minimum eigenvalue from a full Hermitian eigendecomposition.
///
/// Passes iff both defects are within `tol` and the minimum eigenvalue is
/// at least [`PSD_TOL`].
pub fn validate_density(m: &DMatrix<Complex64>, tol: f64) -> Result<ValidationReport> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!(
            "validate_density needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if !all_finite(m) {
        return Err(Error::Numerical("non-finite entry".into()));
    }
    let herm = hermiticity_defect(m);
    let tr = m.trace();
    let trace_defect = ((tr.re - 1.0).powi(2) + tr.im.powi(2)).sqrt();
    // Eigenvalues of the Hermitian part; for near-Hermitian input this is
    // the spectrum up to the reported defect.
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eigs = hermitian_eigenvalues(&h)?;
    let min_eigenvalue = eigs.first().copied().unwrap_or(f64::INFINITY);
    let pass = herm <= tol && trace_defect <= tol && min_eigenvalue >= PSD_TOL;
    Ok(ValidationReport {
        hermiticity_defect: herm,
        trace_defect,
        min_eigenvalue,
        tol,
        pass,
    })
}

/// Relabeling between the interleaved qubit-pair order and the grouped
/// system order for n entangled pairs.
///
/// Interleaved order lists the 2n qubit slots pair by pair
/// (α₁ β₁ α₂ β₂ …); grouped order lists system 1 first (α₁…α_n β₁…β_n).
/// Odd (1-indexed) interleaved slots belong to system 1, even slots to
/// system 2. Applying the mapping is a permutation of basis labels, i.e.
/// a unitary relabeling that preserves trace and spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitPairMapping {
    n: usize,
    /// slot_map[s] = destination slot of source slot s (slot 0 is the
    /// most significant qubit).
    slot_map: Vec<usize>,
}

impl QubitPairMapping {
    /// Mapping that regroups interleaved pair slots into system order.
    pub fn interleaved_to_grouped(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Dimension("pair mapping needs n >= 1".into()));
        }
        let mut slot_map = vec![0usize; 2 * n];
        for i in 0..n {
            slot_map[2 * i] = i; // α_{i+1} → system-1 block
            slot_map[2 * i + 1] = n + i; // β_{i+1} → system-2 block
        }
        Self::from_slot_map(n, slot_map)
    }

    /// Mapping from an explicit slot permutation (slot_map[s] = new slot).
    pub fn from_slot_map(n: usize, slot_map: Vec<usize>) -> Result<Self> {
        if slot_map.len() != 2 * n {
            return Err(Error::Dimension(format!(
                "slot map has {} entries, expected {}",
                slot_map.len(),
                2 * n
            )));
        }
        let mut seen = vec![false; 2 * n];
        for &s in &slot_map {
            if s >= 2 * n || seen[s] {
                return Err(Error::Construction(
                    "slot map is not a bijection on the 2n slots".into(),
                ));
            }
            seen[s] = true;
        }
        Ok(Self { n, slot_map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Joint dimension 4^n the mapping acts on.
    pub fn total_dim(&self) -> usize {
        1usize << (2 * self.n)
    }

    /// The inverse slot permutation.
    pub fn inverse(&self) -> QubitPairMapping {
        let mut inv = vec![0usize; self.slot_map.len()];
        for (s, &t) in self.slot_map.iter().enumerate() {
            inv[t] = s;
        }
        QubitPairMapping {
            n: self.n,
            slot_map: inv,
        }
    }

    /// Basis-index relabeling induced by the slot permutation:
    /// `map[old_index] = new_index`.
    pub fn index_map(&self) -> Vec<usize> {
        let bits = 2 * self.n;
        let dim = self.total_dim();
        let mut map = vec![0usize; dim];
        for (old, slot) in map.iter_mut().enumerate() {
            let mut new = 0usize;
            for s in 0..bits {
                // slot 0 is the most significant bit
                let bit = (old >> (bits - 1 - s)) & 1;
                new |= bit << (bits - 1 - self.slot_map[s]);
            }
            *slot = new;
        }
        map
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.total_dim() {
            return Err(Error::Dimension(format!(
                "dimension {dim} is not 4^n = {} (not a power of four matching n = {})",
                self.total_dim(),
                self.n
            )));
        }
        Ok(())
    }

    /// Permute the tensor slots of a joint ket.
    pub fn apply_to_ket(&self, psi: &Ket) -> Result<Ket> {
        self.check_dim(psi.dim())?;
        let map = self.index_map();
        let mut out = vec![Complex64::new(0.0, 0.0); psi.dim()];
        for (old, &new) in map.iter().enumerate() {
            out[new] = psi.amp(old);
        }
        Ket::new(out)
    }

    /// Permute the tensor slots of a joint matrix (rows and columns).
    pub fn apply_to_matrix(&self, m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        if m.nrows() != m.ncols() {
            return Err(Error::Shape("pair mapping needs a square matrix".into()));
        }
        self.check_dim(m.nrows())?;
        let map = self.index_map();
        let n = m.nrows();
        let mut out = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                out[(map[i], map[j])] = m[(i, j)];
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ident(n: usize) -> DMatrix<Complex64> {
        DMatrix::identity(n, n)
    }

    #[test]
    fn tensor_identity_case() {
        let k = tensor_product(&ident(2), &ident(2));
        assert_eq!(k, ident(4));
    }

    #[test]
    fn tensor_separable_product_ket() {
        let plus = Ket::new(vec![c(1.0 / 2f64.sqrt(), 0.0); 2]).unwrap();
        let prod = plus.tensor(&plus);
        for i in 0..4 {
            assert!((prod.amp(i) - c(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_is_associative() {
        let a =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0), c(0.5, 0.5)]);
        let b =
            DMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(2.0, 0.0), c(1.0, 1.0), c(-1.0, 0.0)]);
        let d =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 2.0), c(1.0, -1.0)]);
        let left = tensor_product(&tensor_product(&a, &b), &d);
        let right = tensor_product(&a, &tensor_product(&b, &d));
        assert_eq!(left, right);
    }

    fn bell_pair() -> Ket {
        let s = 1.0 / 2f64.sqrt();
        Ket::new(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap()
    }

    #[test]
    fn pair_mapping_n1_is_identity() {
        let m = QubitPairMapping::interleaved_to_grouped(1).unwrap();
        let psi = bell_pair();
        let out = m.apply_to_ket(&psi).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn two_bell_pairs_regroup_to_d4_max_entangled() {
        // (|00⟩+|11⟩)^{⊗2}/2 reorders to Σ_j |jj⟩/2 on a d=4 pair.
        let m = QubitPairMapping::interleaved_to_grouped(2).unwrap();
        let psi = bell_pair().tensor(&bell_pair());
        let out = m.apply_to_ket(&psi).unwrap();
        for j in 0..16 {
            // amplitude 1/√4 = 0.5 on the four |jj⟩ positions 0, 5, 10, 15
            let expect = if j % 5 == 0 { 0.5 } else { 0.0 };
            assert!(
                (out.amp(j) - c(expect, 0.0)).norm() < 1e-14,
                "amp {j} = {}",
                out.amp(j)
            );
        }
    }

    #[test]
    fn mixed_pair_product_regroups_to_classical_correlations() {
        // (|00⟩⟨00| + |11⟩⟨11|)^{⊗2}/4 → Σ_j |jj⟩⟨jj|/4.
        let mut cc2 = DMatrix::from_element(4, 4, c(0.0, 0.0));
        cc2[(0, 0)] = c(0.5, 0.0);
        cc2[(3, 3)] = c(0.5, 0.0);
        let prod = tensor_product(&cc2, &cc2);
        let m = QubitPairMapping::interleaved_to_grouped(2).unwrap();
        let out = m.apply_to_matrix(&prod).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i == j && i % 5 == 0 { 0.25 } else { 0.0 };
                assert!((out[(i, j)] - c(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn mapping_roundtrips_through_inverse() {
        let m = QubitPairMapping::interleaved_to_grouped(3).unwrap();
        let inv = m.inverse();
        let dim = m.total_dim();
        let mat = DMatrix::from_fn(dim, dim, |i, j| c(i as f64, j as f64));
        let back = inv
            .apply_to_matrix(&m.apply_to_matrix(&mat).unwrap())
            .unwrap();
        assert_eq!(back, mat);
    }

    #[test]
    fn mapping_rejects_non_power_of_four() {
        let m = QubitPairMapping::interleaved_to_grouped(2).unwrap();
        let mat = DMatrix::from_element(9, 9, c(0.0, 0.0));
        assert!(matches!(m.apply_to_matrix(&mat), Err(Error::Dimension(_))));
    }

    #[test]
    fn validate_density_passes_maximally_mixed() {
        let m = ident(4) * c(0.25, 0.0);
        let rep = validate_density(&m, 1e-10).unwrap();
        assert!(rep.pass);
        assert!((rep.min_eigenvalue - 0.25).abs() < 1e-12);
    }

    #[test]
    fn validate_density_passes_pure_bell_projector() {
        let m = bell_pair().projector();
        let rep = validate_density(&m, 1e-10).unwrap();
        assert!(rep.pass);
        // spectrum {1, 0, 0, 0}
        assert!(rep.min_eigenvalue.abs() < 1e-12);
    }

    #[test]
    fn validate_density_fails_shifted_projector() {
        // |Φ+⟩⟨Φ+| − 0.01·I has trace 0.96 and eigenvalues {0.99, −0.01×3}.
        let m = bell_pair().projector() - ident(4) * c(0.01, 0.0);
        let rep = validate_density(&m, 1e-10).unwrap();
        assert!(!rep.pass);
        assert!((rep.trace_defect - 0.04).abs() < 1e-12);
        assert!((rep.min_eigenvalue + 0.01).abs() < 1e-12);
    }

    #[test]
    fn validate_density_rejects_non_square() {
        let m = DMatrix::from_element(2, 3, c(0.0, 0.0));
        assert!(matches!(validate_density(&m, 1e-10), Err(Error::Shape(_))));
    }

    #[test]
    fn density_matrix_rejects_nan() {
        let mut m = ident(4) * c(0.25, 0.0);
        m[(0, 0)] = c(f64::NAN, 0.0);
        assert!(DensityMatrix::new(2, m).is_err());
    }

    #[test]
    fn density_matrix_rejects_oversized() {
        let d = 70usize;
        let m = DMatrix::from_diagonal_element(d * d, d * d, c(1.0 / ((d * d) as f64), 0.0));
        assert!(matches!(DensityMatrix::new(d, m), Err(Error::Dimension(_))));
    }

    #[test]
    fn density_matrix_json_roundtrip() {
        let rho = DensityMatrix::from_joint_ket(2, &bell_pair()).unwrap();
        let back = DensityMatrix::from_json(&rho.to_json()).unwrap();
        assert_eq!(back.local_dim(), 2);
        assert_eq!(back.entries(), rho.entries());
    }

    #[test]
    fn same_ray_ignores_global_phase() {
        let k1 = Ket::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let phase = Complex64::from_polar(1.0, 1.234);
        let k2 = Ket::new(vec![phase, c(0.0, 0.0)]).unwrap();
        assert!(k1.same_ray(&k2, 1e-12));
        let k3 = Ket::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(!k1.same_ray(&k3, 1e-12));
    }
}
