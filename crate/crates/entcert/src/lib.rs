//! Entanglement certification for bipartite qudits from the classical
//! correlations of two complementary local measurements.
//!
//! The procedure: measure a bipartite system in two complementary basis
//! pairs (e.g. computational and σx/Fourier), compute the mutual
//! information of the outcomes in each pair, and sum. If the sum exceeds
//! log₂d bits the state is certified entangled; if it reaches 2log₂d the
//! state is maximally entangled. The Pearson correlation sum against
//! thresholds 1 and 2 works as an alternative (the entanglement side of
//! that criterion is conjectural). The test is one-sided: failing it
//! proves nothing.
//!
//! The crate provides
//! - dense complex state construction for the studied families up to
//!   d = 32 ([`states`]),
//! - the measurement bases, including explicit d = 3 and d = 4 mutually
//!   unbiased collections with correlation partners ([`bases`]),
//! - exact joint-probability tables and Poissonian coincidence-count
//!   simulation ([`measure`]),
//! - the metrics, closed-form oracles, error propagation and the d = 2
//!   comparison witness ([`metrics`]),
//! - certification verdicts and Monte Carlo parameter sweeps
//!   ([`certify`]),
//! - a CLI (`entcert`) that emits CSV/JSON records for plotting.

pub mod bases;
pub mod certify;
pub mod error;
pub mod measure;
pub mod metrics;
pub mod qcore;
pub mod states;

pub use bases::{
    check_mutually_unbiased, computational_basis, fourier_basis, mub_collection_d3,
    mub_collection_d4, mub_collection_d4_corrected, sigma_x_basis, sigma_y_basis, Basis, BasisPair,
    MubCollection, PairSet,
};
pub use certify::{
    certify_mi, certify_pearson, certify_state_mi, certify_state_pearson, p_grid, sweep,
    CertificationReport, Method, SweepConfig, SweepRecord, Thresholds, Verdict,
};
pub use error::{Error, Result};
pub use measure::{
    joint_probabilities, normalize_counts, simulate_counts, CountsTable, JointProbTable,
    NormalizedCounts,
};
pub use metrics::{
    analytic_mi_sum_rho_c, analytic_mi_sum_werner, bisect_crossing, delta_mi, mi_sum,
    mutual_information, pearson, werner_threshold_crossing, witness_expectation, MiSum,
};
pub use qcore::{
    tensor_product, validate_density, DensityMatrix, Ket, QubitPairMapping, ValidationReport,
};
pub use states::{
    build as build_state, classically_correlated, max_entangled, rho_a, rho_b, rho_c, rho_s, rho_w,
    StateFamily,
};
