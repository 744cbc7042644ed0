//! Eigenvalues of complex Hermitian matrices: Householder reduction to a
//! real symmetric tridiagonal form followed by implicit-shift QL
//! iteration (the classic EISPACK tql scheme).
//!
//! The general-purpose solver in the linear-algebra crate breaks down on
//! the large, highly degenerate matrices this crate produces (block
//! structure with hundreds of identical eigenvalues), so the validator
//! uses this dedicated routine. Eigenvectors are never needed here.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reduce a Hermitian matrix to real tridiagonal form, returning
/// (diagonal, off-diagonal). The off-diagonal is returned as magnitudes:
/// a diagonal phase similarity makes any complex tridiagonal Hermitian
/// matrix real without changing the spectrum.
fn tridiagonalize(m: &DMatrix<Complex64>) -> (Vec<f64>, Vec<f64>) {
    let n = m.nrows();
    let mut w = m.clone();
    let mut off = vec![0.0f64; n.saturating_sub(1)];

    for k in 0..n.saturating_sub(2) {
        let mut xnorm2 = 0.0f64;
        for i in (k + 1)..n {
            xnorm2 += w[(i, k)].norm_sqr();
        }
        let xnorm = xnorm2.sqrt();
        if xnorm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let alpha = w[(k + 1, k)];
        let phase = if alpha.norm() > 0.0 {
            alpha / alpha.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let beta = -phase * xnorm;

        // Householder vector v ∝ x − β·e₁
        let s = n - k - 1;
        let mut v = vec![Complex64::new(0.0, 0.0); s];
        v[0] = alpha - beta;
        for i in (k + 2)..n {
            v[i - k - 1] = w[(i, k)];
        }
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            // column already of the desired form
            off[k] = xnorm;
            continue;
        }
        let inv = 1.0 / vnorm;
        for z in v.iter_mut() {
            *z *= inv;
        }

        // u = W·v on the trailing block
        let mut u = vec![Complex64::new(0.0, 0.0); s];
        for i in 0..s {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..s {
                acc += w[(k + 1 + i, k + 1 + j)] * v[j];
            }
            u[i] = acc;
        }
        // c = v†·u is real for Hermitian W
        let c: f64 = v.iter().zip(&u).map(|(vi, ui)| (vi.conj() * ui).re).sum();
        // q = 2(u − c·v); W ← W − q v† − v q†
        for i in 0..s {
            u[i] = (u[i] - v[i] * c) * 2.0;
        }
        for i in 0..s {
            for j in 0..s {
                let delta = u[i] * v[j].conj() + v[i] * u[j].conj();
                w[(k + 1 + i, k + 1 + j)] -= delta;
            }
        }
        off[k] = xnorm;
    }

    if n >= 2 {
        off[n - 2] = w[(n - 1, n - 2)].norm();
    }
    let diag = (0..n).map(|i| w[(i, i)].re).collect();
    (diag, off)
}

/// Implicit-shift QL iteration on a real symmetric tridiagonal matrix.
/// `d` is the diagonal, `e` the subdiagonal (length n−1). Returns the
/// eigenvalues unsorted.
///
/// Deflation uses a global-scale test (negligible against the matrix
/// norm, EISPACK style) rather than the neighbouring-diagonal test:
/// matrices with large numerically-zero blocks stall the local test.
fn tridiagonal_eigenvalues(mut d: Vec<f64>, e: Vec<f64>) -> Result<Vec<f64>> {
    let n = d.len();
    if n == 0 {
        return Ok(d);
    }
    // shift the off-diagonal up one slot, e[l] couples l and l+1
    let mut e = {
        let mut buf = vec![0.0f64; n];
        buf[..(n - 1)].copy_from_slice(&e);
        buf
    };

    let mut anorm = 0.0f64;
    for i in 0..n {
        let row = d[i].abs() + e[i].abs() + if i > 0 { e[i - 1].abs() } else { 0.0 };
        anorm = anorm.max(row);
    }
    if anorm == 0.0 {
        return Ok(d);
    }
    let negligible = f64::EPSILON * anorm;

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // locate a negligible subdiagonal element to split the matrix
            let mut m = l;
            while m + 1 < n {
                if e[m].abs() <= negligible {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::Numerical(format!(
                    "tridiagonal QL failed to converge at row {l} after 64 sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(if g >= 0.0 { 1.0 } else { -1.0 }));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // deflate without finishing the sweep
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

/// Eigenvalues of a complex Hermitian matrix, ascending. The caller is
/// responsible for (approximate) Hermiticity; only the Hermitian part of
/// round-off asymmetry is seen.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    if m.nrows() == 1 {
        return Ok(vec![m[(0, 0)].re]);
    }
    let (d, e) = tridiagonalize(m);
    let mut eigs = tridiagonal_eigenvalues(d, e)?;
    eigs.sort_by(|a, b| a.total_cmp(b));
    Ok(eigs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
    }

    #[test]
    fn two_by_two_known_spectrum() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        let e = hermitian_eigenvalues(&m).unwrap();
        assert!((e[0] - 0.0).abs() < 1e-12 && (e[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_matrix_is_fixed_point() {
        let m = DMatrix::from_fn(5, 5, |i, j| {
            if i == j {
                Complex64::new(i as f64 - 2.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let e = hermitian_eigenvalues(&m).unwrap();
        for (k, v) in e.iter().enumerate() {
            assert!((v - (k as f64 - 2.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn matches_general_solver_on_random_dense() {
        for (n, seed) in [(3usize, 1u64), (8, 2), (24, 3), (64, 4)] {
            let m = random_hermitian(n, seed);
            let mut ours = hermitian_eigenvalues(&m).unwrap();
            let mut theirs: Vec<f64> = m.clone().symmetric_eigenvalues().iter().cloned().collect();
            ours.sort_by(|a, b| a.total_cmp(b));
            theirs.sort_by(|a, b| a.total_cmp(b));
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-9, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn trace_and_frobenius_are_preserved() {
        let m = random_hermitian(32, 9);
        let eigs = hermitian_eigenvalues(&m).unwrap();
        let trace: f64 = (0..32).map(|i| m[(i, i)].re).sum();
        assert!((eigs.iter().sum::<f64>() - trace).abs() < 1e-9);
        let frob2: f64 = m.iter().map(|z| z.norm_sqr()).sum();
        let eig2: f64 = eigs.iter().map(|x| x * x).sum();
        assert!((frob2 - eig2).abs() < 1e-8);
    }

    #[test]
    fn handles_degenerate_block_structure() {
        // rank-1 all-ones block embedded in a large zero matrix: spectrum
        // is {d·s} ∪ {0,…}; this is the shape that defeats the general
        // solver at scale.
        let d = 32usize;
        let total = d * d;
        let mut m = DMatrix::from_element(total, total, Complex64::new(0.0, 0.0));
        for j in 0..d {
            for jp in 0..d {
                m[(j * d + j, jp * d + jp)] = Complex64::new(0.5 / d as f64, 0.0);
            }
            m[(j * d + j, j * d + j)] += Complex64::new(0.5 / d as f64, 0.0);
        }
        let eigs = hermitian_eigenvalues(&m).unwrap();
        assert!(eigs.iter().all(|x| x.is_finite()));
        let min = eigs.first().unwrap();
        let max = eigs.last().unwrap();
        assert!(*min > -1e-12, "min {min}");
        // top eigenvalue 0.5 + 0.5/d, then (d−1) copies of 0.5/d, rest 0
        assert!((max - (0.5 + 0.5 / d as f64)).abs() < 1e-10, "max {max}");
        let near_half_over_d = eigs
            .iter()
            .filter(|x| (**x - 0.5 / d as f64).abs() < 1e-10)
            .count();
        assert_eq!(near_half_over_d, d - 1);
        assert!((eigs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
