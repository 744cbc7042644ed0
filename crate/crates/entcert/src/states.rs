//! Constructors for every state family studied here, parameterized by
//! the local dimension d and a mixing parameter p ∈ [0, 1].
//!
//! All constructors return convex mixtures of projectors, so positivity
//! holds by construction; Hermiticity and unit trace are re-checked by
//! the [`DensityMatrix`] constructor.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{tensor_product, DensityMatrix, Ket, QubitPairMapping};

/// The implemented state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateFamily {
    /// Σ_j|jj⟩/√d, pure and maximally entangled. Ignores p.
    #[serde(rename = "max")]
    MaxEntangled,
    /// (1/d) Σ_j |jj⟩⟨jj|: classical correlations in the computational
    /// basis only. Ignores p.
    #[serde(rename = "classical")]
    ClassCorr,
    /// p·(maximally entangled) + (1−p)·(classically correlated);
    /// entangled for every p ≠ 0.
    #[serde(rename = "rho_c")]
    RhoC,
    /// Werner family p·(maximally entangled) + (1−p)·I/d²;
    /// entangled iff p > 1/(d+1).
    #[serde(rename = "rho_w")]
    RhoW,
    /// p·(maximally entangled) + (1−p)·[(|+−⟩⟨+−|+|−+⟩⟨−+|)/2]^{⊗n},
    /// defined for d = 2^n; the noise term is anti-correlated in the σx
    /// basis, so correlations favor σx over Fourier.
    #[serde(rename = "rho_a")]
    RhoA,
    /// d = 2 only: p|Φ⁺⟩⟨Φ⁺| + (1−p)|Φ⁻⟩⟨Φ⁻|; entangled for p ≠ 1/2.
    #[serde(rename = "rho_b")]
    RhoB,
    /// d = 2 only: p·(|00⟩⟨00|+|11⟩⟨11|)/2 + (1−p)·(|++⟩⟨++|+|−−⟩⟨−−|)/2;
    /// separable for every p.
    #[serde(rename = "rho_s")]
    RhoS,
}

impl StateFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            StateFamily::MaxEntangled => "max",
            StateFamily::ClassCorr => "classical",
            StateFamily::RhoC => "rho_c",
            StateFamily::RhoW => "rho_w",
            StateFamily::RhoA => "rho_a",
            StateFamily::RhoB => "rho_b",
            StateFamily::RhoS => "rho_s",
        }
    }

    /// Whether the p parameter has any effect.
    pub fn uses_p(&self) -> bool {
        !matches!(self, StateFamily::MaxEntangled | StateFamily::ClassCorr)
    }

    /// Check that `d` is admissible for this family.
    pub fn check_dim(&self, d: usize) -> Result<()> {
        match self {
            StateFamily::RhoA => {
                if !d.is_power_of_two() || d < 2 {
                    return Err(Error::Dimension(format!("rho_a needs d = 2^n, got {d}")));
                }
            }
            StateFamily::RhoB | StateFamily::RhoS => {
                if d != 2 {
                    return Err(Error::Dimension(format!(
                        "{} is defined for d = 2 only, got {d}",
                        self.as_str()
                    )));
                }
            }
            _ => {
                if d < 2 {
                    return Err(Error::Dimension(format!("need d >= 2, got {d}")));
                }
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max" | "max_entangled" => Ok(StateFamily::MaxEntangled),
            "classical" | "class_corr" => Ok(StateFamily::ClassCorr),
            "rho_c" => Ok(StateFamily::RhoC),
            "rho_w" | "werner" => Ok(StateFamily::RhoW),
            "rho_a" => Ok(StateFamily::RhoA),
            "rho_b" => Ok(StateFamily::RhoB),
            "rho_s" => Ok(StateFamily::RhoS),
            other => Err(Error::Param(format!(
                "unknown family '{other}' (expected max | classical | rho_c | rho_w | rho_a | rho_b | rho_s)"
            ))),
        }
    }
}

impl std::fmt::Display for StateFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_p(p: f64) -> Result<()> {
    // Out of range is an error, never a silent clamp: verdicts must not
    // be computed on unphysical inputs.
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::Param(format!(
            "mixing parameter p = {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// The maximally entangled ket Σ_j|jj⟩/√d.
pub fn max_entangled_ket(d: usize) -> Result<Ket> {
    if d < 2 {
        return Err(Error::Dimension(format!("need d >= 2, got {d}")));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    let w = 1.0 / (d as f64).sqrt();
    for j in 0..d {
        amps[j * d + j] = Complex64::new(w, 0.0);
    }
    Ket::new(amps)
}

/// Projector onto Σ_j|jj⟩/√d.
pub fn max_entangled(d: usize) -> Result<DensityMatrix> {
    DensityMatrix::from_joint_ket(d, &max_entangled_ket(d)?)
}

/// (1/d) Σ_j |jj⟩⟨jj|.
pub fn classically_correlated(d: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::Dimension(format!("need d >= 2, got {d}")));
    }
    let total = d * d;
    let mut m = DMatrix::from_element(total, total, Complex64::new(0.0, 0.0));
    for j in 0..d {
        m[(j * d + j, j * d + j)] = Complex64::new(1.0 / d as f64, 0.0);
    }
    DensityMatrix::new(d, m)
}

/// p·max_entangled(d) + (1−p)·classically_correlated(d).
pub fn rho_c(d: usize, p: f64) -> Result<DensityMatrix> {
    check_p(p)?;
    max_entangled(d)?.mix(&classically_correlated(d)?, p)
}

/// Werner state p·max_entangled(d) + (1−p)·I/d².
pub fn rho_w(d: usize, p: f64) -> Result<DensityMatrix> {
    check_p(p)?;
    if d < 2 {
        return Err(Error::Dimension(format!("need d >= 2, got {d}")));
    }
    let total = d * d;
    let mixed = DensityMatrix::new(
        d,
        DMatrix::identity(total, total) * Complex64::new(1.0 / total as f64, 0.0),
    )?;
    max_entangled(d)?.mix(&mixed, p)
}

/// p·max_entangled(d) + (1−p)·[(|+−⟩⟨+−| + |−+⟩⟨−+|)/2]^{⊗n} for d = 2^n.
///
/// The noise term is built per qubit pair in interleaved slot order and
/// routed through the same slot regrouping as the entangled term, so the
/// two marginal systems are consistent across the whole family.
pub fn rho_a(d: usize, p: f64) -> Result<DensityMatrix> {
    check_p(p)?;
    StateFamily::RhoA.check_dim(d)?;
    let n = d.trailing_zeros() as usize;

    let s = 1.0 / 2f64.sqrt();
    let plus = Ket::new(vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)])?;
    let minus = Ket::new(vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)])?;
    let pm = plus.tensor(&minus).projector();
    let mp = minus.tensor(&plus).projector();
    let pair_noise = (pm + mp) * Complex64::new(0.5, 0.0);

    let mut noise = pair_noise.clone();
    for _ in 1..n {
        noise = tensor_product(&noise, &pair_noise);
    }
    let mapping = QubitPairMapping::interleaved_to_grouped(n)?;
    let noise = mapping.apply_to_matrix(&noise)?;
    let noise = DensityMatrix::new(d, noise)?;

    max_entangled(d)?.mix(&noise, p)
}

fn bell_phi(d2_sign: f64) -> Result<Ket> {
    let s = 1.0 / 2f64.sqrt();
    Ket::new(vec![
        Complex64::new(s, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(d2_sign * s, 0.0),
    ])
}

/// d = 2: p|Φ⁺⟩⟨Φ⁺| + (1−p)|Φ⁻⟩⟨Φ⁻| with |Φ^±⟩ = (|00⟩ ± |11⟩)/√2.
pub fn rho_b(p: f64) -> Result<DensityMatrix> {
    check_p(p)?;
    let plus = DensityMatrix::from_joint_ket(2, &bell_phi(1.0)?)?;
    let minus = DensityMatrix::from_joint_ket(2, &bell_phi(-1.0)?)?;
    plus.mix(&minus, p)
}

/// d = 2, always separable:
/// p·(|00⟩⟨00|+|11⟩⟨11|)/2 + (1−p)·(|++⟩⟨++|+|−−⟩⟨−−|)/2.
pub fn rho_s(p: f64) -> Result<DensityMatrix> {
    check_p(p)?;
    let comp_corr = classically_correlated(2)?;
    let s = 1.0 / 2f64.sqrt();
    let plus = Ket::new(vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)])?;
    let minus = Ket::new(vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)])?;
    let x_corr = (plus.tensor(&plus).projector() + minus.tensor(&minus).projector())
        * Complex64::new(0.5, 0.0);
    comp_corr.mix(&DensityMatrix::new(2, x_corr)?, p)
}

/// Build any family from (family, d, p). For the p-less families the
/// parameter is still range-checked so configs stay honest.
pub fn build(family: StateFamily, d: usize, p: f64) -> Result<DensityMatrix> {
    family.check_dim(d)?;
    check_p(p)?;
    match family {
        StateFamily::MaxEntangled => max_entangled(d),
        StateFamily::ClassCorr => classically_correlated(d),
        StateFamily::RhoC => rho_c(d, p),
        StateFamily::RhoW => rho_w(d, p),
        StateFamily::RhoA => rho_a(d, p),
        StateFamily::RhoB => rho_b(p),
        StateFamily::RhoS => rho_s(p),
    }
}
