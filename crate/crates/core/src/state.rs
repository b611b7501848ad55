//! Two-qudit density matrices and their coefficient view.
//!
//! The product basis is ordered |m⟩⊗|k⟩ ↦ row `m * d + k` (0-based).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::Tolerances;

/// A validated density operator on C^d ⊗ C^d.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    d: usize,
    rho: ComplexMatrix,
    label: Option<String>,
}

impl QuantumState {
    /// Validates `rho` as a density matrix with the default tolerances.
    pub fn from_density(d: usize, rho: ComplexMatrix) -> Result<Self> {
        Self::from_density_with(d, rho, &Tolerances::DEFAULT)
    }

    pub fn from_density_with(d: usize, rho: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let n = d * d;
        if rho.rows() != n || rho.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho.rows().max(rho.cols()),
            });
        }
        validate_density(&rho, tol)?;
        Ok(Self {
            d,
            rho,
            label: None,
        })
    }

    /// |ψ⟩⟨ψ| for the normalized coefficient vector; entry `m * d + k` is η_{mk}.
    pub fn pure(coeffs: &[Complex64], d: usize) -> Result<Self> {
        pure_state(coeffs, d)
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let n = d * d;
        let rho = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
        Ok(Self {
            d,
            rho,
            label: Some("maximally-mixed".into()),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn density(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// tr ρ².
    pub fn purity(&self) -> f64 {
        self.rho.trace_of_product(&self.rho).re
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (1.0 - self.purity()).abs() <= tol
    }

    /// ρ_A = tr_B ρ.
    pub fn reduced_first(&self) -> ComplexMatrix {
        let d = self.d;
        ComplexMatrix::from_fn(d, d, |m, mp| {
            (0..d).map(|k| self.rho[(m * d + k, mp * d + k)]).sum()
        })
    }

    /// Invariance under exchanging the two tensor factors, V ρ V = ρ.
    pub fn is_permutation_invariant(&self, tol: f64) -> bool {
        let d = self.d;
        for m in 0..d {
            for k in 0..d {
                for mp in 0..d {
                    for kp in 0..d {
                        let a = self.rho[(m * d + k, mp * d + kp)];
                        let b = self.rho[(k * d + m, kp * d + mp)];
                        if (a - b).norm() > tol {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn validate_density(rho: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    let dev = rho.hermitian_deviation();
    if dev > tol.hermitian {
        return Err(Error::NotHermitian(dev));
    }
    if !rho.is_unit_trace(tol.trace) {
        return Err(Error::NotUnitTrace(rho.trace().re));
    }
    let lowest = rho.hermitian_eigenvalues()[0];
    if lowest < -tol.positivity {
        return Err(Error::NotPositive(lowest));
    }
    Ok(())
}

/// Normalizes `coeffs` (length d²) and forms the projector onto it.
pub fn pure_state(coeffs: &[Complex64], d: usize) -> Result<QuantumState> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if coeffs.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: coeffs.len(),
        });
    }
    let norm = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::DegenerateState);
    }
    let psi: Vec<Complex64> = coeffs.iter().map(|z| z / norm).collect();
    Ok(QuantumState {
        d,
        rho: ComplexMatrix::outer(&psi),
        label: None,
    })
}

/// ζ_{mm′,kk′} = ⟨mk|ρ|m′k′⟩, indexed 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct StateCoefficients {
    d: usize,
    zeta: Vec<Complex64>,
}

impl StateCoefficients {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// ζ at 0-based levels (m, m′, k, k′).
    pub fn get(&self, m: usize, mp: usize, k: usize, kp: usize) -> Complex64 {
        let d = self.d;
        self.zeta[((m * d + mp) * d + k) * d + kp]
    }

    /// Like [`get`](Self::get) but zero for any index outside 0..d.
    pub fn get_or_zero(&self, m: usize, mp: usize, k: usize, kp: usize) -> Complex64 {
        let d = self.d;
        if m < d && mp < d && k < d && kp < d {
            self.get(m, mp, k, kp)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// ρ = Σ ζ_{mm′,kk′} |mk⟩⟨m′k′|.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.d;
        let mut rho = ComplexMatrix::zeros(d * d, d * d);
        for m in 0..d {
            for mp in 0..d {
                for k in 0..d {
                    for kp in 0..d {
                        rho[(m * d + k, mp * d + kp)] = self.get(m, mp, k, kp);
                    }
                }
            }
        }
        rho
    }

    /// Worst |ζ*_{mm′,kk′} - ζ_{m′m,k′k}|.
    pub fn conjugation_defect(&self) -> f64 {
        let d = self.d;
        let mut worst: f64 = 0.0;
        for m in 0..d {
            for mp in 0..d {
                for k in 0..d {
                    for kp in 0..d {
                        let a = self.get(m, mp, k, kp).conj();
                        let b = self.get(mp, m, kp, k);
                        worst = worst.max((a - b).norm());
                    }
                }
            }
        }
        worst
    }

    /// Σ_{m,k} ζ_{mm,kk}.
    pub fn diagonal_sum(&self) -> Complex64 {
        let d = self.d;
        (0..d)
            .flat_map(|m| (0..d).map(move |k| (m, k)))
            .map(|(m, k)| self.get(m, m, k, k))
            .sum()
    }

    /// True when every ζ has zero imaginary part (up to `tol`).
    pub fn is_real(&self, tol: f64) -> bool {
        self.zeta.iter().all(|z| z.im.abs() <= tol)
    }
}

pub fn state_coefficients(state: &QuantumState) -> StateCoefficients {
    let d = state.d;
    let mut zeta = Vec::with_capacity(d * d * d * d);
    for m in 0..d {
        for mp in 0..d {
            for k in 0..d {
                for kp in 0..d {
                    zeta.push(state.rho[(m * d + k, mp * d + kp)]);
                }
            }
        }
    }
    StateCoefficients { d, zeta }
}
