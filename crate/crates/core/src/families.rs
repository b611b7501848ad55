//! Named two-qudit state families with closed-form correlation matrices and
//! CHSH parameters.
//!
//! Level labels `k`, `n` in this module are 1-based (|1⟩..|d⟩), matching the
//! command-line interface.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gellmann::{general_correlation_matrix, GellMannBasis};
use crate::matrix::ComplexMatrix;
use crate::spin::spin_of_dim;
use crate::state::QuantumState;
use crate::svd3::{self, Mat3};
use crate::tolerance::Tolerances;

/// Closed-form correlation matrix and CHSH parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub z: Mat3,
    pub gamma: f64,
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(())
}

/// Schmidt coefficients μ_m of Σ√μ_m|mm⟩.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtSpectrum(Vec<f64>);

impl SchmidtSpectrum {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        check_dim(mu.len())?;
        if let Some(bad) = mu.iter().find(|&&x| !x.is_finite() || x < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Schmidt coefficient {bad} is negative or not finite"
            )));
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "Schmidt coefficients sum to {total}, expected 1"
            )));
        }
        Ok(Self(mu))
    }

    pub fn uniform(d: usize) -> Result<Self> {
        check_dim(d)?;
        Ok(Self(vec![1.0 / d as f64; d]))
    }

    /// All weight on level `n` (1-based).
    pub fn basis(d: usize, n: usize) -> Result<Self> {
        check_dim(d)?;
        check_level(n, d)?;
        let mut mu = vec![0.0; d];
        mu[n - 1] = 1.0;
        Ok(Self(mu))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }
}

fn check_level(n: usize, d: usize) -> Result<()> {
    if n == 0 || n > d {
        return Err(Error::InvalidParameter(format!(
            "level {n} is outside 1..={d}"
        )));
    }
    Ok(())
}

/// Werner parameter Φ = tr[ρV] ∈ [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WernerParameter(f64);

impl WernerParameter {
    pub fn new(phi: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&phi) {
            return Err(Error::InvalidParameter(format!(
                "Werner parameter {phi} is outside [-1, 1]"
            )));
        }
        Ok(Self(phi))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Werner states are separable exactly for Φ ∈ [0, 1].
    pub fn is_separable(self) -> bool {
        self.0 >= 0.0
    }
}

pub fn ghz_state(d: usize) -> Result<QuantumState> {
    Ok(schmidt_state(&SchmidtSpectrum::uniform(d)?)?.with_label(format!("ghz(d={d})")))
}

pub fn ghz_closed_form(d: usize) -> Result<ClosedForm> {
    check_dim(d)?;
    let c = (d * d - 1) as f64 / 12.0;
    let df = d as f64;
    Ok(ClosedForm {
        z: [[c, 0.0, 0.0], [0.0, -c, 0.0], [0.0, 0.0, c]],
        gamma: SQRT_2 / 3.0 * (df + 1.0) / (df - 1.0),
    })
}

/// Σ √(μ_m μ_n) |mm⟩⟨nn|, built entrywise so that uniform weights give
/// exactly 1/d on the support.
pub fn schmidt_state(mu: &SchmidtSpectrum) -> Result<QuantumState> {
    let d = mu.dim();
    let w = mu.weights();
    let mut rho = ComplexMatrix::zeros(d * d, d * d);
    for m in 0..d {
        for n in 0..d {
            rho[(m * d + m, n * d + n)] = Complex64::new((w[m] * w[n]).sqrt(), 0.0);
        }
    }
    QuantumState::from_density(d, rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchmidtClosedForm {
    pub z11: f64,
    pub z22: f64,
    pub z33: f64,
    pub gamma: f64,
}

impl SchmidtClosedForm {
    pub fn matrix(&self) -> Mat3 {
        [
            [self.z11, 0.0, 0.0],
            [0.0, self.z22, 0.0],
            [0.0, 0.0, self.z33],
        ]
    }
}

/// Z11 = −Z22 = Σ_{k=1}^{2s} k(s − (k−1)/2)√(μ_k μ_{k+1}),
/// Z33 = Σ_{k=1}^{2s+1} (s − (k−1))² μ_k.
pub fn schmidt_closed_form(mu: &SchmidtSpectrum) -> SchmidtClosedForm {
    let d = mu.dim();
    let s = spin_of_dim(d);
    let w = mu.weights();
    let z11: f64 = (1..d)
        .map(|k| {
            let kf = k as f64;
            kf * (s - (kf - 1.0) / 2.0) * (w[k - 1] * w[k]).sqrt()
        })
        .sum();
    let z33: f64 = (1..=d)
        .map(|k| {
            let lvl = s - (k as f64 - 1.0);
            lvl * lvl * w[k - 1]
        })
        .sum();
    // singular values: |Z11| twice, |Z33| once
    let mut sv = [z11.abs(), z11.abs(), z33.abs()];
    sv.sort_by(|a, b| b.total_cmp(a));
    SchmidtClosedForm {
        z11,
        z22: -z11,
        z33,
        gamma: sv[0].hypot(sv[1]) / (s * s),
    }
}

fn check_two_term(k: usize, n: usize, d: usize) -> Result<()> {
    check_dim(d)?;
    check_level(k, d)?;
    check_level(n, d)?;
    if n <= k + 1 {
        return Err(Error::InvalidParameter(format!(
            "two-term state needs n > k + 1, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

/// (|kk⟩ + |nn⟩)/√2.
pub fn two_term_state(k: usize, n: usize, d: usize) -> Result<QuantumState> {
    check_two_term(k, n, d)?;
    let mut mu = vec![0.0; d];
    mu[k - 1] = 0.5;
    mu[n - 1] = 0.5;
    Ok(schmidt_state(&SchmidtSpectrum(mu))?.with_label(format!("two-term(k={k},n={n},d={d})")))
}

/// γ = {(s − (k−1))² + (s − (n−1))²}/(2s²); requires n > k + 1.
pub fn two_term_closed_form(k: usize, n: usize, d: usize) -> Result<f64> {
    check_two_term(k, n, d)?;
    let s = spin_of_dim(d);
    let a = s - (k as f64 - 1.0);
    let b = s - (n as f64 - 1.0);
    Ok((a * a + b * b) / (2.0 * s * s))
}

/// |nn⟩.
pub fn product_state(n: usize, d: usize) -> Result<QuantumState> {
    Ok(schmidt_state(&SchmidtSpectrum::basis(d, n)?)?.with_label(format!("product(n={n},d={d})")))
}

/// γ = (1 − (n−1)/s)².
pub fn product_state_closed_form(n: usize, d: usize) -> Result<f64> {
    check_dim(d)?;
    check_level(n, d)?;
    let s = spin_of_dim(d);
    let x = 1.0 - (n as f64 - 1.0) / s;
    Ok(x * x)
}

/// V_d(ψ₁⊗ψ₂) = ψ₂⊗ψ₁ as a permutation matrix.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d * d, d * d);
    for m in 0..d {
        for k in 0..d {
            v[(k * d + m, m * d + k)] = Complex64::new(1.0, 0.0);
        }
    }
    v
}

/// ρ = ((d−Φ)/(d(d²−1))) I + ((dΦ−1)/(d(d²−1))) V_d.
pub fn werner_state(d: usize, phi: WernerParameter) -> Result<QuantumState> {
    check_dim(d)?;
    let df = d as f64;
    let phi = phi.value();
    let denom = df * (df * df - 1.0);
    let id = ComplexMatrix::identity(d * d).scale_real((df - phi) / denom);
    let v = swap_operator(d).scale_real((df * phi - 1.0) / denom);
    Ok(QuantumState::from_density(d, &id + &v)?.with_label(format!("werner(d={d},phi={phi})")))
}

/// Z = ((dΦ−1)/12) I and γ = (√2/3)|dΦ−1|/(d−1)².
pub fn werner_closed_form(d: usize, phi: WernerParameter) -> Result<ClosedForm> {
    check_dim(d)?;
    let df = d as f64;
    let x = df * phi.value() - 1.0;
    let c = x / 12.0;
    Ok(ClosedForm {
        z: [[c, 0.0, 0.0], [0.0, c, 0.0], [0.0, 0.0, c]],
        gamma: SQRT_2 / 3.0 * x.abs() / ((df - 1.0) * (df - 1.0)),
    })
}

/// C = √(2(1 − tr ρ_A²)) for a pure state.
pub fn concurrence_pure(state: &QuantumState) -> Result<f64> {
    let purity = state.purity();
    if (1.0 - purity).abs() > Tolerances::DEFAULT.purity {
        return Err(Error::NotPure(purity));
    }
    let ra = state.reduced_first();
    let local_purity = ra.trace_of_product(&ra).re;
    Ok((2.0 * (1.0 - local_purity)).max(0.0).sqrt())
}

/// √(τ₁² + τ₂²) from the two largest singular values of the Pauli
/// correlation matrix T₂ of a two-qubit state.
pub fn horodecki_parameter(state: &QuantumState) -> Result<f64> {
    if state.dim() != 2 {
        return Err(Error::InvalidParameter(format!(
            "Horodecki parameter needs a two-qubit state, got d = {}",
            state.dim()
        )));
    }
    let t = general_correlation_matrix(state, &GellMannBasis::new(2)?)?;
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = t.get(i, j);
        }
    }
    let sv = svd3::svd(&m).values;
    Ok(sv[0].hypot(sv[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsh::{analyze, chsh_parameter};
    use crate::correlation::{max_abs_diff, spin_correlation_matrix, Route};
    use crate::spin::make_spin_components;
    use crate::state::state_coefficients;

    fn pipeline_gamma(st: &QuantumState) -> f64 {
        analyze(st, Route::Definition).unwrap().gamma
    }

    #[test]
    fn ghz_is_bell_state_at_d2() {
        let st = ghz_state(2).unwrap();
        let h = 0.5;
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((st.density()[(i, j)].re - h).abs() < 1e-15);
        }
        assert!((st.purity() - 1.0).abs() < 1e-12);
        assert!(st.is_permutation_invariant(1e-15));
    }

    #[test]
    fn ghz_closed_form_values() {
        assert!((ghz_closed_form(2).unwrap().gamma - SQRT_2).abs() < 1e-15);
        assert!((ghz_closed_form(3).unwrap().gamma - 2.0 * SQRT_2 / 3.0).abs() < 1e-15);
        let big = ghz_closed_form(2001).unwrap().gamma;
        assert!(big < 1.0 && (big - SQRT_2 / 3.0).abs() < 1e-3);
        let ops = make_spin_components(3).unwrap();
        let z = spin_correlation_matrix(&ghz_state(3).unwrap(), &ops).unwrap();
        assert!(max_abs_diff(z.entries(), &ghz_closed_form(3).unwrap().z) < 1e-14);
    }

    #[test]
    fn schmidt_special_cases() {
        let uniform = schmidt_state(&SchmidtSpectrum::uniform(4).unwrap()).unwrap();
        assert!(
            uniform
                .density()
                .max_abs_diff(ghz_state(4).unwrap().density())
                < 1e-15
        );
        let prod = schmidt_state(&SchmidtSpectrum::basis(4, 2).unwrap()).unwrap();
        assert!(
            prod.density()
                .max_abs_diff(product_state(2, 4).unwrap().density())
                == 0.0
        );
        let two = schmidt_state(&SchmidtSpectrum::new(vec![0.5, 0.0, 0.0, 0.5]).unwrap()).unwrap();
        assert!(
            two.density()
                .max_abs_diff(two_term_state(1, 4, 4).unwrap().density())
                < 1e-15
        );
        assert!(state_coefficients(&two).is_real(0.0));
    }

    #[test]
    fn spectrum_validation() {
        assert!(SchmidtSpectrum::new(vec![0.5, 0.6]).is_err());
        assert!(SchmidtSpectrum::new(vec![1.5, -0.5]).is_err());
        assert!(SchmidtSpectrum::new(vec![1.0]).is_err());
        assert!(SchmidtSpectrum::basis(3, 0).is_err());
        assert!(SchmidtSpectrum::basis(3, 4).is_err());
    }

    #[test]
    fn schmidt_closed_form_cases() {
        let u = schmidt_closed_form(&SchmidtSpectrum::uniform(3).unwrap());
        assert!((u.z11 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(u.z22, -u.z11);
        for d in 3..=8 {
            let s = spin_of_dim(d);
            let mut mu = vec![0.0; d];
            mu[0] = 0.5;
            mu[d - 1] = 0.5;
            let e = schmidt_closed_form(&SchmidtSpectrum::new(mu).unwrap());
            assert_eq!(e.z11, 0.0);
            assert!((e.z33 - s * s).abs() < 1e-12);
            assert!((e.gamma - 1.0).abs() < 1e-12);
            let p = schmidt_closed_form(&SchmidtSpectrum::basis(d, 1).unwrap());
            assert_eq!(p.z11, 0.0);
            assert!((p.z33 - s * s).abs() < 1e-12 && (p.gamma - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_closed_form_matches_pipeline() {
        let ops = make_spin_components(5).unwrap();
        let mu = SchmidtSpectrum::new(vec![0.05, 0.3, 0.15, 0.4, 0.1]).unwrap();
        let cf = schmidt_closed_form(&mu);
        let z = spin_correlation_matrix(&schmidt_state(&mu).unwrap(), &ops).unwrap();
        assert!(max_abs_diff(z.entries(), &cf.matrix()) < 1e-12);
        assert!((chsh_parameter(&z) - cf.gamma).abs() < 1e-12);
    }

    #[test]
    fn two_term_cases() {
        for d in 3..=9 {
            assert!((two_term_closed_form(1, d, d).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((two_term_closed_form(2, 4, 5).unwrap() - 0.25).abs() < 1e-15);
        assert!((pipeline_gamma(&two_term_state(2, 4, 5).unwrap()) - 0.25).abs() < 1e-12);
        for d in 3..=9 {
            for k in 1..=d {
                for n in k + 2..=d {
                    assert!(two_term_closed_form(k, n, d).unwrap() <= 1.0 + 1e-15);
                }
            }
        }
        assert!(two_term_closed_form(2, 3, 5).is_err());
        assert!(two_term_state(3, 3, 5).is_err());
        assert!(two_term_closed_form(1, 6, 5).is_err());
    }

    #[test]
    fn product_cases() {
        for d in 2..=9 {
            assert!((product_state_closed_form(1, d).unwrap() - 1.0).abs() < 1e-15);
            assert!((product_state_closed_form(d, d).unwrap() - 1.0).abs() < 1e-15);
        }
        assert_eq!(product_state_closed_form(2, 3).unwrap(), 0.0);
        assert_eq!(pipeline_gamma(&product_state(2, 3).unwrap()), 0.0);
        assert!(product_state_closed_form(0, 3).is_err());
        assert!(product_state_closed_form(4, 3).is_err());
    }

    #[test]
    fn werner_properties() {
        assert!(WernerParameter::new(1.5).is_err());
        assert!(WernerParameter::new(-1.0001).is_err());
        for d in 2..=5 {
            let mixed = werner_state(d, WernerParameter::new(1.0 / d as f64).unwrap()).unwrap();
            let mm = QuantumState::maximally_mixed(d).unwrap();
            assert!(mixed.density().max_abs_diff(mm.density()) < 1e-15);
            for phi in [-1.0, -0.3, 0.0, 0.5, 1.0] {
                let st = werner_state(d, WernerParameter::new(phi).unwrap()).unwrap();
                let eig = st.density().hermitian_eigenvalues();
                assert!(eig[0] >= -1e-12 && *eig.last().unwrap() <= 1.0 + 1e-12);
                assert!(st.is_permutation_invariant(0.0));
            }
        }
        let ops = make_spin_components(3).unwrap();
        let st = werner_state(3, WernerParameter::new(-1.0).unwrap()).unwrap();
        let z = spin_correlation_matrix(&st, &ops).unwrap();
        let t = -1.0 / 3.0;
        assert!(max_abs_diff(z.entries(), &[[t, 0.0, 0.0], [0.0, t, 0.0], [0.0, 0.0, t]]) < 1e-14);
        assert!(z.is_symmetric(1e-10));
    }

    #[test]
    fn werner_closed_form_values() {
        let g = |d, phi| {
            werner_closed_form(d, WernerParameter::new(phi).unwrap())
                .unwrap()
                .gamma
        };
        assert!((g(2, -1.0) - SQRT_2).abs() < 1e-15);
        for phi in [-1.0, -0.2, 0.4, 1.0] {
            assert!((g(2, phi) - SQRT_2 / 3.0 * (2.0 * phi - 1.0).abs()).abs() < 1e-15);
            let st = werner_state(2, WernerParameter::new(phi).unwrap()).unwrap();
            assert!((horodecki_parameter(&st).unwrap() - g(2, phi)).abs() < 1e-12);
        }
        for d in 3..=10 {
            for i in 0..=20 {
                let phi = -1.0 + 0.1 * i as f64;
                assert!(g(d, phi.min(1.0)) < 1.0);
            }
        }
    }

    #[test]
    fn concurrence_values() {
        for d in 2..=8 {
            let c = concurrence_pure(&ghz_state(d).unwrap()).unwrap();
            assert!((c - (2.0 * (d as f64 - 1.0) / d as f64).sqrt()).abs() < 1e-12);
            assert!(concurrence_pure(&product_state(1, d).unwrap()).unwrap() < 1e-12);
        }
        for d in 3..=8 {
            let c = concurrence_pure(&two_term_state(1, d, d).unwrap()).unwrap();
            assert!((c - 1.0).abs() < 1e-12);
        }
        let mixed = werner_state(3, WernerParameter::new(0.0).unwrap()).unwrap();
        assert!(matches!(concurrence_pure(&mixed), Err(Error::NotPure(_))));
    }

    #[test]
    fn horodecki_cases() {
        let bell = ghz_state(2).unwrap();
        assert!((horodecki_parameter(&bell).unwrap() - SQRT_2).abs() < 1e-12);
        assert!((horodecki_parameter(&product_state(1, 2).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        // 2√(μ₁μ₂) = 0.6 → μ₁ = (1 + √(1 − 0.36))/2 = 0.9
        let st = schmidt_state(&SchmidtSpectrum::new(vec![0.9, 0.1]).unwrap()).unwrap();
        let c = concurrence_pure(&st).unwrap();
        assert!((c - 0.6).abs() < 1e-12);
        let m = horodecki_parameter(&st).unwrap();
        assert!((m - 1.36f64.sqrt()).abs() < 1e-12);
        assert!((pipeline_gamma(&st) - m).abs() < 1e-10);
        assert!(horodecki_parameter(&ghz_state(3).unwrap()).is_err());
    }
}
