//! The 3×3 spin correlation matrix Z⁽ⁱʲ⁾ = tr[ρ (S_i ⊗ S_j)], computed three
//! independent ways: from the definition, from explicit sums over the state
//! coefficients, and by contracting the general correlation matrix with the
//! spin Bloch vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gellmann::{
    bloch_vectors_of_spin, general_correlation_matrix, zs_via_theorem2, GellMannBasis,
};
use crate::spin::{spin_of_dim, SpinOperators};
use crate::state::{state_coefficients, QuantumState, StateCoefficients};
use crate::svd3::{self, Mat3, Svd3};
use crate::tolerance::Tolerances;

/// How a correlation matrix (or a CHSH maximum) was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Definition,
    ElementFormulas,
    Theorem2,
    ClosedForm,
    Oracle,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Definition => "definition",
            Route::ElementFormulas => "element-formulas",
            Route::Theorem2 => "theorem2",
            Route::ClosedForm => "closed-form",
            Route::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinCorrelationMatrix {
    d: usize,
    z: Mat3,
    svd: Svd3,
}

impl SpinCorrelationMatrix {
    pub fn from_entries(d: usize, z: Mat3) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self {
            d,
            z,
            svd: svd3::svd(&z),
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn spin(&self) -> f64 {
        spin_of_dim(self.d)
    }

    pub fn entries(&self) -> &Mat3 {
        &self.z
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.z[i][j]
    }

    /// Descending singular values.
    pub fn singular_values(&self) -> [f64; 3] {
        self.svd.values
    }

    pub fn svd(&self) -> &Svd3 {
        &self.svd
    }

    pub fn transposed(&self) -> Self {
        let t = svd3::transpose(&self.z);
        Self {
            d: self.d,
            z: t,
            svd: svd3::svd(&t),
        }
    }

    pub fn apply(&self, v: &[f64; 3]) -> [f64; 3] {
        svd3::mat_vec(&self.z, v)
    }

    pub fn apply_transpose(&self, v: &[f64; 3]) -> [f64; 3] {
        svd3::mat_vec(&svd3::transpose(&self.z), v)
    }

    pub fn max_abs_diff(&self, other: &SpinCorrelationMatrix) -> f64 {
        max_abs_diff(&self.z, &other.z)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..3).all(|i| (0..3).all(|j| (self.z[i][j] - self.z[j][i]).abs() <= tol))
    }
}

pub fn max_abs_diff(a: &Mat3, b: &Mat3) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max((a[i][j] - b[i][j]).abs());
        }
    }
    worst
}

fn check_dims(state: &QuantumState, ops: &SpinOperators) -> Result<()> {
    if state.dim() != ops.dim() {
        return Err(Error::DimensionMismatch {
            expected: ops.dim(),
            found: state.dim(),
        });
    }
    Ok(())
}

/// Z⁽ⁱʲ⁾ = tr[ρ (S_i ⊗ S_j)] with the tensor products formed explicitly.
pub fn spin_correlation_matrix(
    state: &QuantumState,
    ops: &SpinOperators,
) -> Result<SpinCorrelationMatrix> {
    check_dims(state, ops)?;
    let rho = state.density();
    let mut z = [[0.0; 3]; 3];
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let op = ops.component(i).kron(ops.component(j));
            let v = rho.trace_of_product(&op);
            worst = worst.max(v.im.abs());
            z[i][j] = v.re;
        }
    }
    if worst > Tolerances::DEFAULT.spin_imag_residue {
        return Err(Error::NumericalInconsistency {
            what: "spin correlation matrix",
            residue: worst,
        });
    }
    SpinCorrelationMatrix::from_entries(state.dim(), z)
}

/// All nine entries from explicit sums over ζ_{mm′,kk′}.
///
/// With a_m = √(m(d-m)) and c_m = d+1-2m (levels m = 1..d), the diagonal
/// entries are
///
/// ```text
/// Z11 = ½ Σ a_m a_k Re[ζ_{m(m+1),k(k+1)} + ζ_{m(m+1),(k+1)k}]
/// Z22 = ½ Σ a_m a_k Re[ζ_{(m+1)m,k(k+1)} − ζ_{(m+1)m,(k+1)k}]
/// Z33 = ¼ Σ c_m c_k ζ_{mm,kk}
/// ```
///
/// and every off-diagonal entry that picks up one S₂ factor carries an
/// `-Im[...]`, since S₂ = (|m⟩⟨m+1| − |m+1⟩⟨m|)/(2i).
pub fn spin_correlation_from_coefficients(
    zeta: &StateCoefficients,
) -> Result<SpinCorrelationMatrix> {
    let d = zeta.dim();
    let df = d as f64;
    // 0-based level i stands for m = i + 1
    let a = |i: usize| {
        let m = (i + 1) as f64;
        (m * (df - m)).sqrt()
    };
    let c = |i: usize| df - 1.0 - 2.0 * i as f64;
    let g = |m, mp, k, kp| zeta.get_or_zero(m, mp, k, kp);

    let mut z = [[0.0; 3]; 3];
    for i in 0..d - 1 {
        for j in 0..d - 1 {
            let w = 0.5 * a(i) * a(j);
            let up_up = g(i, i + 1, j, j + 1);
            let up_dn = g(i, i + 1, j + 1, j);
            let dn_up = g(i + 1, i, j, j + 1);
            let dn_dn = g(i + 1, i, j + 1, j);
            z[0][0] += w * (up_up + up_dn).re;
            z[0][1] -= w * (up_up + dn_up).im;
            z[1][0] -= w * (up_up + up_dn).im;
            z[1][1] += w * (dn_up - dn_dn).re;
        }
    }
    for i in 0..d - 1 {
        for j in 0..d {
            let w = 0.5 * a(i) * c(j);
            z[0][2] += w * g(i + 1, i, j, j).re;
            z[1][2] -= w * g(i, i + 1, j, j).im;
        }
    }
    for i in 0..d {
        for j in 0..d - 1 {
            let w = 0.5 * c(i) * a(j);
            z[2][0] += w * g(i, i, j + 1, j).re;
            z[2][1] -= w * g(i, i, j, j + 1).im;
        }
    }
    for i in 0..d {
        for j in 0..d {
            z[2][2] += 0.25 * c(i) * c(j) * g(i, i, j, j).re;
        }
    }
    SpinCorrelationMatrix::from_entries(d, z)
}

/// Z via (n_i, T n_j) in the Gell-Mann basis.
pub fn spin_correlation_via_theorem2(
    state: &QuantumState,
    ops: &SpinOperators,
) -> Result<SpinCorrelationMatrix> {
    check_dims(state, ops)?;
    let basis = GellMannBasis::new(state.dim())?;
    let n = bloch_vectors_of_spin(ops, &basis)?;
    let t = general_correlation_matrix(state, &basis)?;
    SpinCorrelationMatrix::from_entries(state.dim(), zs_via_theorem2(&t, &n)?)
}

/// Computes Z by the requested route.
pub fn spin_correlation_by(
    route: Route,
    state: &QuantumState,
    ops: &SpinOperators,
) -> Result<SpinCorrelationMatrix> {
    match route {
        Route::Definition => spin_correlation_matrix(state, ops),
        Route::ElementFormulas => {
            check_dims(state, ops)?;
            spin_correlation_from_coefficients(&state_coefficients(state))
        }
        Route::Theorem2 => spin_correlation_via_theorem2(state, ops),
        Route::ClosedForm | Route::Oracle => Err(Error::InvalidParameter(format!(
            "route {} does not produce a correlation matrix from a state",
            route.name()
        ))),
    }
}
