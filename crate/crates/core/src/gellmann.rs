//! Generalized Gell-Mann basis, Bloch vectors of the spin components and the
//! general (d²-1)×(d²-1) correlation matrix.
//!
//! Element order: symmetric block over pairs j < k in lexicographic order,
//! then the antisymmetric block over the same pairs, then the diagonal block
//! by increasing level l = 1..d-1.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spin::SpinOperators;
use crate::state::QuantumState;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GellMannKind {
    Symmetric,
    Antisymmetric,
    Diagonal,
}

/// One basis operator, kept both dense and as its nonzero entries.
#[derive(Debug, Clone, PartialEq)]
pub struct GellMannElement {
    pub kind: GellMannKind,
    pub matrix: ComplexMatrix,
    entries: Vec<(usize, usize, Complex64)>,
}

impl GellMannElement {
    fn new(kind: GellMannKind, matrix: ComplexMatrix) -> Self {
        let mut entries = Vec::new();
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                let v = matrix[(i, j)];
                if v != Complex64::new(0.0, 0.0) {
                    entries.push((i, j, v));
                }
            }
        }
        Self {
            kind,
            matrix,
            entries,
        }
    }

    /// Nonzero entries as (row, col, value).
    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GellMannBasis {
    d: usize,
    elements: Vec<GellMannElement>,
}

impl GellMannBasis {
    pub fn new(d: usize) -> Result<Self> {
        gellmann_basis(d)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GellMannElement] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &GellMannElement {
        &self.elements[i]
    }

    pub fn count_of(&self, kind: GellMannKind) -> usize {
        self.elements.iter().filter(|e| e.kind == kind).count()
    }
}

pub fn gellmann_basis(d: usize) -> Result<GellMannBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let one = Complex64::new(1.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|j| (j + 1..d).map(move |k| (j, k)))
        .collect();
    let mut elements = Vec::with_capacity(d * d - 1);
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = one;
        m[(k, j)] = one;
        elements.push(GellMannElement::new(GellMannKind::Symmetric, m));
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = -i_unit;
        m[(k, j)] = i_unit;
        elements.push(GellMannElement::new(GellMannKind::Antisymmetric, m));
    }
    for l in 1..d {
        let lf = l as f64;
        let norm = (2.0 / (lf * (lf + 1.0))).sqrt();
        let mut diag = vec![0.0; d];
        diag[..l].iter_mut().for_each(|x| *x = norm);
        diag[l] = -lf * norm;
        elements.push(GellMannElement::new(
            GellMannKind::Diagonal,
            ComplexMatrix::from_real_diagonal(&diag),
        ));
    }
    Ok(GellMannBasis { d, elements })
}

/// Coordinates of an operator in the Gell-Mann basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector(pub Vec<f64>);

impl BlochVector {
    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// n_k = ½ (tr[S_k Λ⁽¹⁾], …, tr[S_k Λ⁽ᵈ²⁻¹⁾]) for k = 1, 2, 3.
pub fn bloch_vectors_of_spin(
    ops: &SpinOperators,
    basis: &GellMannBasis,
) -> Result<[BlochVector; 3]> {
    if ops.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: ops.dim(),
        });
    }
    let residue_tol = Tolerances::DEFAULT.general_imag_residue;
    let vector = |k: usize| -> Result<BlochVector> {
        let sk = ops.component(k);
        let mut out = Vec::with_capacity(basis.len());
        for el in basis.elements() {
            // tr[S Λ] = Σ Λ_ij S_ji
            let tr: Complex64 = el.entries().iter().map(|&(i, j, v)| v * sk[(j, i)]).sum();
            if tr.im.abs() > residue_tol {
                return Err(Error::NumericalInconsistency {
                    what: "spin Bloch vector",
                    residue: tr.im.abs(),
                });
            }
            out.push(0.5 * tr.re);
        }
        Ok(BlochVector(out))
    };
    Ok([vector(0)?, vector(1)?, vector(2)?])
}

/// General correlation matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralCorrelationMatrix {
    d: usize,
    t: Vec<f64>,
}

impl GeneralCorrelationMatrix {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// d² - 1.
    pub fn size(&self) -> usize {
        self.d * self.d - 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.size() + j]
    }

    pub fn apply(&self, v: &BlochVector) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j) * v.0[j]).sum())
            .collect()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.t.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }
}

/// tr[ρ (A ⊗ B)] from the nonzero entries of A and B.
pub(crate) fn local_expectation(
    rho: &ComplexMatrix,
    d: usize,
    a: &[(usize, usize, Complex64)],
    b: &[(usize, usize, Complex64)],
) -> Complex64 {
    // tr[ρ (A⊗B)] = Σ ρ_{(m k),(m' k')} A_{m' m} B_{k' k}
    let mut acc = Complex64::new(0.0, 0.0);
    for &(mp, m, av) in a {
        for &(kp, k, bv) in b {
            acc += rho[(m * d + k, mp * d + kp)] * av * bv;
        }
    }
    acc
}

/// T⁽ⁱʲ⁾ = tr[ρ (Λ⁽ⁱ⁾ ⊗ Λ⁽ʲ⁾)].
pub fn general_correlation_matrix(
    state: &QuantumState,
    basis: &GellMannBasis,
) -> Result<GeneralCorrelationMatrix> {
    let d = state.dim();
    if d != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: d,
        });
    }
    let rho = state.density();
    let n = basis.len();
    let mut t = Vec::with_capacity(n * n);
    let mut worst = 0.0f64;
    for ei in basis.elements() {
        for ej in basis.elements() {
            let v = local_expectation(rho, d, ei.entries(), ej.entries());
            worst = worst.max(v.im.abs());
            t.push(v.re);
        }
    }
    if worst > Tolerances::DEFAULT.general_imag_residue {
        return Err(Error::NumericalInconsistency {
            what: "general correlation matrix",
            residue: worst,
        });
    }
    Ok(GeneralCorrelationMatrix { d, t })
}

/// Z⁽ⁱʲ⁾ = (n_i, T n_j).
pub fn zs_via_theorem2(
    t: &GeneralCorrelationMatrix,
    n: &[BlochVector; 3],
) -> Result<[[f64; 3]; 3]> {
    for v in n {
        if v.0.len() != t.size() {
            return Err(Error::DimensionMismatch {
                expected: t.size(),
                found: v.0.len(),
            });
        }
    }
    let tn: Vec<Vec<f64>> = n.iter().map(|v| t.apply(v)).collect();
    let mut z = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            z[i][j] = n[i].0.iter().zip(&tn[j]).map(|(a, b)| a * b).sum();
        }
    }
    Ok(z)
}
