//! Spin-s operators on a single qudit and unit directions in R³.
//!
//! Basis vectors are stored 0-based: storage index `i` holds level `m = i + 1`
//! of the computational basis |1⟩..|d⟩, so S₃|m⟩ = (s - (m - 1))|m⟩ reads
//! `(s - i)` in code.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance::Tolerances;

/// A unit vector in R³, used as a measurement direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVector3([f64; 3]);

impl UnitVector3 {
    pub const X: UnitVector3 = UnitVector3([1.0, 0.0, 0.0]);
    pub const Y: UnitVector3 = UnitVector3([0.0, 1.0, 0.0]);
    pub const Z: UnitVector3 = UnitVector3([0.0, 0.0, 1.0]);

    /// Accepts `r` only if ‖r‖ = 1 within the default tolerance.
    pub fn new(r: [f64; 3]) -> Result<Self> {
        let norm = norm3(&r);
        if (norm - 1.0).abs() > Tolerances::DEFAULT.unit_norm {
            return Err(Error::InvalidDirection { norm });
        }
        Ok(Self(r))
    }

    /// Normalizes `v`, or returns `None` when its norm is below `min_norm`.
    pub fn normalize(v: [f64; 3], min_norm: f64) -> Option<Self> {
        let norm = norm3(&v);
        (norm >= min_norm && norm.is_finite())
            .then(|| Self([v[0] / norm, v[1] / norm, v[2] / norm]))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        dot3(&self.0, &other.0)
    }

    pub fn neg(&self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl TryFrom<[f64; 3]> for UnitVector3 {
    type Error = Error;

    fn try_from(r: [f64; 3]) -> Result<Self> {
        Self::new(r)
    }
}

impl From<UnitVector3> for [f64; 3] {
    fn from(v: UnitVector3) -> Self {
        v.0
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm3(a: &[f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// The spin components S₁, S₂, S₃ on C^d with d = 2s + 1 (ħ = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    d: usize,
    components: [ComplexMatrix; 3],
}

impl SpinOperators {
    pub fn new(d: usize) -> Result<Self> {
        make_spin_components(d)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// The spin quantum number s = (d - 1)/2.
    pub fn spin(&self) -> f64 {
        spin_of_dim(self.d)
    }

    pub fn s1(&self) -> &ComplexMatrix {
        &self.components[0]
    }

    pub fn s2(&self) -> &ComplexMatrix {
        &self.components[1]
    }

    pub fn s3(&self) -> &ComplexMatrix {
        &self.components[2]
    }

    /// Component `k` in 0..3.
    pub fn component(&self, k: usize) -> &ComplexMatrix {
        &self.components[k]
    }

    pub fn all(&self) -> &[ComplexMatrix; 3] {
        &self.components
    }

    /// S_r = r₁S₁ + r₂S₂ + r₃S₃.
    pub fn projection(&self, r: &UnitVector3) -> ComplexMatrix {
        spin_projection(self, r)
    }
}

pub fn spin_of_dim(d: usize) -> f64 {
    (d as f64 - 1.0) / 2.0
}

/// Builds S₁, S₂, S₃ in the computational basis.
pub fn make_spin_components(d: usize) -> Result<SpinOperators> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut s1 = ComplexMatrix::zeros(d, d);
    let mut s2 = ComplexMatrix::zeros(d, d);
    for i in 0..d - 1 {
        // level m = i + 1 couples to m + 1 with weight sqrt(m(d - m))/2
        let m = (i + 1) as f64;
        let half = 0.5 * (m * (d as f64 - m)).sqrt();
        s1[(i, i + 1)] = Complex64::new(half, 0.0);
        s1[(i + 1, i)] = Complex64::new(half, 0.0);
        // 1/(2i) = -i/2
        s2[(i, i + 1)] = Complex64::new(0.0, -half);
        s2[(i + 1, i)] = Complex64::new(0.0, half);
    }
    let diag: Vec<f64> = (0..d)
        .map(|i| (d as f64 - 1.0 - 2.0 * i as f64) / 2.0)
        .collect();
    let s3 = ComplexMatrix::from_real_diagonal(&diag);
    Ok(SpinOperators {
        d,
        components: [s1, s2, s3],
    })
}

/// r·S for a unit direction r.
pub fn spin_projection(ops: &SpinOperators, r: &UnitVector3) -> ComplexMatrix {
    let [x, y, z] = r.components();
    let mut out = ops.s1().scale_real(x);
    out = &out + &ops.s2().scale_real(y);
    &out + &ops.s3().scale_real(z)
}
