//! Random states for property checks and batch verification.
//!
//! Mixed states are A·A^H / tr(A·A^H) with A a d²×d² matrix of independent
//! standard complex normals (real and imaginary parts each N(0, 1)). Pure
//! states are normalized vectors of d² such normals. Draws happen in
//! row-major order, real part before imaginary part, so a seed fully fixes
//! the state.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::state::{pure_state, QuantumState};

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<QuantumState> {
    let v: Vec<Complex64> = (0..d * d).map(|_| complex_normal(rng)).collect();
    pure_state(&v, d)
}

pub fn random_mixed_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<QuantumState> {
    let n = d * d;
    let a = ComplexMatrix::from_fn(n, n, |_, _| complex_normal(rng));
    let aah = &a * &a.adjoint();
    let tr = aah.trace().re;
    let mut rho = aah.scale_real(1.0 / tr);
    // exact hermiticity
    rho = (&rho + &rho.adjoint()).scale_real(0.5);
    QuantumState::from_density(d, rho)
}

/// A unit vector drawn uniformly from the sphere.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Deterministic generator for stream `stream` under `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
