//! CHSH maximization under spin-s measurements.
//!
//! For a correlation matrix Z with singular values z ≥ z̃ ≥ z₃ the maximal
//! CHSH expectation is 2√(z² + z̃²), and γ = √(z² + z̃²)/s² compares it with
//! the local bound 2s².

use serde::{Deserialize, Serialize};

use crate::correlation::{spin_correlation_by, Route, SpinCorrelationMatrix};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spin::{dot3, SpinOperators, UnitVector3};
use crate::state::QuantumState;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshMaximum {
    pub value: f64,
    pub z_s: f64,
    pub z_tilde: f64,
}

/// 2√(z_s² + z̃_s²) from the two largest singular values.
pub fn max_chsh(zmat: &SpinCorrelationMatrix) -> ChshMaximum {
    let [z_s, z_tilde, _] = zmat.singular_values();
    ChshMaximum {
        value: 2.0 * z_s.hypot(z_tilde),
        z_s,
        z_tilde,
    }
}

/// γ_s = √(z_s² + z̃_s²) / s².
pub fn chsh_parameter(zmat: &SpinCorrelationMatrix) -> f64 {
    let s = zmat.spin();
    let m = max_chsh(zmat);
    m.z_s.hypot(m.z_tilde) / (s * s)
}

/// Alice's a₁, a₂ and Bob's b₁, b₂, together with Bob's frame (r₁, r₂, θ′).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSettings {
    pub a1: UnitVector3,
    pub a2: UnitVector3,
    pub b1: UnitVector3,
    pub b2: UnitVector3,
    pub theta_prime: f64,
    pub r1: UnitVector3,
    pub r2: UnitVector3,
}

impl MeasurementSettings {
    /// b₁ = r₁cosθ′ + r₂sinθ′ and b₂ = r₁cosθ′ − r₂sinθ′ for orthonormal r₁, r₂;
    /// a₁, a₂ as given.
    pub fn from_frame(
        a1: UnitVector3,
        a2: UnitVector3,
        r1: UnitVector3,
        r2: UnitVector3,
        theta_prime: f64,
    ) -> Result<Self> {
        if r1.dot(&r2).abs() > Tolerances::DEFAULT.unit_norm {
            return Err(Error::InvalidParameter(format!(
                "r1 and r2 are not orthogonal: (r1, r2) = {:e}",
                r1.dot(&r2)
            )));
        }
        let (b1, b2) = bob_pair(&r1, &r2, theta_prime);
        Ok(Self {
            a1,
            a2,
            b1,
            b2,
            theta_prime,
            r1,
            r2,
        })
    }

    /// Settings from four arbitrary directions; Bob's frame is recovered from
    /// b₁ ± b₂ (canonical completion when b₁ = ±b₂).
    pub fn from_directions(
        a1: UnitVector3,
        a2: UnitVector3,
        b1: UnitVector3,
        b2: UnitVector3,
    ) -> Self {
        let [p, q] = [b1.components(), b2.components()];
        let sum = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
        let diff = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
        let cos_half = (0.5 * (1.0 + b1.dot(&b2))).max(0.0).sqrt();
        let theta_prime = cos_half.min(1.0).acos();
        let zero = Tolerances::DEFAULT.zero_norm;
        let r1 = UnitVector3::normalize(sum, zero);
        let r2 = UnitVector3::normalize(diff, zero);
        let (r1, r2) = match (r1, r2) {
            (Some(r1), Some(r2)) => (r1, r2),
            (Some(r1), None) => (r1, orthogonal_to(&r1)),
            (None, Some(r2)) => (orthogonal_to(&r2), r2),
            (None, None) => unreachable!("unit vectors cannot have b1 + b2 = b1 - b2 = 0"),
        };
        Self {
            a1,
            a2,
            b1,
            b2,
            theta_prime,
            r1,
            r2,
        }
    }

    pub fn directions(&self) -> [UnitVector3; 4] {
        [self.a1, self.a2, self.b1, self.b2]
    }
}

fn bob_pair(r1: &UnitVector3, r2: &UnitVector3, theta_prime: f64) -> (UnitVector3, UnitVector3) {
    let (s, c) = theta_prime.sin_cos();
    let [x, y] = [r1.components(), r2.components()];
    let plus = [
        x[0] * c + y[0] * s,
        x[1] * c + y[1] * s,
        x[2] * c + y[2] * s,
    ];
    let minus = [
        x[0] * c - y[0] * s,
        x[1] * c - y[1] * s,
        x[2] * c - y[2] * s,
    ];
    // renormalize away rounding; the inputs are orthonormal
    (
        UnitVector3::normalize(plus, 0.5).expect("orthonormal frame"),
        UnitVector3::normalize(minus, 0.5).expect("orthonormal frame"),
    )
}

/// Some unit vector orthogonal to `v`.
pub(crate) fn orthogonal_to(v: &UnitVector3) -> UnitVector3 {
    let c = v.components();
    // cross with the axis least aligned with v
    let axis = if c[0].abs() <= c[1].abs() && c[0].abs() <= c[2].abs() {
        [1.0, 0.0, 0.0]
    } else if c[1].abs() <= c[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    UnitVector3::normalize(cross(&c, &axis), 1e-6).expect("non-parallel axis")
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalSettings {
    pub settings: MeasurementSettings,
    /// Set when Z(b₁ + b₂) or Z(b₁ − b₂) vanished and the matching Alice
    /// direction was replaced by a canonical axis.
    pub degenerate: bool,
}

/// Directions attaining the maximum: r₁, r₂ are the right singular vectors
/// for the two largest singular values, tanθ′ = ‖Z r₂‖/‖Z r₁‖, and Alice
/// measures along Z(b₁ ± b₂) normalized.
pub fn optimal_settings(zmat: &SpinCorrelationMatrix) -> OptimalSettings {
    let svd = zmat.svd();
    let r1 = UnitVector3::normalize(svd.right[0], 0.5).expect("unit singular vector");
    let r2_raw = svd.right[1];
    // re-orthogonalize against r1 against rounding
    let proj = dot3(&r2_raw, &r1.components());
    let r1c = r1.components();
    let r2 = UnitVector3::normalize(
        [
            r2_raw[0] - proj * r1c[0],
            r2_raw[1] - proj * r1c[1],
            r2_raw[2] - proj * r1c[2],
        ],
        0.5,
    )
    .expect("unit singular vector");

    let zero = Tolerances::DEFAULT.zero_norm;
    let n1 = norm(&zmat.apply(&r1.components()));
    let n2 = norm(&zmat.apply(&r2.components()));
    let theta_prime = if n2 < zero {
        0.0
    } else if n1 < zero {
        std::f64::consts::FRAC_PI_2
    } else {
        n2.atan2(n1)
    };
    let (b1, b2) = bob_pair(&r1, &r2, theta_prime);
    let [p, q] = [b1.components(), b2.components()];
    let zsum = zmat.apply(&[p[0] + q[0], p[1] + q[1], p[2] + q[2]]);
    let zdiff = zmat.apply(&[p[0] - q[0], p[1] - q[1], p[2] - q[2]]);
    let mut degenerate = false;
    let a1 = UnitVector3::normalize(zsum, zero).unwrap_or_else(|| {
        degenerate = true;
        UnitVector3::Z
    });
    let a2 = UnitVector3::normalize(zdiff, zero).unwrap_or_else(|| {
        degenerate = true;
        UnitVector3::X
    });
    OptimalSettings {
        settings: MeasurementSettings {
            a1,
            a2,
            b1,
            b2,
            theta_prime,
            r1,
            r2,
        },
        degenerate,
    }
}

fn norm(v: &[f64; 3]) -> f64 {
    dot3(v, v).sqrt()
}

/// S_{a₁}⊗(S_{b₁}+S_{b₂}) + S_{a₂}⊗(S_{b₁}−S_{b₂}).
pub fn chsh_operator(ops: &SpinOperators, settings: &MeasurementSettings) -> ComplexMatrix {
    let sa1 = ops.projection(&settings.a1);
    let sa2 = ops.projection(&settings.a2);
    let sb1 = ops.projection(&settings.b1);
    let sb2 = ops.projection(&settings.b2);
    &sa1.kron(&(&sb1 + &sb2)) + &sa2.kron(&(&sb1 - &sb2))
}

/// (a₁, Z(b₁+b₂)) + (a₂, Z(b₁−b₂)).
pub fn chsh_expectation_from_correlation(
    zmat: &SpinCorrelationMatrix,
    settings: &MeasurementSettings,
) -> f64 {
    let [p, q] = [settings.b1.components(), settings.b2.components()];
    let zsum = zmat.apply(&[p[0] + q[0], p[1] + q[1], p[2] + q[2]]);
    let zdiff = zmat.apply(&[p[0] - q[0], p[1] - q[1], p[2] - q[2]]);
    dot3(&settings.a1.components(), &zsum) + dot3(&settings.a2.components(), &zdiff)
}

/// CHSH expectation through the correlation matrix of `state`.
pub fn chsh_expectation(
    state: &QuantumState,
    ops: &SpinOperators,
    settings: &MeasurementSettings,
) -> Result<f64> {
    let zmat = crate::correlation::spin_correlation_matrix(state, ops)?;
    Ok(chsh_expectation_from_correlation(&zmat, settings))
}

/// tr[ρ B_chsh], with the operator built explicitly.
pub fn chsh_expectation_trace(
    state: &QuantumState,
    ops: &SpinOperators,
    settings: &MeasurementSettings,
) -> Result<f64> {
    if state.dim() != ops.dim() {
        return Err(Error::DimensionMismatch {
            expected: ops.dim(),
            found: state.dim(),
        });
    }
    let b = chsh_operator(ops, settings);
    Ok(state.density().trace_of_product(&b).re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshReport {
    pub d: usize,
    pub spin: f64,
    pub correlation: SpinCorrelationMatrix,
    pub max_chsh: f64,
    pub gamma: f64,
    pub settings: MeasurementSettings,
    pub route: Route,
    pub violates_lhv: bool,
    pub degenerate: bool,
}

impl ChshReport {
    pub fn from_correlation(zmat: SpinCorrelationMatrix, route: Route) -> Self {
        let max = max_chsh(&zmat);
        let s = zmat.spin();
        let gamma = max.value / (2.0 * s * s);
        let opt = optimal_settings(&zmat);
        Self {
            d: zmat.dim(),
            spin: s,
            correlation: zmat,
            max_chsh: max.value,
            gamma,
            settings: opt.settings,
            route,
            violates_lhv: violates_lhv(gamma),
            degenerate: opt.degenerate,
        }
    }
}

/// γ > 1, with a round-off margin so that γ = 1 states never count.
pub fn violates_lhv(gamma: f64) -> bool {
    gamma > 1.0 + Tolerances::DEFAULT.violation_margin
}

/// Full pipeline for one route: state → Z → singular values → report.
pub fn analyze(state: &QuantumState, route: Route) -> Result<ChshReport> {
    let ops = SpinOperators::new(state.dim())?;
    let zmat = spin_correlation_by(route, state, &ops)?;
    Ok(ChshReport::from_correlation(zmat, route))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::spin_correlation_matrix;
    use crate::random::{random_direction, random_mixed_state, seeded_rng};
    use crate::spin::make_spin_components;
    use crate::state::pure_state;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn diag(d: usize, a: f64, b: f64, c: f64) -> SpinCorrelationMatrix {
        SpinCorrelationMatrix::from_entries(d, [[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
            .unwrap()
    }

    fn ghz(d: usize) -> QuantumState {
        let mut v = vec![Complex64::new(0.0, 0.0); d * d];
        for m in 0..d {
            v[m * d + m] = Complex64::new(1.0, 0.0);
        }
        pure_state(&v, d).unwrap()
    }

    #[test]
    fn qubit_ghz_maximum() {
        let m = max_chsh(&diag(2, 0.25, -0.25, 0.25));
        assert!((m.value - SQRT_2 / 2.0).abs() < 1e-15);
        assert!((chsh_parameter(&diag(2, 0.25, -0.25, 0.25)) - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_maximum() {
        let z = diag(3, 0.0, 0.0, 0.0);
        assert_eq!(max_chsh(&z).value, 0.0);
        let opt = optimal_settings(&z);
        assert!(opt.degenerate);
        assert_eq!(chsh_expectation_from_correlation(&z, &opt.settings), 0.0);
    }

    #[test]
    fn qutrit_werner_singlet_like() {
        let z = diag(3, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0);
        let m = max_chsh(&z);
        assert!((m.z_s - 1.0 / 3.0).abs() < 1e-15 && (m.z_tilde - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.value - 2.0 * SQRT_2 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn signed_diagonal_settings() {
        let c = 0.7;
        let z = diag(4, c, -c, c);
        let opt = optimal_settings(&z);
        assert!(!opt.degenerate);
        assert!((opt.settings.theta_prime - FRAC_PI_4).abs() < 1e-12);
        let got = chsh_expectation_from_correlation(&z, &opt.settings);
        assert!((got - 2.0 * SQRT_2 * c).abs() < 1e-12);
    }

    #[test]
    fn rank_one_is_flagged_but_achieves() {
        let z = diag(3, 0.0, 0.0, 0.5);
        let opt = optimal_settings(&z);
        assert!(opt.degenerate);
        assert_eq!(opt.settings.theta_prime, 0.0);
        let got = chsh_expectation_from_correlation(&z, &opt.settings);
        assert!((got - max_chsh(&z).value).abs() < 1e-15);
    }

    #[test]
    fn qubit_ghz_parameters() {
        let r = analyze(&ghz(2), Route::Definition).unwrap();
        assert!((r.gamma - SQRT_2).abs() < 1e-12);
        assert!(r.violates_lhv);
        let r3 = analyze(&ghz(3), Route::ElementFormulas).unwrap();
        assert!((r3.gamma - 2.0 * SQRT_2 / 3.0).abs() < 1e-12);
        assert!(!r3.violates_lhv);
    }

    #[test]
    fn collapsed_settings_operator() {
        let ops = make_spin_components(3).unwrap();
        let z = UnitVector3::Z;
        let s = MeasurementSettings::from_directions(z, z, z, z);
        let b = chsh_operator(&ops, &s);
        let want = ops.s3().kron(ops.s3()).scale_real(2.0);
        assert!(b.max_abs_diff(&want) < 1e-15);
        assert!(b.is_hermitian(0.0));
    }

    #[test]
    fn qubit_bell_settings_extremal_eigenvalue() {
        let ops = make_spin_components(2).unwrap();
        let x = UnitVector3::X;
        let zz = UnitVector3::Z;
        let r = 1.0 / SQRT_2;
        let b1 = UnitVector3::new([r, 0.0, r]).unwrap();
        let b2 = UnitVector3::new([-r, 0.0, r]).unwrap();
        let s = MeasurementSettings::from_directions(zz, x, b1, b2);
        let eig = chsh_operator(&ops, &s).hermitian_eigenvalues();
        let extremal = eig.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        assert!((extremal - SQRT_2 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn trace_route_matches_bilinear_route() {
        let mut rng = seeded_rng(5, 0);
        for d in 2..=4 {
            let ops = make_spin_components(d).unwrap();
            for _ in 0..10 {
                let st = random_mixed_state(d, &mut rng).unwrap();
                let dirs: Vec<UnitVector3> = (0..4)
                    .map(|_| UnitVector3::normalize(random_direction(&mut rng), 0.5).unwrap())
                    .collect();
                let s = MeasurementSettings::from_directions(dirs[0], dirs[1], dirs[2], dirs[3]);
                let bil = chsh_expectation(&st, &ops, &s).unwrap();
                let tr = chsh_expectation_trace(&st, &ops, &s).unwrap();
                assert!((bil - tr).abs() < 1e-10);
                let z = spin_correlation_matrix(&st, &ops).unwrap();
                let sq = ops.spin() * ops.spin();
                for (a, b) in [(s.a1, s.b1), (s.a1, s.b2), (s.a2, s.b1), (s.a2, s.b2)] {
                    let term = dot3(&a.components(), &z.apply(&b.components()));
                    assert!(term.abs() <= sq + 1e-12);
                }
                let opt = optimal_settings(&z);
                let got = chsh_expectation_from_correlation(&z, &opt.settings);
                assert!((got - max_chsh(&z).value).abs() < 1e-9);
                let tr_opt = chsh_expectation_trace(&st, &ops, &opt.settings).unwrap();
                assert!((tr_opt - max_chsh(&z).value).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn maximally_mixed_expectation_is_zero() {
        let ops = make_spin_components(3).unwrap();
        let st = QuantumState::maximally_mixed(3).unwrap();
        let s = MeasurementSettings::from_directions(
            UnitVector3::X,
            UnitVector3::Y,
            UnitVector3::Z,
            UnitVector3::X,
        );
        assert!(chsh_expectation(&st, &ops, &s).unwrap().abs() < 1e-15);
        assert!(chsh_expectation_trace(&st, &ops, &s).unwrap().abs() < 1e-15);
    }

    #[test]
    fn frame_constructor_rejects_non_orthogonal() {
        let r = UnitVector3::new([1.0 / SQRT_2, 1.0 / SQRT_2, 0.0]).unwrap();
        assert!(MeasurementSettings::from_frame(
            UnitVector3::X,
            UnitVector3::X,
            UnitVector3::X,
            r,
            0.3
        )
        .is_err());
        let s = MeasurementSettings::from_frame(
            UnitVector3::X,
            UnitVector3::Y,
            UnitVector3::X,
            UnitVector3::Y,
            0.3,
        )
        .unwrap();
        let [p, q] = [s.b1.components(), s.b2.components()];
        assert!((p[0] - 0.3f64.cos()).abs() < 1e-15 && (p[1] - 0.3f64.sin()).abs() < 1e-15);
        assert!((q[1] + 0.3f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn violation_flag_has_margin() {
        assert!(!violates_lhv(1.0));
        assert!(!violates_lhv(1.0 + 1e-15));
        assert!(violates_lhv(1.01));
    }
}
