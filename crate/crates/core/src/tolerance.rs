//! Numerical tolerances shared by validators and checks.

/// Every tolerance used by the library, in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max entrywise |A - A^H| accepted as Hermitian.
    pub hermitian: f64,
    /// Max |tr(rho) - 1|.
    pub trace: f64,
    /// Smallest eigenvalue must be >= -positivity.
    pub positivity: f64,
    /// Max |‖r‖ - 1| for a direction vector.
    pub unit_norm: f64,
    /// Max |1 - tr(rho^2)| for a state to count as pure.
    pub purity: f64,
    /// Imaginary residue allowed on spin correlation entries.
    pub spin_imag_residue: f64,
    /// Imaginary residue allowed on general correlation entries.
    pub general_imag_residue: f64,
    /// Below this norm an update or optimal-direction vector counts as zero.
    pub zero_norm: f64,
    /// Margin above 1 before a CHSH parameter counts as a violation.
    pub violation_margin: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        trace: 1e-10,
        positivity: 1e-9,
        unit_norm: 1e-12,
        purity: 1e-9,
        spin_imag_residue: 1e-10,
        general_imag_residue: 1e-9,
        zero_norm: 1e-12,
        violation_margin: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
