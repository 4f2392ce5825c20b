/// Numerical tolerances used wherever floating-point input meets exact arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Tolerances {
    /// `| |w| - 1 |` for unit-modulus values.
    pub unit: f64,
    /// Residuals of multiplicative equations.
    pub eq: f64,
    /// Distance to the nearest integer when rounding signatures.
    pub round: f64,
    /// Distance of a 2x2 holonomy to `+-I`.
    pub mat: f64,
    /// Minimal distance of a shape from 0 and 1.
    pub sing: f64,
    /// `|Im z|` below which a shape is treated as real.
    pub real: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { unit: 1e-9, eq: 1e-9, round: 1e-6, mat: 1e-9, sing: 1e-12, real: 1e-14 }
    }
}

impl Tolerances {
    /// Overrides the equation, unit and matrix tolerances at once.
    pub fn with_eq(mut self, tol: f64) -> Self {
        self.eq = tol;
        self.unit = tol;
        self.mat = tol;
        self
    }
}
