//! CODATA physical constants, SI units, to six significant digits.

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.05457e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.38065e-23;
/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.99792e8;
/// Proton rest mass, kg.
pub const PROTON_MASS: f64 = 1.67262e-27;
