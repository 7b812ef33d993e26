//! CODATA 2018 exact and recommended values, SI units.

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Elementary charge, C (1 eV in joules).
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

/// hbar * c, J m.
pub const HBAR_C: f64 = HBAR * SPEED_OF_LIGHT;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
