//! Numerical building blocks shared by the physics modules.

mod derivative;
mod quadrature;
mod special;

pub use derivative::{
    central_derivative, step_for_scale, try_central_derivative, Derivative, LOW_CONFIDENCE_THRESHOLD,
};
pub use quadrature::{integrate_finite, integrate_semiinfinite, Integral, QuadratureSpec};
pub use special::{
    ei_power_sum, exp_integral_e1, exp_integral_ei, riemann_zeta3, sine_integral, sine_integral_complement, SeriesSpec,
    ZETA3,
};
