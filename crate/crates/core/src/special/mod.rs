//! Complex special functions, quadrature and the hyperbolic Green's function.

pub mod barnes;
pub mod chebyshev;
pub mod gamma;
pub mod greens;
pub mod quadrature;
pub mod riemann;

pub use barnes::{log_barnes_gamma2, log_barnes_gamma2_derivative};
pub use gamma::{cot_pi, digamma, gamma, log_gamma, polygamma, trigamma, EULER_GAMMA};
pub use greens::{greens_function, greens_half_line_integral, greens_radial_closed_form, greens_radial_integral};
pub use quadrature::QuadratureBudget;
pub use riemann::{hurwitz_zeta, riemann_zeta, ZETA_PRIME_MINUS_ONE};
