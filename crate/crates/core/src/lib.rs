//! Selberg zeta functions, resonances and regularized traces for
//! geometrically finite hyperbolic surfaces.
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`]: Möbius maps, distances and geodesic lines in the upper half-plane.
//! * [`special`]: complex special functions, quadrature and the hyperbolic Green's function.
//! * [`groups`]: surface models and primitive length spectra.
//! * [`zeta`]: Euler products, closed-form model zetas, the topological factor and Hadamard products.
//! * [`scattering`]: model traces, relative scattering determinants and the wave trace.
//! * [`locator`]: argument-principle zero counting, localization and asymptotic inversion.
//! * [`store`]: versioned JSON persistence for spectra and resonance catalogs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod groups;
pub mod locator;
pub mod scattering;
pub mod special;
pub mod store;
pub mod zeta;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use geometry::{GeodesicLine, HalfPlanePoint, MapClass, MobiusMap};
pub use groups::{LengthSpectrum, PrimitiveClass, SurfaceModel, Topology};
pub use locator::{AsymptoticFit, ContourBox};
pub use special::quadrature::QuadratureBudget;
pub use zeta::{ResonanceSet, ResonanceSource, TruncationPolicy, ZetaValue};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
