//! Surface models and primitive length spectra.

pub mod model;
pub mod schottky;
pub mod spectrum;

pub use model::{pants_from_lengths, pants_generators, ModelDescriptor, SchottkyGroup, SurfaceModel, Topology};
pub use schottky::PingPongCertificate;
pub use spectrum::{
    counting_function, enumerate_primitive_classes, LengthSpectrum, PrimitiveClass, PruningCertificate, SpectrumEntry,
};
