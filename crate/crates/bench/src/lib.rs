//! Benchmark fixtures shared by the criterion benches.

use hyperzeta::groups::pants_from_lengths;
use hyperzeta::{Complex64, SurfaceModel};

/// Points on a horizontal line, spaced evenly.
pub fn line(re: f64, im0: f64, im1: f64, n: usize) -> Vec<Complex64> {
    (0..n).map(|i| Complex64::new(re, im0 + (im1 - im0) * i as f64 / (n.max(2) - 1) as f64)).collect()
}

pub fn symmetric_pants() -> SurfaceModel {
    pants_from_lengths(2.0, 2.0, 2.0).expect("valid pants lengths")
}
