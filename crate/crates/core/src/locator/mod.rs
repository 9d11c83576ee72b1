//! Argument-principle zero counting on rectangles, zero localization by
//! quadrisection and Newton polishing, and recovery of topological data from
//! the large-`s` growth of a zeta function.

mod asymptotics;
mod locate;

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::quadrature::adaptive_gk;
use crate::zeta::{Meromorphic, Rect};

pub use asymptotics::{
    euler_char_bounds, invert_asymptotics, AsymptoticFit, EulerCharRange, MIN_FIT_SAMPLES, MIN_FIT_START,
};
pub use locate::locate_zeros;

/// Log-derivative magnitude above which a sample is treated as sitting on a zero.
const BOUNDARY_BLOWUP: f64 = 1e10;
const MAX_DEPTH: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub edge_samples: usize,
}

impl ContourBox {
    pub const MIN_EDGE_SAMPLES: usize = 64;

    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        Self::with_samples(re_min, re_max, im_min, im_max, Self::MIN_EDGE_SAMPLES)
    }

    pub fn with_samples(re_min: f64, re_max: f64, im_min: f64, im_max: f64, edge_samples: usize) -> Result<Self> {
        Rect::new(re_min, re_max, im_min, im_max)?;
        if edge_samples < Self::MIN_EDGE_SAMPLES {
            return Err(Error::DomainError(format!("edge_samples must be at least 64, got {edge_samples}")));
        }
        Ok(ContourBox { re_min, re_max, im_min, im_max, edge_samples })
    }

    pub fn from_rect(r: Rect) -> Self {
        ContourBox {
            re_min: r.re_min,
            re_max: r.re_max,
            im_min: r.im_min,
            im_max: r.im_max,
            edge_samples: Self::MIN_EDGE_SAMPLES,
        }
    }

    pub fn rect(&self) -> Rect {
        Rect { re_min: self.re_min, re_max: self.re_max, im_min: self.im_min, im_max: self.im_max }
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.rect().contains(z, 0.0)
    }

    /// Square box of half-width `r` around `z`.
    pub fn around(z: Complex64, r: f64) -> Self {
        ContourBox {
            re_min: z.re - r,
            re_max: z.re + r,
            im_min: z.im - r,
            im_max: z.im + r,
            edge_samples: Self::MIN_EDGE_SAMPLES,
        }
    }

    /// Grows every side by `d`.
    pub fn expanded(&self, d: f64) -> Self {
        ContourBox {
            re_min: self.re_min - d,
            re_max: self.re_max + d,
            im_min: self.im_min - d,
            im_max: self.im_max + d,
            ..*self
        }
    }

    /// Four children, split at fractions `fx` and `fy` of the width and height.
    pub fn quadrisect(&self, fx: f64, fy: f64) -> [ContourBox; 4] {
        let xm = self.re_min + fx * self.width();
        let ym = self.im_min + fy * self.height();
        let mk =
            |a, b, c, d| ContourBox { re_min: a, re_max: b, im_min: c, im_max: d, edge_samples: self.edge_samples };
        [
            mk(self.re_min, xm, self.im_min, ym),
            mk(xm, self.re_max, self.im_min, ym),
            mk(self.re_min, xm, ym, self.im_max),
            mk(xm, self.re_max, ym, self.im_max),
        ]
    }

    /// Corners in counter-clockwise order starting at the lower left.
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

/// `∫ f'/f ds` along the segment `a → b`.
fn edge_integral<F: Meromorphic + ?Sized>(
    f: &F,
    a: Complex64,
    b: Complex64,
    panels: usize,
    tol: f64,
    edge: usize,
) -> Result<Complex64> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let dz = b - a;
    let integrand = |t: f64| -> Complex64 {
        let z = a + dz * t;
        match f.log_derivative(1, z) {
            Ok(v) if v.norm() < BOUNDARY_BLOWUP && v.re.is_finite() && v.im.is_finite() => v * dz,
            Ok(_)
            | Err(Error::AtZero(_))
            | Err(Error::PoleOrZero(_))
            | Err(Error::DigammaPole(_))
            | Err(Error::PoleAtHalf) => {
                failure.borrow_mut().get_or_insert(Error::ZeroOnBoundary { edge });
                Complex64::new(0.0, 0.0)
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let mut total = Complex64::new(0.0, 0.0);
    let mut capped = false;
    let h = 1.0 / panels as f64;
    for i in 0..panels {
        let (v, _, c) = adaptive_gk(&integrand, i as f64 * h, (i + 1) as f64 * h, tol / panels as f64, MAX_DEPTH);
        total += v;
        capped |= c;
        if failure.borrow().is_some() {
            break;
        }
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if capped {
        return Err(Error::ZeroOnBoundary { edge });
    }
    Ok(total)
}

/// `(1/2πi) ∮ f'/f ds` around `b`, before rounding.
pub fn winding_number<F: Meromorphic + ?Sized>(f: &F, b: &ContourBox, tol: f64) -> Result<f64> {
    let c = b.corners();
    let panels = b.edge_samples.div_ceil(15).max(1);
    let mut total = Complex64::new(0.0, 0.0);
    for edge in 0..4 {
        total += edge_integral(f, c[edge], c[(edge + 1) % 4], panels, tol, edge)?;
    }
    Ok((total / Complex64::new(0.0, 2.0 * PI)).re)
}

/// Number of zeros minus poles of `f` inside `b`, by the argument principle.
///
/// The edge quadrature is refined twice before a winding number farther than
/// 0.25 from an integer is reported as `NonIntegerWinding`.
pub fn count_zeros<F: Meromorphic + ?Sized>(f: &F, b: &ContourBox) -> Result<i64> {
    if b.edge_samples < ContourBox::MIN_EDGE_SAMPLES || !(b.re_min < b.re_max && b.im_min < b.im_max) {
        return Err(Error::DomainError("contour box needs a nonempty interior and at least 64 edge samples".into()));
    }
    let mut last = f64::NAN;
    for tol in [1e-3, 1e-6, 1e-9] {
        let w = winding_number(f, b, tol)?;
        if (w - w.round()).abs() <= 0.25 {
            return Ok(w.round() as i64);
        }
        last = w;
    }
    Err(Error::NonIntegerWinding(last))
}
