use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::{enumerate_primitive_classes, LengthSpectrum, SurfaceModel, Topology};
use crate::special::gamma::{log_gamma, polygamma};
use crate::zeta::{
    cylinder_log_derivative, funnel_lattice, hadamard_resonances, hadamard_resonances_log_derivative,
    log_zeta_infinity, log_zeta_infinity_derivative, selberg_log_derivative, zeta_cylinder, zeta_selberg, zeta_y,
    zeta_y_log_derivative, Meromorphic, ResonancePoint, ResonanceSet, TruncationPolicy,
};

const LN2: f64 = std::f64::consts::LN_2;

/// `Z_X` for a surface model together with its topology, with the length
/// spectrum of a Schottky model enumerated once up to `policy.word_l_max`.
#[derive(Debug, Clone)]
pub struct SurfaceZeta {
    model: SurfaceModel,
    topology: Topology,
    spectrum: Option<LengthSpectrum>,
    policy: TruncationPolicy,
}

impl SurfaceZeta {
    pub fn new(model: &SurfaceModel, policy: &TruncationPolicy) -> Result<Self> {
        policy.validate()?;
        let spectrum = match model {
            SurfaceModel::Schottky(_) => Some(enumerate_primitive_classes(model, policy.word_l_max, true)?),
            _ => None,
        };
        Ok(SurfaceZeta { model: model.clone(), topology: model.topology(), spectrum, policy: *policy })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    /// `d^order/ds^order log Z_X(s)`, order 0 being the logarithm itself.
    pub fn derivative(&self, order: u32, s: Complex64) -> Result<Complex64> {
        let p = &self.policy;
        match (&self.model, order) {
            (SurfaceModel::Cylinder { length }, 0) => Ok(zeta_cylinder(s, *length, p)?.log_value),
            (SurfaceModel::Cylinder { length }, k) => cylinder_log_derivative(k, s, *length, p),
            (SurfaceModel::Horn, _) => Ok(Complex64::new(0.0, 0.0)),
            (SurfaceModel::Funnel { .. }, _) => Err(Error::Unsupported(
                "a single funnel end is not a surface; use the funnel model zeta directly".into(),
            )),
            (SurfaceModel::Schottky(_), k) => {
                let spec = self.spectrum.as_ref().expect("spectrum enumerated at construction");
                if k == 0 {
                    Ok(zeta_selberg(s, spec, p)?.log_value)
                } else {
                    selberg_log_derivative(k, s, spec, p)
                }
            }
        }
    }

    fn infinity(&self, order: u32, s: Complex64) -> Result<Complex64> {
        if order == 0 {
            log_zeta_infinity(s, self.topology.chi)
        } else {
            log_zeta_infinity_derivative(order, s, self.topology.chi)
        }
    }

    fn funnels(&self, order: u32, s: Complex64) -> Result<Complex64> {
        if order == 0 {
            Ok(zeta_y(s, &self.topology.funnel_lengths, &self.policy)?.log_value)
        } else {
            zeta_y_log_derivative(order, s, &self.topology.funnel_lengths, &self.policy)
        }
    }

    /// Order-th derivative of `log τ_X` in the zeta-ratio form, with `c = 0`.
    pub fn tau_zratio(&self, order: u32, s: Complex64) -> Result<Complex64> {
        check_order(order)?;
        if self.topology.n_funnels == 0 {
            return Err(Error::Unsupported("τ needs at least one funnel".into()));
        }
        if matches!(self.model, SurfaceModel::Funnel { .. }) {
            return Err(Error::Unsupported("τ is defined for surfaces, not a single funnel end".into()));
        }
        let t = 1.0 - s;
        let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
        let n_c = self.topology.n_cusps as f64;
        let z = |x: Complex64| match self.derivative(order, x) {
            // an Euler product whose truncation tail exceeds tolerance does not represent Z_X there
            Err(Error::TailTooLarge { .. }) => Err(Error::OutOfConvergenceRegion(x)),
            r => r,
        };
        let mut v = sign * z(t)? - z(s)?;
        if self.topology.chi != 0 {
            v += sign * self.infinity(order, t)? - self.infinity(order, s)?;
        }
        v += self.funnels(order, s)? - sign * self.funnels(order, t)?;
        if n_c != 0.0 {
            v += n_c * (gamma_log_derivative(order, s - 0.5)? - sign * gamma_log_derivative(order, 0.5 - s)?);
            match order {
                0 => v -= n_c * 4f64.ln() * s,
                1 => v -= n_c * 4f64.ln(),
                _ => {}
            }
        }
        Ok(v)
    }

    /// Order-th derivative of `log D_X(s) = log Z_X + log Z_∞ - n_C log[2^s (s-1/2)^{1/2} Γ(s-1/2)]`.
    pub fn det_laplacian(&self, order: u32, s: Complex64) -> Result<Complex64> {
        check_order(order)?;
        let mut v = self.derivative(order, s)? + self.infinity(order, s)?;
        let n_c = self.topology.n_cusps as f64;
        if n_c != 0.0 {
            let h = s - 0.5;
            let bracket = match order {
                0 => s * LN2 + 0.5 * h.ln() + log_gamma(h)?,
                1 => LN2 + 0.5 / h + polygamma(0, h)?,
                2 => -0.5 / (h * h) + polygamma(1, h)?,
                _ => (h * h * h).inv() + polygamma(2, h)?,
            };
            v -= n_c * bracket;
        }
        Ok(v)
    }

    /// `𝓛_s² log D_X` with `𝓛_s = (2s-1)^{-1} d/ds`.
    pub fn det_laplacian_l2(&self, s: Complex64) -> Result<Complex64> {
        let a = 2.0 * s - 1.0;
        Ok(self.det_laplacian(2, s)? / (a * a) - 2.0 * self.det_laplacian(1, s)? / (a * a * a))
    }
}

impl Meromorphic for SurfaceZeta {
    fn log_value(&self, s: Complex64) -> Result<Complex64> {
        self.derivative(0, s)
    }
    fn log_derivative(&self, order: u32, s: Complex64) -> Result<Complex64> {
        check_order(order)?;
        self.derivative(order, s)
    }
}

fn check_order(order: u32) -> Result<()> {
    if order <= 3 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("derivative of order {order}")))
    }
}

/// `d^order/dz^order log Γ(z)`.
fn gamma_log_derivative(order: u32, z: Complex64) -> Result<Complex64> {
    if order == 0 {
        log_gamma(z)
    } else {
        polygamma(order - 1, z)
    }
}

/// `log τ_X(s)` from the zeta ratio, normalized by `c = 0`.
///
/// Defined up to a polynomial of degree one in `s`. Schottky models need both
/// `s` and `1-s` inside the Euler product's convergence region.
pub fn tau_zratio(s: Complex64, model: &SurfaceModel, policy: &TruncationPolicy) -> Result<Complex64> {
    SurfaceZeta::new(model, policy)?.tau_zratio(0, s)
}

pub fn tau_zratio_log_derivative(
    order: u32,
    s: Complex64,
    model: &SurfaceModel,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    SurfaceZeta::new(model, policy)?.tau_zratio(order, s)
}

fn hadamard_parts(
    resonances: &ResonanceSet,
    funnel_lengths: &[f64],
    radius: f64,
) -> (Vec<ResonancePoint>, Vec<ResonancePoint>) {
    let x = resonances.within_radius(radius);
    let y = funnel_lengths.iter().flat_map(|&l| funnel_lattice(l, radius)).collect();
    (x, y)
}

/// `log τ_X(s) = log P_X(1-s) - log P_X(s) + log P_Y(s) - log P_Y(1-s)` with `h = 0`.
///
/// Both products run over zeros with `|ζ| ≤ policy.radius`; `P_Y` is the
/// product of the funnel lattices for `funnel_lengths`.
pub fn tau_hadamard(
    s: Complex64,
    resonances: &ResonanceSet,
    funnel_lengths: &[f64],
    policy: &TruncationPolicy,
) -> Complex64 {
    let (x, y) = hadamard_parts(resonances, funnel_lengths, policy.radius);
    let t = 1.0 - s;
    hadamard_resonances(t, &x) - hadamard_resonances(s, &x) + hadamard_resonances(s, &y) - hadamard_resonances(t, &y)
}

pub fn tau_hadamard_log_derivative(
    order: u32,
    s: Complex64,
    resonances: &ResonanceSet,
    funnel_lengths: &[f64],
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    if order == 0 {
        return Ok(tau_hadamard(s, resonances, funnel_lengths, policy));
    }
    let (x, y) = hadamard_parts(resonances, funnel_lengths, policy.radius);
    let t = 1.0 - s;
    let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    let d = |z: Complex64, pts: &[ResonancePoint]| hadamard_resonances_log_derivative(order, z, pts);
    Ok(sign * d(t, &x)? - d(s, &x)? + d(s, &y)? - sign * d(t, &y)?)
}

/// `log D_X(s)` with `q₁ = E = F = 0`.
pub fn det_laplacian_log(s: Complex64, model: &SurfaceModel, policy: &TruncationPolicy) -> Result<Complex64> {
    SurfaceZeta::new(model, policy)?.det_laplacian(0, s)
}

pub fn det_laplacian_log_derivative(
    order: u32,
    s: Complex64,
    model: &SurfaceModel,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    SurfaceZeta::new(model, policy)?.det_laplacian(order, s)
}

/// `𝓛_s² log D_X(s) = (log D)''/(2s-1)² - 2(log D)'/(2s-1)³`.
pub fn det_laplacian_l2(s: Complex64, model: &SurfaceModel, policy: &TruncationPolicy) -> Result<Complex64> {
    SurfaceZeta::new(model, policy)?.det_laplacian_l2(s)
}
