//! Scripted identity checks with machine-readable results.

use std::f64::consts::{E, PI};

use hyperzeta::locator::{locate_zeros, ContourBox};
use hyperzeta::scattering::{
    funnel_per_image_residual, phi_horn, phi_horn_quadrature, phi_ups_relation_residual, tau_hadamard_log_derivative,
    tau_zratio_log_derivative,
};
use hyperzeta::special::{
    cot_pi, gamma, greens_function, greens_half_line_integral, greens_radial_closed_form, greens_radial_integral,
    riemann_zeta, trigamma,
};
use hyperzeta::zeta::{funnel_resonances, FunnelZeta, Rect};
use hyperzeta::{Complex64, QuadratureBudget, ResonanceSet, ResonanceSource, SurfaceModel, TruncationPolicy};
use serde::{Deserialize, Serialize};

use crate::config::Suite;
use crate::jobs::cylinder_lattice;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyEntry {
    pub id: String,
    pub parameters: String,
    /// Absent when the computation itself failed.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub suite: String,
    pub entries: Vec<VerifyEntry>,
    pub all_pass: bool,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Collector(Vec<VerifyEntry>);

impl Collector {
    fn push(&mut self, id: &str, parameters: String, residual: hyperzeta::Result<f64>, tolerance: f64) {
        let (residual, error) = match residual {
            Ok(r) if r.is_finite() => (Some(r), None),
            Ok(r) => (None, Some(format!("residual {r}"))),
            Err(e) => {
                log::warn!("{id} ({parameters}): {e}");
                (None, Some(e.to_string()))
            }
        };
        self.0.push(VerifyEntry {
            id: id.to_string(),
            parameters,
            pass: residual.is_some_and(|r| r <= tolerance),
            residual,
            tolerance,
            error,
        });
    }
}

fn appendix(out: &mut Collector) {
    let b = QuadratureBudget::default();
    for s in [c(1.0, 0.0), c(0.75, 2.0)] {
        for (name, kappa) in [("1", 1.0), ("e", E), ("10", 10.0)] {
            let r = greens_radial_integral(s, kappa, &b).map(|v| (v - greens_radial_closed_form(s, kappa)).norm());
            let rhs = greens_radial_closed_form(s, kappa);
            out.push("gs-int", format!("s={s}, kappa={name}, rhs={:.6}", rhs.re), r, 1e-6);
        }
    }
    for s in [c(1.0, 0.0), c(0.8, 1.0)] {
        let r = greens_half_line_integral(s, &b).map(|v| (v - 1.0).norm());
        out.push("gs-int2", format!("s={s}"), r, 1e-6);
    }
    let sigma = 1.0 + 1e-6;
    let g = |s: Complex64| greens_function(s, sigma, &b);
    for s in [c(0.3, 0.5), c(0.6, -1.0)] {
        let r = g(s).and_then(|a| Ok(a - g(1.0 - s)?)).map(|d| (d - 0.5 * cot_pi(s)).norm());
        out.push("ghgh-diag", format!("s={s}, sigma=1+1e-6"), r, 1e-5);
        let h = 1e-4;
        let r = (|| {
            let ds = (g(s + h)? - g(s - h)?) / (2.0 * h);
            Ok((ds + trigamma(s)? / (2.0 * PI)).norm())
        })();
        out.push("rsq-diag", format!("s={s}, sigma=1+1e-6"), r, 1e-5);
    }
    for eps in [1e-4, -1e-4] {
        let s = c(0.5 + eps, 0.0);
        let r = (|| {
            let v = (2.0 * s - 1.0) * gamma(s)?.powi(2) * (s * 4f64.ln()).exp() * riemann_zeta(2.0 * s)?
                / (2.0 * PI * gamma(2.0 * s)?);
            Ok((v - 1.0).norm())
        })();
        out.push("cusp-res-limit", format!("s=1/2{eps:+e}"), r, 1e-3);
    }
    for (chi, s) in [(-1, c(0.3, 0.4)), (-2, c(0.7, -1.1))] {
        let r = (|| {
            let f = |z: Complex64| -> hyperzeta::Result<Complex64> {
                Ok(hyperzeta::zeta::log_zeta_infinity(z, chi)? - hyperzeta::zeta::log_zeta_infinity(1.0 - z, chi)?)
            };
            let h = 1e-5;
            let fd = (f(s + h)? - f(s - h)?) / (2.0 * h);
            let want = -(chi as f64) * (2.0 * s - 1.0) * PI * cot_pi(s);
            Ok((fd - want).norm() / (1.0 + want.norm()))
        })();
        out.push("zinf-reflection", format!("chi={chi}, s={s}"), r, 1e-6);
    }
}

fn relation(out: &mut Collector, model: &SurfaceModel, label: &str, tol: f64) {
    let p = TruncationPolicy::default();
    for s in [c(0.3, 0.7), c(1.2, -2.0), c(-0.4, 3.1), c(2.5, 0.5)] {
        let r = phi_ups_relation_residual(s, model, &p).map(|v| v.norm());
        out.push("phi-ups-relation", format!("{label}, s={s}"), r, tol);
    }
}

fn horn(out: &mut Collector) {
    relation(out, &SurfaceModel::Horn, "horn", 1e-12);
    for eps in [1e-6, 1e-7, 1e-8] {
        let s = c(0.5 + eps, 0.0);
        let r = phi_horn(s).map(|v| ((s - 0.5) * v - 0.5).norm());
        out.push("horn-residue", format!("s=1/2+{eps:e}"), r, 1e-6);
    }
    let b = QuadratureBudget::default();
    for s in [c(0.8, 0.5), c(2.0, -1.0)] {
        let r = phi_horn_quadrature(s, &b).and_then(|q| Ok((q.value - phi_horn(s)?).norm()));
        out.push("horn-quadrature", format!("s={s}"), r, 1e-3);
    }
}

fn funnel(out: &mut Collector) {
    let p = TruncationPolicy::default();
    relation(out, &SurfaceModel::Funnel { length: 2.0 }, "funnel length=2", 1e-9);
    for ell in [1.0, 2.0, PI] {
        let r = (|| {
            let b = ContourBox::new(-4.0, 0.5, -10.0, 10.0)?;
            let got = locate_zeros(&FunnelZeta { length: ell, policy: p }, &b, 1e-10)?;
            let want = funnel_resonances(ell, b.rect())?;
            if got.points.len() != want.points.len() {
                return Ok(f64::INFINITY);
            }
            let worst =
                got.points
                    .iter()
                    .zip(&want.points)
                    .map(|(a, b)| {
                        if a.multiplicity == b.multiplicity {
                            (a.position - b.position).norm()
                        } else {
                            f64::INFINITY
                        }
                    })
                    .fold(0.0, f64::max);
            Ok(worst)
        })();
        out.push("polarset-lattice", format!("length={ell:.6}, box=[-4,0.5]x[-10,10]"), r, 1e-8);
    }
    for ell in [1.0, 3.0] {
        for s in [c(0.5, 1.0), c(-0.5, 0.0)] {
            let r = funnel_per_image_residual(s, ell, &p).map(|v| v.norm());
            out.push("funnel-per-image", format!("length={ell}, s={s}"), r, 1e-9);
        }
    }
}

fn cylinder(out: &mut Collector) {
    relation(out, &SurfaceModel::Cylinder { length: 1.0 }, "cylinder length=1", 1e-9);
    let p = TruncationPolicy::default().with_radius(60.0);
    let model = SurfaceModel::Cylinder { length: 1.0 };
    let zeros = Rect::new(-61.0, 1.0, -61.0, 61.0)
        .and_then(|r| ResonanceSet::new(cylinder_lattice(1.0, 60.0), r, ResonanceSource::ClosedForm));
    for s in [c(0.3, 0.0), c(0.7, 1.5), c(0.3, -2.5), c(0.7, 4.0), c(0.7, -0.8)] {
        let r = zeros.clone().and_then(|z| {
            let a = tau_zratio_log_derivative(3, s, &model, &p)?;
            let b = tau_hadamard_log_derivative(3, s, &z, &[1.0, 1.0], &p)?;
            Ok((a - b).norm())
        });
        out.push("tau-two-form", format!("length=1, radius=60, s={s}"), r, 1e-2);
    }
}

pub fn run_suite(suite: Suite) -> Result<VerifyReport, CliError> {
    let mut out = Collector(Vec::new());
    let name = match suite {
        Suite::Appendix => {
            appendix(&mut out);
            "appendix"
        }
        Suite::Horn => {
            horn(&mut out);
            "horn"
        }
        Suite::Funnel => {
            funnel(&mut out);
            "funnel"
        }
        Suite::Cylinder => {
            cylinder(&mut out);
            "cylinder"
        }
        Suite::All => {
            appendix(&mut out);
            horn(&mut out);
            funnel(&mut out);
            cylinder(&mut out);
            "all"
        }
    };
    let entries = out.0;
    let all_pass = entries.iter().all(|e| e.pass);
    Ok(VerifyReport { suite: name.to_string(), entries, all_pass })
}
