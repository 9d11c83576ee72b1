//! Task execution.

use std::f64::consts::PI;
use std::path::Path;

use hyperzeta::groups::{enumerate_primitive_classes, ModelDescriptor};
use hyperzeta::locator::{invert_asymptotics, locate_zeros};
use hyperzeta::scattering::{
    phi_cylinder, phi_funnel, phi_horn, upsilon_cylinder, upsilon_funnel, upsilon_horn, SurfaceZeta,
};
use hyperzeta::store::{read_artifact, to_canonical_json, write_atomic, Artifact, ArtifactKind};
use hyperzeta::zeta::{
    hadamard_funnel, hadamard_resonances, hadamard_tail_bound, log_zeta_infinity, zeta_cylinder, zeta_funnel, zeta_y,
    CylinderZeta, FunnelZeta, ResonancePoint,
};
use hyperzeta::{Complex64, Error, LengthSpectrum, ResonanceSet, SurfaceModel, TruncationPolicy, ZetaValue};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{EvalGrid, Format, JobConfig, Quantity, Ray, Task};
use crate::verify::{run_suite, VerifyReport};
use crate::CliError;

/// What a finished job reports back to `main`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// A verify suite ran but at least one identity missed its tolerance.
    VerifyFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalRow {
    pub re_s: f64,
    pub im_s: f64,
    pub re_value: f64,
    pub im_value: f64,
    /// Absent when no bound is available.
    pub tail_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalData {
    pub quantity: String,
    /// Values are logarithms.
    pub log: bool,
    pub rows: Vec<EvalRow>,
}

pub fn run(cfg: &JobConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match &cfg.task {
        Task::Spectrum => spectrum(cfg).map(|_| Outcome::Success),
        Task::Eval { what, grid, log, catalog } => {
            eval(cfg, *what, grid, *log, catalog.as_deref()).map(|_| Outcome::Success)
        }
        Task::Resonances { region, tol } => {
            let model = build(cfg)?;
            let set = match &model {
                SurfaceModel::Cylinder { length } => {
                    locate_zeros(&CylinderZeta { length: *length, policy: cfg.policy }, region, *tol)
                }
                SurfaceModel::Funnel { length } => {
                    locate_zeros(&FunnelZeta { length: *length, policy: cfg.policy }, region, *tol)
                }
                _ => locate_zeros(&SurfaceZeta::new(&model, &cfg.policy)?, region, *tol),
            }?;
            log::info!("located {} distinct zeros", set.points.len());
            emit(cfg, stamp(cfg, Artifact::new(ArtifactKind::ResonanceCatalog, &set)), || catalog_csv(&set))
                .map(|_| Outcome::Success)
        }
        Task::Verify { suite } => {
            let report = run_suite(*suite)?;
            let failed = !report.all_pass;
            emit(cfg, stamp(cfg, Artifact::new(ArtifactKind::VerifyReport, &report)), || verify_csv(&report))?;
            Ok(if failed { Outcome::VerifyFailed } else { Outcome::Success })
        }
        Task::Invert { ray, input } => invert(cfg, ray, input.as_deref()).map(|_| Outcome::Success),
    }
}

fn build(cfg: &JobConfig) -> Result<SurfaceModel, CliError> {
    let d = cfg.model.as_ref().ok_or_else(|| CliError::Config("this task needs --model".into()))?;
    d.build().map_err(|e| CliError::Config(e.to_string()))
}

fn stamp<T>(cfg: &JobConfig, mut a: Artifact<T>) -> Artifact<T> {
    if let Some(m) = &cfg.model {
        a = a.with_model(m.clone());
    }
    a = a.with_policy(cfg.policy);
    if cfg.timestamp {
        a = a.with_timestamp(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    }
    a
}

fn emit<T: Serialize>(
    cfg: &JobConfig,
    artifact: Artifact<T>,
    csv: impl FnOnce() -> Result<String, CliError>,
) -> Result<(), CliError> {
    let text = match cfg.format {
        Format::Json => to_canonical_json(&artifact)?,
        Format::Csv => csv()?,
    };
    match &cfg.out {
        Some(path) => write_atomic(path, &text).map_err(CliError::from_store),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_csv<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn catalog_csv(set: &ResonanceSet) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Row {
        re: f64,
        im: f64,
        multiplicity: u32,
    }
    to_csv(set.points.iter().map(|p| Row { re: p.position.re, im: p.position.im, multiplicity: p.multiplicity }))
}

fn verify_csv(report: &VerifyReport) -> Result<String, CliError> {
    to_csv(&report.entries)
}

fn spectrum(cfg: &JobConfig) -> Result<(), CliError> {
    let model = build(cfg)?;
    let spec = enumerate_primitive_classes(&model, cfg.l_max, cfg.oriented)?;
    log::info!("{} primitive classes up to length {}", spec.total_count(), cfg.l_max);
    emit(cfg, stamp(cfg, Artifact::new(ArtifactKind::Spectrum, &spec)), || to_csv(spec.entries.iter()))
}

/// A pointwise value, either as a logarithm or directly.
#[derive(Debug, Clone, Copy)]
enum Sample {
    Log(Complex64, Option<f64>),
    Plain(Complex64, Option<f64>),
}

impl Sample {
    fn from_zeta(v: ZetaValue) -> Self {
        Sample::Log(v.log_value, Some(v.tail_bound()))
    }

    fn render(self, log: bool) -> (Complex64, Option<f64>) {
        match (self, log) {
            (Sample::Log(v, t), true) | (Sample::Plain(v, t), false) => (v, t),
            (Sample::Log(v, t), false) => (v.exp(), t),
            (Sample::Plain(v, t), true) => (v.ln(), t),
        }
    }
}

/// Zeros `-k + 2πim/ℓ` of the cylinder zeta with `|ζ| ≤ radius`, each double.
pub(crate) fn cylinder_lattice(ell: f64, radius: f64) -> Vec<ResonancePoint> {
    let step = 2.0 * PI / ell;
    let mut out = Vec::new();
    let mut k = 0.0;
    while k <= radius {
        let m_max = ((radius * radius - k * k).max(0.0).sqrt() / step).floor() as i64;
        for m in -m_max..=m_max {
            out.push(ResonancePoint { position: Complex64::new(-k, step * m as f64), multiplicity: 2 });
        }
        k += 1.0;
    }
    out
}

struct Evaluator {
    what: Quantity,
    model: Option<SurfaceModel>,
    surface: Option<SurfaceZeta>,
    spectrum: Option<LengthSpectrum>,
    points: Option<(Vec<ResonancePoint>, Option<f64>)>,
    policy: TruncationPolicy,
}

fn carry_tail(r: hyperzeta::Result<ZetaValue>) -> hyperzeta::Result<Sample> {
    match r {
        Ok(v) => Ok(Sample::from_zeta(v)),
        Err(Error::TailTooLarge { value, tail, .. }) => Ok(Sample::Plain(value, tail.is_finite().then_some(tail))),
        Err(e) => Err(e),
    }
}

impl Evaluator {
    fn new(cfg: &JobConfig, what: Quantity, catalog: Option<&Path>) -> Result<Self, CliError> {
        let model = cfg.model.as_ref().map(ModelDescriptor::build).transpose()?;
        let needs_surface = matches!(what, Quantity::Tau | Quantity::Det)
            || (what == Quantity::Phi && matches!(model, Some(SurfaceModel::Schottky(_))));
        let surface = match (&model, needs_surface) {
            (Some(m), true) => Some(SurfaceZeta::new(m, &cfg.policy)?),
            _ => None,
        };
        let spectrum = match (&model, what) {
            (Some(m @ SurfaceModel::Schottky(_)), Quantity::Z) => {
                Some(enumerate_primitive_classes(m, cfg.policy.word_l_max, true)?)
            }
            _ => None,
        };
        let radius = cfg.policy.radius;
        let points = match (catalog, &model, what) {
            (Some(path), _, _) => {
                let set = hyperzeta::store::load_catalog(path).map_err(CliError::from_store)?;
                Some((set.within_radius(radius), None))
            }
            (None, Some(SurfaceModel::Cylinder { length }), Quantity::P) => {
                Some((cylinder_lattice(*length, radius), Some(length / PI)))
            }
            (None, Some(SurfaceModel::Funnel { .. }), Quantity::P) => None,
            (None, _, Quantity::P) => {
                return Err(CliError::Config("P needs --catalog for models without a closed-form resonance set".into()))
            }
            _ => None,
        };
        Ok(Evaluator { what, model, surface, spectrum, points, policy: cfg.policy })
    }

    fn unsupported(&self) -> Error {
        Error::Unsupported(format!("{:?} for model {:?}", self.what, self.model))
    }

    fn eval(&self, s: Complex64) -> hyperzeta::Result<Sample> {
        let p = &self.policy;
        let model = self.model.as_ref();
        match self.what {
            Quantity::Z => match model {
                Some(SurfaceModel::Cylinder { length }) => carry_tail(zeta_cylinder(s, *length, p)),
                Some(SurfaceModel::Funnel { length }) => carry_tail(zeta_funnel(s, *length, p)),
                Some(SurfaceModel::Horn) => Ok(Sample::Log(Complex64::new(0.0, 0.0), Some(0.0))),
                Some(SurfaceModel::Schottky(_)) => {
                    let spec = self.spectrum.as_ref().expect("spectrum prepared for Z");
                    carry_tail(hyperzeta::zeta::zeta_selberg(s, spec, p))
                }
                None => Err(self.unsupported()),
            },
            Quantity::Zinf => {
                let chi = model.ok_or_else(|| self.unsupported())?.topology().chi;
                Ok(Sample::Log(log_zeta_infinity(s, chi)?, Some(0.0)))
            }
            Quantity::Zy => {
                let t = model.ok_or_else(|| self.unsupported())?.topology();
                carry_tail(zeta_y(s, &t.funnel_lengths, p))
            }
            Quantity::P => match (&self.points, model) {
                (Some((pts, density)), _) => {
                    let tail = density.map(|d| hadamard_tail_bound(s, p.radius, d)).filter(|t| t.is_finite());
                    Ok(Sample::Log(hadamard_resonances(s, pts), tail))
                }
                (None, Some(SurfaceModel::Funnel { length })) => carry_tail(hadamard_funnel(s, *length, p)),
                _ => Err(self.unsupported()),
            },
            Quantity::Phi => {
                let v = match model {
                    Some(SurfaceModel::Cylinder { length }) => phi_cylinder(s, *length, p)?,
                    Some(SurfaceModel::Funnel { length }) => phi_funnel(s, *length, p)?,
                    Some(SurfaceModel::Horn) => phi_horn(s)?,
                    Some(SurfaceModel::Schottky(_)) => {
                        self.surface.as_ref().expect("surface prepared").derivative(1, s)?
                    }
                    None => return Err(self.unsupported()),
                };
                Ok(Sample::Plain(v, None))
            }
            Quantity::Ups => {
                let v = match model {
                    Some(SurfaceModel::Cylinder { length }) => upsilon_cylinder(s, *length, p)?,
                    Some(SurfaceModel::Funnel { length }) => upsilon_funnel(s, *length, p)?,
                    Some(SurfaceModel::Horn) => upsilon_horn(s)?,
                    _ => return Err(self.unsupported()),
                };
                Ok(Sample::Plain(v, None))
            }
            Quantity::Tau => Ok(Sample::Log(self.surface.as_ref().expect("surface prepared").tau_zratio(0, s)?, None)),
            Quantity::Det => {
                Ok(Sample::Log(self.surface.as_ref().expect("surface prepared").det_laplacian(0, s)?, None))
            }
        }
    }
}

fn quantity_name(q: Quantity) -> String {
    use clap::ValueEnum;
    q.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

pub fn evaluate_grid(
    cfg: &JobConfig,
    what: Quantity,
    grid: &EvalGrid,
    log: bool,
    catalog: Option<&Path>,
) -> Result<EvalData, CliError> {
    let ev = Evaluator::new(cfg, what, catalog)?;
    let rows = grid
        .points()
        .par_iter()
        .map(|&(re, im)| {
            let (v, tail) = ev.eval(Complex64::new(re, im))?.render(log);
            Ok(EvalRow { re_s: re, im_s: im, re_value: v.re, im_value: v.im, tail_bound: tail })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(EvalData { quantity: quantity_name(what), log, rows })
}

fn eval(cfg: &JobConfig, what: Quantity, grid: &EvalGrid, log: bool, catalog: Option<&Path>) -> Result<(), CliError> {
    let data = evaluate_grid(cfg, what, grid, log, catalog)?;
    emit(cfg, stamp(cfg, Artifact::new(ArtifactKind::EvalGrid, &data)), || to_csv(&data.rows))
}

fn invert(cfg: &JobConfig, ray: &Ray, input: Option<&Path>) -> Result<(), CliError> {
    let samples: Vec<(f64, Complex64)> = match input {
        Some(path) => {
            let a: Artifact<EvalData> = read_artifact(path, ArtifactKind::EvalGrid).map_err(CliError::from_store)?;
            a.data
                .rows
                .iter()
                .filter(|r| r.im_s == 0.0)
                .map(|r| {
                    let v = Complex64::new(r.re_value, r.im_value);
                    (r.re_s, if a.data.log { v } else { v.ln() })
                })
                .collect()
        }
        None => {
            let model = build(cfg)?;
            let z = SurfaceZeta::new(&model, &cfg.policy)?;
            ray.values()
                .par_iter()
                .map(|&s| Ok((s, z.det_laplacian(0, Complex64::new(s, 0.0))?)))
                .collect::<Result<_, Error>>()?
        }
    };
    let fit = invert_asymptotics(&samples)?;
    log::info!("χ ≈ {:.4}, n_C ≈ {:.4}", fit.chi_est, fit.n_c_est);
    emit(cfg, stamp(cfg, Artifact::new(ArtifactKind::AsymptoticFit, &fit)), || {
        #[derive(Serialize)]
        struct Row<'a> {
            field: &'a str,
            value: String,
        }
        let opt = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_default();
        to_csv([
            Row { field: "chi_est", value: fit.chi_est.to_string() },
            Row { field: "n_c_est", value: fit.n_c_est.to_string() },
            Row { field: "chi", value: opt(fit.chi) },
            Row { field: "n_c", value: opt(fit.n_c) },
            Row { field: "residual", value: fit.residual.to_string() },
        ])
    })
}
