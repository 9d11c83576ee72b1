//! Parsing and validation of job parameters.

use std::path::PathBuf;
use std::str::FromStr;

use hyperzeta::groups::ModelDescriptor;
use hyperzeta::{ContourBox, TruncationPolicy};

use crate::CliError;

/// Tolerance, in units of the step, when deciding whether the stop value is on the grid.
const GRID_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Quantity {
    /// Model zeta function
    #[value(name = "Z")]
    Z,
    /// Topological factor
    #[value(name = "Zinf")]
    Zinf,
    /// Product of funnel zetas over the funnel ends
    #[value(name = "ZY")]
    Zy,
    /// Hadamard product over resonances
    #[value(name = "P")]
    P,
    /// Logarithmic derivative of the model zeta
    #[value(name = "phi")]
    Phi,
    /// Regularized trace
    #[value(name = "ups")]
    Ups,
    /// Relative scattering determinant from the zeta ratio
    #[value(name = "tau")]
    Tau,
    /// Laplacian determinant
    #[value(name = "det")]
    Det,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Appendix,
    Horn,
    Funnel,
    Cylinder,
    All,
}

/// Rectangular grid `re_start:re_stop:re_step,im_start:im_stop:im_step`, stops inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalGrid {
    pub re_start: f64,
    pub re_stop: f64,
    pub re_step: f64,
    pub im_start: f64,
    pub im_stop: f64,
    pub im_step: f64,
}

fn numbers(s: &str, sep: char, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = s
        .split(sep)
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("{what} '{s}': {e}")))?;
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Config(format!("{what} '{s}' needs {n} finite numbers separated by '{sep}'")));
    }
    Ok(v)
}

fn axis(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + GRID_SLACK).floor() as usize + 1;
    (0..n).map(|i| start + i as f64 * step).collect()
}

impl EvalGrid {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.re_step > 0.0 && self.im_step > 0.0) {
            return Err(CliError::Config("grid steps must be positive".into()));
        }
        if self.re_stop < self.re_start || self.im_stop < self.im_start {
            return Err(CliError::Config("grid stop lies below start".into()));
        }
        Ok(())
    }

    pub fn re_values(&self) -> Vec<f64> {
        axis(self.re_start, self.re_stop, self.re_step)
    }

    pub fn im_values(&self) -> Vec<f64> {
        axis(self.im_start, self.im_stop, self.im_step)
    }

    /// Points ordered by real part, then imaginary part.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let ims = self.im_values();
        self.re_values().into_iter().flat_map(|re| ims.iter().map(move |&im| (re, im))).collect()
    }
}

impl FromStr for EvalGrid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| CliError::Config(format!("grid '{s}' must look like re0:re1:step,im0:im1:step")))?;
        let r = numbers(re, ':', 3, "grid axis")?;
        let i = numbers(im, ':', 3, "grid axis")?;
        let g = EvalGrid { re_start: r[0], re_stop: r[1], re_step: r[2], im_start: i[0], im_stop: i[1], im_step: i[2] };
        g.validate()?;
        Ok(g)
    }
}

/// Real ray `start:stop:step` for the asymptotic fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Ray {
    pub fn values(&self) -> Vec<f64> {
        axis(self.start, self.stop, self.step)
    }
}

impl FromStr for Ray {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let v = numbers(s, ':', 3, "ray")?;
        if !(v[2] > 0.0) || v[1] < v[0] {
            return Err(CliError::Config(format!("ray '{s}' needs start ≤ stop and a positive step")));
        }
        Ok(Ray { start: v[0], stop: v[1], step: v[2] })
    }
}

pub fn parse_box(s: &str) -> Result<ContourBox, CliError> {
    let v = numbers(s, ':', 4, "box")?;
    ContourBox::new(v[0], v[1], v[2], v[3]).map_err(|e| CliError::Config(format!("box '{s}': {e}")))
}

/// `kmax,tol,R`; the word length cutoff comes from `--lmax`.
pub fn parse_policy(s: &str, l_max: f64) -> Result<TruncationPolicy, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [k, tol, r] = parts.as_slice() else {
        return Err(CliError::Config(format!("policy '{s}' must look like kmax,tol,R")));
    };
    let k_max = k.parse::<usize>().map_err(|e| CliError::Config(format!("policy k_max '{k}': {e}")))?;
    let tail_tol = tol.parse::<f64>().map_err(|e| CliError::Config(format!("policy tolerance '{tol}': {e}")))?;
    let radius = r.parse::<f64>().map_err(|e| CliError::Config(format!("policy radius '{r}': {e}")))?;
    TruncationPolicy::new(k_max, tail_tol, l_max, radius).map_err(|e| CliError::Config(e.to_string()))
}

pub fn parse_model(s: &str) -> Result<ModelDescriptor, CliError> {
    let d: ModelDescriptor = s.parse().map_err(|e| CliError::Config(format!("model '{s}': {e}")))?;
    d.build().map_err(|e| CliError::Config(format!("model '{s}': {e}")))?;
    Ok(d)
}

#[derive(Debug, Clone)]
pub enum Task {
    Spectrum,
    Eval { what: Quantity, grid: EvalGrid, log: bool, catalog: Option<PathBuf> },
    Resonances { region: ContourBox, tol: f64 },
    Verify { suite: Suite },
    Invert { ray: Ray, input: Option<PathBuf> },
}

/// A fully parsed invocation.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub model: Option<ModelDescriptor>,
    pub task: Task,
    pub policy: TruncationPolicy,
    pub l_max: f64,
    pub oriented: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub timestamp: bool,
}

impl JobConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let needs_model = match &self.task {
            Task::Spectrum | Task::Resonances { .. } => true,
            Task::Eval { what, catalog, .. } => !(*what == Quantity::P && catalog.is_some()),
            Task::Invert { input, .. } => input.is_none(),
            Task::Verify { .. } => false,
        };
        if needs_model && self.model.is_none() {
            return Err(CliError::Config("this task needs --model".into()));
        }
        if !(self.l_max > 0.0 && self.l_max.is_finite()) {
            return Err(CliError::Config(format!("--lmax must be positive, got {}", self.l_max)));
        }
        match &self.task {
            Task::Spectrum => {
                if matches!(self.model, Some(ModelDescriptor::Horn)) {
                    return Err(CliError::Config("the horn has no closed geodesics to enumerate".into()));
                }
            }
            Task::Eval { grid, catalog, what, .. } => {
                grid.validate()?;
                if catalog.is_some() && *what != Quantity::P {
                    return Err(CliError::Config("--catalog only applies to --what P".into()));
                }
            }
            Task::Resonances { tol, .. } => {
                if !(*tol > 0.0) {
                    return Err(CliError::Config("--tol must be positive".into()));
                }
            }
            Task::Invert { ray, input } => {
                if input.is_none() && ray.values().len() < hyperzeta::locator::MIN_FIT_SAMPLES {
                    return Err(CliError::Config(format!(
                        "ray needs at least {} points",
                        hyperzeta::locator::MIN_FIT_SAMPLES
                    )));
                }
            }
            Task::Verify { .. } => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts_include_stop() {
        let g: EvalGrid = "0.5:3:0.1,0:0:1".parse().unwrap();
        assert_eq!(g.points().len(), 26);
        assert!((g.re_values()[25] - 3.0).abs() < 1e-12);
        let g: EvalGrid = "0:1:0.25,-1:1:1".parse().unwrap();
        assert_eq!(g.points().len(), 15);
        assert_eq!(g.points()[1], (0.0, 0.0));
    }

    #[test]
    fn bad_inputs_are_config_errors() {
        for s in ["0:1:0,0:0:1", "1:0:0.1,0:0:1", "0:1,0:0:1", "a:b:c,0:0:1"] {
            assert!(matches!(s.parse::<EvalGrid>(), Err(CliError::Config(_))), "{s}");
        }
        assert!(parse_policy("100,1e-6", 8.0).is_err());
        assert!(parse_policy("0,1e-6,60", 8.0).is_err());
        assert!(parse_box("0:1:2").is_err());
        assert!(parse_model("cylinder:-1").is_err());
        assert!(parse_model("torus:1").is_err());
    }

    #[test]
    fn policy_takes_lmax() {
        let p = parse_policy("50, 1e-8, 80", 6.0).unwrap();
        assert_eq!((p.k_max, p.tail_tol, p.word_l_max, p.radius), (50, 1e-8, 6.0, 80.0));
    }
}
