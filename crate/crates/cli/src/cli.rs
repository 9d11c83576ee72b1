//! Argument definitions.

use std::path::PathBuf;

use clap::{ArgAction, Parser, Subcommand};

use crate::config::{parse_box, parse_model, parse_policy, EvalGrid, Format, JobConfig, Quantity, Ray, Suite, Task};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "hyperzeta", version, about = "Selberg zeta functions and resonances of hyperbolic surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Surface model, e.g. cylinder:1, funnel:2, horn, pants:2,2,2, schottky:a,b,c,d/a,b,c,d
    #[arg(long, global = true)]
    pub model: Option<String>,

    /// Truncation policy kmax,tol,R
    #[arg(long, global = true, default_value = "100,1e-6,60")]
    pub policy: String,

    /// Length cutoff for spectrum enumeration
    #[arg(long, global = true, default_value_t = 8.0)]
    pub lmax: f64,

    /// Output file; standard output when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; csv for eval and json otherwise by default
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Count oriented classes (a geodesic and its reverse separately)
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set)]
    pub oriented: bool,

    /// Omit the timestamp from JSON artifacts
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate primitive closed geodesics up to --lmax
    Spectrum,
    /// Evaluate a function on a rectangular grid
    Eval {
        #[arg(long, value_enum, ignore_case = true, default_value = "Z")]
        what: Quantity,
        /// re0:re1:step,im0:im1:step (stops inclusive)
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Report logarithms instead of values
        #[arg(long)]
        log: bool,
        /// Resonance catalog for the Hadamard product
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Locate zeros of the model zeta inside a box
    Resonances {
        /// re0:re1:im0:im1
        #[arg(long = "box", allow_hyphen_values = true)]
        region: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run a suite of identity checks
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Recover the Euler characteristic and cusp count from growth on a real ray
    Invert {
        /// start:stop:step
        #[arg(long, default_value = "15:61:2")]
        ray: String,
        /// Eval-grid JSON artifact to fit instead of evaluating the model
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

impl Cli {
    pub fn into_config(self) -> Result<JobConfig, CliError> {
        let model = self.model.as_deref().map(parse_model).transpose()?;
        let policy = parse_policy(&self.policy, self.lmax)?;
        let (task, default_format) = match self.command {
            Command::Spectrum => (Task::Spectrum, Format::Json),
            Command::Eval { what, grid, log, catalog } => {
                (Task::Eval { what, grid: grid.parse::<EvalGrid>()?, log, catalog }, Format::Csv)
            }
            Command::Resonances { region, tol } => {
                (Task::Resonances { region: parse_box(&region)?, tol }, Format::Json)
            }
            Command::Verify { suite } => (Task::Verify { suite }, Format::Json),
            Command::Invert { ray, input } => (Task::Invert { ray: ray.parse::<Ray>()?, input }, Format::Json),
        };
        let cfg = JobConfig {
            model,
            task,
            policy,
            l_max: self.lmax,
            oriented: self.oriented,
            out: self.out,
            format: self.format.unwrap_or(default_format),
            timestamp: !self.no_timestamp,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
