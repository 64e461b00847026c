//! Flag and config-file handling. The config file is a flat TOML table with
//! the same keys as the long flags; explicit flags override file values.

use std::path::{Path, PathBuf};

use clap::Args;
use hopfion_core::{boundary_matched_constants, HopfionSolution, ModelSpec, Scale};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    /// Coupling exponents alpha_i (comma separated, must sum to 3/4)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<f64>>,
    /// Poloidal winding numbers m_i
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub m: Option<Vec<i64>>,
    /// Toroidal winding numbers n_i
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub n: Option<Vec<i64>>,
    /// Coordinate scale a > 0
    #[arg(long)]
    pub a: Option<f64>,
    /// Integration constants k_i for general windings (defaults to the
    /// boundary-matched values)
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<f64>>,
    /// Tolerance override used by verification checks where applicable
    #[arg(long)]
    pub tol: Option<f64>,
    /// Grid resolution (comma separated; meaning depends on the subcommand)
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
    /// Output path
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat TOML config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Skip the expensive 3-D grid checks
    #[arg(long)]
    pub quick: bool,
    /// Distort the profiles by f -> f (1 + amplitude sin eta); residual
    /// checks are expected to fail on the distorted configuration
    #[arg(long)]
    pub perturb: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<Vec<f64>>,
    pub m: Option<Vec<i64>>,
    pub n: Option<Vec<i64>>,
    pub a: Option<f64>,
    pub k: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub grid: Option<Vec<usize>>,
    pub out: Option<String>,
    pub quick: Option<bool>,
    pub perturb: Option<f64>,
    pub rows: Option<Vec<String>>,
    pub q_grid: Option<String>,
    pub q_den: Option<i64>,
    #[serde(rename = "box")]
    pub box_spec: Option<String>,
    pub csv: Option<String>,
}

pub fn load_file_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                CliError::Config(format!("cannot read config {}: {e}", p.display()))
            })?;
            toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("invalid config {}: {e}", p.display())))
        }
    }
}

/// Fully resolved run parameters (file values overridden by flags).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alphas: Vec<f64>,
    pub m: Vec<i64>,
    pub n: Vec<i64>,
    pub a: f64,
    pub k: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub grid: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
    pub quick: bool,
    pub perturb: Option<f64>,
    pub file: FileConfig,
}

impl RunConfig {
    pub fn resolve(args: &SpecArgs) -> Result<Self, CliError> {
        let file = load_file_config(args.config.as_deref())?;
        let alphas = args
            .alpha
            .clone()
            .or_else(|| file.alpha.clone())
            .unwrap_or_else(|| vec![0.75]);
        let m = args
            .m
            .clone()
            .or_else(|| file.m.clone())
            .unwrap_or_else(|| vec![2]);
        let n = args
            .n
            .clone()
            .or_else(|| file.n.clone())
            .unwrap_or_else(|| vec![1]);
        let a = args.a.or(file.a).unwrap_or(1.0);
        Ok(RunConfig {
            alphas,
            m,
            n,
            a,
            k: args.k.clone().or_else(|| file.k.clone()),
            tol: args.tol.or(file.tol),
            grid: args.grid.clone().or_else(|| file.grid.clone()),
            out: args
                .out
                .clone()
                .or_else(|| file.out.as_ref().map(PathBuf::from)),
            quick: args.quick || file.quick.unwrap_or(false),
            perturb: args.perturb.or(file.perturb),
            file,
        })
    }

    pub fn spec(&self) -> Result<ModelSpec, CliError> {
        let scale = Scale::new(self.a)?;
        Ok(ModelSpec::new(
            self.alphas.clone(),
            self.m.clone(),
            self.n.clone(),
            scale,
        )?)
    }

    /// Build the solution: closed form on the constant-ratio branch unless
    /// explicit constants were supplied, boundary-matched tabulated profiles
    /// otherwise. Returns the solution and the constants actually used.
    pub fn solution(&self) -> Result<(HopfionSolution, Vec<f64>), CliError> {
        let spec = self.spec()?;
        let (sol, k) = match &self.k {
            Some(k) => (HopfionSolution::from_constants(spec.clone(), k)?, k.clone()),
            None => {
                if spec.q_ratio().is_constant() {
                    let sol = HopfionSolution::closed_form(spec)?;
                    let k = sol.profiles().iter().map(|p| p.constants().0).collect();
                    (sol, k)
                } else {
                    let k = boundary_matched_constants(&spec)?;
                    (HopfionSolution::from_constants(spec, &k)?, k)
                }
            }
        };
        match self.perturb {
            Some(amp) if amp != 0.0 => {
                let p = sol.perturbed(amp);
                Ok((p, k))
            }
            _ => Ok((sol, k)),
        }
    }
}

/// Full-precision decimal formatting (17 significant digits) used by every
/// machine-readable output so regression diffs are exact.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}
