//! `hopfion export`: sample the unit-vector fields and densities on a
//! Cartesian box and write legacy VTK structured points (plus optional CSV).

use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use hopfion_core::{
    energy_density, hopf_density, to_toroidal, CartesianPoint, Error as CoreError, HopfionSolution,
    ToroidalPoint,
};

use crate::config::{fmt_g17, RunConfig, SpecArgs};
use crate::vtk::{StructuredPoints, VtkWriter};
use crate::CliError;

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Cartesian box "x0:x1,y0:y1,z0:z1" (defaults to +-2a in x, y and +-a in z)
    #[arg(long = "box", allow_hyphen_values = true)]
    pub box_spec: Option<String>,
    /// Also write a CSV table of the sampled points
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn parse_box(text: &str) -> Result<[(f64, f64); 3], CliError> {
    let axes: Vec<&str> = text.split(',').collect();
    if axes.len() != 3 {
        return Err(CliError::Config(format!(
            "box '{text}' must have the form x0:x1,y0:y1,z0:z1"
        )));
    }
    let mut out = [(0.0, 0.0); 3];
    for (i, axis) in axes.iter().enumerate() {
        let ends: Vec<&str> = axis.split(':').collect();
        if ends.len() != 2 {
            return Err(CliError::Config(format!("bad box axis '{axis}'")));
        }
        let lo = ends[0]
            .trim()
            .parse::<f64>()
            .map_err(|e| CliError::Config(format!("bad box bound '{}': {e}", ends[0])))?;
        let hi = ends[1]
            .trim()
            .parse::<f64>()
            .map_err(|e| CliError::Config(format!("bad box bound '{}': {e}", ends[1])))?;
        if hi <= lo {
            return Err(CliError::Config(format!("empty box axis '{axis}'")));
        }
        out[i] = (lo, hi);
    }
    Ok(out)
}

/// Field samples at one grid point. Points exactly on the focal ring take
/// their well-defined limits (n = (0,0,-1), vanishing densities).
struct Sample {
    point: Option<ToroidalPoint>,
    n: Vec<[f64; 3]>,
    energy: f64,
    hopf: Vec<f64>,
}

fn sample(sol: &HopfionSolution, c: &CartesianPoint, with_hopf: bool) -> Result<Sample, CliError> {
    let scale = sol.spec().scale();
    let fields = sol.spec().n_fields();
    match to_toroidal(c, scale) {
        Ok(p) => {
            let n = (0..fields).map(|i| sol.eval_n(i, &p)).collect();
            let energy = energy_density(sol, &p);
            let hopf = if with_hopf {
                (0..fields)
                    .map(|i| hopf_density(sol, i, &p))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                Vec::new()
            };
            Ok(Sample {
                point: Some(p),
                n,
                energy,
                hopf,
            })
        }
        Err(CoreError::FocalRing) => Ok(Sample {
            point: None,
            n: vec![[0.0, 0.0, -1.0]; fields],
            energy: 0.0,
            hopf: if with_hopf {
                vec![0.0; fields]
            } else {
                Vec::new()
            },
        }),
        Err(e) => Err(e.into()),
    }
}

pub fn run(args: &ExportArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.spec)?;
    let (sol, _) = cfg.solution()?;
    let spec = sol.spec();
    let fields = spec.n_fields();
    let a = spec.scale().get();

    let out_path = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::Config("export requires --out <file.vtk>".into()))?;

    let box_text = args.box_spec.clone().or_else(|| cfg.file.box_spec.clone());
    let bounds = match box_text {
        Some(t) => parse_box(&t)?,
        None => [(-2.0 * a, 2.0 * a), (-2.0 * a, 2.0 * a), (-a, a)],
    };
    let dims: [usize; 3] = match cfg.grid.as_deref() {
        Some([nx, ny, nz]) => [*nx, *ny, *nz],
        Some(other) => {
            return Err(CliError::Config(format!(
                "export --grid needs three values, got {}",
                other.len()
            )))
        }
        None => [64, 64, 64],
    };
    if dims.iter().any(|&d| d < 2) {
        return Err(CliError::Config("grid must be at least 2 per axis".into()));
    }

    // the lift (and hence the charge density) needs the constant-ratio branch
    let with_hopf = spec.q_ratio().is_constant() && cfg.perturb.is_none();
    if !with_hopf {
        println!("note: charge density omitted (needs the constant-ratio branch)");
    }

    let spacing = [
        (bounds[0].1 - bounds[0].0) / (dims[0] - 1) as f64,
        (bounds[1].1 - bounds[1].0) / (dims[1] - 1) as f64,
        (bounds[2].1 - bounds[2].0) / (dims[2] - 1) as f64,
    ];
    let n_points = dims[0] * dims[1] * dims[2];

    // VTK point order: x fastest, then y, then z
    let mut samples = Vec::with_capacity(n_points);
    for iz in 0..dims[2] {
        for iy in 0..dims[1] {
            for ix in 0..dims[0] {
                let c = CartesianPoint::new(
                    bounds[0].0 + spacing[0] * ix as f64,
                    bounds[1].0 + spacing[1] * iy as f64,
                    bounds[2].0 + spacing[2] * iz as f64,
                );
                samples.push((c, sample(&sol, &c, with_hopf)?));
            }
        }
    }

    let file = std::io::BufWriter::new(std::fs::File::create(&out_path)?);
    let mut vtk = VtkWriter::new(
        file,
        "multi-field toroidal hopfion export",
        &StructuredPoints {
            dims,
            origin: [bounds[0].0, bounds[1].0, bounds[2].0],
            spacing,
        },
    )?;
    for i in 0..fields {
        let vectors: Vec<[f64; 3]> = samples.iter().map(|(_, s)| s.n[i]).collect();
        vtk.vectors(&format!("n_field_{}", i + 1), &vectors)?;
        let n3: Vec<f64> = samples.iter().map(|(_, s)| s.n[i][2]).collect();
        vtk.scalars(&format!("n3_field_{}", i + 1), &n3)?;
    }
    let energy: Vec<f64> = samples.iter().map(|(_, s)| s.energy).collect();
    vtk.scalars("energy_density", &energy)?;
    if with_hopf {
        for i in 0..fields {
            let dens: Vec<f64> = samples.iter().map(|(_, s)| s.hopf[i]).collect();
            vtk.scalars(&format!("charge_density_field_{}", i + 1), &dens)?;
        }
    }
    println!(
        "wrote {} ({} points, {} fields)",
        out_path.display(),
        n_points,
        fields
    );

    if let Some(csv_path) = args
        .csv
        .clone()
        .or_else(|| cfg.file.csv.clone().map(PathBuf::from))
    {
        let mut f = std::io::BufWriter::new(std::fs::File::create(&csv_path)?);
        write!(f, "x,y,z,eta,xi,phi")?;
        for i in 1..=fields {
            write!(f, ",n1_{i},n2_{i},n3_{i}")?;
        }
        write!(f, ",energy_density")?;
        if with_hopf {
            for i in 1..=fields {
                write!(f, ",charge_density_{i}")?;
            }
        }
        writeln!(f)?;
        for (c, s) in &samples {
            write!(f, "{},{},{}", fmt_g17(c.x), fmt_g17(c.y), fmt_g17(c.z))?;
            match &s.point {
                Some(p) => write!(
                    f,
                    ",{},{},{}",
                    fmt_g17(p.eta),
                    fmt_g17(p.xi),
                    fmt_g17(p.phi)
                )?,
                None => write!(f, ",inf,0,0")?,
            }
            for n in &s.n {
                write!(f, ",{},{},{}", fmt_g17(n[0]), fmt_g17(n[1]), fmt_g17(n[2]))?;
            }
            write!(f, ",{}", fmt_g17(s.energy))?;
            for h in &s.hopf {
                write!(f, ",{}", fmt_g17(*h))?;
            }
            writeln!(f)?;
        }
        println!("wrote {}", csv_path.display());
    }

    Ok(())
}
