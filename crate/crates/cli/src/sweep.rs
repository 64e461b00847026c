//! `hopfion sweep`: evaluate a list of parameter sets and emit one CSV row
//! per set. Rows that fail are recorded in the `error` column and the run
//! continues. Output is byte-deterministic.

use std::io::Write;

use clap::Args;
use hopfion_core::{
    energy_closed, energy_grid, energy_profile, energy_reduced, eom_residual, hopf_analytic,
    vk_bound, GridResolution, HopfionSolution, ModelSpec, RegionSampler, Scale,
};

use crate::config::{fmt_g17, load_file_config, RunConfig, SpecArgs};
use crate::CliError;

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// One parameter set per occurrence, "alphas:ms:ns" with comma-separated
    /// groups, e.g. --row 0.375,0.375:2,4:1,2
    #[arg(long = "row")]
    pub rows: Vec<String>,
    /// Convenience grid over q as "start:stop:step" (single field, alpha = 3/4)
    #[arg(long)]
    pub q_grid: Option<String>,
    /// Denominator used to realise the q grid with integer windings (m = den,
    /// n = q * den)
    #[arg(long)]
    pub q_den: Option<i64>,
    /// Also evaluate the 3-D grid energy route per row
    #[arg(long)]
    pub with_grid: bool,
}

struct SweepRow {
    alphas: Vec<f64>,
    m: Vec<i64>,
    n: Vec<i64>,
}

const HEADER: &str = "row,n_fields,alpha,m,n,q_abs,e_closed,e_reduced,e_profile,e_grid,charges,vk_bound,vk_ratio,eom_residual,error";

fn parse_row(text: &str) -> Result<SweepRow, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "row '{text}' must have the form alphas:ms:ns"
        )));
    }
    let alphas = parts[0]
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("row '{text}': {e}")))?;
    let m = parts[1]
        .split(',')
        .map(|v| v.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("row '{text}': {e}")))?;
    let n = parts[2]
        .split(',')
        .map(|v| v.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("row '{text}': {e}")))?;
    Ok(SweepRow { alphas, m, n })
}

fn q_grid_rows(grid: &str, den: i64) -> Result<Vec<SweepRow>, CliError> {
    let parts: Vec<&str> = grid.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "q grid '{grid}' must have the form start:stop:step"
        )));
    }
    let nums = parts
        .iter()
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("q grid '{grid}': {e}")))?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 {
        return Err(CliError::Config("q grid step must be positive".into()));
    }
    let mut rows = Vec::new();
    let mut idx = 0;
    loop {
        let q = start + step * idx as f64;
        if q > stop + 1e-12 {
            break;
        }
        let n = q * den as f64;
        if (n - n.round()).abs() > 1e-9 {
            return Err(CliError::Config(format!(
                "q = {q} is not representable with denominator {den}"
            )));
        }
        rows.push(SweepRow {
            alphas: vec![0.75],
            m: vec![den],
            n: vec![n.round() as i64],
        });
        idx += 1;
    }
    Ok(rows)
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn evaluate(
    row: &SweepRow,
    a: f64,
    with_grid: bool,
    grid: &GridResolution,
) -> (Vec<String>, String) {
    let blank = |cols: &mut Vec<String>, n: usize| {
        for _ in 0..n {
            cols.push(String::new());
        }
    };
    let mut cols = Vec::new();
    cols.push(row.alphas.len().to_string());
    cols.push(format!("\"{}\"", join(&row.alphas)));
    cols.push(format!("\"{}\"", join(&row.m)));
    cols.push(format!("\"{}\"", join(&row.n)));

    let spec = match ModelSpec::new(
        row.alphas.clone(),
        row.m.clone(),
        row.n.clone(),
        Scale::new(a).unwrap_or_else(|_| Scale::new(1.0).unwrap()),
    ) {
        Ok(s) => s,
        Err(e) => {
            blank(&mut cols, 9);
            return (cols, e.to_string());
        }
    };

    let ratio = spec.q_ratio();
    match ratio.q_abs() {
        Some(q) => cols.push(fmt_g17(q)),
        None => cols.push(String::new()),
    }

    let charges: Vec<i64> = (0..spec.n_fields())
        .map(|i| {
            let (m, n) = spec.winding(i);
            hopf_analytic(m, n)
        })
        .collect();

    let sol = match HopfionSolution::closed_form(spec.clone())
        .or_else(|_| HopfionSolution::general(spec.clone()))
    {
        Ok(s) => s,
        Err(e) => {
            blank(&mut cols, 8);
            return (cols, e.to_string());
        }
    };
    let k: Vec<f64> = sol.profiles().iter().map(|p| p.constants().0).collect();

    let e_closed = energy_closed(&spec).ok();
    cols.push(e_closed.map(fmt_g17).unwrap_or_default());
    let e_reduced = match energy_reduced(&spec, &k) {
        Ok(v) => v,
        Err(e) => {
            blank(&mut cols, 7);
            return (cols, e.to_string());
        }
    };
    cols.push(fmt_g17(e_reduced));
    match energy_profile(&sol) {
        Ok(v) => cols.push(fmt_g17(v)),
        Err(e) => {
            blank(&mut cols, 6);
            return (cols, e.to_string());
        }
    }
    if with_grid {
        match energy_grid(&sol, grid) {
            Ok(v) => cols.push(fmt_g17(v)),
            Err(e) => {
                blank(&mut cols, 5);
                return (cols, e.to_string());
            }
        }
    } else {
        cols.push(String::new());
    }

    cols.push(format!("\"{}\"", join(&charges)));
    let bound = vk_bound(&spec, &charges);
    cols.push(fmt_g17(bound));
    let energy_for_ratio = e_closed.unwrap_or(e_reduced);
    cols.push(fmt_g17(energy_for_ratio / bound));

    let sampler = RegionSampler {
        count: 12,
        ..Default::default()
    };
    let mut worst = 0.0_f64;
    for j in 0..spec.n_fields() {
        match eom_residual(&sol, j, &sampler, None) {
            Ok(r) => worst = worst.max(r.max_abs_residual),
            Err(e) => {
                cols.push(String::new());
                return (cols, e.to_string());
            }
        }
    }
    cols.push(fmt_g17(worst));
    (cols, String::new())
}

pub fn run(args: &SweepArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.spec)?;
    let file_cfg = load_file_config(args.spec.config.as_deref())?;

    let mut rows: Vec<SweepRow> = Vec::new();
    let row_texts = if args.rows.is_empty() {
        file_cfg.rows.clone().unwrap_or_default()
    } else {
        args.rows.clone()
    };
    for text in &row_texts {
        rows.push(parse_row(text)?);
    }
    if let Some(grid) = args.q_grid.clone().or(file_cfg.q_grid.clone()) {
        let den = args
            .q_den
            .or(file_cfg.q_den)
            .ok_or_else(|| CliError::Config("--q-grid requires --q-den".into()))?;
        rows.extend(q_grid_rows(&grid, den)?);
    }

    let grid_res = match cfg.grid.as_deref() {
        Some([ne, nx, np]) => GridResolution {
            n_eta: *ne,
            n_xi: *nx,
            n_phi: *np,
            eta_max: 12.0,
        },
        _ => GridResolution {
            n_eta: 128,
            n_xi: 16,
            n_phi: 4,
            eta_max: 12.0,
        },
    };

    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for (idx, row) in rows.iter().enumerate() {
        let (cols, error) = evaluate(row, cfg.a, args.with_grid, &grid_res);
        out.push_str(&idx.to_string());
        for c in &cols {
            out.push(',');
            out.push_str(c);
        }
        out.push(',');
        if !error.is_empty() {
            out.push_str(&format!("\"{}\"", error.replace('"', "'")));
        }
        out.push('\n');
    }

    match &cfg.out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            f.write_all(out.as_bytes())?;
        }
        None => print!("{out}"),
    }
    Ok(())
}
