use std::io::Write;

use paircorr_core::diagnostics::{
    best_approximation, convergence_sweep, default_n_schedule, expectation_formula, kronecker_witness,
    pair_corr_trials, simultaneous_approx_search, star_discrepancy_estimate, GeneratorSpec,
    MonteCarloMoments,
};
use paircorr_core::energy::{additive_energy, EnergySummary, RegimeThresholds};
use paircorr_core::generators::make_integer_sequence;
use paircorr_core::io::{format_float, read_point_set, write_point_set};
use paircorr_core::{pair_corr_celllist, AlphaVector, Error, PointSet, Result, SGrid};
use serde::Serialize;

use crate::args::{Command, Format, GenKind};
use crate::config::RunConfig;

/// Runs the configured workflow and returns the bytes to emit.
pub fn run(cfg: &RunConfig) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    match cfg.command {
        Command::Generate => generate(cfg, &mut out)?,
        Command::Paircorr => paircorr(cfg, &mut out)?,
        Command::Energy => energy(cfg, &mut out)?,
        Command::Converge => converge(cfg, &mut out)?,
        Command::Witness => witness(cfg, &mut out)?,
        Command::Approx => approx(cfg, &mut out)?,
        Command::Discrepancy => discrepancy(cfg, &mut out)?,
    }
    Ok(out)
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    result: T,
}

fn emit_json<T: Serialize>(cfg: &RunConfig, result: T, out: &mut Vec<u8>) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, &Envelope { config: cfg, result })
        .map_err(|e| Error::Internal(e.to_string()))?;
    out.push(b'\n');
    Ok(())
}

fn csv_header(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<()> {
    writeln!(out, "# {}", cfg.header_json())?;
    Ok(())
}

fn alpha(cfg: &RunConfig) -> Result<AlphaVector> {
    AlphaVector::new(cfg.alpha.clone())
}

fn generator(cfg: &RunConfig) -> Result<GeneratorSpec> {
    Ok(match cfg.generator {
        GenKind::Uniform => GeneratorSpec::Uniform { seed: cfg.seed },
        GenKind::Kronecker => GeneratorSpec::Kronecker { alpha: alpha(cfg)? },
        GenKind::AnAlpha => GeneratorSpec::AnAlpha {
            seq: make_integer_sequence(cfg.family, cfg.n, cfg.input.as_deref())?,
            alpha: alpha(cfg)?,
        },
        GenKind::Poly => GeneratorSpec::Polynomial {
            coeffs: cfg.poly_coeffs.clone(),
            alpha: alpha(cfg)?,
        },
        GenKind::Halton => GeneratorSpec::Halton,
    })
}

/// Points from `--in` if given (except for `an_alpha`, which reads integers
/// there), else from the generator.
fn points(cfg: &RunConfig) -> Result<PointSet> {
    match &cfg.input {
        Some(path) if cfg.generator != GenKind::AnAlpha => read_point_set(path),
        _ => generator(cfg)?.generate(cfg.dim, cfg.n),
    }
}

fn generate(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<()> {
    let pts = generator(cfg)?.generate(cfg.dim, cfg.n)?;
    match cfg.format {
        Format::Csv => write_point_set(&pts, Some(&cfg.header_json()), out),
        Format::Json => emit_json(cfg, &pts, out),
    }
}

#[derive(Serialize)]
struct TrialSummary {
    #[serde(rename = "N")]
    n: usize,
    dim: usize,
    trials: usize,
    s_values: Vec<f64>,
    mean: Vec<f64>,
    variance: Vec<f64>,
    std_error: Vec<f64>,
    expectation: Vec<f64>,
}

fn paircorr(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<()> {
    let grid = SGrid::new(cfg.s_values.clone())?;
    if cfg.trials > 1 {
        let samples = pair_corr_trials(cfg.dim, cfg.n, &grid, cfg.trials, cfg.seed)?;
        let moments: Vec<MonteCarloMoments> = (0..grid.len())
            .map(|j| {
                let col: Vec<f64> = samples.iter().map(|row| row[j]).collect();
                MonteCarloMoments::from_samples(&col)
            })
            .collect();
        let summary = TrialSummary {
            n: cfg.n,
            dim: cfg.dim,
            trials: cfg.trials,
            s_values: grid.values().to_vec(),
            mean: moments.iter().map(|m| m.mean).collect(),
            variance: moments.iter().map(|m| m.variance).collect(),
            std_error: moments.iter().map(|m| m.standard_error()).collect(),
            expectation: grid
                .values()
                .iter()
                .map(|&s| expectation_formula(cfg.n, s, cfg.dim))
                .collect(),
        };
        return match cfg.format {
            Format::Json => emit_json(cfg, summary, out),
            Format::Csv => {
                csv_header(cfg, out)?;
                writeln!(out, "s,mean_F,variance_F,std_error,expectation")?;
                for j in 0..grid.len() {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        format_float(summary.s_values[j]),
                        format_float(summary.mean[j]),
                        format_float(summary.variance[j]),
                        format_float(summary.std_error[j]),
                        format_float(summary.expectation[j])
                    )?;
                }
                Ok(())
            }
        };
    }
    let pts = points(cfg)?;
    let res = pair_corr_celllist(&pts, &grid)?;
    match cfg.format {
        Format::Csv => {
            csv_header(cfg, out)?;
            res.write_csv(out)
        }
        Format::Json => emit_json(cfg, &res, out),
    }
}

fn energy(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<()> {
    let seq = make_integer_sequence(cfg.family, cfg.n, cfg.input.as_deref())?;
    let report = additive_energy(&seq, cfg.n)?;
    let summary = EnergySummary::new(&report, RegimeThresholds::default());
    match cfg.format {
        Format::Json => emit_json(cfg, &summary, out),
        Format::Csv => {
            csv_header(cfg, out)?;
            writeln!(out, "N,energy,normalized,regime")?;
            let regime = serde_json::to_value(summary.regime).expect("enum serializes");
            writeln!(
                out,
                "{},{},{},{}",
                summary.n,
                summary.energy,
                format_float(summary.normalized),
                regime.as_str().unwrap_or_default()
            )?;
            Ok(())
        }
    }
}

fn converge(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<()> {
    let grid = SGrid::new(cfg.s_values.clone())?;
    let schedule = default_n_schedule(cfg.n, cfg.gamma)?;
    let sweep = convergence_sweep(&generator(cfg)?, cfg.dim, &grid, &schedule)?;
    match cfg.format {
        Format::Csv => {
            csv_header(cfg, out)?;
            sweep.write_csv(out)
        }
        Format::Json => emit_json(cfg, &sweep, out),
    }
}

fn witness(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<()> {
    let alpha = alpha(cfg)?;
    let hits = simultaneous_approx_search(&alpha, cfg.qmax, cfg.rho)?;
    let best = best_approximation(&hits).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "no q <= {} with 0 < sqrt(q) max ||q alpha|| < {}",
            cfg.qmax, cfg.rho
        ))
    })?;
    let w = kronecker_witness(&alpha, best.q, best.theta, cfg.rho)?;
    emit_json(cfg, &w, out)
}

fn approx(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<()> {
    let hits = simultaneous_approx_search(&alpha(cfg)?, cfg.qmax, cfg.rho)?;
    match cfg.format {
        Format::Json => emit_json(cfg, &hits, out),
        Format::Csv => {
            csv_header(cfg, out)?;
            writeln!(out, "q,theta")?;
            for h in &hits {
                writeln!(out, "{},{}", h.q, format_float(h.theta))?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct DiscrepancyReport {
    #[serde(rename = "N")]
    n: usize,
    dim: usize,
    grid_k: usize,
    exact: bool,
    discrepancy: f64,
}

fn discrepancy(cfg: &RunConfig, out: &mut Vec<u8>) -> Result<()> {
    let pts = points(cfg)?;
    let report = DiscrepancyReport {
        n: pts.len(),
        dim: pts.dim(),
        grid_k: cfg.grid_k,
        exact: pts.dim() == 1,
        discrepancy: star_discrepancy_estimate(&pts, cfg.grid_k)?,
    };
    match cfg.format {
        Format::Json => emit_json(cfg, &report, out),
        Format::Csv => {
            csv_header(cfg, out)?;
            writeln!(out, "N,dim,grid_k,exact,discrepancy")?;
            writeln!(
                out,
                "{},{},{},{},{}",
                report.n,
                report.dim,
                report.grid_k,
                report.exact,
                format_float(report.discrepancy)
            )?;
            Ok(())
        }
    }
}
