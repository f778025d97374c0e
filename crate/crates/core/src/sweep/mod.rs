//! Parameter sweeps through the full preparation, simulation, tomography and measures pipeline.

mod config;
mod emit;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{
    default_noise, CircuitTemplate, OutputFormat, OutputSpec, Pipeline, SingleState, SweepConfig,
    SweepMode, DEFAULT_NOISE_TOML,
};
pub use emit::{emit, parse_csv, write_csv, write_json, CsvRecord, CSV_HEADER};

use crate::bds::{
    bds_density, probs_to_t, tetrahedron_grid, werner_line, BellProbabilities, TVector,
};
use crate::circuits::{build_werner_circuit, prepare_bds, Circuit, Encoder, Template};
use crate::error::{Error, Result};
use crate::measures::{report, MeasureReport};
use crate::simulator::output_state;
use crate::tomography::reconstruct;

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of row `index`; independent of scheduling.
pub fn row_seed(config_seed: u64, index: usize) -> u64 {
    splitmix64(config_seed ^ splitmix64(index as u64))
}

/// One swept state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub t: [f64; 3],
    pub p: [f64; 4],
    pub w: Option<f64>,
    pub template: CircuitTemplate,
    pub encoder: Option<Encoder>,
    pub cnot_cost: usize,
    pub fidelity: f64,
    pub measures: MeasureReport,
    pub seed: u64,
    #[serde(skip)]
    pub runtime: Duration,
}

#[derive(Clone, Copy, Debug)]
struct Point {
    p: BellProbabilities,
    t: TVector,
    w: Option<crate::bds::WernerParam>,
}

fn points(cfg: &SweepConfig) -> Result<Vec<Point>> {
    Ok(match cfg.mode {
        SweepMode::Tetrahedron => tetrahedron_grid(cfg.grid_steps)
            .into_iter()
            .map(|t| {
                Ok(Point {
                    p: crate::bds::t_to_probs(t)?,
                    t,
                    w: None,
                })
            })
            .collect::<Result<_>>()?,
        SweepMode::WernerLine => werner_line(cfg.werner_points)
            .into_iter()
            .map(|w| Point {
                p: w.probabilities(),
                t: w.t_vector(),
                w: Some(w),
            })
            .collect(),
        SweepMode::Single => {
            let s = cfg.state.ok_or_else(|| Error::config("state", "missing"))?;
            let p = s.probabilities()?;
            let w = match s {
                SingleState::W(w) => Some(w),
                _ => None,
            };
            vec![Point {
                p,
                t: w.map_or_else(|| probs_to_t(&p), |w| w.t_vector()),
                w,
            }]
        }
    })
}

fn circuit_for(cfg: &SweepConfig, pt: &Point) -> Result<Circuit> {
    match cfg.template.bds_template() {
        Some(t) => prepare_bds(&pt.p, cfg.encoder, t),
        None => {
            let w = pt
                .w
                .ok_or_else(|| Error::config("template", "werner-special needs a Werner state"))?;
            Ok(build_werner_circuit(w))
        }
    }
}

fn run_row(cfg: &SweepConfig, index: usize, pt: &Point) -> Result<SweepRow> {
    let start = Instant::now();
    let seed = row_seed(cfg.seed, index);
    let circuit = circuit_for(cfg, pt)?;
    let target = bds_density(&pt.p);
    let noise = cfg.noise.as_ref();
    let measured = match cfg.pipeline {
        Pipeline::Exact => output_state(&circuit, noise)?,
        Pipeline::ShotsTomography => reconstruct(&circuit, cfg.shots, seed, noise)?,
    };
    let measures = report(&measured, Some(&target))?;
    Ok(SweepRow {
        index,
        t: pt.t.as_array(),
        p: pt.p.as_array(),
        w: pt.w.map(|w| w.value()),
        template: cfg.template,
        encoder: cfg.template.bds_template().map(|_| cfg.encoder),
        cnot_cost: circuit.cnot_cost(),
        fidelity: measures.fidelity_vs_target.expect("target given"),
        measures,
        seed,
        runtime: start.elapsed(),
    })
}

/// Runs every state of the configured sweep; rows come back in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let pts = points(cfg)?;
    let work = || {
        pts.par_iter()
            .enumerate()
            .map(|(i, pt)| run_row(cfg, i, pt))
            .collect::<Result<Vec<_>>>()
    };
    if cfg.threads == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::config("threads", e.to_string()))?
            .install(work)
    }
}

/// Mean and sample standard deviation of the fidelity column.
pub fn fidelity_stats(rows: &[SweepRow]) -> (f64, f64) {
    let n = rows.len() as f64;
    if rows.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = rows.iter().map(|r| r.fidelity).sum::<f64>() / n;
    if rows.len() < 2 {
        return (mean, 0.0);
    }
    let var = rows.iter().map(|r| (r.fidelity - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Fidelity summary of one template/encoder combination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub template: CircuitTemplate,
    pub encoder: Option<Encoder>,
    pub mean_fidelity: f64,
    pub sd_fidelity: f64,
    pub points: usize,
}

/// Runs the four template × encoder combinations and the Werner circuit on
/// the Werner line of `base`.
pub fn compare_templates(base: &SweepConfig) -> Result<Vec<CompareRow>> {
    let mut combos: Vec<(CircuitTemplate, Option<Encoder>)> = Vec::new();
    for t in [Template::FourQubit, Template::TwoQubit] {
        for e in Encoder::ALL {
            combos.push((t.into(), Some(e)));
        }
    }
    combos.push((CircuitTemplate::WernerSpecial, None));
    combos
        .into_iter()
        .map(|(template, encoder)| {
            let cfg = SweepConfig {
                mode: SweepMode::WernerLine,
                template,
                encoder: encoder.unwrap_or(base.encoder),
                state: None,
                output: None,
                ..base.clone()
            };
            let rows = run_sweep(&cfg)?;
            let (mean_fidelity, sd_fidelity) = fidelity_stats(&rows);
            Ok(CompareRow {
                template,
                encoder,
                mean_fidelity,
                sd_fidelity,
                points: rows.len(),
            })
        })
        .collect()
}
