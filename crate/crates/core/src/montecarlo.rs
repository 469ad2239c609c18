//! Seeded iterations, density/regime/case sweeps and percentile reduction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::antenna::BeamVector;
use crate::association::{
    best_carrier_bs, min_pathloss_association, random_band_assignment, steer_interferers,
    AssociationTable, ReferenceEnvironment, RegimeSpec,
};
use crate::channel::ChannelRealization;
use crate::config::{AntennaCase, Carrier, Regime, ScenarioConfig};
use crate::deployment::{build_deployment, Deployment};
use crate::rng::{iteration_key, stage_rng, Stage};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("percentile of an empty sample")]
    Empty,
    #[error("quantile {0} outside [0, 1]")]
    Quantile(String),
}

/// Linear interpolation between order statistics at rank `q (n - 1)`.
pub fn percentile(samples: &[f64], q: f64) -> Result<f64, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::Empty);
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(StatsError::Quantile(q.to_string()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(percentile_sorted(&sorted, q))
}

fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    let rank = q * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

/// Reference-UE outcome of one iteration under one regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationResult {
    /// bit/s.
    pub rate: f64,
    pub carrier: Option<Carrier>,
    pub bs: Option<usize>,
    /// Linear; 0 without an assignment.
    pub sinr: f64,
    /// Hz of the chosen carrier, 0 without an assignment.
    pub bandwidth: f64,
    /// Background load of the chosen cell-carrier.
    pub load: u32,
    pub regime: Regime,
    pub density: f64,
    pub seed: u64,
    pub iteration: u64,
}

impl IterationResult {
    pub fn sinr_db(&self) -> f64 {
        10.0 * self.sinr.log10()
    }
}

/// One realized network, shared by every regime evaluated on it.
#[derive(Debug, Clone)]
pub struct Scene {
    pub deployment: Deployment,
    pub channels: ChannelRealization,
    pub table: AssociationTable,
    /// `beams[m][i][c]`: transmit beam of BS `i` of operator `m` on carrier `c`.
    pub beams: Vec<Vec<[BeamVector; 2]>>,
    pub environment: ReferenceEnvironment,
    pub density: f64,
    pub seed: u64,
    pub iteration: u64,
}

impl Scene {
    pub fn build(config: &ScenarioConfig, iteration: u64) -> Self {
        let key = iteration_key(config.seed, config.bs_density, iteration);
        let deployment = build_deployment(config, &mut stage_rng(key, Stage::Deployment));
        let channels = ChannelRealization::sample(
            config,
            &deployment,
            &mut stage_rng(key, Stage::BackgroundLinks),
            &mut stage_rng(key, Stage::ReferenceLinks),
        );
        let table = min_pathloss_association(&deployment, &channels, config.pathloss_rule);
        let table = random_band_assignment(table, config.p28, &mut stage_rng(key, Stage::BandAssignment));
        let beams = steer_interferers(
            config,
            &deployment,
            &table,
            &mut stage_rng(key, Stage::InterfererBeams),
        );
        let environment = ReferenceEnvironment::new(config, &deployment, &channels, &beams);
        Scene {
            deployment,
            channels,
            table,
            beams,
            environment,
            density: config.bs_density,
            seed: config.seed,
            iteration,
        }
    }

    pub fn evaluate(&self, config: &ScenarioConfig, regime: Regime) -> IterationResult {
        let spec = RegimeSpec::new(regime, config);
        let best = best_carrier_bs(&self.environment, &spec, &self.deployment, &self.table);
        IterationResult {
            rate: best.map_or(0.0, |b| b.rate),
            carrier: best.map(|b| b.carrier),
            bs: best.map(|b| b.bs),
            sinr: best.map_or(0.0, |b| b.sinr),
            bandwidth: best.map_or(0.0, |b| b.bandwidth),
            load: best.map_or(0, |b| b.load),
            regime,
            density: self.density,
            seed: self.seed,
            iteration: self.iteration,
        }
    }
}

/// Full pipeline for one iteration; a pure function of its arguments.
pub fn run_iteration(config: &ScenarioConfig, regime: Regime, iteration: u64) -> IterationResult {
    Scene::build(config, iteration).evaluate(config, regime)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub density: f64,
    pub regime: Regime,
    pub case: AntennaCase,
    pub samples: usize,
    pub p5: f64,
    pub p50: f64,
    pub mean: f64,
    pub seed: u64,
}

impl CellStats {
    pub fn from_results(
        density: f64,
        regime: Regime,
        case: AntennaCase,
        seed: u64,
        results: &[IterationResult],
    ) -> Result<Self, StatsError> {
        let mut rates: Vec<f64> = results.iter().map(|r| r.rate).collect();
        if rates.is_empty() {
            return Err(StatsError::Empty);
        }
        rates.sort_by(f64::total_cmp);
        Ok(CellStats {
            density,
            regime,
            case,
            samples: rates.len(),
            p5: percentile_sorted(&rates, 0.05),
            p50: percentile_sorted(&rates, 0.5),
            mean: rates.iter().sum::<f64>() / rates.len() as f64,
            seed,
        })
    }
}

/// Per-iteration samples of one (density, regime, case) cell, in iteration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSamples {
    pub density: f64,
    pub regime: Regime,
    pub case: AntennaCase,
    pub results: Vec<IterationResult>,
}

impl CellSamples {
    pub fn rates(&self) -> Vec<f64> {
        self.results.iter().map(|r| r.rate).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignStats {
    pub seed: u64,
    pub rows: Vec<CellStats>,
}

impl CampaignStats {
    pub fn get(&self, density: f64, regime: Regime, case: AntennaCase) -> Option<&CellStats> {
        self.rows
            .iter()
            .find(|r| r.density == density && r.regime == regime && r.case == case)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub stats: CampaignStats,
    pub samples: Vec<CellSamples>,
}

impl Campaign {
    pub fn samples_for(&self, density: f64, regime: Regime, case: AntennaCase) -> Option<&CellSamples> {
        self.samples
            .iter()
            .find(|s| s.density == density && s.regime == regime && s.case == case)
    }
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("campaign grid is empty (densities, regimes and cases must be non-empty)")]
    EmptyGrid,
    #[error("config.iterations must be >= 1")]
    NoIterations,
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Runs `config.iterations` iterations for every (density, case) and evaluates
/// every regime on the same scene. `jobs == 1` runs serially on the calling
/// thread, `0` uses every CPU. Rows come out in (density, case, regime) grid order.
pub fn run_campaign(
    config: &ScenarioConfig,
    densities: &[f64],
    regimes: &[Regime],
    cases: &[AntennaCase],
    jobs: usize,
) -> Result<Campaign, CampaignError> {
    if densities.is_empty() || regimes.is_empty() || cases.is_empty() {
        return Err(CampaignError::EmptyGrid);
    }
    if config.iterations == 0 {
        return Err(CampaignError::NoIterations);
    }

    let mut samples = Vec::new();
    let mut rows = Vec::new();
    for &density in densities {
        for &case in cases {
            let cell_config = config.clone().with_case(case).with_bs_density(density);
            let per_iteration = run_cell(&cell_config, regimes, jobs)?;
            for (r, &regime) in regimes.iter().enumerate() {
                let results: Vec<IterationResult> = per_iteration.iter().map(|it| it[r]).collect();
                rows.push(
                    CellStats::from_results(density, regime, case, config.seed, &results)
                        .expect("iterations >= 1"),
                );
                samples.push(CellSamples {
                    density,
                    regime,
                    case,
                    results,
                });
            }
        }
    }
    Ok(Campaign {
        stats: CampaignStats {
            seed: config.seed,
            rows,
        },
        samples,
    })
}

fn run_cell(
    config: &ScenarioConfig,
    regimes: &[Regime],
    jobs: usize,
) -> Result<Vec<Vec<IterationResult>>, CampaignError> {
    let one = |i: u64| {
        let scene = Scene::build(config, i);
        regimes
            .iter()
            .map(|&regime| scene.evaluate(config, regime))
            .collect::<Vec<_>>()
    };
    let n = config.iterations as u64;
    if jobs == 1 {
        return Ok((0..n).map(one).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(|| (0..n).into_par_iter().map(one).collect()))
}
