//! Per-link propagation: blockage state, long-term pathloss and the
//! cluster/sub-path channel matrix.
//!
//! The blockage state of a (BS, UE) pair is drawn once and shared by both
//! carriers. Shadowing and the cluster structure are drawn per carrier.
//! Small-scale fading is a static snapshot: every sub-path gain is
//! `sqrt(P) * exp(j phase)` with an independent uniform phase.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::antenna::{steering_vector, CMatrix, UpaGeometry};
use crate::config::{BandConfig, BlockageParams, ScenarioConfig};
use crate::deployment::Deployment;

/// Distances below this are clamped before evaluating the log-distance law.
pub const MIN_DISTANCE_M: f64 = 1.0;

/// Sub-paths per cluster are uniform on `1..=MAX_SUBPATHS`.
pub const MAX_SUBPATHS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkState {
    Los,
    Nlos,
    Outage,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("pathloss is undefined for a link in outage")]
    Outage,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateProbabilities {
    pub p_out: f64,
    pub p_los: f64,
    pub p_nlos: f64,
}

pub fn state_probabilities(d: f64, params: &BlockageParams) -> StateProbabilities {
    let p_out = (1.0 - (-params.a_out * d + params.b_out).exp()).max(0.0);
    let p_los = (1.0 - p_out) * (-params.a_los * d).exp();
    StateProbabilities {
        p_out,
        p_los,
        p_nlos: 1.0 - p_out - p_los,
    }
}

/// One categorical draw; callers reuse the result for both carriers.
pub fn draw_link_state<R: Rng + ?Sized>(d: f64, rng: &mut R, params: &BlockageParams) -> LinkState {
    let p = state_probabilities(d, params);
    let u: f64 = rng.random();
    if u < p.p_out {
        LinkState::Outage
    } else if u < p.p_out + p.p_los {
        LinkState::Los
    } else {
        LinkState::Nlos
    }
}

/// Deterministic part `alpha + beta * 10 log10(d)`.
pub fn mean_pathloss_db(d: f64, state: LinkState, band: &BandConfig) -> Result<f64, ChannelError> {
    let (alpha, beta, _) = coefficients(state, band)?;
    Ok(alpha + beta * 10.0 * d.max(MIN_DISTANCE_M).log10())
}

/// Pathloss including log-normal shadowing.
pub fn pathloss_db<R: Rng + ?Sized>(
    d: f64,
    state: LinkState,
    band: &BandConfig,
    rng: &mut R,
) -> Result<f64, ChannelError> {
    let (_, _, sigma) = coefficients(state, band)?;
    let xi: f64 = rng.sample(StandardNormal);
    Ok(mean_pathloss_db(d, state, band)? + sigma * xi)
}

fn coefficients(state: LinkState, band: &BandConfig) -> Result<(f64, f64, f64), ChannelError> {
    let p = &band.pathloss;
    match state {
        LinkState::Los => Ok((p.alpha_los, p.beta_los, p.sigma_los)),
        LinkState::Nlos => Ok((p.alpha_nlos, p.beta_nlos, p.sigma_nlos)),
        LinkState::Outage => Err(ChannelError::Outage),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubPath {
    pub power_fraction: f64,
    pub phase: f64,
    pub aoa_az: f64,
    pub aoa_el: f64,
    pub aod_az: f64,
    pub aod_el: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub paths: Vec<SubPath>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    pub clusters: Vec<Cluster>,
}

impl ClusterSet {
    pub fn paths(&self) -> impl Iterator<Item = &SubPath> {
        self.clusters.iter().flat_map(|c| c.paths.iter())
    }

    pub fn total_power(&self) -> f64 {
        self.paths().map(|p| p.power_fraction).sum()
    }

    /// Sub-path with the largest power; the first one wins ties.
    pub fn strongest_path(&self) -> Option<&SubPath> {
        self.paths().fold(None, |best: Option<&SubPath>, p| match best {
            Some(b) if b.power_fraction >= p.power_fraction => Some(b),
            _ => Some(p),
        })
    }
}

/// Draws cluster count, sub-path counts, normalized power spread and angles.
pub fn sample_clusters<R: Rng + ?Sized>(band: &BandConfig, rng: &mut R) -> ClusterSet {
    let poisson = Poisson::new(band.cluster_mean).expect("cluster_mean validated > 0");
    let k = (poisson.sample(rng) as usize).max(1);
    let shadow = Normal::new(0.0, band.zeta).expect("zeta validated >= 0");
    let spread = band.angle_spread_deg.to_radians();

    let mut clusters = Vec::with_capacity(k);
    let mut total = 0.0;
    for _ in 0..k {
        let subpaths = rng.random_range(1..=MAX_SUBPATHS);
        // (0, 1] keeps U^(r_tau - 1) finite for r_tau < 1.
        let u: f64 = 1.0 - rng.random::<f64>();
        let z: f64 = shadow.sample(rng);
        let centre_aoa_az = rng.random_range(0.0..2.0 * PI);
        let centre_aoa_el = rng.random_range(-PI / 4.0..=PI / 4.0);
        let centre_aod_az = rng.random_range(0.0..2.0 * PI);
        let centre_aod_el = rng.random_range(-PI / 4.0..=PI / 4.0);
        let cluster_scale = u.powf(band.r_tau - 1.0) / subpaths as f64;

        let mut paths = Vec::with_capacity(subpaths);
        for _ in 0..subpaths {
            let v: f64 = rng.random_range(0.0..=0.6);
            let raw = cluster_scale * 10f64.powf(-0.1 * z + v);
            total += raw;
            let mut offset = || spread * rng.sample::<f64, _>(StandardNormal);
            let aoa_az = centre_aoa_az + offset();
            let aoa_el = centre_aoa_el + offset();
            let aod_az = centre_aod_az + offset();
            let aod_el = centre_aod_el + offset();
            paths.push(SubPath {
                power_fraction: raw,
                phase: rng.random_range(0.0..2.0 * PI),
                aoa_az,
                aoa_el,
                aod_az,
                aod_el,
            });
        }
        clusters.push(Cluster { paths });
    }

    for p in clusters.iter_mut().flat_map(|c| c.paths.iter_mut()) {
        p.power_fraction /= total;
    }
    ClusterSet { clusters }
}

/// `H = sqrt(n_rx n_tx) * Σ sqrt(P) e^{j phase} u_rx(aoa) u_tx(aod)^H` with
/// unit-norm array responses, so a single aligned path of power 1 yields the
/// full array gain `n_tx n_rx`.
pub fn channel_matrix(clusters: &ClusterSet, band: &BandConfig) -> CMatrix {
    let tx = tx_geometry(band);
    let rx = rx_geometry(band);
    let scale = ((band.n_rx * band.n_tx) as f64).sqrt();
    let mut h = CMatrix::zeros(band.n_rx, band.n_tx);
    for p in clusters.paths() {
        let g = Complex64::from_polar(scale * p.power_fraction.sqrt(), p.phase);
        let u_rx = steering_vector(&rx, p.aoa_az, p.aoa_el);
        let u_tx = steering_vector(&tx, p.aod_az, p.aod_el);
        let left = u_rx.0 * g;
        h.gerc(Complex64::new(1.0, 0.0), &left, &u_tx.0, Complex64::new(1.0, 0.0));
    }
    h
}

pub fn tx_geometry(band: &BandConfig) -> UpaGeometry {
    UpaGeometry::for_elements(band.n_tx, band.element_spacing).expect("n_tx validated")
}

pub fn rx_geometry(band: &BandConfig) -> UpaGeometry {
    UpaGeometry::for_elements(band.n_rx, band.element_spacing).expect("n_rx validated")
}

/// Small-scale part of a non-outage link.
#[derive(Debug, Clone, PartialEq)]
pub struct PathChannel {
    pub clusters: ClusterSet,
    pub matrix: CMatrix,
}

/// One (BS, UE, carrier) link. Outage links carry `pathloss_db = +inf` and no
/// small-scale channel.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkChannel {
    pub state: LinkState,
    pub pathloss_db: f64,
    pub path: Option<PathChannel>,
}

impl LinkChannel {
    pub fn outage() -> Self {
        LinkChannel {
            state: LinkState::Outage,
            pathloss_db: f64::INFINITY,
            path: None,
        }
    }

    pub fn is_outage(&self) -> bool {
        self.state == LinkState::Outage
    }

    /// Draws shadowing, clusters and builds the matrix for an already drawn state.
    pub fn sample<R: Rng + ?Sized>(d: f64, state: LinkState, band: &BandConfig, rng: &mut R) -> Self {
        match pathloss_db(d, state, band, rng) {
            Err(ChannelError::Outage) => LinkChannel::outage(),
            Ok(pathloss_db) => {
                let clusters = sample_clusters(band, rng);
                let matrix = channel_matrix(&clusters, band);
                LinkChannel {
                    state,
                    pathloss_db,
                    path: Some(PathChannel { clusters, matrix }),
                }
            }
        }
    }
}

/// Background UE to own-operator BS link: only what phase-1 association needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundLink {
    pub state: LinkState,
    /// Per carrier, `+inf` in outage.
    pub pathloss_db: [f64; 2],
}

/// BS to reference UE link on both carriers, sharing one blockage state.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceLink {
    pub distance: f64,
    pub state: LinkState,
    pub bands: [LinkChannel; 2],
}

/// Every link of one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `background[m][j][i]`: UE `j` of operator `m` to BS `i` of the same operator.
    pub background: Vec<Vec<Vec<BackgroundLink>>>,
    /// `reference[m][i]`: BS `i` of operator `m` to the reference UE, for every operator.
    pub reference: Vec<Vec<ReferenceLink>>,
}

impl ChannelRealization {
    /// Background links are drawn from `background_rng` in (operator, UE, BS)
    /// order, reference links from `reference_rng` in (operator, BS) order.
    pub fn sample<R: Rng + ?Sized, S: Rng + ?Sized>(
        config: &ScenarioConfig,
        deployment: &Deployment,
        background_rng: &mut R,
        reference_rng: &mut S,
    ) -> Self {
        let blockage = &config.blockage;
        let background = deployment
            .users
            .iter()
            .zip(&deployment.base_stations)
            .map(|(users, stations)| {
                users
                    .iter()
                    .map(|ue| {
                        stations
                            .iter()
                            .map(|bs| {
                                let d = ue.distance(bs);
                                let state = draw_link_state(d, background_rng, blockage);
                                let mut pathloss_db = [f64::INFINITY; 2];
                                if state != LinkState::Outage {
                                    for (pl, band) in pathloss_db.iter_mut().zip(&config.bands) {
                                        *pl = pathloss_db_or_inf(d, state, band, background_rng);
                                    }
                                }
                                BackgroundLink { state, pathloss_db }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let target = deployment.reference_ue;
        let reference = deployment
            .base_stations
            .iter()
            .map(|stations| {
                stations
                    .iter()
                    .map(|bs| {
                        let distance = bs.distance(&target);
                        let state = draw_link_state(distance, reference_rng, blockage);
                        let bands = [
                            LinkChannel::sample(distance, state, &config.bands[0], reference_rng),
                            LinkChannel::sample(distance, state, &config.bands[1], reference_rng),
                        ];
                        ReferenceLink {
                            distance,
                            state,
                            bands,
                        }
                    })
                    .collect()
            })
            .collect();

        ChannelRealization {
            background,
            reference,
        }
    }
}

fn pathloss_db_or_inf<R: Rng + ?Sized>(d: f64, state: LinkState, band: &BandConfig, rng: &mut R) -> f64 {
    pathloss_db(d, state, band, rng).unwrap_or(f64::INFINITY)
}
