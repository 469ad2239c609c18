//! Two-phase user association.
//!
//! Phase 1 attaches every background UE to the own-operator BS with the
//! smallest pathloss and then flips a biased coin for its carrier. Phase 2
//! evaluates the reference UE on every own-operator (BS, carrier) pair and
//! keeps the one with the highest round-robin throughput
//! `BW / (1 + N) * log2(1 + SINR)`.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Uniform};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::antenna::{align_to_strongest_path, beamforming_gain, steering_vector, BeamVector};
use crate::channel::{rx_geometry, tx_geometry, ChannelRealization};
use crate::config::{Carrier, Licensing, PathlossRule, Regime, ScenarioConfig};
use crate::deployment::Deployment;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssociationError {
    #[error("serving link {bs:?} on {carrier} is in outage")]
    ServingOutage { bs: BsRef, carrier: Carrier },
}

/// A base station addressed by operator and index within that operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BsRef {
    pub operator: usize,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Serving {
    pub bs: usize,
    /// `None` until the carrier coin has been flipped.
    pub carrier: Option<Carrier>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociationTable {
    /// `load[m][i][c]`: UEs of operator `m` on carrier `c` of BS `i`.
    pub load: Vec<Vec<[u32; 2]>>,
    /// `serving[m][j]`, `None` for UEs in outage to every own BS.
    pub serving: Vec<Vec<Option<Serving>>>,
}

impl AssociationTable {
    pub fn load_of(&self, bs: BsRef, carrier: Carrier) -> u32 {
        self.load[bs.operator][bs.index][carrier.index()]
    }

    pub fn total_load(&self) -> u64 {
        self.load
            .iter()
            .flatten()
            .map(|l| u64::from(l[0]) + u64::from(l[1]))
            .sum()
    }

    pub fn associated_count(&self) -> usize {
        self.serving.iter().flatten().filter(|s| s.is_some()).count()
    }
}

/// Phase 1: min-pathloss BS per UE, lowest index on ties. Loads stay zero
/// until [`random_band_assignment`].
pub fn min_pathloss_association(
    deployment: &Deployment,
    channels: &ChannelRealization,
    rule: PathlossRule,
) -> AssociationTable {
    let load = deployment
        .base_stations
        .iter()
        .map(|bs| vec![[0u32; 2]; bs.len()])
        .collect();
    let serving = channels
        .background
        .iter()
        .map(|users| {
            users
                .iter()
                .map(|links| {
                    let mut best: Option<(usize, f64)> = None;
                    for (i, link) in links.iter().enumerate() {
                        let pl = match rule {
                            PathlossRule::Band28 => link.pathloss_db[0],
                            PathlossRule::Band73 => link.pathloss_db[1],
                            PathlossRule::Min => link.pathloss_db[0].min(link.pathloss_db[1]),
                        };
                        if pl.is_finite() && best.is_none_or(|(_, b)| pl < b) {
                            best = Some((i, pl));
                        }
                    }
                    best.map(|(bs, _)| Serving { bs, carrier: None })
                })
                .collect()
        })
        .collect();
    AssociationTable { load, serving }
}

/// Carrier coin per associated UE, in (operator, UE) order: 28 GHz with
/// probability `p28`. Loads are rebuilt from the assignments.
pub fn random_band_assignment<R: Rng + ?Sized>(
    mut table: AssociationTable,
    p28: f64,
    rng: &mut R,
) -> AssociationTable {
    for row in table.load.iter_mut().flatten() {
        *row = [0, 0];
    }
    for (m, users) in table.serving.iter_mut().enumerate() {
        for s in users.iter_mut().flatten() {
            let p: f64 = rng.random();
            let carrier = if p < p28 {
                Carrier::Ghz28
            } else {
                Carrier::Ghz73
            };
            s.carrier = Some(carrier);
            table.load[m][s.bs][carrier.index()] += 1;
        }
    }
    table
}

/// Access mode and per-operator usable bandwidth of both carriers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeSpec {
    pub modes: [Licensing; 2],
    /// Hz available to one operator.
    pub bandwidth: [f64; 2],
}

impl RegimeSpec {
    pub fn new(regime: Regime, config: &ScenarioConfig) -> Self {
        let modes = match regime {
            Regime::Hybrid => [config.bands[0].licensing, config.bands[1].licensing],
            Regime::Licensed => [Licensing::Exclusive; 2],
            Regime::Pooled => [Licensing::Pooled; 2],
        };
        let m = config.num_operators as f64;
        let bandwidth = [0, 1].map(|c| match modes[c] {
            Licensing::Exclusive => config.bands[c].total_bandwidth / m,
            Licensing::Pooled => config.bands[c].total_bandwidth,
        });
        RegimeSpec { modes, bandwidth }
    }

    pub fn mode(&self, carrier: Carrier) -> Licensing {
        self.modes[carrier.index()]
    }

    pub fn bandwidth(&self, carrier: Carrier) -> f64 {
        self.bandwidth[carrier.index()]
    }
}

/// Exclusive: the serving operator's other BSs. Pooled: every other BS of
/// every operator.
pub fn interferer_set(
    regime: &RegimeSpec,
    carrier: Carrier,
    serving: BsRef,
    deployment: &Deployment,
) -> Vec<BsRef> {
    let operators: Vec<usize> = match regime.mode(carrier) {
        Licensing::Exclusive => vec![serving.operator],
        Licensing::Pooled => (0..deployment.num_operators()).collect(),
    };
    operators
        .into_iter()
        .flat_map(|operator| {
            (0..deployment.base_stations[operator].len()).map(move |index| BsRef { operator, index })
        })
        .filter(|&bs| bs != serving)
        .collect()
}

/// `P_tx / PL * G` in mW; exactly 0 for an infinite pathloss.
pub fn received_power_mw(tx_power_dbm: f64, pathloss_db: f64, gain: f64) -> f64 {
    if pathloss_db.is_infinite() {
        return 0.0;
    }
    10f64.powf((tx_power_dbm - pathloss_db) / 10.0) * gain
}

/// `BW * N0 * NF` in mW.
pub fn noise_power_mw(bandwidth: f64, noise_psd_dbm_hz: f64, noise_figure_db: f64) -> f64 {
    bandwidth * 10f64.powf((noise_psd_dbm_hz + noise_figure_db) / 10.0)
}

pub fn sinr_from_powers(signal_mw: f64, interference_mw: f64, noise_mw: f64) -> f64 {
    signal_mw / (interference_mw + noise_mw)
}

/// Round-robin share of the carrier: `bw / (1 + n_loaded) * log2(1 + sinr)`.
pub fn throughput(bw: f64, n_loaded: u32, sinr: f64) -> f64 {
    bw / (1.0 + f64::from(n_loaded)) * (1.0 + sinr).log2()
}

/// Transmit beam of every BS on every carrier, pointed at one uniformly chosen
/// UE it serves there (bearing, zero elevation) or at a random direction when
/// it serves nobody. Drawn in (operator, BS, carrier) order.
pub fn steer_interferers<R: Rng + ?Sized>(
    config: &ScenarioConfig,
    deployment: &Deployment,
    table: &AssociationTable,
    rng: &mut R,
) -> Vec<Vec<[BeamVector; 2]>> {
    let geometries = [tx_geometry(&config.bands[0]), tx_geometry(&config.bands[1])];
    let azimuth = Uniform::new(0.0, std::f64::consts::TAU).expect("valid range");
    let elevation = Uniform::new_inclusive(-std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4)
        .expect("valid range");

    deployment
        .base_stations
        .iter()
        .enumerate()
        .map(|(m, stations)| {
            // victims[i][c]: UEs served by BS i on carrier c.
            let mut victims = vec![[Vec::new(), Vec::new()]; stations.len()];
            for (j, s) in table.serving[m].iter().enumerate() {
                if let Some(Serving {
                    bs,
                    carrier: Some(c),
                }) = s
                {
                    victims[*bs][c.index()].push(j);
                }
            }
            stations
                .iter()
                .zip(victims)
                .map(|(bs, victims)| {
                    [0, 1].map(|c| {
                        let (az, el) = if victims[c].is_empty() {
                            (azimuth.sample(rng), elevation.sample(rng))
                        } else {
                            let j = victims[c][rng.random_range(0..victims[c].len())];
                            (bs.bearing(&deployment.users[m][j]), 0.0)
                        };
                        steering_vector(&geometries[c], az, el)
                    })
                })
                .collect()
        })
        .collect()
}

/// Precomputed reference-UE view of one non-outage (BS, carrier) link.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePath {
    /// `P_tx / PL`, mW.
    pub rx_power_mw: f64,
    /// `H w_tx` with the BS's interfering transmit beam.
    pub interference_signature: DVector<Complex64>,
    /// Receive beam and matched gain, only for the reference operator's BSs.
    pub serving: Option<(BeamVector, f64)>,
}

/// Everything phase 2 needs about the reference UE, independent of the regime.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceEnvironment {
    /// `paths[m][i][c]`, `None` when the link is in outage.
    pub paths: Vec<Vec<[Option<ReferencePath>; 2]>>,
    pub reference_operator: usize,
    pub noise_psd_dbm_hz: f64,
    pub noise_figure_db: f64,
}

impl ReferenceEnvironment {
    pub fn new(
        config: &ScenarioConfig,
        deployment: &Deployment,
        channels: &ChannelRealization,
        beams: &[Vec<[BeamVector; 2]>],
    ) -> Self {
        let geoms = [0, 1].map(|c| (tx_geometry(&config.bands[c]), rx_geometry(&config.bands[c])));
        let paths = channels
            .reference
            .iter()
            .enumerate()
            .map(|(m, links)| {
                links
                    .iter()
                    .enumerate()
                    .map(|(i, link)| {
                        [0, 1].map(|c| {
                            let ch = &link.bands[c];
                            let path = ch.path.as_ref()?;
                            let serving = (m == deployment.reference_operator).then(|| {
                                let (w_tx, w_rx) =
                                    align_to_strongest_path(&path.clusters, &geoms[c].0, &geoms[c].1);
                                let gain = beamforming_gain(&path.matrix, &w_tx, &w_rx)
                                    .expect("beams sized from band config");
                                (w_rx, gain)
                            });
                            Some(ReferencePath {
                                rx_power_mw: received_power_mw(
                                    config.bands[c].tx_power,
                                    ch.pathloss_db,
                                    1.0,
                                ),
                                interference_signature: &path.matrix * &beams[m][i][c].0,
                                serving,
                            })
                        })
                    })
                    .collect()
            })
            .collect();
        ReferenceEnvironment {
            paths,
            reference_operator: deployment.reference_operator,
            noise_psd_dbm_hz: config.noise_psd,
            noise_figure_db: config.noise_figure,
        }
    }

    pub fn path(&self, bs: BsRef, carrier: Carrier) -> Option<&ReferencePath> {
        self.paths[bs.operator][bs.index][carrier.index()].as_ref()
    }
}

/// Instantaneous SINR of the reference UE served by `serving` on `carrier`:
/// aligned serving beams, misaligned interferer beams, outage interferers
/// contribute nothing.
pub fn sinr(
    env: &ReferenceEnvironment,
    serving: BsRef,
    carrier: Carrier,
    regime: &RegimeSpec,
    deployment: &Deployment,
) -> Result<f64, AssociationError> {
    let outage = AssociationError::ServingOutage { bs: serving, carrier };
    let path = env.path(serving, carrier).ok_or(outage.clone())?;
    let (w_rx, gain) = path.serving.as_ref().ok_or(outage)?;
    let signal = path.rx_power_mw * gain;
    let interference: f64 = interferer_set(regime, carrier, serving, deployment)
        .into_iter()
        .filter_map(|k| env.path(k, carrier))
        .map(|p| p.rx_power_mw * w_rx.0.dot(&p.interference_signature).norm_sqr())
        .sum();
    let noise = noise_power_mw(
        regime.bandwidth(carrier),
        env.noise_psd_dbm_hz,
        env.noise_figure_db,
    );
    Ok(sinr_from_powers(signal, interference, noise))
}

/// One (carrier, BS) option for the reference UE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub carrier: Carrier,
    pub bs: usize,
    pub sinr: f64,
    pub bandwidth: f64,
    /// Background UEs already on this cell-carrier.
    pub load: u32,
    pub rate: f64,
}

/// Every non-outage own-operator candidate, in (carrier, BS) order.
pub fn candidates(
    env: &ReferenceEnvironment,
    regime: &RegimeSpec,
    deployment: &Deployment,
    table: &AssociationTable,
) -> Vec<Candidate> {
    let operator = env.reference_operator;
    let mut out = Vec::new();
    for carrier in Carrier::ALL {
        for index in 0..deployment.base_stations[operator].len() {
            let bs = BsRef { operator, index };
            let Ok(sinr) = sinr(env, bs, carrier, regime, deployment) else {
                continue;
            };
            let bandwidth = regime.bandwidth(carrier);
            let load = table.load_of(bs, carrier);
            out.push(Candidate {
                carrier,
                bs: index,
                sinr,
                bandwidth,
                load,
                rate: throughput(bandwidth, load, sinr),
            });
        }
    }
    out
}

/// First candidate with strictly maximal rate; input order decides ties.
/// Zero-rate winners count as no assignment.
pub fn argmax_candidate(candidates: &[Candidate]) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for c in candidates {
        if best.is_none_or(|b| c.rate > b.rate) {
            best = Some(*c);
        }
    }
    best.filter(|b| b.rate > 0.0)
}

/// Throughput-maximizing (carrier, BS) for the reference UE, `None` when
/// every own-operator link is in outage.
pub fn best_carrier_bs(
    env: &ReferenceEnvironment,
    regime: &RegimeSpec,
    deployment: &Deployment,
    table: &AssociationTable,
) -> Option<Candidate> {
    argmax_candidate(&candidates(env, regime, deployment, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{BackgroundLink, LinkState};
    use crate::deployment::Point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid_deployment(operators: usize, per_operator: usize) -> Deployment {
        Deployment {
            area_side: 1000.0,
            base_stations: (0..operators)
                .map(|m| {
                    (0..per_operator)
                        .map(|i| Point {
                            x: 100.0 * i as f64,
                            y: 10.0 * m as f64,
                        })
                        .collect()
                })
                .collect(),
            users: vec![Vec::new(); operators],
            reference_ue: Point { x: 500.0, y: 500.0 },
            reference_operator: 0,
        }
    }

    fn bg(pl: f64) -> BackgroundLink {
        if pl.is_finite() {
            BackgroundLink {
                state: LinkState::Los,
                pathloss_db: [pl, pl + 5.0],
            }
        } else {
            BackgroundLink {
                state: LinkState::Outage,
                pathloss_db: [f64::INFINITY; 2],
            }
        }
    }

    fn realization(background: Vec<Vec<Vec<BackgroundLink>>>) -> ChannelRealization {
        ChannelRealization {
            background,
            reference: Vec::new(),
        }
    }

    #[test]
    fn single_bs_takes_everyone_not_in_outage() {
        let dep = grid_deployment(1, 1);
        let ch = realization(vec![vec![vec![bg(90.0)], vec![bg(120.0)], vec![bg(f64::INFINITY)]]]);
        let t = min_pathloss_association(&dep, &ch, PathlossRule::Band28);
        assert_eq!(t.serving[0][0], Some(Serving { bs: 0, carrier: None }));
        assert_eq!(t.serving[0][1], Some(Serving { bs: 0, carrier: None }));
        assert_eq!(t.serving[0][2], None);
        let t = random_band_assignment(t, 0.5, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(t.total_load(), 2);
        assert_eq!(t.associated_count(), 2);
    }

    #[test]
    fn pathloss_tie_goes_to_lowest_index() {
        let dep = grid_deployment(1, 3);
        let ch = realization(vec![vec![vec![bg(f64::INFINITY), bg(100.0), bg(100.0)]]]);
        let t = min_pathloss_association(&dep, &ch, PathlossRule::Band28);
        assert_eq!(t.serving[0][0].unwrap().bs, 1);
    }

    #[test]
    fn pathloss_rule_switches_band() {
        let dep = grid_deployment(1, 2);
        let a = BackgroundLink {
            state: LinkState::Los,
            pathloss_db: [100.0, 130.0],
        };
        let b = BackgroundLink {
            state: LinkState::Nlos,
            pathloss_db: [105.0, 110.0],
        };
        let ch = realization(vec![vec![vec![a, b]]]);
        let pick = |rule| min_pathloss_association(&dep, &ch, rule).serving[0][0].unwrap().bs;
        assert_eq!(pick(PathlossRule::Band28), 0);
        assert_eq!(pick(PathlossRule::Band73), 1);
        assert_eq!(pick(PathlossRule::Min), 0);
    }

    #[test]
    fn operator_without_bs_leaves_users_unassociated() {
        let dep = grid_deployment(1, 0);
        let ch = realization(vec![vec![vec![], vec![]]]);
        let t = min_pathloss_association(&dep, &ch, PathlossRule::Band28);
        assert_eq!(t.serving[0], vec![None, None]);
    }

    #[test]
    fn p28_extremes() {
        let dep = grid_deployment(1, 2);
        let ch = realization(vec![(0..50).map(|j| vec![bg(90.0 + (j % 2) as f64), bg(91.0)]).collect()]);
        let t = min_pathloss_association(&dep, &ch, PathlossRule::Band28);
        let all28 = random_band_assignment(t.clone(), 1.0, &mut ChaCha8Rng::seed_from_u64(2));
        assert!(all28.serving[0].iter().all(|s| s.unwrap().carrier == Some(Carrier::Ghz28)));
        let all73 = random_band_assignment(t, 0.0, &mut ChaCha8Rng::seed_from_u64(2));
        assert!(all73.serving[0].iter().all(|s| s.unwrap().carrier == Some(Carrier::Ghz73)));
        assert_eq!(all73.load[0].iter().map(|l| l[1]).sum::<u32>(), 50);
    }

    #[test]
    fn load_columns_match_carrier_counts() {
        let dep = grid_deployment(2, 3);
        let ch = realization(
            (0..2)
                .map(|m| {
                    (0..40)
                        .map(|j| (0..3).map(|i| bg(80.0 + ((i + j + m) % 3) as f64)).collect())
                        .collect()
                })
                .collect(),
        );
        let t = min_pathloss_association(&dep, &ch, PathlossRule::Band28);
        let t = random_band_assignment(t, 0.5, &mut ChaCha8Rng::seed_from_u64(9));
        for c in Carrier::ALL {
            let from_load: u32 = t.load.iter().flatten().map(|l| l[c.index()]).sum();
            let from_serving = t
                .serving
                .iter()
                .flatten()
                .filter(|s| s.unwrap().carrier == Some(c))
                .count() as u32;
            assert_eq!(from_load, from_serving);
        }
    }

    #[test]
    fn regime_bandwidths() {
        let cfg = ScenarioConfig::default();
        let h = RegimeSpec::new(Regime::Hybrid, &cfg);
        assert_eq!(h.bandwidth, [250e6, 1e9]);
        assert_eq!(h.modes, [Licensing::Exclusive, Licensing::Pooled]);
        assert_eq!(RegimeSpec::new(Regime::Licensed, &cfg).bandwidth, [250e6; 2]);
        assert_eq!(RegimeSpec::new(Regime::Pooled, &cfg).bandwidth, [1e9; 2]);
    }

    #[test]
    fn interferer_counts() {
        let cfg = ScenarioConfig::default();
        let dep = grid_deployment(4, 10);
        let serving = BsRef {
            operator: 0,
            index: 3,
        };
        let lic = RegimeSpec::new(Regime::Licensed, &cfg);
        let pool = RegimeSpec::new(Regime::Pooled, &cfg);
        let l = interferer_set(&lic, Carrier::Ghz28, serving, &dep);
        assert_eq!(l.len(), 9);
        assert!(l.iter().all(|b| b.operator == 0 && b.index != 3));
        assert_eq!(interferer_set(&pool, Carrier::Ghz73, serving, &dep).len(), 39);

        let single = ScenarioConfig {
            num_operators: 1,
            ..ScenarioConfig::default()
        };
        let dep1 = grid_deployment(1, 10);
        assert_eq!(
            interferer_set(&RegimeSpec::new(Regime::Licensed, &single), Carrier::Ghz28, serving, &dep1),
            interferer_set(&RegimeSpec::new(Regime::Pooled, &single), Carrier::Ghz28, serving, &dep1),
        );
    }

    #[test]
    fn hand_link_budget() {
        let signal = received_power_mw(30.0, 101.4, 1.0);
        let noise = noise_power_mw(250e6, -174.0, 7.0);
        let s = sinr_from_powers(signal, 0.0, noise);
        let expected_db = 30.0 - 101.4 + 167.0 - 10.0 * 250e6f64.log10();
        assert!((10.0 * s.log10() - expected_db).abs() < 1e-9);
        assert!((s - 14.52).abs() < 0.01);
    }

    #[test]
    fn sinr_limits_and_homogeneity() {
        assert!(sinr_from_powers(1.0, 1e300, 1e-9) < 1e-299);
        let a = sinr_from_powers(received_power_mw(30.0, 100.0, 1.0), received_power_mw(30.0, 110.0, 3.0), 0.0);
        let b = sinr_from_powers(received_power_mw(33.0, 100.0, 1.0), received_power_mw(33.0, 110.0, 3.0), 0.0);
        assert!((a / b - 1.0).abs() < 1e-12);
        assert_eq!(received_power_mw(30.0, f64::INFINITY, 100.0), 0.0);
    }

    #[test]
    fn throughput_examples() {
        assert_eq!(throughput(250e6, 0, 15.0), 1e9);
        assert_eq!(throughput(250e6, 4, 0.0), 0.0);
        let one = throughput(1e9, 1, 7.0);
        let three = throughput(1e9, 3, 7.0);
        assert!((three * 2.0 - one).abs() < 1e-6);
    }

    fn cand(carrier: Carrier, bs: usize, rate: f64) -> Candidate {
        Candidate {
            carrier,
            bs,
            sinr: 1.0,
            bandwidth: 1.0,
            load: 0,
            rate,
        }
    }

    #[test]
    fn argmax_prefers_earlier_on_ties() {
        let c = [
            cand(Carrier::Ghz28, 0, 5.0),
            cand(Carrier::Ghz28, 1, 7.0),
            cand(Carrier::Ghz73, 0, 7.0),
        ];
        let best = argmax_candidate(&c).unwrap();
        assert_eq!((best.carrier, best.bs), (Carrier::Ghz28, 1));
        assert_eq!(argmax_candidate(&[]), None);
        assert_eq!(argmax_candidate(&[cand(Carrier::Ghz28, 0, 0.0)]), None);
    }

    #[test]
    fn dominant_carrier_wins() {
        let c = [cand(Carrier::Ghz28, 0, 1e3), cand(Carrier::Ghz73, 0, 1e9)];
        assert_eq!(argmax_candidate(&c).unwrap().carrier, Carrier::Ghz73);
    }

    proptest::proptest! {
        #[test]
        fn argmax_is_scale_invariant(rates in proptest::collection::vec(0.0f64..1e9, 1..20), k in 1e-3f64..1e3) {
            let c: Vec<_> = rates.iter().enumerate().map(|(i, &r)| cand(Carrier::ALL[i % 2], i, r)).collect();
            let scaled: Vec<_> = c.iter().map(|x| Candidate { rate: x.rate * k, ..*x }).collect();
            let a = argmax_candidate(&c).map(|x| (x.carrier, x.bs));
            let b = argmax_candidate(&scaled).map(|x| (x.carrier, x.bs));
            proptest::prop_assert_eq!(a, b);
        }

        #[test]
        fn raising_the_winner_keeps_it(rates in proptest::collection::vec(1.0f64..1e9, 1..20), boost in 1.0f64..10.0) {
            let mut c: Vec<_> = rates.iter().enumerate().map(|(i, &r)| cand(Carrier::ALL[i % 2], i, r)).collect();
            let best = argmax_candidate(&c).unwrap();
            for x in c.iter_mut().filter(|x| x.bs == best.bs) {
                x.rate *= boost;
            }
            proptest::prop_assert_eq!(argmax_candidate(&c).unwrap().bs, best.bs);
        }
    }
}
