//! Scenario parameters, the `key = value` config file format and validation.
//!
//! Every runtime knob of the simulator lives in [`ScenarioConfig`]. Files are
//! flat text, one `dotted.key = value` per line, `#` starts a comment. Keys
//! that are absent take the defaults documented in the README key table.
//!
//! The pathloss, cluster and angular-spread defaults below come from the
//! published dense-urban 28/73 GHz measurement model, not from the hybrid
//! access study itself; every one of them can be overridden.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Spectrum access mode of one band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Licensing {
    /// Each operator owns an orthogonal `1/M` slice of the band.
    Exclusive,
    /// All operators transmit over the whole band.
    Pooled,
}

impl Licensing {
    pub fn as_str(self) -> &'static str {
        match self {
            Licensing::Exclusive => "exclusive",
            Licensing::Pooled => "pooled",
        }
    }
}

impl FromStr for Licensing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exclusive" | "licensed" => Ok(Licensing::Exclusive),
            "pooled" | "unlicensed" => Ok(Licensing::Pooled),
            other => Err(format!("expected exclusive|pooled, got `{other}`")),
        }
    }
}

/// One of the two mmWave carriers every base station supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Carrier {
    #[serde(rename = "28ghz")]
    Ghz28,
    #[serde(rename = "73ghz")]
    Ghz73,
}

impl Carrier {
    /// Both carriers in ascending frequency order.
    pub const ALL: [Carrier; 2] = [Carrier::Ghz28, Carrier::Ghz73];

    pub fn index(self) -> usize {
        match self {
            Carrier::Ghz28 => 0,
            Carrier::Ghz73 => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Carrier::Ghz28 => "28ghz",
            Carrier::Ghz73 => "73ghz",
        }
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Licensing regime compared in a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Per-band modes as configured (exclusive 28 GHz, pooled 73 GHz by default).
    Hybrid,
    /// Exclusive access on both carriers.
    Licensed,
    /// Pooled access on both carriers.
    Pooled,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Hybrid, Regime::Licensed, Regime::Pooled];

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Hybrid => "hybrid",
            Regime::Licensed => "licensed",
            Regime::Pooled => "pooled",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hybrid" => Ok(Regime::Hybrid),
            "licensed" => Ok(Regime::Licensed),
            "pooled" => Ok(Regime::Pooled),
            other => Err(format!("expected hybrid|licensed|pooled, got `{other}`")),
        }
    }
}

/// Antenna configuration of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AntennaCase {
    /// 64 BS / 16 UE elements on both carriers.
    #[serde(rename = "i")]
    I,
    /// 73 GHz upgraded to 256 BS / 64 UE elements.
    #[serde(rename = "ii")]
    II,
    /// Antenna counts exactly as written in the band sections.
    #[serde(rename = "custom")]
    Custom,
}

impl AntennaCase {
    pub fn as_str(self) -> &'static str {
        match self {
            AntennaCase::I => "i",
            AntennaCase::II => "ii",
            AntennaCase::Custom => "custom",
        }
    }

    /// `(n_tx, n_rx)` per carrier, or `None` for [`AntennaCase::Custom`].
    pub fn antenna_counts(self) -> Option<[(usize, usize); 2]> {
        match self {
            AntennaCase::I => Some([(64, 16), (64, 16)]),
            AntennaCase::II => Some([(64, 16), (256, 64)]),
            AntennaCase::Custom => None,
        }
    }
}

impl fmt::Display for AntennaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AntennaCase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "i" | "1" | "case-i" => Ok(AntennaCase::I),
            "ii" | "2" | "case-ii" => Ok(AntennaCase::II),
            "custom" => Ok(AntennaCase::Custom),
            other => Err(format!("expected i|ii|custom, got `{other}`")),
        }
    }
}

/// Band used by the phase-1 minimum-pathloss comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathlossRule {
    Band28,
    Band73,
    /// Smaller of the two per-band realizations.
    Min,
}

impl PathlossRule {
    pub fn as_str(self) -> &'static str {
        match self {
            PathlossRule::Band28 => "band28",
            PathlossRule::Band73 => "band73",
            PathlossRule::Min => "min",
        }
    }
}

impl FromStr for PathlossRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "band28" => Ok(PathlossRule::Band28),
            "band73" => Ok(PathlossRule::Band73),
            "min" => Ok(PathlossRule::Min),
            other => Err(format!("expected band28|band73|min, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("expected csv|json, got `{other}`")),
        }
    }
}

/// Log-distance pathloss coefficients `alpha + beta * 10 log10(d) + N(0, sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathlossParams {
    pub alpha_los: f64,
    pub beta_los: f64,
    pub sigma_los: f64,
    pub alpha_nlos: f64,
    pub beta_nlos: f64,
    pub sigma_nlos: f64,
}

/// Per-carrier radio parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandConfig {
    /// Hz.
    pub carrier_frequency: f64,
    /// Hz, before any split among operators.
    pub total_bandwidth: f64,
    /// Access mode used by [`Regime::Hybrid`].
    pub licensing: Licensing,
    pub n_tx: usize,
    pub n_rx: usize,
    /// dBm per carrier.
    pub tx_power: f64,
    pub pathloss: PathlossParams,
    /// Mean of the Poisson cluster count.
    pub cluster_mean: f64,
    /// Power-spread decay exponent.
    pub r_tau: f64,
    /// Per-cluster shadowing std of the power spread, dB.
    pub zeta: f64,
    /// Std of sub-path angles around the cluster centre, degrees.
    pub angle_spread_deg: f64,
    /// Element spacing in wavelengths.
    pub element_spacing: f64,
}

impl BandConfig {
    pub fn default_28ghz() -> Self {
        BandConfig {
            carrier_frequency: 28e9,
            total_bandwidth: 1e9,
            licensing: Licensing::Exclusive,
            n_tx: 64,
            n_rx: 16,
            tx_power: 30.0,
            pathloss: PathlossParams {
                alpha_los: 61.4,
                beta_los: 2.0,
                sigma_los: 5.8,
                alpha_nlos: 72.0,
                beta_nlos: 2.92,
                sigma_nlos: 8.7,
            },
            cluster_mean: 1.8,
            r_tau: 2.8,
            zeta: 4.0,
            angle_spread_deg: 10.0,
            element_spacing: 0.5,
        }
    }

    pub fn default_73ghz() -> Self {
        BandConfig {
            carrier_frequency: 73e9,
            total_bandwidth: 1e9,
            licensing: Licensing::Pooled,
            n_tx: 64,
            n_rx: 16,
            tx_power: 30.0,
            pathloss: PathlossParams {
                alpha_los: 69.8,
                beta_los: 2.0,
                sigma_los: 5.8,
                alpha_nlos: 86.6,
                beta_nlos: 2.45,
                sigma_nlos: 8.0,
            },
            cluster_mean: 1.9,
            r_tau: 3.0,
            zeta: 4.0,
            angle_spread_deg: 10.0,
            element_spacing: 0.5,
        }
    }
}

/// Distance-dependent blockage model coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockageParams {
    /// 1/m.
    pub a_out: f64,
    pub b_out: f64,
    /// 1/m.
    pub a_los: f64,
}

impl Default for BlockageParams {
    fn default() -> Self {
        BlockageParams {
            a_out: 0.0334,
            b_out: 5.2,
            a_los: 0.0149,
        }
    }
}

/// Grid swept by `run`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// BS per km² per operator.
    pub densities: Vec<f64>,
    pub regimes: Vec<Regime>,
    pub cases: Vec<AntennaCase>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            densities: vec![30.0, 60.0, 120.0],
            regimes: Regime::ALL.to_vec(),
            cases: vec![AntennaCase::I, AntennaCase::II],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
    /// Raw per-iteration sample CSV.
    pub dump_samples: Option<PathBuf>,
}

/// Full parameterization of a simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub num_operators: usize,
    /// BS per km² per operator, used by single-iteration entry points.
    pub bs_density: f64,
    /// UE per km² per operator.
    pub ue_density: f64,
    /// Side of the square deployment area, m.
    pub area_side: f64,
    /// 28 GHz first, 73 GHz second.
    pub bands: [BandConfig; 2],
    pub p28: f64,
    pub iterations: usize,
    /// dBm/Hz.
    pub noise_psd: f64,
    /// dB.
    pub noise_figure: f64,
    pub seed: u64,
    pub blockage: BlockageParams,
    pub pathloss_rule: PathlossRule,
    /// Worker threads; 0 picks the number of CPUs.
    pub jobs: usize,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            num_operators: 4,
            bs_density: 30.0,
            ue_density: 100.0,
            area_side: 1000.0,
            bands: [BandConfig::default_28ghz(), BandConfig::default_73ghz()],
            p28: 0.5,
            iterations: 10_000,
            noise_psd: -174.0,
            noise_figure: 7.0,
            seed: 1,
            blockage: BlockageParams::default(),
            pathloss_rule: PathlossRule::Band28,
            jobs: 0,
            sweep: SweepConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl ScenarioConfig {
    /// Defaults with the antenna counts of `case` applied.
    pub fn preset(case: AntennaCase) -> Self {
        ScenarioConfig::default().with_case(case)
    }

    pub fn band(&self, carrier: Carrier) -> &BandConfig {
        &self.bands[carrier.index()]
    }

    /// Area in km².
    pub fn area_km2(&self) -> f64 {
        self.area_side * self.area_side * 1e-6
    }

    pub fn with_case(mut self, case: AntennaCase) -> Self {
        if let Some(counts) = case.antenna_counts() {
            for (band, (n_tx, n_rx)) in self.bands.iter_mut().zip(counts) {
                band.n_tx = n_tx;
                band.n_rx = n_rx;
            }
        }
        self
    }

    pub fn with_bs_density(mut self, density: f64) -> Self {
        self.bs_density = density;
        self
    }

    /// Checks every invariant and returns the config unchanged if all hold.
    pub fn validate(self) -> Result<Self, ValidationErrors> {
        let mut v = Vec::new();
        let mut check = |ok: bool, field: &str, message: String| {
            if !ok {
                v.push(Violation {
                    field: field.to_string(),
                    message,
                });
            }
        };

        check(
            self.num_operators >= 1,
            "num_operators",
            "num_operators must be >= 1".into(),
        );
        check(
            positive(self.bs_density),
            "bs_density",
            "bs_density must be > 0".into(),
        );
        check(
            positive(self.ue_density),
            "ue_density",
            "ue_density must be > 0".into(),
        );
        check(
            positive(self.area_side),
            "area_side",
            "area_side must be > 0".into(),
        );
        check(
            (0.0..=1.0).contains(&self.p28),
            "p28",
            "p28 must lie in [0, 1]".into(),
        );
        check(
            self.iterations >= 1,
            "iterations",
            "iterations must be >= 1".into(),
        );
        check(
            self.noise_psd.is_finite(),
            "noise_psd",
            "noise_psd must be finite".into(),
        );
        check(
            self.noise_figure.is_finite(),
            "noise_figure",
            "noise_figure must be finite".into(),
        );
        for (name, value) in [
            ("blockage.a_out", self.blockage.a_out),
            ("blockage.b_out", self.blockage.b_out),
            ("blockage.a_los", self.blockage.a_los),
        ] {
            check(
                value.is_finite() && value >= 0.0,
                name,
                format!("{name} must be finite and >= 0"),
            );
        }

        for carrier in Carrier::ALL {
            let b = self.band(carrier);
            let p = format!("bands.{}", carrier.as_str());
            check(
                positive(b.carrier_frequency),
                &format!("{p}.carrier_frequency"),
                format!("{p}.carrier_frequency must be > 0"),
            );
            check(
                positive(b.total_bandwidth),
                &format!("{p}.total_bandwidth"),
                format!("{p}.total_bandwidth must be > 0"),
            );
            for (key, n) in [("n_tx", b.n_tx), ("n_rx", b.n_rx)] {
                check(
                    crate::antenna::UpaGeometry::for_elements(n, b.element_spacing).is_some(),
                    &format!("{p}.{key}"),
                    format!("{p}.{key} = {n} has no UPA factorization (must be a power of two)"),
                );
            }
            check(
                b.tx_power.is_finite(),
                &format!("{p}.tx_power"),
                format!("{p}.tx_power must be finite"),
            );
            check(
                positive(b.cluster_mean),
                &format!("{p}.cluster_mean"),
                format!("{p}.cluster_mean must be > 0"),
            );
            check(
                b.r_tau.is_finite(),
                &format!("{p}.r_tau"),
                format!("{p}.r_tau must be finite"),
            );
            check(
                non_negative(b.zeta),
                &format!("{p}.zeta"),
                format!("{p}.zeta must be >= 0"),
            );
            check(
                non_negative(b.angle_spread_deg),
                &format!("{p}.angle_spread_deg"),
                format!("{p}.angle_spread_deg must be >= 0"),
            );
            check(
                positive(b.element_spacing),
                &format!("{p}.element_spacing"),
                format!("{p}.element_spacing must be > 0"),
            );
            let pl = &b.pathloss;
            for (key, value) in [
                ("alpha_los", pl.alpha_los),
                ("beta_los", pl.beta_los),
                ("alpha_nlos", pl.alpha_nlos),
                ("beta_nlos", pl.beta_nlos),
            ] {
                check(
                    value.is_finite(),
                    &format!("{p}.{key}"),
                    format!("{p}.{key} must be finite"),
                );
            }
            for (key, value) in [("sigma_los", pl.sigma_los), ("sigma_nlos", pl.sigma_nlos)] {
                check(
                    non_negative(value),
                    &format!("{p}.{key}"),
                    format!("{p}.{key} must be >= 0"),
                );
            }
        }

        check(
            !self.sweep.densities.is_empty(),
            "sweep.densities",
            "sweep.densities must not be empty".into(),
        );
        check(
            self.sweep.densities.iter().all(|&d| positive(d)),
            "sweep.densities",
            "sweep.densities must all be > 0".into(),
        );
        check(
            !self.sweep.regimes.is_empty(),
            "sweep.regimes",
            "sweep.regimes must not be empty".into(),
        );
        check(
            !self.sweep.cases.is_empty(),
            "sweep.cases",
            "sweep.cases must not be empty".into(),
        );

        if v.is_empty() {
            Ok(self)
        } else {
            Err(ValidationErrors(v))
        }
    }

    /// Canonical text form; parses back to an equal config.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.entries() {
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }

    fn entries(&self) -> Vec<(String, String)> {
        let mut e: Vec<(String, String)> = vec![
            ("num_operators".into(), self.num_operators.to_string()),
            ("bs_density".into(), self.bs_density.to_string()),
            ("ue_density".into(), self.ue_density.to_string()),
            ("area_side".into(), self.area_side.to_string()),
            ("p28".into(), self.p28.to_string()),
            ("iterations".into(), self.iterations.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("noise_psd".into(), self.noise_psd.to_string()),
            ("noise_figure".into(), self.noise_figure.to_string()),
            ("jobs".into(), self.jobs.to_string()),
            ("blockage.a_out".into(), self.blockage.a_out.to_string()),
            ("blockage.b_out".into(), self.blockage.b_out.to_string()),
            ("blockage.a_los".into(), self.blockage.a_los.to_string()),
            (
                "association.pathloss_rule".into(),
                self.pathloss_rule.as_str().into(),
            ),
        ];
        for carrier in Carrier::ALL {
            let b = self.band(carrier);
            let p = format!("bands.{}", carrier.as_str());
            let pl = &b.pathloss;
            for (key, value) in [
                ("carrier_frequency", b.carrier_frequency.to_string()),
                ("total_bandwidth", b.total_bandwidth.to_string()),
                ("licensing", b.licensing.as_str().to_string()),
                ("n_tx", b.n_tx.to_string()),
                ("n_rx", b.n_rx.to_string()),
                ("tx_power", b.tx_power.to_string()),
                ("alpha_los", pl.alpha_los.to_string()),
                ("beta_los", pl.beta_los.to_string()),
                ("sigma_los", pl.sigma_los.to_string()),
                ("alpha_nlos", pl.alpha_nlos.to_string()),
                ("beta_nlos", pl.beta_nlos.to_string()),
                ("sigma_nlos", pl.sigma_nlos.to_string()),
                ("cluster_mean", b.cluster_mean.to_string()),
                ("r_tau", b.r_tau.to_string()),
                ("zeta", b.zeta.to_string()),
                ("angle_spread_deg", b.angle_spread_deg.to_string()),
                ("element_spacing", b.element_spacing.to_string()),
            ] {
                e.push((format!("{p}.{key}"), value));
            }
        }
        e.push(("sweep.densities".into(), join(&self.sweep.densities)));
        e.push(("sweep.regimes".into(), join(&self.sweep.regimes)));
        e.push(("sweep.cases".into(), join(&self.sweep.cases)));
        e.push((
            "output.path".into(),
            path_string(self.output.path.as_deref()),
        ));
        e.push(("output.format".into(), self.output.format.as_str().into()));
        e.push((
            "output.dump_samples".into(),
            path_string(self.output.dump_samples.as_deref()),
        ));
        e
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), KeyError> {
        if let Some(rest) = key.strip_prefix("bands.") {
            let (band, field) = rest.split_once('.').ok_or(KeyError::Unknown)?;
            let carrier = match band {
                "28ghz" => Carrier::Ghz28,
                "73ghz" => Carrier::Ghz73,
                _ => return Err(KeyError::Unknown),
            };
            return set_band(&mut self.bands[carrier.index()], field, value);
        }
        match key {
            "preset" => {
                let case: AntennaCase = parse(value)?;
                *self = std::mem::take(self).with_case(case);
            }
            "num_operators" => self.num_operators = parse(value)?,
            "bs_density" => self.bs_density = parse(value)?,
            "ue_density" => self.ue_density = parse(value)?,
            "area_side" => self.area_side = parse(value)?,
            "p28" => self.p28 = parse(value)?,
            "iterations" => self.iterations = parse(value)?,
            "seed" => self.seed = parse(value)?,
            "noise_psd" => self.noise_psd = parse(value)?,
            "noise_figure" => self.noise_figure = parse(value)?,
            "jobs" => self.jobs = parse(value)?,
            "blockage.a_out" => self.blockage.a_out = parse(value)?,
            "blockage.b_out" => self.blockage.b_out = parse(value)?,
            "blockage.a_los" => self.blockage.a_los = parse(value)?,
            "association.pathloss_rule" => self.pathloss_rule = parse(value)?,
            "sweep.densities" => self.sweep.densities = parse_list(value)?,
            "sweep.regimes" => self.sweep.regimes = parse_list(value)?,
            "sweep.cases" => self.sweep.cases = parse_list(value)?,
            "output.path" => self.output.path = parse_path(value),
            "output.format" => self.output.format = parse(value)?,
            "output.dump_samples" => self.output.dump_samples = parse_path(value),
            _ => return Err(KeyError::Unknown),
        }
        Ok(())
    }
}

fn set_band(band: &mut BandConfig, field: &str, value: &str) -> Result<(), KeyError> {
    let pl = &mut band.pathloss;
    match field {
        "carrier_frequency" => band.carrier_frequency = parse(value)?,
        "total_bandwidth" => band.total_bandwidth = parse(value)?,
        "licensing" => band.licensing = parse(value)?,
        "n_tx" => band.n_tx = parse(value)?,
        "n_rx" => band.n_rx = parse(value)?,
        "tx_power" => band.tx_power = parse(value)?,
        "alpha_los" => pl.alpha_los = parse(value)?,
        "beta_los" => pl.beta_los = parse(value)?,
        "sigma_los" => pl.sigma_los = parse(value)?,
        "alpha_nlos" => pl.alpha_nlos = parse(value)?,
        "beta_nlos" => pl.beta_nlos = parse(value)?,
        "sigma_nlos" => pl.sigma_nlos = parse(value)?,
        "cluster_mean" => band.cluster_mean = parse(value)?,
        "r_tau" => band.r_tau = parse(value)?,
        "zeta" => band.zeta = parse(value)?,
        "angle_spread_deg" => band.angle_spread_deg = parse(value)?,
        "element_spacing" => band.element_spacing = parse(value)?,
        _ => return Err(KeyError::Unknown),
    }
    Ok(())
}

enum KeyError {
    Unknown,
    Value(String),
}

fn parse<T: FromStr>(value: &str) -> Result<T, KeyError>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| KeyError::Value(e.to_string()))
}

fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>, KeyError>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse)
        .collect()
}

fn parse_path(value: &str) -> Option<PathBuf> {
    let v = value.trim();
    (!v.is_empty()).then(|| PathBuf::from(v))
}

fn path_string(p: Option<&Path>) -> String {
    p.map(|p| p.display().to_string()).unwrap_or_default()
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

fn non_negative(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

/// One violated invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Dotted config key of the offending field.
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Every violation found by [`ScenarioConfig::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationErrors(pub Vec<Violation>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, found {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: invalid value {value:?} for `{key}`: {reason}")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
        reason: String,
    },
    #[error("invalid configuration:\n{0}")]
    Invalid(#[from] ValidationErrors),
}

/// Parses config text without validating it. A `preset` key is applied before
/// every other key regardless of where it appears.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut order = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            text: raw.to_string(),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                text: raw.to_string(),
            });
        }
        if entries
            .insert(key.to_string(), (line, value.trim().to_string()))
            .is_some()
        {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
        order.push(key.to_string());
    }

    let mut config = ScenarioConfig::default();
    order.sort_by_key(|k| k != "preset");
    for key in order {
        let (line, value) = &entries[&key];
        config.set(&key, value).map_err(|e| match e {
            KeyError::Unknown => ConfigError::UnknownKey {
                line: *line,
                key: key.clone(),
            },
            KeyError::Value(reason) => ConfigError::InvalidValue {
                line: *line,
                key: key.clone(),
                value: value.clone(),
                reason,
            },
        })?;
    }
    Ok(config)
}

/// Reads, parses and validates a config file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_scenario(&text)?.validate()?)
}
