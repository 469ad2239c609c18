//! Random network geometry: per-operator Poisson placements of base stations
//! and users in a square area, plus the reference user at its centre.

use std::io::{self, Write};

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;

/// Operator that owns the reference user.
pub const REFERENCE_OPERATOR: usize = 0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Horizontal bearing from `self` to `other`, radians.
    pub fn bearing(&self, other: &Point) -> f64 {
        (other.y - self.y).atan2(other.x - self.x)
    }
}

/// Homogeneous PPP over `[0, side]²`; `density` is per km².
pub fn sample_ppp<R: Rng + ?Sized>(density: f64, area_side: f64, rng: &mut R) -> Vec<Point> {
    let mean = density * area_side * area_side * 1e-6;
    if !(mean > 0.0) || !mean.is_finite() {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    (0..count)
        .map(|_| Point {
            x: rng.random_range(0.0..=area_side),
            y: rng.random_range(0.0..=area_side),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    pub area_side: f64,
    /// `base_stations[m]` are operator `m`'s BSs.
    pub base_stations: Vec<Vec<Point>>,
    /// Background UEs per operator; the reference UE is not among them.
    pub users: Vec<Vec<Point>>,
    pub reference_ue: Point,
    pub reference_operator: usize,
}

impl Deployment {
    pub fn num_operators(&self) -> usize {
        self.base_stations.len()
    }

    pub fn total_base_stations(&self) -> usize {
        self.base_stations.iter().map(Vec::len).sum()
    }

    /// CSV dump with header `operator,role,x,y`; operators are 1-based.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "operator,role,x,y")?;
        for (m, points) in self.base_stations.iter().enumerate() {
            for p in points {
                writeln!(out, "{},bs,{},{}", m + 1, p.x, p.y)?;
            }
        }
        for (m, points) in self.users.iter().enumerate() {
            for p in points {
                writeln!(out, "{},ue,{},{}", m + 1, p.x, p.y)?;
            }
        }
        writeln!(
            out,
            "{},reference,{},{}",
            self.reference_operator + 1,
            self.reference_ue.x,
            self.reference_ue.y
        )
    }
}

/// Independent BS and UE draws for every operator, BSs of all operators
/// first, then UEs.
pub fn build_deployment<R: Rng + ?Sized>(config: &ScenarioConfig, rng: &mut R) -> Deployment {
    let side = config.area_side;
    let base_stations = (0..config.num_operators)
        .map(|_| sample_ppp(config.bs_density, side, rng))
        .collect();
    let users = (0..config.num_operators)
        .map(|_| sample_ppp(config.ue_density, side, rng))
        .collect();
    Deployment {
        area_side: side,
        base_stations,
        users,
        reference_ue: Point {
            x: side / 2.0,
            y: side / 2.0,
        },
        reference_operator: REFERENCE_OPERATOR,
    }
}
