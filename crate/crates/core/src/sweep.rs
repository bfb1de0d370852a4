//! Acceleration sweeps, the canned figure datasets and the shape checks run
//! on the resulting curves.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::detector::{decay_probability_accelerated, DetectorConfig, Placement, Truncation};
use crate::error::{Error, Result};
use crate::inertial::CavityGeometry;
use crate::rindler::RindlerGeometry;

pub const CSV_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Which detector positions a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlacementSet {
    Center,
    /// Every node of the resonant mode, rear to front.
    AllNodes,
    /// A single node `j` of the resonant mode.
    Node(usize),
    /// A single proper offset from the centre.
    Offset(f64),
}

impl PlacementSet {
    pub fn placements(&self, mode_n: usize) -> Result<Vec<Placement>> {
        match *self {
            PlacementSet::Center => Ok(vec![Placement::Center]),
            PlacementSet::AllNodes => (1..mode_n.max(1))
                .map(|j| Placement::node(mode_n, j))
                .collect::<Result<Vec<_>>>()
                .and_then(|v| {
                    if v.is_empty() {
                        Err(Error::Detector(format!(
                            "mode {mode_n} has no interior nodes"
                        )))
                    } else {
                        Ok(v)
                    }
                }),
            PlacementSet::Node(j) => Ok(vec![Placement::node(mode_n, j)?]),
            PlacementSet::Offset(x) => Ok(vec![Placement::Offset(x)]),
        }
    }
}

impl fmt::Display for PlacementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlacementSet::Center => write!(f, "center"),
            PlacementSet::AllNodes => write!(f, "nodes"),
            PlacementSet::Node(j) => write!(f, "node:{j}"),
            PlacementSet::Offset(x) => write!(f, "offset:{x}"),
        }
    }
}

impl FromStr for PlacementSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || {
            Error::Detector(format!(
                "unknown placement '{s}' (center, nodes, node:J, offset:X)"
            ))
        };
        match s {
            "center" => Ok(PlacementSet::Center),
            "nodes" => Ok(PlacementSet::AllNodes),
            _ => {
                if let Some(j) = s.strip_prefix("node:") {
                    j.trim().parse().map(PlacementSet::Node).map_err(|_| bad())
                } else if let Some(x) = s.strip_prefix("offset:") {
                    x.trim()
                        .parse()
                        .map(PlacementSet::Offset)
                        .map_err(|_| bad())
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// A sweep over proper acceleration for one cavity and detector.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub length: f64,
    pub mass: f64,
    pub accels: Vec<f64>,
    /// The detector gap is tuned to resting-cavity mode `mode_n`.
    pub mode_n: usize,
    pub placements: PlacementSet,
    pub tau: f64,
    pub epsilon: f64,
    pub k_max: usize,
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps)
            .map(|i| {
                if i == steps - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect(),
    }
}

impl SweepPlan {
    /// Checks every invariant a point evaluation would otherwise trip over.
    pub fn validate(&self) -> Result<()> {
        let base = CavityGeometry::new(self.length, self.mass)?;
        if self.accels.is_empty() {
            return Err(Error::Geometry("acceleration grid is empty".into()));
        }
        if self.accels.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Geometry(
                "acceleration grid must be strictly increasing".into(),
            ));
        }
        RindlerGeometry::new(base, self.accels[0])?;
        RindlerGeometry::new(base, *self.accels.last().unwrap())?;
        if self.k_max < self.mode_n {
            return Err(Error::Detector(format!(
                "k_max = {} does not reach the resonant mode {}",
                self.k_max, self.mode_n
            )));
        }
        let placements = self.placements.placements(self.mode_n)?;
        for p in &placements {
            let x = p.offset(self.length)?;
            if x.abs() >= 0.5 * self.length {
                return Err(Error::Detector(format!(
                    "placement {p} is not inside the cavity"
                )));
            }
        }
        self.detector(Placement::Center)?;
        Ok(())
    }

    fn detector(&self, placement: Placement) -> Result<DetectorConfig> {
        let base = CavityGeometry::new(self.length, self.mass)?;
        DetectorConfig::resonant(&base, self.mode_n, placement, self.tau, self.epsilon)
    }

    /// Probabilities at one acceleration for every placement, plus whether
    /// every mode sum met its truncation criterion.
    pub fn evaluate(&self, accel: f64) -> Result<(Vec<f64>, bool)> {
        let base = CavityGeometry::new(self.length, self.mass)?;
        let geom = RindlerGeometry::new(base, accel)?;
        let modes = geom.modes(self.k_max)?;
        let truncation = Truncation::with_k_max(self.k_max);
        let mut converged = true;
        let values = self
            .placements
            .placements(self.mode_n)?
            .into_iter()
            .map(|p| {
                let r =
                    decay_probability_accelerated(&geom, &modes, &self.detector(p)?, truncation)?;
                converged &= r.converged;
                Ok(r.probability)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((values, converged))
    }
}

/// Outcome at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub accel: f64,
    pub values: std::result::Result<Vec<f64>, Error>,
    pub converged: bool,
}

/// Curves over the acceleration grid, one per placement, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub plan: SweepPlan,
    pub placements: Vec<Placement>,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    /// The curve of placement `index`; failed points are `NaN`.
    pub fn curve(&self, index: usize) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| p.values.as_ref().map_or(f64::NAN, |v| v[index]))
            .collect()
    }

    pub fn accels(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.accel).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = (f64, &Error)> {
        self.points
            .iter()
            .filter_map(|p| p.values.as_ref().err().map(|e| (p.accel, e)))
    }
}

/// Runs the plan in parallel over grid points. `RP_THREADS` caps the worker
/// count.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepResult> {
    let threads = match std::env::var("RP_THREADS") {
        Ok(s) => Some(
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| {
                    Error::Domain(format!("RP_THREADS must be a positive integer, got '{s}'"))
                })?,
        ),
        Err(_) => None,
    };
    run_sweep_with_threads(plan, threads)
}

pub fn run_sweep_with_threads(plan: &SweepPlan, threads: Option<usize>) -> Result<SweepResult> {
    plan.validate()?;
    let placements = plan.placements.placements(plan.mode_n)?;
    let work = || -> Vec<SweepPoint> {
        plan.accels
            .par_iter()
            .map(|&accel| match plan.evaluate(accel) {
                Ok((values, converged)) => SweepPoint {
                    accel,
                    values: Ok(values),
                    converged,
                },
                Err(e) => SweepPoint {
                    accel,
                    values: Err(e),
                    converged: false,
                },
            })
            .collect()
    };
    let points = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(SweepResult {
        plan: plan.clone(),
        placements,
        points,
    })
}

/// Interior strict local maxima by three-point comparison. A plateau counts
/// once, at its leftmost point. `NaN` points break the comparison.
pub fn local_maxima(accels: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    let n = values.len().min(accels.len());
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        let v = values[i];
        if !(v > values[i - 1]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && values[j + 1] == v {
            j += 1;
        }
        if j + 1 < n && values[j + 1] < v {
            out.push((accels[i], v));
        }
        i = j + 1;
    }
    out
}

/// Placements ordered by their peak probability over the grid, highest first.
pub fn node_ranking(result: &SweepResult) -> Vec<(Placement, f64)> {
    let mut ranked: Vec<(Placement, f64)> = result
        .placements
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let peak = result
                .curve(i)
                .into_iter()
                .filter(|v| v.is_finite())
                .fold(f64::NEG_INFINITY, f64::max);
            (p, peak)
        })
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    ranked
}

/// The five canned datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Massive field, detector at the centre, tuned to mode 2.
    MassiveCenter,
    /// Mode 3, both nodes.
    NodesMode3,
    /// Mode 4, all three nodes.
    NodesMode4,
    /// Mode 5, all four nodes.
    NodesMode5,
    /// Massless field, detector at the centre, tuned to mode 2.
    MasslessCenter,
}

/// Grid settings of a figure: `steps` points ending at `accel_max`, starting
/// one spacing above zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub length: f64,
    pub mass: f64,
    pub accel_min: f64,
    pub accel_max: f64,
    pub accel_steps: usize,
    pub mode_n: usize,
    pub placements: PlacementSet,
    pub tau: f64,
    pub epsilon: f64,
    pub k_max: usize,
}

impl Preset {
    pub fn plan(&self) -> SweepPlan {
        SweepPlan {
            length: self.length,
            mass: self.mass,
            accels: linear_grid(self.accel_min, self.accel_max, self.accel_steps),
            mode_n: self.mode_n,
            placements: self.placements,
            tau: self.tau,
            epsilon: self.epsilon,
            k_max: self.k_max,
        }
    }
}

impl Figure {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Figure::MassiveCenter),
            2 => Some(Figure::NodesMode3),
            3 => Some(Figure::NodesMode4),
            4 => Some(Figure::NodesMode5),
            5 => Some(Figure::MasslessCenter),
            _ => None,
        }
    }

    pub fn number(&self) -> u8 {
        match self {
            Figure::MassiveCenter => 1,
            Figure::NodesMode3 => 2,
            Figure::NodesMode4 => 3,
            Figure::NodesMode5 => 4,
            Figure::MasslessCenter => 5,
        }
    }

    pub fn preset(&self) -> Preset {
        let steps = 400;
        let (mass, accel_max, mode_n, placements) = match self {
            Figure::MassiveCenter => (0.05, 1.4, 2, PlacementSet::Center),
            Figure::NodesMode3 => (15.0, 0.4, 3, PlacementSet::AllNodes),
            Figure::NodesMode4 => (15.0, 0.4, 4, PlacementSet::AllNodes),
            Figure::NodesMode5 => (15.0, 0.4, 5, PlacementSet::AllNodes),
            Figure::MasslessCenter => (0.0, 0.25, 2, PlacementSet::Center),
        };
        Preset {
            length: 1.0,
            mass,
            accel_min: accel_max / steps as f64,
            accel_max,
            accel_steps: steps,
            mode_n,
            placements,
            tau: 50.0,
            epsilon: 1.0,
            k_max: 32,
        }
    }

    pub fn plan(&self) -> SweepPlan {
        self.preset().plan()
    }
}
