//! Parameter sweeps over a template scenario.
//!
//! A grid spec is a `;`-separated list of axes, each `key=v1,v2,...`:
//!
//! ```text
//! alg=partition:1:1,partition:2:1;omega=21,42;adversary=fig2
//! ```
//!
//! Keys: `alg` (or `algorithm`), `omega`, `adversary` and `seed`. Points are
//! the cartesian product in axis order, last axis varying fastest. They run in
//! parallel and are merged back in grid order.

use rayon::prelude::*;

use super::run::{run_experiment, RunReport};
use super::scenario::{ScenarioConfig, Traffic};
use super::HarnessError;
use crate::adversary::{star_network, AdversaryKind};
use crate::error::Error;
use crate::ledger::CompetitiveRatio;
use crate::online_algs::Algorithm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Algorithm,
    Omega,
    Adversary,
    Seed,
}

impl Axis {
    fn name(self) -> &'static str {
        match self {
            Axis::Algorithm => "alg",
            Axis::Omega => "omega",
            Axis::Adversary => "adversary",
            Axis::Seed => "seed",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grid {
    pub axes: Vec<(Axis, Vec<String>)>,
}

pub fn parse_grid(spec: &str) -> Result<Grid, HarnessError> {
    let mut grid = Grid::default();
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, values) = part
            .split_once('=')
            .ok_or_else(|| HarnessError::Grid(format!("{part:?} is not key=values")))?;
        let axis = match key.trim() {
            "alg" | "algorithm" => Axis::Algorithm,
            "omega" => Axis::Omega,
            "adversary" => Axis::Adversary,
            "seed" => Axis::Seed,
            other => return Err(HarnessError::Grid(format!("unknown axis {other:?}"))),
        };
        if grid.axes.iter().any(|(a, _)| *a == axis) {
            return Err(HarnessError::Grid(format!(
                "axis {} given twice",
                axis.name()
            )));
        }
        let values: Vec<String> = values
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(String::from)
            .collect();
        grid.axes.push((axis, values));
    }
    Ok(grid)
}

impl Grid {
    /// All points as `(axis, value)` assignments. An empty grid has no points.
    pub fn points(&self) -> Vec<Vec<(Axis, String)>> {
        if self.axes.is_empty() {
            return Vec::new();
        }
        let mut points = vec![Vec::new()];
        for (axis, values) in &self.axes {
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut p = p.clone();
                        p.push((*axis, v.clone()));
                        p
                    })
                })
                .collect();
        }
        points
    }
}

#[derive(Clone, Debug)]
pub struct SweepPoint {
    /// `alg=caco omega=21 ...`
    pub label: String,
    pub algorithm: Option<Algorithm>,
    pub result: Result<RunReport, String>,
}

impl SweepPoint {
    pub fn failed(&self) -> bool {
        self.result.as_ref().map_or(true, |r| !r.passed())
    }
}

/// Extremes of the forced ratio (worst over adversary phase prefixes) over
/// one algorithm's successful points.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub algorithm: Algorithm,
    pub points: usize,
    pub failed: usize,
    pub min: Option<(CompetitiveRatio, String)>,
    pub max: Option<(CompetitiveRatio, String)>,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    pub summary: Vec<SweepSummary>,
}

impl SweepOutcome {
    pub fn any_failed(&self) -> bool {
        self.points.iter().any(SweepPoint::failed)
    }
}

fn apply(template: &ScenarioConfig, point: &[(Axis, String)]) -> Result<ScenarioConfig, Error> {
    let mut config = template.clone();
    for (axis, value) in point {
        match axis {
            Axis::Algorithm => config.algorithm = value.parse()?,
            Axis::Omega => {
                config.omega = value
                    .parse()
                    .map_err(|_| Error::Invalid(format!("omega {value:?} is not a number")))?
            }
            Axis::Adversary => {
                let kind: AdversaryKind = value.parse()?;
                if matches!(kind, AdversaryKind::Fig2 | AdversaryKind::Fig3) {
                    config.cells = star_network().cells().to_vec();
                }
                config.traffic = Traffic::Adversary(kind);
            }
            Axis::Seed => {
                let seed = value
                    .parse()
                    .map_err(|_| Error::Invalid(format!("seed {value:?} is not a number")))?;
                config = config.with_seed(seed);
            }
        }
    }
    Ok(config)
}

pub fn sweep(template: &ScenarioConfig, grid: &Grid) -> SweepOutcome {
    let points: Vec<SweepPoint> = grid
        .points()
        .par_iter()
        .map(|point| {
            let label = point
                .iter()
                .map(|(a, v)| format!("{}={v}", a.name()))
                .collect::<Vec<_>>()
                .join(" ");
            match apply(template, point) {
                Err(e) => SweepPoint {
                    label,
                    algorithm: None,
                    result: Err(e.to_string()),
                },
                Ok(mut config) => {
                    config.name = format!("{} [{label}]", template.name);
                    let result = run_experiment(&config).map_err(|e| e.to_string());
                    SweepPoint {
                        label,
                        algorithm: Some(config.algorithm),
                        result,
                    }
                }
            }
        })
        .collect();
    let summary = summarize(&points);
    SweepOutcome { points, summary }
}

fn summarize(points: &[SweepPoint]) -> Vec<SweepSummary> {
    let mut rows: Vec<SweepSummary> = Vec::new();
    for p in points {
        let Some(algorithm) = p.algorithm else {
            continue;
        };
        let idx = match rows.iter().position(|s| s.algorithm == algorithm) {
            Some(i) => i,
            None => {
                rows.push(SweepSummary {
                    algorithm,
                    points: 0,
                    failed: 0,
                    min: None,
                    max: None,
                });
                rows.len() - 1
            }
        };
        let row = &mut rows[idx];
        row.points += 1;
        if p.failed() {
            row.failed += 1;
        }
        if let Some(ratio) = p.result.as_ref().ok().and_then(|r| r.forced_ratio()) {
            if row.min.as_ref().is_none_or(|(m, _)| ratio < *m) {
                row.min = Some((ratio, p.label.clone()));
            }
            if row.max.as_ref().is_none_or(|(m, _)| ratio > *m) {
                row.max = Some((ratio, p.label.clone()));
            }
        }
    }
    rows
}
