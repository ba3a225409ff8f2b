//! Request generators: the two lower-bound adversaries and seeded random traffic.
//!
//! Adversaries only see public outcomes, namely how many calls each cell has
//! accepted so far, never the algorithm's internal state.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hexnet::{CellId, Network};
use crate::ledger::{ratio_report, CompetitiveRatio};
use crate::offline_opt::{exact_optimum_with_limits, DemandVector, OptLimits, OptimumWitness};
use crate::online_algs::{Algorithm, RunTrace, Session};

pub const CENTER: CellId = CellId::new(0, 0);

/// The three pairwise non-adjacent neighbors of the origin sharing one color (G).
pub const OUTER: [CellId; 3] = [CellId::new(-1, 1), CellId::new(0, -1), CellId::new(1, 0)];

/// Center cell plus one color class of its neighbors. Triangle-free.
pub fn star_network() -> Network {
    Network::new(std::iter::once(CENTER).chain(OUTER))
}

/// Adversary selector: `fig2`, `fig3` or `random:<seed>:<length>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdversaryKind {
    Fig2,
    Fig3,
    Random { seed: u64, length: usize },
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdversaryKind::Fig2 => f.write_str("fig2"),
            AdversaryKind::Fig3 => f.write_str("fig3"),
            AdversaryKind::Random { seed, length } => write!(f, "random:{seed}:{length}"),
        }
    }
}

impl FromStr for AdversaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fig2" => Ok(AdversaryKind::Fig2),
            "fig3" => Ok(AdversaryKind::Fig3),
            other => match other.split(':').collect::<Vec<_>>().as_slice() {
                ["random", seed, length] => Ok(AdversaryKind::Random {
                    seed: seed
                        .parse()
                        .map_err(|_| Error::UnknownAdversary(s.into()))?,
                    length: length
                        .parse()
                        .map_err(|_| Error::UnknownAdversary(s.into()))?,
                }),
                _ => Err(Error::UnknownAdversary(s.into())),
            },
        }
    }
}

impl serde::Serialize for AdversaryKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for AdversaryKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Public view handed to an adversary between batches.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Observation {
    pub accepted: BTreeMap<CellId, usize>,
}

impl Observation {
    pub fn accepted_at(&self, c: CellId) -> usize {
        self.accepted.get(&c).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Script {
    /// Phase 1 floods the center; phase 2 floods the outer cells, always.
    Unconditional,
    /// Like `Unconditional`, but phase 2 fires only if the center accepted
    /// strictly more than `3 omega / 5`.
    Threshold,
    Fixed(Vec<CellId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryScenario {
    pub kind: AdversaryKind,
    pub network: Network,
    pub omega: u32,
    script: Script,
}

impl AdversaryScenario {
    /// Requests for phase `phase` (0-based) given what has been observed so
    /// far, or `None` once the adversary stops.
    pub fn next_batch(&self, phase: usize, seen: &Observation) -> Option<Vec<CellId>> {
        let flood = |c: CellId| vec![c; self.omega as usize];
        match (&self.script, phase) {
            (Script::Unconditional | Script::Threshold, 0) => Some(flood(CENTER)),
            (Script::Unconditional, 1) => Some(OUTER.iter().flat_map(|&c| flood(c)).collect()),
            (Script::Threshold, 1) => {
                let x = seen.accepted_at(CENTER) as u64;
                (5 * x > 3 * self.omega as u64)
                    .then(|| OUTER.iter().flat_map(|&c| flood(c)).collect())
            }
            (Script::Fixed(reqs), 0) => Some(reqs.clone()),
            _ => None,
        }
    }
}

pub fn fig2_adversary(omega: u32) -> AdversaryScenario {
    AdversaryScenario {
        kind: AdversaryKind::Fig2,
        network: star_network(),
        omega,
        script: Script::Unconditional,
    }
}

pub fn fig3_adversary(omega: u32) -> AdversaryScenario {
    AdversaryScenario {
        kind: AdversaryKind::Fig3,
        network: star_network(),
        omega,
        script: Script::Threshold,
    }
}

pub fn random_adversary(
    network: &Network,
    omega: u32,
    seed: u64,
    length: usize,
) -> Result<AdversaryScenario> {
    Ok(AdversaryScenario {
        kind: AdversaryKind::Random { seed, length },
        network: network.clone(),
        omega,
        script: Script::Fixed(random_sequence(network, length, seed)?),
    })
}

/// Build the scenario named by `kind`. Random traffic runs over `network`
/// (the 7-cell flower when absent); the two lower-bound adversaries always use
/// their own star layout.
pub fn scenario(
    kind: AdversaryKind,
    omega: u32,
    network: Option<&Network>,
) -> Result<AdversaryScenario> {
    match kind {
        AdversaryKind::Fig2 => Ok(fig2_adversary(omega)),
        AdversaryKind::Fig3 => Ok(fig3_adversary(omega)),
        AdversaryKind::Random { seed, length } => {
            let flower = Network::flower();
            random_adversary(network.unwrap_or(&flower), omega, seed, length)
        }
    }
}

/// Uniform seeded request sequence over the network's cells.
pub fn random_sequence(network: &Network, length: usize, seed: u64) -> Result<Vec<CellId>> {
    random_sequence_weighted(network, length, seed, None)
}

/// Seeded request sequence; `weights` (one per cell, in cell order) defaults to uniform.
pub fn random_sequence_weighted(
    network: &Network,
    length: usize,
    seed: u64,
    weights: Option<&[f64]>,
) -> Result<Vec<CellId>> {
    if length == 0 {
        return Ok(Vec::new());
    }
    if network.is_empty() {
        return Err(Error::Invalid(
            "cannot draw requests from an empty network".into(),
        ));
    }
    let uniform = vec![1.0; network.len()];
    let weights = weights.unwrap_or(&uniform);
    if weights.len() != network.len() {
        return Err(Error::DemandShape {
            expected: network.len(),
            got: weights.len(),
        });
    }
    let dist = WeightedIndex::new(weights)
        .map_err(|e| Error::Invalid(format!("bad traffic weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..length)
        .map(|_| network.cell(dist.sample(&mut rng)))
        .collect())
}

/// Snapshot taken after each batch: the request sequence so far is itself
/// an instance the adversary could have stopped at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseRecord {
    pub demands: Vec<u32>,
    pub accepted: usize,
}

/// Play the scenario against an algorithm, batch by batch.
pub fn play(scenario: &AdversaryScenario, algorithm: Algorithm) -> Result<RunTrace> {
    play_recorded(scenario, algorithm).map(|(trace, _)| trace)
}

pub fn play_recorded(
    scenario: &AdversaryScenario,
    algorithm: Algorithm,
) -> Result<(RunTrace, Vec<PhaseRecord>)> {
    let mut session = Session::new(algorithm, &scenario.network, scenario.omega)?;
    let mut seen = Observation::default();
    let mut phases = Vec::new();
    while let Some(batch) = scenario.next_batch(phases.len(), &seen) {
        for c in batch {
            session.submit(c)?;
        }
        seen.accepted = scenario
            .network
            .cells()
            .iter()
            .map(|&c| (c, session.accepted_at(c)))
            .collect();
        phases.push(PhaseRecord {
            demands: session.demands().to_vec(),
            accepted: seen.accepted.values().sum(),
        });
    }
    Ok((session.finish(), phases))
}

/// `OPT / ALG` of every phase prefix, scored against the exact optimum of
/// that prefix's demands.
pub fn phase_ratios(
    network: &Network,
    omega: u32,
    phases: &[PhaseRecord],
    limits: OptLimits,
) -> Result<Vec<CompetitiveRatio>> {
    phases
        .iter()
        .map(|p| {
            let demands = DemandVector::new(network, p.demands.clone())?;
            let opt = exact_optimum_with_limits(network, omega, &demands, limits)?;
            Ok(CompetitiveRatio::from_totals(opt.total, p.accepted as u64))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct DuelResult {
    pub trace: RunTrace,
    pub opt: OptimumWitness,
    /// Ratio of the complete run.
    pub ratio: CompetitiveRatio,
    /// Ratio after each phase; the last entry equals `ratio`.
    pub phase_ratios: Vec<CompetitiveRatio>,
}

impl DuelResult {
    /// The worst ratio over all phase prefixes, i.e. what the adversary can
    /// force by stopping at the right moment.
    pub fn forced_ratio(&self) -> CompetitiveRatio {
        self.phase_ratios
            .iter()
            .copied()
            .max()
            .unwrap_or(self.ratio)
    }
}

/// Play the scenario and score it against the exact optimum of the realized demands.
pub fn duel(
    scenario: &AdversaryScenario,
    algorithm: Algorithm,
    limits: OptLimits,
) -> Result<DuelResult> {
    let (trace, phases) = play_recorded(scenario, algorithm)?;
    let demands = DemandVector::new(&scenario.network, trace.demands.clone())?;
    let opt = exact_optimum_with_limits(&scenario.network, scenario.omega, &demands, limits)?;
    let ratio = ratio_report(&trace, &opt);
    let phase_ratios = phase_ratios(&scenario.network, scenario.omega, &phases, limits)?;
    Ok(DuelResult {
        trace,
        opt,
        ratio,
        phase_ratios,
    })
}

/// Limits that admit the star adversaries at any spectrum size: the star has
/// only two maximal independent sets, so the search stays trivial.
pub fn star_limits() -> OptLimits {
    OptLimits {
        max_cells: 4,
        max_omega: u32::MAX,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn ratio(n: i64, d: i64) -> CompetitiveRatio {
        CompetitiveRatio::Finite(Ratio::new(n, d))
    }

    #[test]
    fn star_layout() {
        let net = star_network();
        assert!(net.is_triangle_free());
        assert_eq!(net.neighbors(CENTER).unwrap().len(), 3);
        let colors: Vec<_> = OUTER.iter().map(|c| c.color()).collect();
        assert!(colors
            .iter()
            .all(|&c| c == colors[0] && c != CENTER.color()));
    }

    #[test]
    fn selectors() {
        for s in ["fig2", "fig3", "random:7:50"] {
            assert_eq!(s.parse::<AdversaryKind>().unwrap().to_string(), s);
        }
        assert!("random:x:1".parse::<AdversaryKind>().is_err());
        assert!("fig4".parse::<AdversaryKind>().is_err());
    }

    #[test]
    fn fig2_versus_caco() {
        let d = duel(&fig2_adversary(21), Algorithm::Caco, star_limits()).unwrap();
        assert_eq!(d.trace.total_accepted(), 27);
        assert_eq!(d.opt.total, 63);
        assert_eq!(d.ratio, ratio(7, 3));
    }

    #[test]
    fn fig2_versus_one_one_and_greedy() {
        let d = duel(
            &fig2_adversary(4),
            Algorithm::Partition { x: 1, y: 1 },
            star_limits(),
        )
        .unwrap();
        assert_eq!((d.trace.total_accepted(), d.opt.total), (5, 12));
        assert_eq!(d.ratio, ratio(12, 5));
        let d = duel(&fig2_adversary(21), Algorithm::Greedy, star_limits()).unwrap();
        assert_eq!(
            d.trace.accepted(star_network().index_of(CENTER).unwrap()),
            21
        );
        assert_eq!(d.trace.total_accepted(), 21);
        assert_eq!(d.ratio, ratio(3, 1));
    }

    #[test]
    fn fig3_versus_caco2_and_greedy() {
        let d = duel(&fig3_adversary(9), Algorithm::Caco2, star_limits()).unwrap();
        assert_eq!((d.trace.total_accepted(), d.opt.total), (15, 27));
        assert_eq!(d.ratio, ratio(9, 5));
        let d = duel(&fig3_adversary(9), Algorithm::Greedy, star_limits()).unwrap();
        assert_eq!((d.trace.total_accepted(), d.opt.total), (9, 27));
        assert_eq!(d.ratio, ratio(3, 1));
    }

    #[test]
    fn fig2_prefixes_realize_both_branches() {
        // 3:1 at omega = 20: stopping after the center flood (5/2) beats
        // continuing (30/13).
        let d = duel(
            &fig2_adversary(20),
            Algorithm::Partition { x: 3, y: 1 },
            star_limits(),
        )
        .unwrap();
        assert_eq!(d.phase_ratios, vec![ratio(5, 2), ratio(30, 13)]);
        assert_eq!(d.forced_ratio(), ratio(5, 2));
        let d = duel(&fig2_adversary(21), Algorithm::Caco, star_limits()).unwrap();
        assert_eq!(d.phase_ratios, vec![ratio(7, 3), ratio(7, 3)]);
    }

    #[test]
    fn fig3_stops_at_threshold() {
        // omega = 15, center accepts exactly 9 = 3*15/5 under partition 1:2 (own 3 + shared 6)
        let sc = fig3_adversary(15);
        let mut seen = Observation::default();
        seen.accepted.insert(CENTER, 9);
        assert_eq!(sc.next_batch(1, &seen), None);
        seen.accepted.insert(CENTER, 10);
        assert_eq!(sc.next_batch(1, &seen).map(|b| b.len()), Some(45));
    }

    #[test]
    fn random_sequences_are_seeded() {
        let net = Network::flower();
        assert!(random_sequence(&net, 0, 1).unwrap().is_empty());
        assert_eq!(
            random_sequence(&net, 100, 42).unwrap(),
            random_sequence(&net, 100, 42).unwrap()
        );
        assert_ne!(
            random_sequence(&net, 100, 42).unwrap(),
            random_sequence(&net, 100, 43).unwrap()
        );
        let only_center: Vec<f64> = net
            .cells()
            .iter()
            .map(|&c| if c == CENTER { 1.0 } else { 0.0 })
            .collect();
        let seq = random_sequence_weighted(&net, 20, 3, Some(&only_center)).unwrap();
        assert!(seq.iter().all(|&c| c == CENTER));
    }
}
