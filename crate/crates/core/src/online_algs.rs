//! Online admission algorithms.
//!
//! Every algorithm sees one request at a time and must either hand out a
//! frequency that is free in the requesting cell and all of its neighbors, or
//! reject. Decisions are irrevocable and fully deterministic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hexnet::{color_of, CellId, Color, NeighborConfig, Network};
use crate::spectrum::{
    make_partition_caco, make_partition_caco2, make_partition_family, AssignmentState, Direction,
    FreqRange, Frequency, FrequencyPartition, RangeLabel,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Accepted(Frequency),
    Rejected,
}

impl Outcome {
    pub fn is_accepted(self) -> bool {
        matches!(self, Outcome::Accepted(_))
    }
}

/// Algorithm selector: `greedy`, `caco`, `caco2` or `partition:x:y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Greedy,
    Caco,
    Caco2,
    Partition { x: u32, y: u32 },
}

impl Algorithm {
    /// The frequency partition this algorithm runs on, if any.
    pub fn partition(self, omega: u32) -> Result<Option<FrequencyPartition>> {
        match self {
            Algorithm::Greedy => {
                if omega == 0 {
                    Err(Error::ZeroOmega)
                } else {
                    Ok(None)
                }
            }
            Algorithm::Caco => make_partition_caco(omega).map(Some),
            Algorithm::Caco2 => make_partition_caco2(omega).map(Some),
            Algorithm::Partition { x, y } => make_partition_family(omega, x, y).map(Some),
        }
    }

    pub fn accepts_omega(self, omega: u32) -> bool {
        self.partition(omega).is_ok()
    }

    /// Smallest `omega' >= omega` the algorithm accepts.
    pub fn next_valid_omega(self, omega: u32) -> u32 {
        (omega.max(1)..)
            .find(|&w| self.accepts_omega(w))
            .expect("some multiple exists")
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Greedy => f.write_str("greedy"),
            Algorithm::Caco => f.write_str("caco"),
            Algorithm::Caco2 => f.write_str("caco2"),
            Algorithm::Partition { x, y } => write!(f, "partition:{x}:{y}"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "greedy" => Ok(Algorithm::Greedy),
            "caco" => Ok(Algorithm::Caco),
            "caco2" => Ok(Algorithm::Caco2),
            other => {
                let parts: Vec<&str> = other.split(':').collect();
                match parts.as_slice() {
                    ["partition", x, y] => {
                        let x: u32 = x.parse().map_err(|_| Error::UnknownAlgorithm(s.into()))?;
                        let y: u32 = y.parse().map_err(|_| Error::UnknownAlgorithm(s.into()))?;
                        if x == 0 || y == 0 {
                            return Err(Error::UnknownAlgorithm(s.into()));
                        }
                        Ok(Algorithm::Partition { x, y })
                    }
                    _ => Err(Error::UnknownAlgorithm(s.into())),
                }
            }
        }
    }
}

impl Serialize for Algorithm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Algorithm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn greedy_next(state: &AssignmentState, network: &Network, c: CellId) -> Result<Outcome> {
    let i = network.require(c)?;
    Ok(greedy_at(state, network, i))
}

fn greedy_at(state: &AssignmentState, network: &Network, i: usize) -> Outcome {
    match state.first_available_at(network, i, state.spectrum(), Direction::BottomToTop) {
        Some(f) => Outcome::Accepted(f),
        None => Outcome::Rejected,
    }
}

/// Own color range first, then the shared range.
pub fn caco_next(
    state: &AssignmentState,
    network: &Network,
    partition: &FrequencyPartition,
    c: CellId,
) -> Result<Outcome> {
    let i = network.require(c)?;
    reservation_at(state, network, partition, i)
}

pub fn partition_family_next(
    state: &AssignmentState,
    network: &Network,
    x_share: u32,
    y_share: u32,
    c: CellId,
) -> Result<Outcome> {
    let partition = make_partition_family(state.omega(), x_share, y_share)?;
    caco_next(state, network, &partition, c)
}

fn reservation_at(
    state: &AssignmentState,
    network: &Network,
    partition: &FrequencyPartition,
    i: usize,
) -> Result<Outcome> {
    let own = partition.color_range(color_of(network.cell(i)));
    let used_here = state.used_at(i);
    if state.accepted_in_range(i, own) < own.len() as usize {
        // Only same-colored cells draw from `own`, and those are never adjacent,
        // so "unused here" must coincide with "available".
        let f = own
            .scan(Direction::BottomToTop)
            .find(|f| !used_here.contains(f))
            .expect("counter below size");
        if !state.is_available_at(network, i, f) {
            return Err(Error::Invalid(format!(
                "own-range frequency {f} at {} is blocked by a neighbor",
                network.cell(i)
            )));
        }
        return Ok(Outcome::Accepted(f));
    }
    let shared = partition
        .shared
        .and_then(|s| state.first_available_at(network, i, s, Direction::BottomToTop));
    Ok(shared.map_or(Outcome::Rejected, Outcome::Accepted))
}

/// How a CACO2 cell picks frequencies: a primary range scanned bottom-to-top,
/// then an optional overflow range in a fixed direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caco2Plan {
    pub primary: FreqRange,
    pub overflow: Option<Overflow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overflow {
    pub color: Color,
    pub range: FreqRange,
    pub direction: Direction,
}

/// Overflow color and direction for a cell of color `own` with neighborhood `config`.
pub fn caco2_overflow(own: Color, config: NeighborConfig) -> Result<Option<(Color, Direction)>> {
    match config {
        NeighborConfig::Isolated => Ok(None),
        // A lone neighbor is handled like the two-color structure: overflow
        // into the successor color's range, top-down.
        NeighborConfig::StructureA {
            neighbor_color,
            k: 1,
        } => {
            let y = if own.precedes(neighbor_color) {
                neighbor_color
            } else {
                own.successor()
            };
            Ok(Some((y, Direction::TopToBottom)))
        }
        NeighborConfig::StructureA { neighbor_color, .. } => {
            let z = own.third(neighbor_color);
            let dir = if own.precedes(neighbor_color) {
                Direction::BottomToTop
            } else {
                Direction::TopToBottom
            };
            Ok(Some((z, dir)))
        }
        NeighborConfig::StructureB { color1, color2 } => {
            let y = [color1, color2]
                .into_iter()
                .find(|&y| own.precedes(y))
                .ok_or_else(|| {
                    Error::Invalid(format!(
                        "uncovered neighbor colors {color1}/{color2} for {own} cell"
                    ))
                })?;
            Ok(Some((y, Direction::TopToBottom)))
        }
        NeighborConfig::General { .. } => Err(Error::NotTriangleFree),
    }
}

pub fn caco2_plan(
    network: &Network,
    partition: &FrequencyPartition,
    i: usize,
) -> Result<Caco2Plan> {
    let own = color_of(network.cell(i));
    let config = network.classify_index(i);
    if config == NeighborConfig::Isolated {
        return Ok(Caco2Plan {
            primary: FreqRange::new(1, partition.omega),
            overflow: None,
        });
    }
    let overflow = caco2_overflow(own, config)?.map(|(color, direction)| Overflow {
        color,
        range: partition.color_range(color),
        direction,
    });
    Ok(Caco2Plan {
        primary: partition.color_range(own),
        overflow,
    })
}

fn caco2_at(state: &AssignmentState, network: &Network, plan: &Caco2Plan, i: usize) -> Outcome {
    state
        .first_available_at(network, i, plan.primary, Direction::BottomToTop)
        .or_else(|| {
            plan.overflow
                .and_then(|o| state.first_available_at(network, i, o.range, o.direction))
        })
        .map_or(Outcome::Rejected, Outcome::Accepted)
}

pub fn caco2_next(
    state: &AssignmentState,
    network: &Network,
    partition: &FrequencyPartition,
    c: CellId,
) -> Result<Outcome> {
    if !network.is_triangle_free() {
        return Err(Error::NotTriangleFree);
    }
    let i = network.require(c)?;
    let plan = caco2_plan(network, partition, i)?;
    Ok(caco2_at(state, network, &plan, i))
}

/// An algorithm bound to a network and spectrum size, with per-cell data
/// precomputed from the static topology.
#[derive(Clone, Debug)]
pub struct Policy {
    algorithm: Algorithm,
    partition: Option<FrequencyPartition>,
    plans: Vec<Caco2Plan>,
}

impl Policy {
    pub fn new(algorithm: Algorithm, network: &Network, omega: u32) -> Result<Policy> {
        let partition = algorithm.partition(omega)?;
        let plans = match (algorithm, &partition) {
            (Algorithm::Caco2, Some(p)) => {
                if !network.is_triangle_free() {
                    return Err(Error::NotTriangleFree);
                }
                (0..network.len())
                    .map(|i| caco2_plan(network, p, i))
                    .collect::<Result<Vec<_>>>()?
            }
            _ => Vec::new(),
        };
        Ok(Policy {
            algorithm,
            partition,
            plans,
        })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn partition(&self) -> Option<&FrequencyPartition> {
        self.partition.as_ref()
    }

    pub fn plans(&self) -> &[Caco2Plan] {
        &self.plans
    }

    pub fn decide(&self, state: &AssignmentState, network: &Network, i: usize) -> Result<Outcome> {
        match (self.algorithm, &self.partition) {
            (Algorithm::Greedy, _) => Ok(greedy_at(state, network, i)),
            (Algorithm::Caco | Algorithm::Partition { .. }, Some(p)) => {
                reservation_at(state, network, p, i)
            }
            (Algorithm::Caco2, Some(_)) => Ok(caco2_at(state, network, &self.plans[i], i)),
            _ => unreachable!("partition exists for every reservation algorithm"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub index: usize,
    pub cell: CellId,
    pub outcome: Outcome,
}

/// Everything observable about a finished run.
#[derive(Clone, Debug)]
pub struct RunTrace {
    pub algorithm: Algorithm,
    pub omega: u32,
    pub network: Network,
    pub partition: Option<FrequencyPartition>,
    pub plans: Vec<Caco2Plan>,
    pub events: Vec<Event>,
    pub demands: Vec<u32>,
    pub state: AssignmentState,
}

impl RunTrace {
    /// `R_i`.
    pub fn demand(&self, i: usize) -> u32 {
        self.demands[i]
    }

    /// `A_i`.
    pub fn accepted(&self, i: usize) -> usize {
        self.state.accepted_at(i)
    }

    pub fn accepted_counts(&self) -> Vec<usize> {
        (0..self.network.len()).map(|i| self.accepted(i)).collect()
    }

    /// `A_x(C_i)` for a labeled range of the partition.
    pub fn accepted_in(&self, i: usize, label: RangeLabel) -> usize {
        let Some(p) = &self.partition else { return 0 };
        let range = match label {
            RangeLabel::Color(c) => Some(p.color_range(c)),
            RangeLabel::Shared => p.shared,
        };
        range.map_or(0, |r| self.state.accepted_in_range(i, r))
    }

    /// `A_S(C_i)`.
    pub fn shared_accepted(&self, i: usize) -> usize {
        self.accepted_in(i, RangeLabel::Shared)
    }

    pub fn total_accepted(&self) -> usize {
        self.state.total_accepted()
    }

    pub fn total_demand(&self) -> u64 {
        self.demands.iter().map(|&d| d as u64).sum()
    }

    /// Re-applies the accepted outcomes in order, calling `visit` with the
    /// state each request saw at decision time.
    pub fn replay<F>(&self, mut visit: F) -> Result<()>
    where
        F: FnMut(&AssignmentState, usize, &Event),
    {
        let mut state = AssignmentState::new(&self.network, self.omega);
        for e in &self.events {
            let i = self.network.require(e.cell)?;
            visit(&state, i, e);
            if let Outcome::Accepted(f) = e.outcome {
                state.assign_at(&self.network, i, f)?;
            }
        }
        Ok(())
    }

    pub fn rejected_cells(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .events
            .iter()
            .filter(|e| e.outcome == Outcome::Rejected)
            .map(|e| {
                self.network
                    .index_of(e.cell)
                    .expect("event cell in network")
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Incremental driver: feed requests one by one and observe public outcomes.
pub struct Session<'a> {
    network: &'a Network,
    omega: u32,
    policy: Policy,
    state: AssignmentState,
    events: Vec<Event>,
    demands: Vec<u32>,
}

impl<'a> Session<'a> {
    pub fn new(algorithm: Algorithm, network: &'a Network, omega: u32) -> Result<Self> {
        let policy = Policy::new(algorithm, network, omega)?;
        Ok(Session {
            network,
            omega,
            policy,
            state: AssignmentState::new(network, omega),
            events: Vec::new(),
            demands: vec![0; network.len()],
        })
    }

    pub fn submit(&mut self, c: CellId) -> Result<Outcome> {
        let index = self.events.len();
        let i = self
            .network
            .index_of(c)
            .ok_or(Error::UnknownRequestCell { index, cell: c })?;
        let outcome = self.policy.decide(&self.state, self.network, i)?;
        if let Outcome::Accepted(f) = outcome {
            self.state.assign_at(self.network, i, f)?;
        }
        self.demands[i] += 1;
        self.events.push(Event {
            index,
            cell: c,
            outcome,
        });
        Ok(outcome)
    }

    pub fn state(&self) -> &AssignmentState {
        &self.state
    }

    pub fn accepted_at(&self, c: CellId) -> usize {
        self.network
            .index_of(c)
            .map_or(0, |i| self.state.accepted_at(i))
    }

    /// Requests seen so far per cell index.
    pub fn demands(&self) -> &[u32] {
        &self.demands
    }

    pub fn finish(self) -> RunTrace {
        RunTrace {
            algorithm: self.policy.algorithm,
            omega: self.omega,
            network: self.network.clone(),
            partition: self.policy.partition,
            plans: self.policy.plans,
            events: self.events,
            demands: self.demands,
            state: self.state,
        }
    }
}

pub fn run_sequence(
    algorithm: Algorithm,
    network: &Network,
    omega: u32,
    requests: &[CellId],
) -> Result<RunTrace> {
    let mut session = Session::new(algorithm, network, omega)?;
    for &c in requests {
        session.submit(c)?;
    }
    Ok(session.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(q: i32, r: i32) -> CellId {
        CellId::new(q, r)
    }

    fn star() -> Network {
        Network::new([c(0, 0), c(1, 0), c(0, -1), c(-1, 1)])
    }

    fn accepted(trace: &RunTrace) -> Vec<Frequency> {
        trace
            .events
            .iter()
            .filter_map(|e| match e.outcome {
                Outcome::Accepted(f) => Some(f),
                Outcome::Rejected => None,
            })
            .collect()
    }

    #[test]
    fn selectors_round_trip() {
        for s in ["greedy", "caco", "caco2", "partition:2:1", "partition:1:3"] {
            assert_eq!(s.parse::<Algorithm>().unwrap().to_string(), s);
        }
        for bad in ["", "cac", "partition:0:1", "partition:1", "partition:a:b"] {
            assert!(bad.parse::<Algorithm>().is_err(), "{bad}");
        }
    }

    #[test]
    fn greedy_examples() {
        let net = Network::new([c(0, 0), c(1, 0)]);
        let mut st = AssignmentState::new(&net, 4);
        assert_eq!(
            greedy_next(&st, &net, c(0, 0)).unwrap(),
            Outcome::Accepted(1)
        );
        st.assign(&net, c(0, 0), 1).unwrap();
        st.assign(&net, c(0, 0), 2).unwrap();
        assert_eq!(
            greedy_next(&st, &net, c(1, 0)).unwrap(),
            Outcome::Accepted(3)
        );
        st.assign(&net, c(1, 0), 3).unwrap();
        st.assign(&net, c(0, 0), 4).unwrap();
        assert_eq!(greedy_next(&st, &net, c(1, 0)).unwrap(), Outcome::Rejected);
    }

    #[test]
    fn caco_single_cell_takes_own_then_shared() {
        let net = Network::new([c(0, 0)]);
        let trace = run_sequence(Algorithm::Caco, &net, 21, &[c(0, 0); 10]).unwrap();
        assert_eq!(accepted(&trace), vec![1, 2, 3, 4, 5, 6, 19, 20, 21]);
        assert_eq!(trace.events[9].outcome, Outcome::Rejected);
        assert_eq!(trace.shared_accepted(0), 3);
    }

    #[test]
    fn caco_green_cell_falls_back_to_shared() {
        let net = Network::new([c(1, 0)]);
        let p = make_partition_caco(21).unwrap();
        let mut st = AssignmentState::new(&net, 21);
        for f in 7..=12 {
            st.assign(&net, c(1, 0), f).unwrap();
        }
        assert_eq!(
            caco_next(&st, &net, &p, c(1, 0)).unwrap(),
            Outcome::Accepted(19)
        );
    }

    #[test]
    fn caco_rejects_when_neighbor_holds_shared() {
        let net = Network::new([c(0, 0), c(1, 0)]);
        let p = make_partition_caco(21).unwrap();
        let mut st = AssignmentState::new(&net, 21);
        for f in 19..=21 {
            st.assign(&net, c(0, 0), f).unwrap();
        }
        for f in 7..=12 {
            st.assign(&net, c(1, 0), f).unwrap();
        }
        assert_eq!(
            caco_next(&st, &net, &p, c(1, 0)).unwrap(),
            Outcome::Rejected
        );
    }

    #[test]
    fn partition_family_examples() {
        let net = Network::new([c(0, 0)]);
        let t = run_sequence(Algorithm::Partition { x: 1, y: 1 }, &net, 4, &[c(0, 0); 4]).unwrap();
        assert_eq!(t.total_accepted(), 2);
        let t = run_sequence(
            Algorithm::Partition { x: 3, y: 1 },
            &net,
            10,
            &[c(0, 0); 10],
        )
        .unwrap();
        assert_eq!(t.total_accepted(), 4);
        assert!(run_sequence(Algorithm::Partition { x: 3, y: 1 }, &net, 12, &[]).is_err());
    }

    #[test]
    fn partition_two_one_matches_caco() {
        let net = Network::flower();
        let reqs: Vec<CellId> = (0..120).map(|k| net.cell((k * 5 + k / 7) % 7)).collect();
        let a = run_sequence(Algorithm::Caco, &net, 21, &reqs).unwrap();
        let b = run_sequence(Algorithm::Partition { x: 2, y: 1 }, &net, 21, &reqs).unwrap();
        assert_eq!(a.events, b.events);
        let p = make_partition_caco(21).unwrap();
        let st = AssignmentState::new(&net, 21);
        assert_eq!(
            partition_family_next(&st, &net, 2, 1, c(0, 0)).unwrap(),
            caco_next(&st, &net, &p, c(0, 0)).unwrap()
        );
    }

    #[test]
    fn caco2_isolated_uses_whole_spectrum() {
        let net = Network::new([c(0, 0)]);
        let t = run_sequence(Algorithm::Caco2, &net, 9, &[c(0, 0); 10]).unwrap();
        assert_eq!(accepted(&t), (1..=9).collect::<Vec<_>>());
        assert_eq!(t.events[9].outcome, Outcome::Rejected);
    }

    #[test]
    fn caco2_structure_a_overflow() {
        let t = run_sequence(Algorithm::Caco2, &star(), 9, &[c(0, 0); 7]).unwrap();
        assert_eq!(accepted(&t), vec![1, 2, 3, 7, 8, 9]);
    }

    #[test]
    fn caco2_structure_b_overflow() {
        // R cell between a B neighbor (-1,0) and a G neighbor (1,0)
        let net = Network::new([c(-1, 0), c(0, 0), c(1, 0)]);
        let t = run_sequence(Algorithm::Caco2, &net, 9, &[c(0, 0); 7]).unwrap();
        assert_eq!(accepted(&t), vec![1, 2, 3, 6, 5, 4]);
    }

    #[test]
    fn caco2_requires_triangle_free() {
        let net = Network::flower();
        assert_eq!(
            run_sequence(Algorithm::Caco2, &net, 9, &[]).unwrap_err(),
            Error::NotTriangleFree
        );
        let p = make_partition_caco2(9).unwrap();
        let st = AssignmentState::new(&net, 9);
        assert_eq!(
            caco2_next(&st, &net, &p, c(0, 0)).unwrap_err(),
            Error::NotTriangleFree
        );
    }

    #[test]
    fn caco2_overflow_table() {
        use Color::*;
        use Direction::*;
        let a = |y, k| NeighborConfig::StructureA {
            neighbor_color: y,
            k,
        };
        let b = |y, z| NeighborConfig::StructureB {
            color1: y,
            color2: z,
        };
        let cases = [
            (R, a(G, 3), (B, BottomToTop)),
            (R, a(B, 3), (G, TopToBottom)),
            (G, a(B, 2), (R, BottomToTop)),
            (G, a(R, 3), (B, TopToBottom)),
            (B, a(R, 3), (G, BottomToTop)),
            (B, a(G, 2), (R, TopToBottom)),
            (R, b(G, B), (G, TopToBottom)),
            (R, b(B, G), (G, TopToBottom)),
            (G, b(R, B), (B, TopToBottom)),
            (B, b(G, R), (R, TopToBottom)),
            (R, a(G, 1), (G, TopToBottom)),
            (R, a(B, 1), (G, TopToBottom)),
            (G, a(R, 1), (B, TopToBottom)),
            (B, a(R, 1), (R, TopToBottom)),
        ];
        for (x, cfg, want) in cases {
            assert_eq!(caco2_overflow(x, cfg).unwrap(), Some(want), "{x} {cfg:?}");
        }
        assert_eq!(caco2_overflow(R, NeighborConfig::Isolated).unwrap(), None);
        assert!(caco2_overflow(R, NeighborConfig::General { degree: 4 }).is_err());
    }

    #[test]
    fn unknown_request_cell_names_index() {
        let net = Network::new([c(0, 0)]);
        let err =
            run_sequence(Algorithm::Greedy, &net, 3, &[c(0, 0), c(0, 0), c(4, 4)]).unwrap_err();
        assert_eq!(
            err,
            Error::UnknownRequestCell {
                index: 2,
                cell: c(4, 4)
            }
        );
    }

    #[test]
    fn empty_sequence_has_zero_counters() {
        let t = run_sequence(Algorithm::Caco, &star(), 21, &[]).unwrap();
        assert_eq!(t.total_accepted(), 0);
        assert!(t.demands.iter().all(|&d| d == 0));
    }

    #[test]
    fn fig2_counts() {
        let net = star();
        let mut reqs = vec![c(0, 0); 21];
        let t = run_sequence(Algorithm::Caco, &net, 21, &reqs).unwrap();
        assert_eq!(t.accepted(net.index_of(c(0, 0)).unwrap()), 9);
        for outer in [c(1, 0), c(0, -1), c(-1, 1)] {
            reqs.extend(std::iter::repeat_n(outer, 21));
        }
        let t = run_sequence(Algorithm::Caco, &net, 21, &reqs).unwrap();
        assert_eq!(t.total_accepted(), 27);
    }
}
