//! Frequency partitions and the interference-checked assignment state.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hexnet::{CellId, Color, Network};

/// Frequencies are 1-based: the spectrum is `1..=omega`.
pub type Frequency = u32;

/// Inclusive, non-empty range of frequencies `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreqRange {
    pub lo: Frequency,
    pub hi: Frequency,
}

impl FreqRange {
    pub fn new(lo: Frequency, hi: Frequency) -> Self {
        debug_assert!(lo <= hi);
        FreqRange { lo, hi }
    }

    pub fn len(self) -> u32 {
        self.hi - self.lo + 1
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, f: Frequency) -> bool {
        self.lo <= f && f <= self.hi
    }

    pub fn scan(self, dir: Direction) -> Box<dyn Iterator<Item = Frequency>> {
        match dir {
            Direction::BottomToTop => Box::new(self.lo..=self.hi),
            Direction::TopToBottom => Box::new((self.lo..=self.hi).rev()),
        }
    }
}

impl fmt::Display for FreqRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}..{}}}", self.lo, self.hi)
    }
}

/// Scan order within a range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    BottomToTop,
    TopToBottom,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::BottomToTop => Direction::TopToBottom,
            Direction::TopToBottom => Direction::BottomToTop,
        }
    }
}

/// Per-color frequency ranges plus an optional shared range, tiling `1..=omega`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyPartition {
    pub omega: u32,
    pub red: FreqRange,
    pub green: FreqRange,
    pub blue: FreqRange,
    pub shared: Option<FreqRange>,
}

impl FrequencyPartition {
    pub fn color_range(&self, c: Color) -> FreqRange {
        match c {
            Color::R => self.red,
            Color::G => self.green,
            Color::B => self.blue,
        }
    }

    /// Every range in frequency order, labeled.
    pub fn labeled_ranges(&self) -> Vec<(RangeLabel, FreqRange)> {
        let mut v = vec![
            (RangeLabel::Color(Color::R), self.red),
            (RangeLabel::Color(Color::G), self.green),
            (RangeLabel::Color(Color::B), self.blue),
        ];
        if let Some(s) = self.shared {
            v.push((RangeLabel::Shared, s));
        }
        v
    }

    pub fn label_of(&self, f: Frequency) -> Option<RangeLabel> {
        self.labeled_ranges()
            .into_iter()
            .find(|(_, r)| r.contains(f))
            .map(|(l, _)| l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RangeLabel {
    Color(Color),
    Shared,
}

/// Per-color ranges of `x*omega/(3x+y)` frequencies each followed by a shared
/// range of `y*omega/(3x+y)`.
pub fn make_partition_family(omega: u32, x_share: u32, y_share: u32) -> Result<FrequencyPartition> {
    if omega == 0 {
        return Err(Error::ZeroOmega);
    }
    if x_share == 0 || y_share == 0 {
        return Err(Error::Invalid(format!(
            "partition shares must be positive, got {x_share}:{y_share}"
        )));
    }
    let parts = 3 * x_share + y_share;
    if !omega.is_multiple_of(parts) {
        return Err(Error::Divisibility {
            omega,
            divisor: parts,
            what: format!("partition {x_share}:{y_share}"),
        });
    }
    let own = x_share * omega / parts;
    Ok(FrequencyPartition {
        omega,
        red: FreqRange::new(1, own),
        green: FreqRange::new(own + 1, 2 * own),
        blue: FreqRange::new(2 * own + 1, 3 * own),
        shared: Some(FreqRange::new(3 * own + 1, omega)),
    })
}

/// The 2:2:2:1 split used by CACO.
pub fn make_partition_caco(omega: u32) -> Result<FrequencyPartition> {
    make_partition_family(omega, 2, 1).map_err(|e| match e {
        Error::Divisibility { omega, divisor, .. } => Error::Divisibility {
            omega,
            divisor,
            what: "caco partition".into(),
        },
        e => e,
    })
}

/// Equal thirds, no shared range (CACO2).
pub fn make_partition_caco2(omega: u32) -> Result<FrequencyPartition> {
    if omega == 0 {
        return Err(Error::ZeroOmega);
    }
    if !omega.is_multiple_of(3) {
        return Err(Error::Divisibility {
            omega,
            divisor: 3,
            what: "caco2 partition".into(),
        });
    }
    let t = omega / 3;
    Ok(FrequencyPartition {
        omega,
        red: FreqRange::new(1, t),
        green: FreqRange::new(t + 1, 2 * t),
        blue: FreqRange::new(2 * t + 1, omega),
        shared: None,
    })
}

/// Frequencies in use, per cell. `assign` is the only mutator and refuses
/// anything that would break the interference constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentState {
    omega: u32,
    used: Vec<BTreeSet<Frequency>>,
}

impl AssignmentState {
    pub fn new(network: &Network, omega: u32) -> Self {
        AssignmentState {
            omega,
            used: vec![BTreeSet::new(); network.len()],
        }
    }

    pub fn omega(&self) -> u32 {
        self.omega
    }

    pub fn spectrum(&self) -> FreqRange {
        FreqRange::new(1, self.omega)
    }

    /// Frequencies in use at cell index `i`.
    pub fn used_at(&self, i: usize) -> &BTreeSet<Frequency> {
        &self.used[i]
    }

    pub fn used_in(&self, network: &Network, c: CellId) -> Result<&BTreeSet<Frequency>> {
        Ok(&self.used[network.require(c)?])
    }

    /// `A_i` for cell index `i`.
    pub fn accepted_at(&self, i: usize) -> usize {
        self.used[i].len()
    }

    /// `A_x(C_i)`: frequencies of `range` in use at cell index `i`.
    pub fn accepted_in_range(&self, i: usize, range: FreqRange) -> usize {
        self.used[i].range(range.lo..=range.hi).count()
    }

    pub fn total_accepted(&self) -> usize {
        self.used.iter().map(BTreeSet::len).sum()
    }

    pub fn is_available_at(&self, network: &Network, i: usize, f: Frequency) -> bool {
        if f == 0 || f > self.omega {
            return false;
        }
        !self.used[i].contains(&f)
            && network
                .neighbor_indices(i)
                .iter()
                .all(|&j| !self.used[j].contains(&f))
    }

    pub fn is_available(&self, network: &Network, c: CellId, f: Frequency) -> Result<bool> {
        Ok(self.is_available_at(network, network.require(c)?, f))
    }

    pub fn first_available_at(
        &self,
        network: &Network,
        i: usize,
        range: FreqRange,
        dir: Direction,
    ) -> Option<Frequency> {
        range
            .scan(dir)
            .find(|&f| self.is_available_at(network, i, f))
    }

    pub fn first_available(
        &self,
        network: &Network,
        c: CellId,
        range: FreqRange,
        dir: Direction,
    ) -> Result<Option<Frequency>> {
        Ok(self.first_available_at(network, network.require(c)?, range, dir))
    }

    pub fn assign(&mut self, network: &Network, c: CellId, f: Frequency) -> Result<()> {
        let i = network.require(c)?;
        self.assign_at(network, i, f)
    }

    pub fn assign_at(&mut self, network: &Network, i: usize, f: Frequency) -> Result<()> {
        let cell = network.cell(i);
        if f == 0 || f > self.omega {
            return Err(Error::FrequencyOutOfRange {
                frequency: f,
                omega: self.omega,
            });
        }
        if self.used[i].contains(&f) {
            return Err(Error::IllegalAssignment {
                cell,
                frequency: f,
                reason: "already in use in this cell".into(),
            });
        }
        if let Some(&j) = network
            .neighbor_indices(i)
            .iter()
            .find(|&&j| self.used[j].contains(&f))
        {
            return Err(Error::IllegalAssignment {
                cell,
                frequency: f,
                reason: format!("in use at neighbor {}", network.cell(j)),
            });
        }
        self.used[i].insert(f);
        Ok(())
    }

    /// Full rescan of the interference constraint. Returns the first
    /// offending `(cell, neighbor, frequency)` if any.
    pub fn find_conflict(&self, network: &Network) -> Option<(CellId, CellId, Frequency)> {
        for (i, j) in network.edges() {
            if let Some(&f) = self.used[i].intersection(&self.used[j]).next() {
                return Some((network.cell(i), network.cell(j), f));
            }
        }
        None
    }
}

pub fn is_available(
    state: &AssignmentState,
    network: &Network,
    c: CellId,
    f: Frequency,
) -> Result<bool> {
    state.is_available(network, c, f)
}

pub fn first_available(
    state: &AssignmentState,
    network: &Network,
    c: CellId,
    range: FreqRange,
    dir: Direction,
) -> Result<Option<Frequency>> {
    state.first_available(network, c, range, dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(q: i32, r: i32) -> CellId {
        CellId::new(q, r)
    }

    #[test]
    fn caco_partition_examples() {
        let p = make_partition_caco(21).unwrap();
        assert_eq!(p.red, FreqRange::new(1, 6));
        assert_eq!(p.green, FreqRange::new(7, 12));
        assert_eq!(p.blue, FreqRange::new(13, 18));
        assert_eq!(p.shared, Some(FreqRange::new(19, 21)));
        let p = make_partition_caco(7).unwrap();
        assert_eq!(
            (p.red, p.green, p.blue, p.shared.unwrap()),
            (
                FreqRange::new(1, 2),
                FreqRange::new(3, 4),
                FreqRange::new(5, 6),
                FreqRange::new(7, 7)
            )
        );
        assert!(matches!(
            make_partition_caco(10),
            Err(Error::Divisibility { divisor: 7, .. })
        ));
        assert_eq!(make_partition_caco(0), Err(Error::ZeroOmega));
    }

    #[test]
    fn caco2_partition_examples() {
        let p = make_partition_caco2(9).unwrap();
        assert_eq!(
            (p.red, p.green, p.blue),
            (
                FreqRange::new(1, 3),
                FreqRange::new(4, 6),
                FreqRange::new(7, 9)
            )
        );
        assert_eq!(p.shared, None);
        let p = make_partition_caco2(3).unwrap();
        assert_eq!((p.red.len(), p.green.len(), p.blue.len()), (1, 1, 1));
        assert!(matches!(
            make_partition_caco2(8),
            Err(Error::Divisibility { divisor: 3, .. })
        ));
    }

    #[test]
    fn caco_sizes_are_two_two_two_one() {
        for omega in (7..=10_000).step_by(7) {
            let p = make_partition_caco(omega).unwrap();
            let s = p.shared.unwrap().len();
            assert_eq!(p.red.len(), 2 * s);
            assert_eq!(p.green.len(), 2 * s);
            assert_eq!(p.blue.len(), 2 * s);
            assert_eq!(p.red.lo, 1);
            assert_eq!(p.shared.unwrap().hi, omega);
            assert_eq!(p.green.lo, p.red.hi + 1);
            assert_eq!(p.blue.lo, p.green.hi + 1);
            assert_eq!(p.shared.unwrap().lo, p.blue.hi + 1);
        }
    }

    #[test]
    fn availability_rules() {
        let net = Network::new([c(0, 0), c(1, 0), c(3, 3)]);
        let mut st = AssignmentState::new(&net, 12);
        for f in 1..=12 {
            assert!(st.is_available(&net, c(0, 0), f).unwrap());
        }
        st.assign(&net, c(1, 0), 5).unwrap();
        assert!(!st.is_available(&net, c(0, 0), 5).unwrap());
        assert!(!st.is_available(&net, c(1, 0), 5).unwrap());
        assert!(st.is_available(&net, c(3, 3), 5).unwrap());
        assert!(!st.is_available(&net, c(0, 0), 13).unwrap());
    }

    #[test]
    fn first_available_scans() {
        let net = Network::new([c(0, 0), c(1, 0)]);
        let mut st = AssignmentState::new(&net, 21);
        assert_eq!(
            st.first_available(&net, c(0, 0), FreqRange::new(1, 6), Direction::BottomToTop)
                .unwrap(),
            Some(1)
        );
        st.assign(&net, c(1, 0), 7).unwrap();
        st.assign(&net, c(1, 0), 8).unwrap();
        assert_eq!(
            st.first_available(&net, c(0, 0), FreqRange::new(7, 12), Direction::BottomToTop)
                .unwrap(),
            Some(9)
        );
        assert_eq!(
            st.first_available(&net, c(0, 0), FreqRange::new(4, 6), Direction::TopToBottom)
                .unwrap(),
            Some(6)
        );
        assert_eq!(
            st.first_available(&net, c(0, 0), FreqRange::new(7, 8), Direction::TopToBottom)
                .unwrap(),
            None
        );
    }

    #[test]
    fn assign_rejects_illegal() {
        let net = Network::new([c(0, 0), c(1, 0)]);
        let mut st = AssignmentState::new(&net, 4);
        st.assign(&net, c(0, 0), 1).unwrap();
        assert_eq!(st.accepted_at(net.index_of(c(0, 0)).unwrap()), 1);
        assert!(matches!(
            st.assign(&net, c(0, 0), 1),
            Err(Error::IllegalAssignment { .. })
        ));
        assert!(matches!(
            st.assign(&net, c(1, 0), 1),
            Err(Error::IllegalAssignment { .. })
        ));
        assert!(matches!(
            st.assign(&net, c(1, 0), 5),
            Err(Error::FrequencyOutOfRange { .. })
        ));
        assert!(matches!(
            st.assign(&net, c(9, 9), 2),
            Err(Error::UnknownCell(_))
        ));
        assert_eq!(st.find_conflict(&net), None);
    }

    proptest! {
        #[test]
        fn random_assignments_stay_interference_free(
            ops in proptest::collection::vec((0usize..7, 1u32..=9), 0..60)
        ) {
            let net = Network::flower();
            let mut st = AssignmentState::new(&net, 9);
            for (i, f) in ops {
                let ok = st.is_available_at(&net, i, f);
                let res = st.assign_at(&net, i, f);
                prop_assert_eq!(ok, res.is_ok());
                prop_assert!(st.find_conflict(&net).is_none());
            }
            let total: usize = (0..net.len()).map(|i| st.accepted_at(i)).sum();
            prop_assert_eq!(total, st.total_accepted());
        }

        #[test]
        fn first_available_is_extremal(
            used in proptest::collection::vec((0usize..7, 1u32..=12), 0..30),
            lo in 1u32..=12, len in 0u32..12
        ) {
            let net = Network::flower();
            let mut st = AssignmentState::new(&net, 12);
            for (i, f) in used {
                let _ = st.assign_at(&net, i, f);
            }
            let hi = (lo + len).min(12);
            let range = FreqRange::new(lo, hi);
            for i in 0..net.len() {
                let avail: Vec<u32> = (lo..=hi).filter(|&f| st.is_available_at(&net, i, f)).collect();
                prop_assert_eq!(st.first_available_at(&net, i, range, Direction::BottomToTop), avail.first().copied());
                prop_assert_eq!(st.first_available_at(&net, i, range, Direction::TopToBottom), avail.last().copied());
            }
        }
    }
}
