//! Finite hexagonal cell layouts.
//!
//! Cells live on axial coordinates `(q, r)`. Two cells interfere when their
//! coordinate difference is one of the six unit hex directions. A network is
//! an explicit finite set of cells; adjacency is always derived from the
//! coordinates and never taken as input.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The six unit directions, listed in rotational order around a cell so that
/// consecutive entries (cyclically) are themselves adjacent.
pub const HEX_DIRECTIONS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

/// Axial hex coordinate. Serializes as the pair `[q, r]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i32, i32)", into = "(i32, i32)")]
pub struct CellId {
    pub q: i32,
    pub r: i32,
}

impl CellId {
    pub const fn new(q: i32, r: i32) -> Self {
        CellId { q, r }
    }

    pub fn is_adjacent(self, other: CellId) -> bool {
        let d = (other.q - self.q, other.r - self.r);
        HEX_DIRECTIONS.contains(&d)
    }

    pub fn offset(self, (dq, dr): (i32, i32)) -> CellId {
        CellId::new(self.q + dq, self.r + dr)
    }

    pub fn color(self) -> Color {
        color_of(self)
    }
}

impl From<(i32, i32)> for CellId {
    fn from((q, r): (i32, i32)) -> Self {
        CellId { q, r }
    }
}

impl From<CellId> for (i32, i32) {
    fn from(c: CellId) -> Self {
        (c.q, c.r)
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.q, self.r)
    }
}

/// Base color of a cell in the canonical proper 3-coloring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    R,
    G,
    B,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::R, Color::G, Color::B];

    pub fn index(self) -> usize {
        match self {
            Color::R => 0,
            Color::G => 1,
            Color::B => 2,
        }
    }

    pub fn from_index(i: usize) -> Color {
        Color::ALL[i % 3]
    }

    /// Cyclic successor: R -> G -> B -> R.
    pub fn successor(self) -> Color {
        Color::from_index(self.index() + 1)
    }

    pub fn predecessor(self) -> Color {
        Color::from_index(self.index() + 2)
    }

    /// True when `self -> other` in the cyclic order.
    pub fn precedes(self, other: Color) -> bool {
        self.successor() == other
    }

    /// The color different from both `self` and `other` (which must differ).
    pub fn third(self, other: Color) -> Color {
        debug_assert_ne!(self, other);
        Color::from_index(3 - self.index() - other.index())
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Color::R => "R",
            Color::G => "G",
            Color::B => "B",
        };
        f.write_str(s)
    }
}

/// Canonical coloring: `(q - r) mod 3`, with R = 0, G = 1, B = 2.
pub fn color_of(c: CellId) -> Color {
    Color::from_index((c.q - c.r).rem_euclid(3) as usize)
}

/// Shape of a cell's neighborhood.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NeighborConfig {
    Isolated,
    /// All `k` neighbors share `neighbor_color`.
    StructureA {
        neighbor_color: Color,
        k: usize,
    },
    /// Exactly two neighbors of distinct colors.
    StructureB {
        color1: Color,
        color2: Color,
    },
    General {
        degree: usize,
    },
}

impl NeighborConfig {
    /// StructureA with fewer than three neighbors. Triangle-free analyses
    /// picture only the three-neighbor case, so these cells get flagged.
    pub fn is_degenerate(self) -> bool {
        matches!(self, NeighborConfig::StructureA { k, .. } if k < 3)
    }
}

/// A finite set of hex cells with derived adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    cells: Vec<CellId>,
    index: BTreeMap<CellId, usize>,
    adj: Vec<Vec<usize>>,
    triangle_free: bool,
}

impl Network {
    pub fn new<I>(cells: I) -> Network
    where
        I: IntoIterator<Item = CellId>,
    {
        let mut cells: Vec<CellId> = cells.into_iter().collect();
        cells.sort();
        cells.dedup();
        let index: BTreeMap<CellId, usize> =
            cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let adj: Vec<Vec<usize>> = cells
            .iter()
            .map(|&c| {
                let mut ns: Vec<usize> = HEX_DIRECTIONS
                    .iter()
                    .filter_map(|&d| index.get(&c.offset(d)).copied())
                    .collect();
                ns.sort_unstable();
                ns
            })
            .collect();
        let mut net = Network {
            cells,
            index,
            adj,
            triangle_free: true,
        };
        net.triangle_free = net.scan_triangle_free();
        net
    }

    /// All cells within hex distance `radius` of the origin.
    pub fn hexagon(radius: i32) -> Network {
        let mut cells = Vec::new();
        for q in -radius..=radius {
            for r in (-radius).max(-q - radius)..=radius.min(-q + radius) {
                cells.push(CellId::new(q, r));
            }
        }
        Network::new(cells)
    }

    /// The 7-cell flower: origin plus its six neighbors.
    pub fn flower() -> Network {
        Network::hexagon(1)
    }

    pub fn cells(&self) -> &[CellId] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: CellId) -> bool {
        self.index.contains_key(&c)
    }

    pub fn index_of(&self, c: CellId) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn require(&self, c: CellId) -> Result<usize> {
        self.index_of(c).ok_or(Error::UnknownCell(c))
    }

    pub fn cell(&self, i: usize) -> CellId {
        self.cells[i]
    }

    /// Neighbor indices of cell index `i`, ascending (hence sorted by `(q, r)`).
    pub fn neighbor_indices(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn neighbors(&self, c: CellId) -> Result<Vec<CellId>> {
        let i = self.require(c)?;
        Ok(self.adj[i].iter().map(|&j| self.cells[j]).collect())
    }

    pub fn degree(&self, c: CellId) -> Result<usize> {
        Ok(self.adj[self.require(c)?].len())
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Adjacent index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn is_triangle_free(&self) -> bool {
        self.triangle_free
    }

    fn scan_triangle_free(&self) -> bool {
        self.edges().all(|(i, j)| {
            let (a, b) = (&self.adj[i], &self.adj[j]);
            !a.iter().any(|k| b.binary_search(k).is_ok())
        })
    }

    pub fn classify(&self, c: CellId) -> Result<NeighborConfig> {
        let i = self.require(c)?;
        Ok(self.classify_index(i))
    }

    pub fn classify_index(&self, i: usize) -> NeighborConfig {
        let ns = &self.adj[i];
        if ns.is_empty() {
            return NeighborConfig::Isolated;
        }
        let first = color_of(self.cells[ns[0]]);
        if ns.iter().all(|&j| color_of(self.cells[j]) == first) {
            return NeighborConfig::StructureA {
                neighbor_color: first,
                k: ns.len(),
            };
        }
        if ns.len() == 2 {
            return NeighborConfig::StructureB {
                color1: color_of(self.cells[ns[0]]),
                color2: color_of(self.cells[ns[1]]),
            };
        }
        NeighborConfig::General { degree: ns.len() }
    }
}

pub fn neighbors(network: &Network, c: CellId) -> Result<Vec<CellId>> {
    network.neighbors(c)
}

pub fn is_triangle_free(network: &Network) -> bool {
    network.is_triangle_free()
}

pub fn classify_neighbor_config(network: &Network, c: CellId) -> Result<NeighborConfig> {
    network.classify(c)
}
