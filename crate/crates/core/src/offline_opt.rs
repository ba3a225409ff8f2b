//! Exact offline optimum for small instances, plus a clique relaxation bound.
//!
//! The offline problem: every one of the `omega` frequencies is handed to an
//! independent set of cells; cell `i` then serves `min(R_i, m_i)` calls where
//! `m_i` counts the frequencies it received. Frequencies are interchangeable,
//! so a solution is a multiset of independent sets, and since the objective is
//! monotone only maximal independent sets need to be considered.
//!
//! The solvers work on a [`ConflictGraph`] so that instances which are not hex
//! cell sets (odd holes, for instance) can be checked too.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hexnet::{CellId, Network};
use crate::spectrum::Frequency;

/// Interference graph on at most 64 vertices, stored as adjacency bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictGraph {
    adj: Vec<u64>,
}

impl ConflictGraph {
    pub fn from_network(network: &Network) -> Result<Self> {
        let n = network.len();
        if n > 64 {
            return Err(Error::TooLarge {
                solver: "conflict graph",
                detail: format!("{n} cells (max 64)"),
            });
        }
        let adj = (0..n)
            .map(|i| {
                network
                    .neighbor_indices(i)
                    .iter()
                    .fold(0u64, |m, &j| m | 1 << j)
            })
            .collect();
        Ok(ConflictGraph { adj })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > 64 {
            return Err(Error::TooLarge {
                solver: "conflict graph",
                detail: format!("{n} vertices (max 64)"),
            });
        }
        let mut adj = vec![0u64; n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::Invalid(format!(
                    "bad edge ({a},{b}) for {n} vertices"
                )));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(ConflictGraph { adj })
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn neighbors_mask(&self, i: usize) -> u64 {
        self.adj[i]
    }

    pub fn is_independent(&self, mask: u64) -> bool {
        bits(mask).all(|i| self.adj[i] & mask == 0)
    }

    pub fn is_clique(&self, mask: u64) -> bool {
        bits(mask).all(|i| mask & !(self.adj[i] | 1 << i) == 0)
    }

    fn all_mask(&self) -> u64 {
        low_mask(self.len())
    }

    /// Connected components of the subgraph induced by `within`.
    pub fn components(&self, within: u64) -> Vec<u64> {
        let mut left = within;
        let mut out = Vec::new();
        while left != 0 {
            let start = left.trailing_zeros() as usize;
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let i = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.adj[i] & within & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            left &= !comp;
            out.push(comp);
        }
        out
    }

    /// Maximal cliques of the subgraph induced by `within` (Bron–Kerbosch with pivoting).
    pub fn maximal_cliques(&self, within: u64) -> Vec<u64> {
        let mut out = Vec::new();
        bron_kerbosch(&self.adj, 0, within, 0, &mut out);
        out.sort_by_key(|&m| sorted_key(m));
        out
    }

    /// Maximal independent sets of the subgraph induced by `within`, in
    /// lexicographic order of their sorted vertex lists.
    pub fn maximal_independent_sets(&self, within: u64) -> Vec<u64> {
        let n = self.len();
        let complement: Vec<u64> = (0..n)
            .map(|i| !self.adj[i] & self.all_mask() & !(1 << i))
            .collect();
        let mut out = Vec::new();
        bron_kerbosch(&complement, 0, within, 0, &mut out);
        out.sort_by_key(|&m| sorted_key(m));
        out
    }
}

fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

fn sorted_key(m: u64) -> Vec<usize> {
    bits(m).collect()
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        if r != 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits(p | x)
        .max_by_key(|&u| (adj[u] & p).count_ones())
        .expect("p|x non-empty");
    for v in bits(p & !adj[pivot]) {
        bron_kerbosch(adj, r | 1 << v, p & adj[v], x & adj[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Per-cell request counts `R_i`, aligned with the network's cell order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemandVector(pub Vec<u32>);

impl DemandVector {
    pub fn new(network: &Network, demands: Vec<u32>) -> Result<Self> {
        if demands.len() != network.len() {
            return Err(Error::DemandShape {
                expected: network.len(),
                got: demands.len(),
            });
        }
        Ok(DemandVector(demands))
    }

    pub fn from_requests(network: &Network, requests: &[CellId]) -> Result<Self> {
        let mut d = vec![0u32; network.len()];
        for (index, &c) in requests.iter().enumerate() {
            let i = network
                .index_of(c)
                .ok_or(Error::UnknownRequestCell { index, cell: c })?;
            d[i] += 1;
        }
        Ok(DemandVector(d))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptLimits {
    pub max_cells: usize,
    pub max_omega: u32,
}

impl Default for OptLimits {
    fn default() -> Self {
        OptLimits {
            max_cells: 12,
            max_omega: 64,
        }
    }
}

impl OptLimits {
    pub const ORACLE: OptLimits = OptLimits {
        max_cells: 4,
        max_omega: 6,
    };

    fn check(&self, solver: &'static str, cells: usize, omega: u32) -> Result<()> {
        if cells > self.max_cells || omega > self.max_omega {
            return Err(Error::TooLarge {
                solver,
                detail: format!(
                    "{cells} cells, omega {omega} (limits: {} cells, omega {})",
                    self.max_cells, self.max_omega
                ),
            });
        }
        Ok(())
    }
}

/// Optimal offline value with a concrete conflict-free assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimumWitness {
    pub total: u64,
    /// `O_i` per cell index.
    pub per_cell: Vec<u32>,
    /// Frequencies given to each cell; `witness[i].len() == per_cell[i]`.
    pub witness: Vec<Vec<Frequency>>,
    /// Cell ids when solved over a hex network, empty for abstract graphs.
    pub cells: Vec<CellId>,
}

impl OptimumWitness {
    pub fn get(&self, i: usize) -> u32 {
        self.per_cell[i]
    }
}

pub fn exact_optimum(
    network: &Network,
    omega: u32,
    demands: &DemandVector,
) -> Result<OptimumWitness> {
    exact_optimum_with_limits(network, omega, demands, OptLimits::default())
}

pub fn exact_optimum_with_limits(
    network: &Network,
    omega: u32,
    demands: &DemandVector,
    limits: OptLimits,
) -> Result<OptimumWitness> {
    check_shape(network, demands)?;
    limits.check("exact optimum", network.len(), omega)?;
    let graph = ConflictGraph::from_network(network)?;
    let mut w = solve_exact(&graph, omega, demands.as_slice());
    w.cells = network.cells().to_vec();
    Ok(w)
}

pub fn exhaustive_oracle(
    network: &Network,
    omega: u32,
    demands: &DemandVector,
) -> Result<OptimumWitness> {
    check_shape(network, demands)?;
    let graph = ConflictGraph::from_network(network)?;
    let mut w = exhaustive_oracle_graph(&graph, omega, demands.as_slice())?;
    w.cells = network.cells().to_vec();
    Ok(w)
}

pub fn clique_upper_bound(network: &Network, omega: u32, demands: &DemandVector) -> Result<u64> {
    check_shape(network, demands)?;
    let graph = ConflictGraph::from_network(network)?;
    Ok(clique_upper_bound_graph(&graph, omega, demands.as_slice()))
}

fn check_shape(network: &Network, demands: &DemandVector) -> Result<()> {
    if demands.0.len() != network.len() {
        return Err(Error::DemandShape {
            expected: network.len(),
            got: demands.0.len(),
        });
    }
    Ok(())
}

/// Exact optimum by branch-and-bound over maximal-independent-set multiplicities.
pub fn solve_exact(graph: &ConflictGraph, omega: u32, demands: &[u32]) -> OptimumWitness {
    let n = graph.len();
    let cap: Vec<u32> = demands.iter().map(|&d| d.min(omega)).collect();
    let active = bits(graph.all_mask())
        .filter(|&i| cap[i] > 0)
        .fold(0u64, |m, i| m | 1 << i);
    let mut per_cell = vec![0u32; n];
    let mut witness = vec![Vec::new(); n];
    for comp in graph.components(active) {
        let sets = graph.maximal_independent_sets(comp);
        let cliques = graph.maximal_cliques(comp);
        let mut search = MisSearch::new(&sets, clique_partition(&cliques, comp), &cap, n);
        search.run(omega);
        let mut f: Frequency = 1;
        for (k, &set) in sets.iter().enumerate() {
            for _ in 0..search.best_mult[k] {
                for i in bits(set) {
                    if (witness[i].len() as u32) < cap[i] {
                        witness[i].push(f);
                    }
                }
                f += 1;
            }
        }
    }
    for i in 0..n {
        per_cell[i] = witness[i].len() as u32;
    }
    OptimumWitness {
        total: per_cell.iter().map(|&o| o as u64).sum(),
        per_cell,
        witness,
        cells: Vec::new(),
    }
}

/// Greedy cover of `within` by disjoint cliques, largest maximal cliques first.
fn clique_partition(cliques: &[u64], within: u64) -> Vec<u64> {
    let mut sorted: Vec<u64> = cliques.to_vec();
    sorted.sort_by_key(|&m| (std::cmp::Reverse(m.count_ones()), sorted_key(m)));
    let mut left = within;
    let mut parts = Vec::new();
    for k in sorted {
        let part = k & left;
        if part != 0 {
            parts.push(part);
            left &= !part;
        }
    }
    parts.extend(bits(left).map(|i| 1u64 << i));
    parts
}

struct MisSearch<'a> {
    sets: &'a [u64],
    suffix_union: Vec<u64>,
    parts: Vec<u64>,
    cap: &'a [u32],
    cover: Vec<u32>,
    mult: Vec<u32>,
    best: u64,
    best_mult: Vec<u32>,
    /// Proven upper bounds on the remaining gain, keyed by search state.
    memo: HashMap<u128, u64>,
}

impl<'a> MisSearch<'a> {
    fn new(sets: &'a [u64], parts: Vec<u64>, cap: &'a [u32], n: usize) -> Self {
        let mut suffix_union = vec![0u64; sets.len() + 1];
        for k in (0..sets.len()).rev() {
            suffix_union[k] = suffix_union[k + 1] | sets[k];
        }
        MisSearch {
            sets,
            suffix_union,
            parts,
            cap,
            cover: vec![0; n],
            mult: vec![0; sets.len()],
            best: 0,
            best_mult: vec![0; sets.len()],
            memo: HashMap::new(),
        }
    }

    /// `(k, rem, residual demand of every cell still reachable)`. Residuals
    /// and `rem` are below 128, and at most 14 reachable cells share the key
    /// with `k`.
    fn key(&self, k: usize, rem: u32) -> Option<u128> {
        let reach = self.suffix_union[k];
        if reach.count_ones() > 14 || k >= 128 || rem >= 128 {
            return None;
        }
        let mut key = (k as u128) << 7 | rem as u128;
        for i in bits(reach) {
            key = key << 7 | self.residual(i).min(127) as u128;
        }
        Some(key)
    }

    fn residual(&self, i: usize) -> u32 {
        self.cap[i].saturating_sub(self.cover[i])
    }

    fn run(&mut self, omega: u32) {
        self.dfs(0, omega, 0);
    }

    fn upper_bound(&self, k: usize, rem: u32) -> u64 {
        let reach = self.suffix_union[k];
        let rem64 = rem as u64;
        let by_parts: u64 = self
            .parts
            .iter()
            .map(|&p| rem64.min(bits(p & reach).map(|i| self.residual(i) as u64).sum()))
            .sum();
        let needy = bits(reach)
            .filter(|&i| self.residual(i) > 0)
            .fold(0u64, |m, i| m | 1 << i);
        let widest = self.sets[k..]
            .iter()
            .map(|&s| (s & needy).count_ones() as u64)
            .max()
            .unwrap_or(0);
        by_parts.min(rem64 * widest)
    }

    fn dfs(&mut self, k: usize, rem: u32, value: u64) {
        if value > self.best {
            self.best = value;
            self.best_mult.copy_from_slice(&self.mult);
        }
        if k == self.sets.len() || rem == 0 {
            return;
        }
        if value + self.upper_bound(k, rem) <= self.best {
            return;
        }
        let key = self.key(k, rem);
        if let Some(&ub) = key.as_ref().and_then(|key| self.memo.get(key)) {
            if value + ub <= self.best {
                return;
            }
        }
        let set = self.sets[k];
        let most = bits(set)
            .map(|i| self.residual(i))
            .max()
            .unwrap_or(0)
            .min(rem);
        for m in (0..=most).rev() {
            let gain: u64 = bits(set).map(|i| self.residual(i).min(m) as u64).sum();
            for i in bits(set) {
                self.cover[i] += m;
            }
            self.mult[k] = m;
            self.dfs(k + 1, rem - m, value + gain);
            self.mult[k] = 0;
            for i in bits(set) {
                self.cover[i] -= m;
            }
        }
        // Everything below was either explored or pruned against the current
        // incumbent, so no completion from here beats it.
        if let Some(key) = key {
            self.memo.insert(key, self.best - value);
        }
    }
}

/// Brute force over every per-cell frequency subset. Independent of the
/// independent-set search; meant for validating it on tiny instances.
pub fn exhaustive_oracle_graph(
    graph: &ConflictGraph,
    omega: u32,
    demands: &[u32],
) -> Result<OptimumWitness> {
    OptLimits::ORACLE.check("exhaustive oracle", graph.len(), omega)?;
    let n = graph.len();
    let mut chosen = vec![0u64; n];
    let mut best = (0u32, vec![0u64; n]);
    oracle_dfs(graph, omega, demands, 0, &mut chosen, 0, &mut best);
    let witness: Vec<Vec<Frequency>> = best
        .1
        .iter()
        .map(|&m| bits(m).map(|b| b as Frequency + 1).collect())
        .collect();
    let per_cell: Vec<u32> = witness.iter().map(|w| w.len() as u32).collect();
    Ok(OptimumWitness {
        total: best.0 as u64,
        per_cell,
        witness,
        cells: Vec::new(),
    })
}

fn oracle_dfs(
    graph: &ConflictGraph,
    omega: u32,
    demands: &[u32],
    i: usize,
    chosen: &mut Vec<u64>,
    value: u32,
    best: &mut (u32, Vec<u64>),
) {
    if i == graph.len() {
        if value > best.0 {
            *best = (value, chosen.clone());
        }
        return;
    }
    let blocked = bits(graph.neighbors_mask(i) & low_mask(i)).fold(0u64, |m, j| m | chosen[j]);
    for subset in 0..(1u64 << omega) {
        if subset & blocked != 0 || subset.count_ones() > demands[i] {
            continue;
        }
        chosen[i] = subset;
        oracle_dfs(
            graph,
            omega,
            demands,
            i + 1,
            chosen,
            value + subset.count_ones(),
            best,
        );
    }
    chosen[i] = 0;
}

/// Integer optimum of `max sum x_i` subject to `0 <= x_i <= R_i` and
/// `sum_{i in K} x_i <= omega` for every maximal clique `K`.
pub fn clique_upper_bound_graph(graph: &ConflictGraph, omega: u32, demands: &[u32]) -> u64 {
    let cap: Vec<u32> = demands.iter().map(|&d| d.min(omega)).collect();
    let active = bits(graph.all_mask())
        .filter(|&i| cap[i] > 0)
        .fold(0u64, |m, i| m | 1 << i);
    graph
        .components(active)
        .into_iter()
        .map(|comp| {
            let cliques = graph.maximal_cliques(comp);
            let order: Vec<usize> = bits(comp).collect();
            let mut s = CliqueSearch {
                order: &order,
                cliques: &cliques,
                parts: clique_partition(&cliques, comp),
                cap: &cap,
                load: vec![0; cliques.len()],
                omega,
                best: 0,
            };
            s.dfs(0, 0, comp);
            s.best
        })
        .sum()
}

struct CliqueSearch<'a> {
    order: &'a [usize],
    cliques: &'a [u64],
    parts: Vec<u64>,
    cap: &'a [u32],
    load: Vec<u32>,
    omega: u32,
    best: u64,
}

impl CliqueSearch<'_> {
    fn room(&self, i: usize) -> u32 {
        self.cliques
            .iter()
            .zip(&self.load)
            .filter(|(k, _)| *k >> i & 1 == 1)
            .map(|(_, &l)| self.omega - l)
            .min()
            .unwrap_or(self.omega)
            .min(self.cap[i])
    }

    fn bound(&self, open: u64) -> u64 {
        self.parts
            .iter()
            .map(|&p| {
                let here = p & open;
                if here == 0 {
                    return 0;
                }
                let room = self
                    .cliques
                    .iter()
                    .zip(&self.load)
                    .filter(|(k, _)| *k & here == here)
                    .map(|(_, &l)| (self.omega - l) as u64)
                    .min()
                    .unwrap_or(self.omega as u64);
                room.min(bits(here).map(|i| self.room(i) as u64).sum())
            })
            .sum()
    }

    fn dfs(&mut self, pos: usize, value: u64, open: u64) {
        if value > self.best {
            self.best = value;
        }
        if pos == self.order.len() || value + self.bound(open) <= self.best {
            return;
        }
        let i = self.order[pos];
        let open = open & !(1 << i);
        for x in (0..=self.room(i)).rev() {
            for (k, l) in self.cliques.iter().zip(self.load.iter_mut()) {
                if k >> i & 1 == 1 {
                    *l += x;
                }
            }
            self.dfs(pos + 1, value + x as u64, open);
            for (k, l) in self.cliques.iter().zip(self.load.iter_mut()) {
                if k >> i & 1 == 1 {
                    *l -= x;
                }
            }
        }
    }
}

/// Independent re-check of a witness: caps, sizes and interference.
pub fn verify_witness(
    graph: &ConflictGraph,
    omega: u32,
    demands: &[u32],
    w: &OptimumWitness,
) -> Result<()> {
    let n = graph.len();
    if w.per_cell.len() != n || w.witness.len() != n {
        return Err(Error::Invalid("witness shape does not match graph".into()));
    }
    for i in 0..n {
        let set = &w.witness[i];
        if set.len() as u32 != w.per_cell[i] || w.per_cell[i] > demands[i] {
            return Err(Error::Invalid(format!(
                "cell {i}: witness size/cap violated"
            )));
        }
        let mut sorted = set.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != set.len() || sorted.iter().any(|&f| f == 0 || f > omega) {
            return Err(Error::Invalid(format!(
                "cell {i}: duplicate or out-of-range frequency"
            )));
        }
        for j in (i + 1)..n {
            if graph.adjacent(i, j) && set.iter().any(|f| w.witness[j].contains(f)) {
                return Err(Error::Invalid(format!(
                    "cells {i} and {j} share a frequency"
                )));
            }
        }
    }
    if w.total != w.per_cell.iter().map(|&o| o as u64).sum::<u64>() {
        return Err(Error::Invalid(
            "total is not the sum of per-cell values".into(),
        ));
    }
    Ok(())
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

    fn exact_graph(g: &ConflictGraph, omega: u32, d: &[u32]) -> u64 {
        let w = solve_exact(g, omega, d);
        verify_witness(g, omega, d, &w).unwrap();
        w.total
    }

    #[test]
    fn adjacent_pair_shares_pool() {
        let net = Network::new([c(0, 0), c(1, 0)]);
        let d = DemandVector::new(&net, vec![4, 4]).unwrap();
        assert_eq!(exact_optimum(&net, 4, &d).unwrap().total, 4);
        assert_eq!(clique_upper_bound(&net, 4, &d).unwrap(), 4);
    }

    #[test]
    fn single_cell_capacity() {
        let net = Network::new([c(0, 0)]);
        let d = DemandVector::new(&net, vec![10]).unwrap();
        assert_eq!(exact_optimum(&net, 4, &d).unwrap().total, 4);
    }

    #[test]
    fn star_rejects_center() {
        let net = star();
        let d = DemandVector::new(&net, vec![21; 4]).unwrap();
        let w = exact_optimum(&net, 21, &d).unwrap();
        assert_eq!(w.total, 63);
        let center = net.index_of(c(0, 0)).unwrap();
        for i in 0..4 {
            assert_eq!(w.get(i), if i == center { 0 } else { 21 });
        }
        assert_eq!(clique_upper_bound(&net, 21, &d).unwrap(), 63);
    }

    #[test]
    fn five_cycle_separates_bound_from_optimum() {
        let g = ConflictGraph::cycle(5).unwrap();
        assert_eq!(exact_graph(&g, 2, &[2; 5]), 4);
        assert_eq!(exhaustive_oracle_graph_unbounded(&g, 2, &[2; 5]), 4);
        assert_eq!(clique_upper_bound_graph(&g, 2, &[2; 5]), 5);
    }

    // Plain enumeration of every per-frequency independent set, no size limits.
    fn exhaustive_oracle_graph_unbounded(g: &ConflictGraph, omega: u32, d: &[u32]) -> u64 {
        let n = g.len();
        let indep: Vec<u64> = (0..(1u64 << n)).filter(|&m| g.is_independent(m)).collect();
        let mut best = 0;
        let mut stack = vec![(0u32, vec![0u32; n])];
        while let Some((f, cover)) = stack.pop() {
            if f == omega {
                let v: u64 = cover.iter().zip(d).map(|(&m, &r)| m.min(r) as u64).sum();
                best = best.max(v);
                continue;
            }
            for &s in &indep {
                let mut next = cover.clone();
                for i in bits(s) {
                    next[i] += 1;
                }
                stack.push((f + 1, next));
            }
        }
        best
    }

    #[test]
    fn oracle_examples() {
        let path = Network::new([c(-1, 0), c(0, 0), c(1, 0)]);
        let d = DemandVector::new(&path, vec![2, 2, 2]).unwrap();
        assert_eq!(exhaustive_oracle(&path, 2, &d).unwrap().total, 4);
        assert_eq!(exact_optimum(&path, 2, &d).unwrap().total, 4);
        let tri = Network::new([c(0, 0), c(1, 0), c(0, 1)]);
        let d = DemandVector::new(&tri, vec![3, 3, 3]).unwrap();
        assert_eq!(exhaustive_oracle(&tri, 3, &d).unwrap().total, 3);
        let one = Network::new([c(0, 0)]);
        for r in 0..8 {
            let d = DemandVector::new(&one, vec![r]).unwrap();
            assert_eq!(
                exhaustive_oracle(&one, 5, &d).unwrap().total,
                r.min(5) as u64
            );
        }
    }

    #[test]
    fn size_limits() {
        let big = Network::hexagon(2);
        let d = DemandVector::new(&big, vec![1; 19]).unwrap();
        assert!(matches!(
            exact_optimum(&big, 7, &d),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            exhaustive_oracle(&big, 3, &d),
            Err(Error::TooLarge { .. })
        ));
        let one = Network::new([c(0, 0)]);
        let d1 = DemandVector::new(&one, vec![1]).unwrap();
        assert!(matches!(
            exact_optimum(&one, 65, &d1),
            Err(Error::TooLarge { .. })
        ));
        assert!(exact_optimum_with_limits(
            &one,
            65,
            &d1,
            OptLimits {
                max_cells: 1,
                max_omega: 100
            }
        )
        .is_ok());
        assert_eq!(
            DemandVector::new(&one, vec![]),
            Err(Error::DemandShape {
                expected: 1,
                got: 0
            })
        );
    }

    #[test]
    fn independent_sets_of_flower() {
        let g = ConflictGraph::from_network(&Network::flower()).unwrap();
        let mis = g.maximal_independent_sets(g.all_mask());
        // center alone, two triples and three opposite pairs of the ring
        assert_eq!(mis.len(), 6);
        assert!(mis.iter().all(|&m| g.is_independent(m)));
        let cliques = g.maximal_cliques(g.all_mask());
        assert_eq!(cliques.len(), 6);
        assert!(cliques
            .iter()
            .all(|&m| m.count_ones() == 3 && g.is_clique(m)));
    }

    #[test]
    fn flower_optimum_matches_enumeration() {
        let net = Network::flower();
        let g = ConflictGraph::from_network(&net).unwrap();
        let d = [3, 1, 2, 0, 3, 2, 1];
        assert_eq!(
            exact_graph(&g, 3, &d),
            exhaustive_oracle_graph_unbounded(&g, 3, &d)
        );
    }
}
