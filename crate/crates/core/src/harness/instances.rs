//! Seeded random instances for property sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hexnet::{CellId, Network};

/// How requests are ordered within a generated sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ordering {
    /// Independent draws from per-cell weights.
    Mixed,
    /// Each cell's requests arrive as one contiguous burst, cells in random order.
    Bursts,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub network: Network,
    pub omega: u32,
    pub requests: Vec<CellId>,
}

#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub max_cells: usize,
    pub omegas: Vec<u32>,
    /// Sequence length is drawn from `0..=max_length_factor * omega`.
    pub max_length_factor: u32,
    pub triangle_free: bool,
    /// Radius of the hex window cells are drawn from.
    pub window: i32,
}

impl InstanceSpec {
    pub fn cellular(omegas: &[u32]) -> Self {
        InstanceSpec {
            max_cells: 9,
            omegas: omegas.to_vec(),
            max_length_factor: 6,
            triangle_free: false,
            window: 2,
        }
    }

    pub fn triangle_free(omegas: &[u32]) -> Self {
        InstanceSpec {
            triangle_free: true,
            window: 3,
            ..Self::cellular(omegas)
        }
    }

    pub fn generate(&self, seed: u64) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let network = random_network(&mut rng, self.max_cells, self.window, self.triangle_free);
        let omega = *self.omegas.choose(&mut rng).expect("at least one omega");
        let length = rng.gen_range(0..=(self.max_length_factor * omega) as usize);
        let ordering = if rng.gen_bool(0.5) {
            Ordering::Mixed
        } else {
            Ordering::Bursts
        };
        let requests = random_requests(&mut rng, &network, length, ordering);
        Instance {
            seed,
            network,
            omega,
            requests,
        }
    }
}

/// A random cell set of `1..=max_cells` cells from the hex window, grown mostly
/// by adjacency. With `triangle_free`, cells closing a triangle are skipped.
pub fn random_network<R: Rng>(
    rng: &mut R,
    max_cells: usize,
    window: i32,
    triangle_free: bool,
) -> Network {
    let pool: Vec<CellId> = Network::hexagon(window).cells().to_vec();
    let target = rng.gen_range(1..=max_cells.min(pool.len()));
    let mut chosen = vec![*pool.choose(rng).expect("non-empty window")];
    let mut attempts = 0;
    while chosen.len() < target && attempts < 200 {
        attempts += 1;
        let grow = rng.gen_bool(0.85);
        let candidates: Vec<CellId> = pool
            .iter()
            .copied()
            .filter(|c| !chosen.contains(c))
            .filter(|c| !grow || chosen.iter().any(|&d| d.is_adjacent(*c)))
            .collect();
        let Some(&next) = candidates.choose(rng) else {
            continue;
        };
        if triangle_free && closes_triangle(&chosen, next) {
            continue;
        }
        chosen.push(next);
    }
    Network::new(chosen)
}

fn closes_triangle(cells: &[CellId], c: CellId) -> bool {
    let ns: Vec<CellId> = cells.iter().copied().filter(|d| d.is_adjacent(c)).collect();
    ns.iter()
        .enumerate()
        .any(|(k, a)| ns[k + 1..].iter().any(|b| a.is_adjacent(*b)))
}

pub fn random_requests<R: Rng>(
    rng: &mut R,
    network: &Network,
    length: usize,
    ordering: Ordering,
) -> Vec<CellId> {
    if network.is_empty() || length == 0 {
        return Vec::new();
    }
    // Skewed weights so that some cells get flooded and others stay quiet.
    let weights: Vec<f64> = (0..network.len())
        .map(|_| rng.gen_range(0.0f64..1.0).powi(2) + 0.02)
        .collect();
    let total: f64 = weights.iter().sum();
    let mut draws: Vec<CellId> = (0..length)
        .map(|_| {
            let mut x = rng.gen_range(0.0..total);
            for (i, w) in weights.iter().enumerate() {
                if x < *w {
                    return network.cell(i);
                }
                x -= w;
            }
            network.cell(network.len() - 1)
        })
        .collect();
    if ordering == Ordering::Bursts {
        let mut order: Vec<CellId> = network.cells().to_vec();
        order.shuffle(rng);
        draws.sort_by_key(|c| order.iter().position(|o| o == c));
    }
    draws
}
