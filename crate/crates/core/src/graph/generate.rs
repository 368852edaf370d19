use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{families, Graph};
use crate::{check_dimension, Error, Result, Vertex};

/// Vertex-addition (Henneberg type I) construction on labels `1..=n`.
///
/// Starts from `K_{d+1}` and joins each new vertex to `d` distinct earlier
/// vertices drawn from a ChaCha8 stream seeded with `seed`.
pub fn henneberg1_generate(n: usize, d: u32, seed: u64) -> Result<Graph> {
    check_dimension(d)?;
    let d = d as usize;
    if n < d + 1 {
        return Err(Error::InvalidSize(format!(
            "need at least d+1 = {} vertices, got {n}",
            d + 1
        )));
    }
    let mut g = families::complete((d + 1) as Vertex);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for new in d + 2..=n {
        let mut targets: Vec<usize> = sample(&mut rng, new - 1, d).into_vec();
        targets.sort_unstable();
        for t in targets {
            g.add_edge(new as Vertex, (t + 1) as Vertex)?;
        }
    }
    Ok(g)
}
