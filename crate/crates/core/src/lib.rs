//! Certified upper bounds on the number of embeddings of minimally rigid
//! graphs.
//!
//! The pipeline fixes a `d`-clique of a rigid graph, turns the rest into a
//! [`Pseudograph`] (normal edges plus hanging edges), and bounds the number of
//! embeddings by `2^(|V|-d)` times the number of orientations in which every
//! pseudograph vertex has outdegree `d`. That orientation count is computed
//! exactly ([`orient`]), bounded per instance by a vertex/path elimination
//! process ([`elimination`]), and bounded in closed form ([`bounds`]).

pub mod analysis;
pub mod bct;
pub mod bounds;
pub mod elimination;
mod error;
pub mod graph;
pub mod orient;
pub mod pseudograph;
mod util;

pub use error::{Error, Result};
pub use graph::{Clique, Graph};
pub use pseudograph::{ExtendedDegree, Pseudograph};

/// Vertex label as given in the input; never re-indexed in reports.
pub type Vertex = u64;

pub(crate) fn check_dimension(d: u32) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}
