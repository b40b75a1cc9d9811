//! Simulation and verification toolkit for subcritical Galton–Watson trees
//! conditioned on their total size.
//!
//! In the heavy-tailed subcritical regime (offspring law `μ_k = 𝓛(k)/k^{1+θ}`,
//! mean `m < 1`) a tree conditioned to have `n` vertices develops a single
//! vertex of degree close to `(1 - m) n`. This crate provides:
//!
//! * [`offspring`]: heavy-tailed offspring laws with exact tails and O(1) sampling,
//! * [`tree`]: plane trees, their Lukasiewicz / height / contour codings and statistics,
//! * [`walk`]: Vervaat transform, exchange operator, bridge tables, Kemperman's formula,
//! * [`samplers`]: unconditioned, exactly conditioned and approximate tree samplers,
//! * [`oracle`]: exhaustive enumeration of small trees for exact laws,
//! * [`limits`]: the limit laws (geometric, Fréchet-type, stable, ...),
//! * [`stats`]: goodness-of-fit machinery,
//! * [`par`]: seeded replica-parallel drivers (rayon behind the `parallel` feature).

pub mod error;
pub mod limits;
pub mod offspring;
pub mod oracle;
pub mod par;
pub mod samplers;
pub mod stats;
pub mod tree;
pub mod walk;

pub use error::{Error, Result};
pub use offspring::{OffspringDistribution, SlowlyVarying};
pub use tree::{LukasiewiczPath, PlaneTree, TreeStats};
pub use walk::BridgeTable;
