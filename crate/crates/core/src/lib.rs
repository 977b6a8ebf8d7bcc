//! Computational toolkit for warped cones over group actions.
//!
//! The crate is organized bottom-up:
//!
//! * [`groups`]: reduced words in free groups, stable norms, automorphisms.
//! * [`spaces`]: the torus, S³ ≅ SU(2) and unitary groups, with ε-nets.
//! * [`actions`]: actions by labeled generators and freeness diagnostics.
//! * [`warped`]: the warped metric on level sets, exact and graph-based.
//! * [`coarse`]: coarse paths, orbital jumps, canonical forms and winding.
//! * [`graphs`]: level-set graphs, normalized Laplacian spectra, Cheeger.
//! * [`check`]: seeded invariant suites used by the command-line `check`.

pub mod actions;
pub mod check;
pub mod coarse;
pub mod error;
pub mod graphs;
pub mod groups;
pub mod quaternion;
pub mod spaces;
pub mod warped;

pub use actions::{make_action, Action, ActionSpec, Transform};
pub use error::{Error, Result};
pub use groups::{Automorphism, Letter, Word};
pub use quaternion::Quat;
pub use spaces::{distance, epsilon_net, Net, Point, Space};
pub use graphs::{spectral_gap, GraphFile, LevelGraph, SpectralMode};
pub use warped::{warped_distance_exact, WarpedGraph, WarpedMetric};
pub use coarse::{q_map, CoarseContext, CoarsePath};
