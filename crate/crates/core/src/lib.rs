//! Rule 110 on a finite ring: simulation, ether/glider analysis, single-flip
//! error sweeps and top-down reweighting of the error law.

pub mod decompose;
pub mod error;
pub mod error_model;
pub mod ether;
pub mod glider;
pub mod lattice;
pub mod sampler;
pub mod search;
pub mod splice;
pub mod weights;

pub use decompose::{
    asymptotic_state, asymptotic_state_from, decompose, AsymptoticState, Decomposition, Outcome,
};
pub use error::{Error, Result};
pub use ether::{ether, ether_row, EtherPhase, EtherTile, ETHER_PERIOD};
pub use glider::{Catalog, GliderId, GliderSpec, Signature};
pub use lattice::{advance, diff, evolve, flip, step, step_packed, LatticeConfig, Row, SpacetimeDiagram};
pub use splice::{pair_collides, splice, splice_detailed, will_collide, Placement};
pub use search::{derive_catalog, verify_catalog};
pub use error_model::{base_prob, enumerate_events, outcome_distribution, sweep, ErrorEvent, ErrorModel, OutcomeTable, SweepSettings};
pub use sampler::{sample, split_seed};
pub use weights::{kl_report, modify, weight, ModifiedDistribution, WeightRule};
