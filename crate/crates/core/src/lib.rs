//! Permutation groups, symmetric designs and the search for point-imprimitive
//! flag-transitive symmetric designs.

pub mod arith;
pub mod blocks;
pub mod catalog;
pub mod chain;
pub mod coset;
pub mod design;
pub mod error;
pub mod group;
pub mod io;
pub mod params;
pub mod perm;
pub mod pipeline;
pub mod registry;
pub mod showcase;

pub use blocks::{class_stabilizer, minimal_block_systems, BlockSystem};
pub use coset::{induced_orbits, intersection, CosetAction};
pub use design::{construct_design, Design, DesignParams, ImprimitivityProfile, Refutation};
pub use error::{Error, Result};
pub use group::PermGroup;
pub use params::{classify_type, derive_cdl, enumerate_params, ParamCandidate, Triple, TypeTag};
pub use perm::{parse_cycles, Perm};
pub use pipeline::{CandidateTuple, Catalog, PipelineReport, Status};
