//! Exact lattice arithmetic, certified bounds and sampling experiments for
//! random generating sets of lattices.

pub mod bounds;
pub mod exactmat;
pub mod experiments;
pub mod groupgen;
pub mod lattice;
pub mod numeric;
pub mod sampling;

pub use bounds::{BoundReport, BoundsError, Enclosure, ZetaContext};
pub use exactmat::{ExactError, ExactMatrix, HermiteForm, RationalMatrix, SmithForm};
pub use experiments::{ExperimentConfig, ExperimentError, ExperimentKind, ExperimentReport, MPolicy};
pub use groupgen::{FiniteAbelianGroup, GroupElement, GroupError};
pub use lattice::{LatticeBasis, LatticeError, LatticePoint, Window};
pub use sampling::{Parallelepiped, RngStream, SamplerKind, SamplingError, StreamId};
