//! Euler classes of cooriented foliations carried by branched surfaces.
//!
//! The crate works from purely combinatorial input: face-pairing data of a
//! 3-manifold triangulation, an edge orientation or taut structure on it, or an
//! abstract cooriented branched-surface complex. Every class is computed with
//! exact integer arithmetic on the dual cell structure.
//!
//! Module map:
//!
//! * [`triangulation`]: parsing, validation, edge/face/vertex classes and the
//!   dual chain complex.
//! * [`homology`]: big-integer matrices, Smith normal form, (co)homology class
//!   coordinates.
//! * [`branched`]: maw Euler characteristics, the maw dual graph and its cycle
//!   law, coorientation flips and the orientation-swap formula.
//! * [`orientations`]: acyclic edge orientations and the `1 - mixed/2` cochain.
//! * [`taut`]: taut ideal structures, the dual graph `G`, flattening and the
//!   `Γ₊ = G + β` bookkeeping.

pub mod branched;
pub mod homology;
pub mod orientations;
pub mod perm;
mod search;
pub mod taut;
pub mod triangulation;

mod bigint_serde;

pub use branched::{
    BoundaryCoorientation, BranchedComplex, BranchedError, CycleReport, MawGraph, Region, Sector,
};
pub use homology::{
    ChainComplex, HomologyClass, HomologyError, HomologyGroup, IntMatrix, SnfDecomposition,
    Subquotient,
};
pub use orientations::{EdgeOrientation, EulerClassReport, EulerCochain, OrientationError, Sign};
pub use perm::Perm4;
pub use taut::{FanSide, LackenbyResult, TautError, TautReport, TautStructure};
pub use triangulation::{EdgeClass, FaceClass, Kind, Triangulation, TriangulationError};
