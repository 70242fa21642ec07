pub mod catalog;
pub mod combinatorics;
pub mod cyclotomic;
pub mod group;
pub mod hopf;
pub mod linalg;
pub mod path_algebra;
pub mod quiver;
pub mod witnesses;

pub use cyclotomic::{Conductor, Cyc, CycError, ScalarExpr};
pub use group::{Character, FinAbGroup, GroupElt, WeightSeq};
pub use hopf::{BimoduleAction, HopfError, HopfStructure, Report, Tensor2};
pub use path_algebra::{Elem, GradedIdeal, Path, PathAlgebra, QuotientBasis};
pub use quiver::CoveringQuiver;
