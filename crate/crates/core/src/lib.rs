//! Braid monodromy and Zariski-van Kampen presentations of plane curve
//! complements, together with period-lattice monodromy for the complexified
//! spherical pendulum and planar Kepler problem.

pub mod algebra;
pub mod braid;
pub mod cli;
pub mod hamiltonian;
pub mod roots;
pub mod zvk;

pub use algebra::{BiPoly, GaussRat, ProjMatrix, UniPoly, Var};
pub use braid::{BraidWord, FreeWord};
pub use roots::{CxApprox, Path, PathSample, Segment};
pub use zvk::{CriticalSet, LoopPlan, MonodromyRep, Presentation};
