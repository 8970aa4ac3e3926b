//! Exact arithmetic over the Gaussian rationals: scalars, polynomials,
//! resultants, projective changes of coordinates and singular points.

mod gauss;
mod gcd;
mod parse;
mod poly;
mod projective;
mod resultant;
mod singular;

use thiserror::Error;

pub use gauss::GaussRat;
pub use gcd::{gcd_bivariate, is_squarefree, squarefree_part_bivariate};
pub use parse::{parse_poly, print_poly};
pub use poly::{BiPoly, RecPoly, UniPoly, Var};
pub use projective::{projective_transform, ProjMatrix};
pub use resultant::{discriminant, discriminant_y, resultant, resultant_y};
pub use singular::{curve_singularities, SingularPoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
    #[error("zero polynomial given where a nonzero one is required")]
    ZeroPolynomial,
    #[error("degenerate degree: {0}")]
    DegenerateDegree(String),
    #[error("singular projective matrix")]
    SingularMatrix,
    #[error("polynomial is not squarefree (repeated factor {0})")]
    NotSquarefree(String),
    #[error("root isolation failed: {0}")]
    RootIsolation(String),
}
