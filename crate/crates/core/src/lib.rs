//! Exact symbolic workbench for Weil bundles of Poisson manifolds.
//!
//! Weil algebras are built from rational structure constants, polynomial
//! Poisson structures on ℝⁿ are prolonged to the bundle of near points, and
//! truncated Poisson cohomology is computed over both real and algebra
//! scalars with exact ranks.

pub mod checker;
pub mod cohomology;
pub mod config;
pub mod error;
pub mod linalg;
pub mod poisson;
pub mod poly;
pub mod prolong;
pub mod random;
pub mod rational;
pub mod ring;
pub mod weil_algebra;

pub use error::{Error, ParseError, Result};
pub use poisson::{instances, lie_bracket, schouten_bracket, Homogeneity, JacobiReport, Multivector, PoissonStructure, VectorField};
pub use checker::{explain, run_all, run_claim, run_suite, ClaimId, ClaimReport, Status, SuiteReport};
pub use cohomology::{
    betti, capped_betti, scalar_extension_compare, verify_d_squared, BettiReport, ComplexSpec, Scalars,
    SignMode,
};
pub use config::{Instance, InstanceConfig};
pub use poly::{eval_at_algebra_point, APoly, Monomial, Polynomial, QPoly};
pub use prolong::{
    expand_components, p_lift, prolong_function, prolong_poisson, prolong_vector_field, NearPoint,
    ProlongedCoordinates, Prolongation,
};
pub use rational::Rational;
pub use ring::{Rationals, Ring};
pub use weil_algebra::{
    make_algebra, AlgElement, AlgebraKind, Defect, FrobeniusForm, LinearForm, Nilpotency,
    StructureTable, ValidationReport, WeilAlgebra,
};
