//! Exact computations in the Desarguesian projective plane PG(2,q).
//!
//! The crate covers finite field arithmetic ([`gf`]), an indexed model of the
//! plane with canonical forms under PGL(3,q) ([`plane`]), secant and weight
//! analytics of point sets ([`secant`]), Rédei polynomials and direction sets
//! ([`redei`]), the standard example sets ([`constructions`]) and isomorph-free
//! exhaustive searches ([`search`]).

pub mod bitset;
pub mod constructions;
pub mod gf;
pub mod plane;
pub mod redei;
pub mod report;
pub mod search;
pub mod secant;

pub use gf::{Field, FieldElement, FieldError, FieldSpec};
pub use plane::{PlaneCtx, PlaneError, Slope, Triple};
pub use report::{Clause, Rational, Verdict, Witness};
pub use secant::PointSet;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Construction(#[from] constructions::ConstructionError),
    #[error(transparent)]
    Redei(#[from] redei::RedeiError),
    #[error(transparent)]
    Secant(#[from] secant::SecantError),
    #[error(transparent)]
    Search(#[from] search::SearchError),
}
