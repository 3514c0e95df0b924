//! Finite commutative rings, the groups `K(R)` over them, and exhaustive
//! search for representations that separate a word from the identity.
//!
//! Rings are described by strings such as `Z/4`, `Z/2[t]/(t^2+t+1)[x]/(x^2)`
//! or `Z/2 * Z/3`:
//!
//! ```text
//! ring  := tower ("*" tower)*
//! tower := "Z/" nat ("[" ident "]/(" poly ")")*
//! ```
//!
//! Each bracketed level adjoins a variable modulo a monic polynomial whose
//! coefficients may use the variables adjoined earlier. Elements are written
//! as polynomial expressions in the tower variables, and as tuples
//! `(e1, e2)` in products.

mod construct;
mod functor;
mod group;
pub(crate) mod matrix;
mod ring;
mod search;

pub use construct::{
    finite_quotient_witness, lift_pgl_to_psl, product_combine, IntegralRep, PslLift, QuotientCase, QuotientWitness,
    RetractionCheck, MAX_QUOTIENT_MODULUS,
};
pub use functor::{check_functoriality, check_product_isomorphism, reduction_map, FunctorialityCheck, ProductCheck};
pub use group::{enumerate_group, FiniteGroup, DEFAULT_BUDGET};
pub use matrix::{
    canonical, format_mat, generate_subgroup, in_group, is_identity, mat_adjugate, mat_det, mat_identity, mat_inverse,
    mat_mul, mat_scale, parse_mat, proj_equal, GroupElement2,
};
pub use ring::{AnyRing, CommRing, Elem, FiniteRing, Mat2, RationalField, RingElement, DEFAULT_SIZE_LIMIT};
pub use search::{
    evaluate_rep, image_order_in, search_in_group, search_separating_rep, survey_images, ImageSurvey, Representation,
    SearchOptions, SeparationWitness,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("malformed ring specification: {0}")]
    Malformed(String),
    #[error("modulus `{0}` is not monic")]
    NonMonic(String),
    #[error("ring of size {size} exceeds the limit {limit}")]
    TooLarge { size: u128, limit: u64 },
    #[error("bad element `{text}`: {msg}")]
    BadElement { text: String, msg: String },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("not a group element: {0}")]
    NotInGroup(String),
    #[error("not a representation: {0}")]
    NotARepresentation(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("the ring is infinite")]
    Infinite,
}

#[cfg(test)]
mod tests;
