//! Certified decisions about 2×2 matrix representations of finitely
//! presented groups over commutative rings.
//!
//! The crate is organised bottom-up:
//!
//! * [`presentation`] parses group presentations and manipulates words.
//! * [`exactalg`] provides exact coefficients and sparse polynomials.
//! * [`groebner`] computes Gröbner bases and checkable membership certificates.
//! * [`universal`] builds the universal representation ring of a presentation
//!   and decides whether a word dies in every representation.
//! * [`finitering`] implements finite commutative rings, brute-force
//!   representation search and the constructive ring manipulations
//!   (finite quotients, products, square-root adjunction).
//! * [`thurston`] handles gluing equations and holonomy of labelled
//!   triangulations.
//! * [`cli`] drives the command line and the scripted case studies.

pub mod cli;
pub mod exactalg;
pub mod finitering;
pub mod groebner;
pub mod presentation;
pub mod thurston;
pub mod universal;
