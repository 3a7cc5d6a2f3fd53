//! Exact combinatorics of cyclic polytopes and higher Segal conditions.
//!
//! The crate is organised bottom-up:
//!
//! * [`complexes`] — abstract simplicial complexes on `[n] = {0,…,n}`,
//!   gap-parity predicates, hemisphere decompositions, and the lower/upper
//!   boundary complexes of cyclic polytopes.
//! * [`geometry`] — exact rational geometry over the moment curve, used as an
//!   independent oracle for the combinatorial predicates.
//! * [`triangulations`] — the stacking order on simplices, bistellar flips,
//!   triangulation recognition, and flip-graph enumeration.
//! * [`orientals`] — admissible subcomplexes as cells of an ω-category, with
//!   composition, excision, and axiom verification.
//! * [`backends`] — finite sets, exact vector spaces, and finite groupoids:
//!   the value categories in which limits are computed.
//! * [`simplicial`] — truncated simplicial objects and generators (nerves,
//!   partial monoids, Dold–Kan, the Waldhausen construction).
//! * [`checker`] — decision procedures for lower/upper d-Segal conditions and
//!   their consequences.

pub mod backends;
pub mod checker;
pub mod complexes;
pub mod geometry;
pub mod orientals;
pub mod simplicial;
pub mod triangulations;
