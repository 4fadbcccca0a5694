//! Elliptic curves with large torsion over number fields of small degree,
//! the smoothness of their reductions, and their use in ECM factorization.

pub mod census;
pub mod counting;
pub mod ecm;
pub mod ec_core;
pub mod families;
pub mod numth;
pub mod verify;
