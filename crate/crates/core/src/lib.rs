//! Computational toolkit for nodal-surface Cremona transformations of P^4.

pub mod classify;
pub mod ffpoly;
pub mod groebner;
pub mod intersect;
pub mod k3pipeline;
pub mod lattice;
pub mod linalg;
pub mod motivic;
