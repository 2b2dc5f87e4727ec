pub mod dyadic;
pub mod error;
pub mod lattice;
pub mod series;
pub mod green;
pub mod saddle;
pub mod quadrature;
pub mod contour;
pub mod asymptotics;
pub mod harness;
pub mod config;
pub mod cli;
