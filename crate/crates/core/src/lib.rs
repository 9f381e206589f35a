//! Parabolic, hyperbolic and elliptic expansions of cusp forms, relative
//! Poincaré series of first and second order, and numerical checks of the
//! identities that connect them.

pub mod cli;
pub mod cosets;
pub mod error;
pub mod expansions;
pub mod forms;
pub mod moebius;
pub mod poincare;
pub mod qforms;
pub mod quadrature;
pub mod secondorder;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use moebius::{Group, Matrix, PointH, C64};
