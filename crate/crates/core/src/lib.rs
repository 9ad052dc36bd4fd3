//! Finite-element solver for variational phase-field fracture.

pub mod constitutive;
pub mod mesh;
pub mod assembly;
pub mod solver;
pub mod oracle;
pub mod io;
pub mod cli;
