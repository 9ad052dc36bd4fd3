//! Element and global assembly of the two decoupled blocks.

mod dirichlet;
mod element;
mod global;
mod sparse;

use thiserror::Error;

use crate::mesh::MeshError;

pub use dirichlet::{apply_dirichlet, Constraints};
pub use element::{
    element_blocks, element_driving_forces, element_energies, element_residuals, element_tangents, heat_scaling,
    heat_source, ElementBlocks, ElementState, PhasePath,
};
pub use global::{u_dof, Assembler, SparseSystem};
pub use sparse::SymmetricCsc;

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("element {element}: {source}")]
    Element { element: usize, source: MeshError },
    #[error("DOF {dof} out of range (block has {count} DOFs)")]
    DofOutOfRange { dof: usize, count: usize },
    #[error("DOF {dof} constrained to both {first} and {second}")]
    ConflictingConstraint { dof: usize, first: f64, second: f64 },
    #[error("{what}: expected length {expected}, found {found}")]
    SizeMismatch { what: &'static str, expected: usize, found: usize },
}

impl AssemblyError {
    pub(crate) fn from_mesh(err: MeshError, element: usize) -> Self {
        let source = match err {
            MeshError::InvertedElement { det_j, .. } => MeshError::InvertedElement { element: Some(element), det_j },
            other => other,
        };
        AssemblyError::Element { element, source }
    }
}
