//! Legacy ASCII VTK snapshots.

use std::fmt::Write;
use std::path::Path;

use super::{write_file, IoError};
use crate::mesh::Mesh;
use crate::solver::State;

/// Unstructured grid with point data `u` and `phi` and cell data `H`
/// (element average of the quadrature-point history).
pub fn vtk_string(mesh: &Mesh, state: &State) -> Result<String, IoError> {
    let (n, m) = (mesh.node_count(), mesh.element_count());
    let check = |what, expected, found| {
        if expected == found {
            Ok(())
        } else {
            Err(IoError::SizeMismatch { what, expected, found })
        }
    };
    check("displacement", 2 * n, state.u.len())?;
    check("phase field", n, state.phi.len())?;
    check("history", mesh.quadrature_point_count(), state.history.values().len())?;

    let mut s = String::with_capacity(64 * (n + m) + 256);
    let _ = writeln!(s, "# vtk DataFile Version 3.0");
    let _ = writeln!(s, "phasefield increment {}", state.increment);
    let _ = writeln!(s, "ASCII\nDATASET UNSTRUCTURED_GRID");
    let _ = writeln!(s, "POINTS {n} double");
    for p in mesh.nodes() {
        let _ = writeln!(s, "{:?} {:?} 0", p[0], p[1]);
    }
    let size: usize = mesh.elements().iter().map(|e| e.nodes.len() + 1).sum();
    let _ = writeln!(s, "CELLS {m} {size}");
    for e in mesh.elements() {
        s.push_str(&e.nodes.len().to_string());
        for v in &e.nodes {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    let _ = writeln!(s, "CELL_TYPES {m}");
    for e in mesh.elements() {
        let _ = writeln!(s, "{}", e.kind.vtk_cell_type());
    }
    let _ = writeln!(s, "POINT_DATA {n}");
    let _ = writeln!(s, "VECTORS u double");
    for d in state.u.chunks_exact(2) {
        let _ = writeln!(s, "{:?} {:?} 0", d[0], d[1]);
    }
    let _ = writeln!(s, "SCALARS phi double 1\nLOOKUP_TABLE default");
    for p in &state.phi {
        let _ = writeln!(s, "{p:?}");
    }
    let _ = writeln!(s, "CELL_DATA {m}");
    let _ = writeln!(s, "SCALARS H double 1\nLOOKUP_TABLE default");
    let h = state.history.values();
    for (e, el) in mesh.elements().iter().enumerate() {
        let q = el.kind.quadrature_count();
        let start = mesh.qp_offset(e);
        let mean = h[start..start + q].iter().sum::<f64>() / q as f64;
        let _ = writeln!(s, "{mean:?}");
    }
    Ok(s)
}

pub fn write_vtk(mesh: &Mesh, state: &State, path: impl AsRef<Path>) -> Result<(), IoError> {
    write_file(path.as_ref(), &vtk_string(mesh, state)?)
}
