//! Reads a Gmsh file, reports its node sets and writes a VTK snapshot of
//! the undeformed state.
//!
//! cargo run --release --example gmsh_mesh [path.msh]

use phasefield::constitutive::HistoryField;
use phasefield::io::write_vtk;
use phasefield::mesh::parse_gmsh;
use phasefield::solver::State;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let default = concat!(env!("CARGO_MANIFEST_DIR"), "/resources/meshes/notched_plate_hole.msh");
    let path = std::env::args().nth(1).unwrap_or_else(|| default.to_owned());
    let mesh = parse_gmsh(&path)?;
    println!("{path}");
    println!("{} nodes, {} elements, area {:.3}", mesh.node_count(), mesh.element_count(), mesh.area());
    println!("smallest element {:.4}", mesh.min_element_size());
    for (name, nodes) in mesh.node_sets() {
        println!("node set {name:<12} {} nodes", nodes.len());
    }
    let n = mesh.node_count();
    let state = State {
        u: vec![0.0; 2 * n],
        phi: vec![0.0; n],
        history: HistoryField::new(mesh.quadrature_point_count(), 0.0),
        increment: 0,
        load_factor: 0.0,
    };
    let out = std::env::temp_dir().join("phasefield_mesh.vtk");
    write_vtk(&mesh, &state, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}
