//! Fully developed AT2 crack band on a strip, compared with the
//! closed-form profile `exp(-|x| / l)`.
//!
//! cargo run --release --example crack_profile

use phasefield::constitutive::{Formulation, Material, MaterialParams, Model, ModelChoice, Split};
use phasefield::mesh::{generate_graded, ElementKind, Regime};
use phasefield::oracle::at2_profile;
use phasefield::solver::{BoundaryCondition, Dof, SolveConfig, Solver};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ell = 1.0;
    let h = ell / 10.0;
    let xs: Vec<f64> = (0..=100).map(|i| (i as f64 - 50.0) * h).collect();
    let mut mesh = generate_graded(&xs, &[0.0, h], ElementKind::Quad4, Regime::PlaneStrain)?;
    let centre = mesh.select_nodes(|p| p[0].abs() < 0.25 * h);
    mesh.insert_node_set("centre", centre)?;
    mesh.insert_node_set("all", (0..mesh.node_count()).collect())?;

    let params = MaterialParams { youngs: 1.0, poisson: 0.0, toughness: 1.0, strength: None, length_scale: ell, residual_stiffness: 1e-7 };
    let choice = ModelChoice::new(Model::At2, Split::Isotropic, Formulation::Hybrid)?;
    let material = Material::new(params, choice, Regime::PlaneStrain)?;
    let bcs = [
        BoundaryCondition::fixed("all", Dof::X, 0.0),
        BoundaryCondition::fixed("all", Dof::Y, 0.0),
        BoundaryCondition::fixed("centre", Dof::Phi, 1.0),
    ];
    let config = SolveConfig { increments: 1, tol_u: 1e-10, tol_phi: 1e-10, ..Default::default() };
    let outcome = Solver::new(&mesh, material, &bcs, None, config)?.run(|_, _| {})?;

    println!("{:>8} {:>12} {:>12}", "x/l", "phi", "exp(-|x|/l)");
    for (p, phi) in mesh.nodes().iter().zip(&outcome.state.phi) {
        let on_axis = p[1] == 0.0 && p[0] >= 0.0 && ((p[0] / h).round() as usize).is_multiple_of(5);
        if on_axis {
            println!("{:>8.2} {:>12.6} {:>12.6}", p[0] / ell, phi, at2_profile(p[0], ell));
        }
    }
    let row = &outcome.record.rows[0];
    println!("crack energy {:.6} (G_c times strip height {:.6})", row.fracture_energy, params.toughness * h);
    Ok(())
}
