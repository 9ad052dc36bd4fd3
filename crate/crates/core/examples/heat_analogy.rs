//! The phase-field block assembled as a steady heat problem equals the
//! directly assembled block after one fixed rescaling.
//!
//! cargo run --release --example heat_analogy

use phasefield::assembly::{heat_scaling, Assembler, PhasePath};
use phasefield::constitutive::{Formulation, Material, MaterialParams, Model, ModelChoice, Split};
use phasefield::mesh::{generate_rect, ElementKind, Regime};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mesh = generate_rect(1.0, 1.0, 3, 3, ElementKind::Quad4, Regime::PlaneStrain)?;
    let params = MaterialParams { youngs: 100.0, poisson: 0.2, toughness: 0.1, strength: Some(1.0), length_scale: 0.2, residual_stiffness: 1e-7 };
    let n = mesh.node_count();
    let u: Vec<f64> = (0..2 * n).map(|i| 1e-3 * (i as f64).sin()).collect();
    let phi: Vec<f64> = (0..n).map(|i| 0.5 + 0.4 * (1.7 * i as f64).cos()).collect();
    let assembler = Assembler::new(&mesh);
    for model in [Model::At1, Model::At2, Model::PfczmLinear, Model::PfczmExponential] {
        let material = Material::new(params, ModelChoice::new(model, Split::Isotropic, Formulation::Hybrid)?, Regime::PlaneStrain)?;
        let history = vec![material.floor + 0.05; mesh.quadrature_point_count()];
        let direct = assembler.assemble(&mesh, &material, &u, &phi, &history, PhasePath::Direct)?;
        let heat = assembler.assemble(&mesh, &material, &u, &phi, &history, PhasePath::HeatAnalogy)?;
        let s = heat_scaling(&material);
        let k_gap = direct.k_phi.values().iter().zip(heat.k_phi.values()).fold(0.0f64, |m, (a, b)| m.max((a - s * b).abs()));
        let r_gap = direct.r_phi.iter().zip(&heat.r_phi).fold(0.0f64, |m, (a, b)| m.max((a - s * b).abs()));
        println!("{:<18} scaling {s:.5}  |K_direct - s K_heat| = {k_gap:.1e}  |R_direct - s R_heat| = {r_gap:.1e}", model.name());
    }
    Ok(())
}
