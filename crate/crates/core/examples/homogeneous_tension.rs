//! Stress-strain response of one element under uniaxial tension for each
//! crack model, with the AT2 strength and AT1 threshold from closed form.
//!
//! cargo run --release --example homogeneous_tension

use phasefield::cli::{uniaxial_tension, BAR};
use phasefield::constitutive::{Formulation, MaterialParams, Model, ModelChoice, Split};
use phasefield::oracle::{at1_threshold_strain, at2_strength};
use phasefield::solver::Scheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = MaterialParams { strength: Some(2.0), ..BAR };
    println!("AT2 strength (closed form) {:.4}", at2_strength(BAR.youngs, BAR.toughness, BAR.length_scale));
    println!("AT1 threshold strain (closed form) {:.4}", at1_threshold_strain(BAR.youngs, BAR.toughness, BAR.length_scale));
    for model in [Model::At1, Model::At2, Model::PfczmLinear, Model::PfczmExponential] {
        let choice = ModelChoice::new(model, Split::Isotropic, Formulation::Hybrid)?;
        let curve = uniaxial_tension(choice, params, Scheme::Monolithic, 0.2, 400)?;
        let peak = curve.stress.iter().enumerate().fold(0, |b, (i, &s)| if s > curve.stress[b] { i } else { b });
        println!(
            "{:<18} peak stress {:.4} at strain {:.4}; stress {:.4} and phi {:.3} at strain 0.2",
            model.name(),
            curve.stress[peak],
            curve.strain[peak],
            curve.stress.last().unwrap(),
            curve.phi.last().unwrap()
        );
    }
    Ok(())
}
