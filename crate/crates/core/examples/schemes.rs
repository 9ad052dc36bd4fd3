//! Single-element AT2 tension solved with the monolithic and the
//! single-pass staggered scheme.
//!
//! cargo run --release --example schemes

use phasefield::cli::{uniaxial_tension, BAR};
use phasefield::constitutive::{Formulation, Model, ModelChoice, Split};
use phasefield::solver::Scheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let choice = ModelChoice::new(Model::At2, Split::Isotropic, Formulation::Hybrid)?;
    for increments in [50, 100, 200, 400] {
        let mono = uniaxial_tension(choice, BAR, Scheme::Monolithic, 0.2, increments)?;
        let stag = uniaxial_tension(choice, BAR, Scheme::Staggered, 0.2, increments)?;
        let gap = mono.stress.iter().zip(&stag.stress).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        println!(
            "{increments:>4} increments: peaks {:.4} / {:.4}, largest gap {:.2}% of the peak",
            mono.peak_stress(),
            stag.peak_stress(),
            100.0 * gap / mono.peak_stress()
        );
    }
    Ok(())
}
