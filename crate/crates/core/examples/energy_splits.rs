//! Tension/compression split of the strain energy for a few strain states.
//!
//! cargo run --release --example energy_splits

use phasefield::constitutive::{elastic_tensor, split_energy, Split};
use phasefield::mesh::Regime;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let el = elastic_tensor(210e3, 0.3, Regime::PlaneStrain)?;
    let states = [
        ("uniaxial tension", [1e-3, 0.0, 0.0]),
        ("uniaxial compression", [-1e-3, 0.0, 0.0]),
        ("biaxial compression", [-1e-3, -1e-3, 0.0]),
        ("pure shear", [0.0, 0.0, 2e-3]),
        ("tension with lateral squeeze", [1e-3, -2e-3, 0.0]),
    ];
    let splits = [Split::Isotropic, Split::VolDev, Split::Spectral, Split::PfczmStress];
    print!("{:<30}", "strain state");
    for s in splits {
        print!("{:>16}", s.name());
    }
    println!();
    for (name, eps) in states {
        print!("{name:<30}");
        for s in splits {
            let (plus, _) = split_energy(s, &eps, &el);
            print!("{:>16.4e}", plus);
        }
        println!("   (total {:.4e})", el.energy(&eps));
    }
    Ok(())
}
