use phasefield::constitutive::{
    active_parts, crack_geometry, elastic_tensor, exponential_softening, normalisation, split_energy, update_history,
    Degradation, Formulation, HistoryField, Material, MaterialParams, Model, ModelChoice, Split, Voigt, DEFAULT_KAPPA,
    LINEAR_SOFTENING,
};
use phasefield::mesh::Regime;
use phasefield::oracle::integrate;
use proptest::prelude::*;

const MODELS: [Model; 4] = [Model::At1, Model::At2, Model::PfczmLinear, Model::PfczmExponential];
const STRAIN_SPLITS: [Split; 3] = [Split::Isotropic, Split::VolDev, Split::Spectral];

fn degradation() -> impl Strategy<Value = Degradation> {
    prop_oneof![
        Just(Degradation::Quadratic),
        (1.0f64..1e4).prop_map(|a| Degradation::Rational { a, b: LINEAR_SOFTENING.0, d: LINEAR_SOFTENING.1 }),
        (1.0f64..1e4).prop_map(|a| {
            let (b, d) = exponential_softening();
            Degradation::Rational { a, b, d }
        }),
    ]
}

fn regime() -> impl Strategy<Value = Regime> {
    prop_oneof![Just(Regime::PlaneStrain), Just(Regime::PlaneStress)]
}

fn strain() -> impl Strategy<Value = Voigt> {
    [-1e-2f64..1e-2, -1e-2f64..1e-2, -1e-2f64..1e-2]
}

fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + abs
}

#[test]
fn normalisation_is_the_integral_of_sqrt_w() {
    for model in MODELS {
        let c = integrate(&|z| crack_geometry(model, z).w.sqrt(), 0.0, 1.0, 1e-13);
        assert!((c - normalisation(model)).abs() < 1e-9, "{model}: {c}");
    }
}

#[test]
fn degradation_end_values() {
    let (b, d) = exponential_softening();
    for g in [Degradation::Quadratic, Degradation::Rational { a: 50.0, b, d }] {
        assert_eq!(g.eval(0.0).0, 1.0);
        assert_eq!(g.eval(1.0).0, 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn degradation_decreases_between_its_end_values(g in degradation(), p in 0.0f64..1.0, q in 0.0f64..1.0) {
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        let (g_lo, g_hi) = (g.eval(lo).0, g.eval(hi).0);
        prop_assert!((0.0..=1.0).contains(&g_lo) && (0.0..=1.0).contains(&g_hi));
        prop_assert!(g_hi <= g_lo + 1e-15);
        prop_assert!(g.eval(lo).1 <= 0.0);
    }

    #[test]
    fn degradation_derivatives_match_differences(g in degradation(), phi in 0.01f64..0.99) {
        let h = 1e-6;
        let (_, d1, d2) = g.eval(phi);
        let fd1 = (g.eval(phi + h).0 - g.eval(phi - h).0) / (2.0 * h);
        let fd2 = (g.eval(phi + h).1 - g.eval(phi - h).1) / (2.0 * h);
        prop_assert!(close(d1, fd1, 1e-6, 1e-8), "{d1} vs {fd1}");
        prop_assert!(close(d2, fd2, 1e-5, 1e-6), "{d2} vs {fd2}");
    }

    #[test]
    fn crack_function_bounds_and_derivative(phi in 0.01f64..0.99) {
        for model in MODELS {
            let g = crack_geometry(model, phi);
            prop_assert_eq!(crack_geometry(model, 0.0).w, 0.0);
            prop_assert_eq!(crack_geometry(model, 1.0).w, 1.0);
            prop_assert!(g.w > 0.0 && g.w < 1.0);
            let h = 1e-6;
            let fd = (crack_geometry(model, phi + h).w - crack_geometry(model, phi - h).w) / (2.0 * h);
            prop_assert!(close(g.dw, fd, 1e-8, 1e-10));
        }
    }

    #[test]
    fn strain_splits_partition_the_elastic_energy(eps in strain(), nu in -0.3f64..0.45, regime in regime()) {
        let el = elastic_tensor(1000.0, nu, regime).unwrap();
        let total = el.energy(&eps);
        for split in STRAIN_SPLITS {
            let (plus, minus) = split_energy(split, &eps, &el);
            prop_assert!(plus >= 0.0 && minus >= 0.0, "{split}: {plus} {minus}");
            prop_assert!(close(plus + minus, total, 1e-12, 1e-15), "{split}: {plus} + {minus} vs {total}");
        }
    }

    #[test]
    fn active_stress_is_the_energy_gradient(eps in strain(), nu in 0.0f64..0.45, regime in regime()) {
        let el = elastic_tensor(1000.0, nu, regime).unwrap();
        let h = 1e-8;
        for split in STRAIN_SPLITS {
            let parts = active_parts(split, &eps, &el).unwrap();
            if parts.coalesced {
                continue;
            }
            for i in 0..3 {
                let (mut up, mut down) = (eps, eps);
                up[i] += h;
                down[i] -= h;
                let fd = (active_parts(split, &up, &el).unwrap().psi - active_parts(split, &down, &el).unwrap().psi) / (2.0 * h);
                prop_assert!(close(parts.stress[i], fd, 1e-5, 1e-6), "{split} component {i}: {} vs {fd}", parts.stress[i]);
            }
        }
    }

    #[test]
    fn compressive_principal_strains_are_inactive(a in -1e-2f64..-1e-5, b in -1e-2f64..-1e-5, angle in 0.0f64..std::f64::consts::PI) {
        let (c, s) = (angle.cos(), angle.sin());
        let eps = [a * c * c + b * s * s, a * s * s + b * c * c, 2.0 * (a - b) * c * s];
        let el = elastic_tensor(1000.0, 0.25, Regime::PlaneStrain).unwrap();
        prop_assert_eq!(split_energy(Split::Spectral, &eps, &el).0, 0.0);
    }

    #[test]
    fn history_never_decreases(steps in proptest::collection::vec(0.0f64..10.0, 1..50), floor in 0.0f64..1.0) {
        let mut field = HistoryField::new(1, floor);
        let mut previous = field.values()[0];
        prop_assert_eq!(previous, floor);
        for psi in steps {
            let h = field.update(0, psi);
            prop_assert!(h >= previous && h >= psi && h >= floor);
            prop_assert_eq!(h, update_history(previous, psi, floor));
            previous = h;
        }
    }

    #[test]
    fn degraded_stress_matches_stored_energy(eps in strain(), phi in 0.0f64..0.95, regime in regime()) {
        let params = MaterialParams {
            youngs: 1000.0,
            poisson: 0.2,
            toughness: 0.1,
            strength: Some(3.0),
            length_scale: 0.5,
            residual_stiffness: DEFAULT_KAPPA,
        };
        let h = 1e-8;
        for choice in ModelChoice::all() {
            if choice.formulation == Formulation::Anisotropic && choice.split == Split::Spectral {
                let parts = active_parts(Split::Spectral, &eps, &Material::new(params, choice, regime).unwrap().elasticity).unwrap();
                if parts.coalesced {
                    continue;
                }
            }
            let m = Material::new(params, choice, regime).unwrap();
            let (stress, _) = m.stress_and_tangent(&eps, phi);
            for i in 0..3 {
                let (mut up, mut down) = (eps, eps);
                up[i] += h;
                down[i] -= h;
                let fd = (m.stored_energy(&up, phi) - m.stored_energy(&down, phi)) / (2.0 * h);
                prop_assert!(close(stress[i], fd, 1e-5, 1e-6), "{choice:?} component {i}: {} vs {fd}", stress[i]);
            }
        }
    }
}
