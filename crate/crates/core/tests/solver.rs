use phasefield::assembly::{u_dof, Assembler, PhasePath};
use phasefield::constitutive::{Formulation, Material, MaterialParams, Model, ModelChoice, Split};
use phasefield::mesh::{generate_rect, parse_gmsh, ElementKind, Mesh, Regime};
use phasefield::solver::{BoundaryCondition, Dof, ReactionSpec, Scheme, SolveConfig, Solver};
use proptest::prelude::*;

const PARAMS: MaterialParams = MaterialParams {
    youngs: 210.0,
    poisson: 0.3,
    toughness: 2.7e-3,
    strength: Some(2.0),
    length_scale: 0.05,
    residual_stiffness: 1e-7,
};

fn resource(path: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("resources").join(path)
}

/// Unit square with interior nodes moved off the grid.
fn distorted(kind: ElementKind, regime: Regime) -> Mesh {
    let base = generate_rect(1.0, 1.0, 4, 4, kind, regime).unwrap();
    let nodes = base
        .nodes()
        .iter()
        .map(|&[x, y]| {
            let interior = x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0;
            if interior {
                [x + 0.06 * (7.0 * y).sin(), y + 0.05 * (5.0 * x).cos()]
            } else {
                [x, y]
            }
        })
        .collect();
    Mesh::new(nodes, base.elements().to_vec(), base.node_sets().clone(), regime).unwrap()
}

/// Prescribes `u = A x` on every boundary node and solves one increment.
fn patch_test(kind: ElementKind, regime: Regime, choice: ModelChoice) {
    let grad = [[1.0e-4, -2.0e-5], [3.0e-5, -6.0e-5]];
    let mut mesh = distorted(kind, regime);
    let mut bcs = Vec::new();
    for (i, &[x, y]) in mesh.nodes().to_vec().iter().enumerate() {
        let boundary = x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0;
        if boundary {
            let name = format!("n{i}");
            mesh.insert_node_set(&name, vec![i]).unwrap();
            bcs.push(BoundaryCondition::ramp(&name, Dof::X, grad[0][0] * x + grad[0][1] * y));
            bcs.push(BoundaryCondition::ramp(&name, Dof::Y, grad[1][0] * x + grad[1][1] * y));
        }
    }
    let material = Material::new(PARAMS, choice, regime).unwrap();
    let config = SolveConfig { increments: 1, tol_u: 1e-12, tol_phi: 1e-12, ..Default::default() };
    let mut solver = Solver::new(&mesh, material, &bcs, None, config).unwrap();
    let outcome = solver.run(|_, _| {}).unwrap();
    assert!(outcome.record.converged());
    for (i, &[x, y]) in mesh.nodes().iter().enumerate() {
        for c in 0..2 {
            let exact = grad[c][0] * x + grad[c][1] * y;
            let got = outcome.state.u[u_dof(i, c)];
            assert!((got - exact).abs() <= 1e-12, "{kind:?} {regime:?} node {i} component {c}: {got} vs {exact}");
        }
    }
}

#[test]
fn distorted_patch_reproduces_linear_displacement() {
    let at1 = ModelChoice::new(Model::At1, Split::Isotropic, Formulation::Hybrid).unwrap();
    for kind in [ElementKind::Quad4, ElementKind::Tri3] {
        for regime in [Regime::PlaneStrain, Regime::PlaneStress] {
            patch_test(kind, regime, at1);
        }
    }
}

#[test]
fn patch_test_holds_for_every_model_below_its_threshold() {
    for choice in ModelChoice::all().into_iter().filter(|c| c.model != Model::At2) {
        patch_test(ElementKind::Quad4, Regime::PlaneStrain, choice);
    }
}

#[test]
fn bundled_plate_mesh_loads_with_its_groups() {
    let mesh = parse_gmsh(resource("meshes/notched_plate_hole.msh")).unwrap();
    assert_eq!(mesh.element_count(), 12183);
    assert!(mesh.elements().iter().all(|e| e.kind == ElementKind::Quad4));
    for set in ["bottom_pin", "top_pin", "hole"] {
        assert!(mesh.node_set(set).is_some_and(|s| !s.is_empty()), "{set}");
    }
    let pi = std::f64::consts::PI;
    let area = 65.0 * 120.0 - pi * 100.0 - 2.0 * pi * 25.0 - 10.0;
    assert!((mesh.area() - area).abs() < 1e-3 * area, "{} vs {area}", mesh.area());
    // pins sit on their circles
    for (set, yc) in [("bottom_pin", 20.0), ("top_pin", 100.0)] {
        for &n in mesh.node_set(set).unwrap() {
            let [x, y] = mesh.nodes()[n];
            assert!(((x - 20.0).hypot(y - yc) - 5.0).abs() < 1e-6);
        }
    }
    assert!(mesh.check_resolution(1.0));
}

#[test]
fn bundled_senb_mesh_loads() {
    let mesh = parse_gmsh(resource("meshes/senb_qualitative.msh")).unwrap();
    assert_eq!(mesh.element_count(), 2518);
    assert!((mesh.area() - (440.0 * 100.0 - 5.0 * 20.0)).abs() < 1e-6);
    assert!(mesh.check_resolution(5.0));
}

fn tension_run(threads: usize, scheme: Scheme, increments: usize) -> Vec<(f64, f64)> {
    let mesh = generate_rect(1.0, 1.0, 6, 6, ElementKind::Quad4, Regime::PlaneStrain).unwrap();
    let choice = ModelChoice::new(Model::At2, Split::Spectral, Formulation::Anisotropic).unwrap();
    let params = MaterialParams { youngs: 100.0, poisson: 0.2, toughness: 0.1, strength: None, length_scale: 0.25, residual_stiffness: 1e-7 };
    let material = Material::new(params, choice, Regime::PlaneStrain).unwrap();
    let bcs = [
        BoundaryCondition::fixed("left", Dof::X, 0.0),
        BoundaryCondition::fixed("bottom", Dof::Y, 0.0),
        BoundaryCondition::ramp("right", Dof::X, 0.1),
    ];
    let reaction = ReactionSpec { node_set: "right".into(), dof: Dof::X };
    let config = SolveConfig { scheme, increments, threads, tol_u: 1e-6, tol_phi: 1e-6, allow_long_iteration: true, ..Default::default() };
    let mut solver = Solver::new(&mesh, material, &bcs, Some(&reaction), config).unwrap();
    let outcome = solver.run(|_, _| {}).unwrap();
    assert!(!outcome.aborted, "{scheme:?} {increments}: {:?}", outcome.record.rows.last().map(|r| (r.increment, r.iterations, r.residual_u, r.residual_phi)));
    outcome.record.rows.iter().map(|r| (r.applied, r.reaction)).collect()
}

#[test]
fn thread_count_does_not_change_results() {
    let one = tension_run(1, Scheme::Monolithic, 40);
    assert_eq!(one, tension_run(3, Scheme::Monolithic, 40));
    assert!(one.iter().any(|&(_, f)| f > 0.0));
}

fn peak(run: &[(f64, f64)]) -> f64 {
    run.iter().map(|r| r.1).fold(0.0, f64::max)
}

#[test]
fn staggered_scheme_lags_and_converges_to_monolithic() {
    let mut gaps = Vec::new();
    for increments in [20, 40] {
        let mono = tension_run(1, Scheme::Monolithic, increments);
        let stag = tension_run(1, Scheme::Staggered, increments);
        // the frozen history delays damage
        assert!(peak(&stag) >= peak(&mono));
        for run in [&mono, &stag] {
            assert!(run.last().unwrap().1 < 0.5 * peak(run));
        }
        gaps.push(peak(&stag) / peak(&mono) - 1.0);
    }
    // first order in the step size
    assert!(gaps[1] < 0.6 * gaps[0] && gaps[1] > 0.4 * gaps[0], "{gaps:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn assembled_blocks_are_symmetric_with_no_net_force(
        seed in proptest::collection::vec(-1.0f64..1.0, 2 * 25 + 25),
        model in 0usize..4,
        split in 0usize..3,
    ) {
        let mesh = distorted(ElementKind::Quad4, Regime::PlaneStrain);
        let models = [Model::At1, Model::At2, Model::PfczmLinear, Model::PfczmExponential];
        let splits = [Split::Isotropic, Split::VolDev, Split::Spectral];
        let choice = ModelChoice::new(models[model], splits[split], Formulation::Hybrid).unwrap();
        let material = Material::new(PARAMS, choice, Regime::PlaneStrain).unwrap();
        let n = mesh.node_count();
        let u: Vec<f64> = seed[..2 * n].iter().map(|v| 1e-3 * v).collect();
        let phi: Vec<f64> = seed[2 * n..].iter().map(|v| 0.5 * (v + 1.0)).collect();
        let history = vec![material.floor + 1e-3; mesh.quadrature_point_count()];
        let assembler = Assembler::new(&mesh);
        let system = assembler.assemble(&mesh, &material, &u, &phi, &history, PhasePath::Direct).unwrap();
        prop_assert!(system.k_uu.asymmetry() <= 1e-12);
        prop_assert!(system.k_phi.asymmetry() <= 1e-12);
        let scale = system.r_u.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-30);
        for c in 0..2 {
            let net: f64 = (0..n).map(|i| system.r_u[u_dof(i, c)]).sum();
            prop_assert!(net.abs() <= 1e-12 * scale * n as f64, "component {c}: {net}");
        }
    }
}
