use phasefield::constitutive::{Formulation, HistoryField, Material, MaterialParams, Model, ModelChoice, Split};
use phasefield::io::{force_displacement_csv, vtk_string, write_force_displacement, write_vtk, CSV_HEADER};
use phasefield::mesh::{generate_rect, ElementKind, Mesh, Regime};
use phasefield::solver::{BoundaryCondition, Dof, FailurePolicy, ReactionSpec, SolveConfig, Solver, State};
use vtkio::model::{Attribute, DataSet, Piece};

fn zero_state(mesh: &Mesh) -> State {
    let n = mesh.node_count();
    State {
        u: vec![0.0; 2 * n],
        phi: vec![0.0; n],
        history: HistoryField::new(mesh.quadrature_point_count(), 0.0),
        increment: 0,
        load_factor: 0.0,
    }
}

const GOLDEN_SINGLE_QUAD: &str = "\
# vtk DataFile Version 3.0
phasefield increment 0
ASCII
DATASET UNSTRUCTURED_GRID
POINTS 4 double
0.0 0.0 0
1.0 0.0 0
0.0 1.0 0
1.0 1.0 0
CELLS 1 5
4 0 1 3 2
CELL_TYPES 1
9
POINT_DATA 4
VECTORS u double
0.0 0.0 0
0.0 0.0 0
0.0 0.0 0
0.0 0.0 0
SCALARS phi double 1
LOOKUP_TABLE default
0.0
0.0
0.0
0.0
CELL_DATA 1
SCALARS H double 1
LOOKUP_TABLE default
0.0
";

#[test]
fn vtk_single_quad_matches_golden_file() {
    let mesh = generate_rect(1.0, 1.0, 1, 1, ElementKind::Quad4, Regime::PlaneStrain).unwrap();
    assert_eq!(vtk_string(&mesh, &zero_state(&mesh)).unwrap(), GOLDEN_SINGLE_QUAD);
}

#[test]
fn vtk_is_byte_stable() {
    let mesh = generate_rect(2.0, 1.0, 3, 2, ElementKind::Tri3, Regime::PlaneStrain).unwrap();
    let mut state = zero_state(&mesh);
    state.u.iter_mut().enumerate().for_each(|(i, v)| *v = (i as f64).sin() * 1e-3);
    assert_eq!(vtk_string(&mesh, &state).unwrap(), vtk_string(&mesh, &state.clone()).unwrap());
}

fn read_back(text: &str) -> vtkio::model::UnstructuredGridPiece {
    let vtk = vtkio::Vtk::parse_legacy_be(text.as_bytes()).unwrap();
    let DataSet::UnstructuredGrid { pieces, .. } = vtk.data else { panic!("not an unstructured grid") };
    match pieces.into_iter().next().unwrap() {
        Piece::Inline(p) => *p,
        _ => panic!("expected inline piece"),
    }
}

fn attribute(attrs: &[Attribute], name: &str) -> Vec<f64> {
    let a = attrs.iter().find(|a| a.name() == name).unwrap_or_else(|| panic!("no attribute {name}"));
    match a {
        Attribute::DataArray(d) => d.data.clone().cast_into::<f64>().unwrap(),
        Attribute::Field { .. } => panic!("unexpected field attribute"),
    }
}

#[test]
fn phi_of_one_reads_back_at_its_node() {
    let mesh = generate_rect(1.0, 1.0, 2, 2, ElementKind::Quad4, Regime::PlaneStrain).unwrap();
    let mut state = zero_state(&mesh);
    state.phi[4] = 1.0;
    let piece = read_back(&vtk_string(&mesh, &state).unwrap());
    let phi = attribute(&piece.data.point, "phi");
    assert_eq!(phi[4], 1.0);
    assert_eq!(phi.iter().sum::<f64>(), 1.0);
}

#[test]
fn third_party_reader_recovers_coordinates_and_fields() {
    // irregular coordinates exercise the float formatting
    let mut mesh = generate_rect(3.0, 1.7, 7, 5, ElementKind::Quad4, Regime::PlaneStrain).unwrap();
    let nodes: Vec<[f64; 2]> = mesh.nodes().iter().map(|p| [p[0] * std::f64::consts::PI / 3.0, p[1] + 1e-7 * p[0]]).collect();
    let sets = mesh.node_sets().clone();
    mesh = Mesh::new(nodes, mesh.elements().to_vec(), sets, Regime::PlaneStrain).unwrap();
    let mut state = zero_state(&mesh);
    state.u.iter_mut().enumerate().for_each(|(i, v)| *v = (i as f64 * 0.37).cos() / 7.0);
    state.phi.iter_mut().enumerate().for_each(|(i, v)| *v = (i % 11) as f64 / 10.0);
    let hist: Vec<f64> = (0..mesh.quadrature_point_count()).map(|q| q as f64 / 3.0).collect();
    state.history.update_all(&hist);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("snap.vtk");
    write_vtk(&mesh, &state, &path).unwrap();
    let piece = read_back(&std::fs::read_to_string(&path).unwrap());

    let points = piece.points.cast_into::<f64>().unwrap();
    assert_eq!(points.len(), 3 * mesh.node_count());
    for (i, p) in mesh.nodes().iter().enumerate() {
        assert!((points[3 * i] - p[0]).abs() <= 1e-12 && (points[3 * i + 1] - p[1]).abs() <= 1e-12);
    }
    let u = attribute(&piece.data.point, "u");
    for (i, d) in state.u.chunks(2).enumerate() {
        assert_eq!((u[3 * i], u[3 * i + 1]), (d[0], d[1]));
    }
    assert_eq!(attribute(&piece.data.point, "phi"), state.phi);
    let h = attribute(&piece.data.cell, "H");
    assert_eq!(h.len(), mesh.element_count());
    for (e, v) in h.iter().enumerate() {
        let q = 4 * e;
        let mean = (hist[q] + hist[q + 1] + hist[q + 2] + hist[q + 3]) / 4.0;
        assert!((v - mean).abs() <= 1e-12 * mean.max(1.0));
    }
    let (_, types) = (piece.cells.cell_verts.num_cells(), &piece.cells.types);
    assert_eq!(types.len(), mesh.element_count());
}

#[test]
fn vtk_rejects_mismatched_state() {
    let mesh = generate_rect(1.0, 1.0, 1, 1, ElementKind::Quad4, Regime::PlaneStrain).unwrap();
    let mut state = zero_state(&mesh);
    state.phi.pop();
    assert!(vtk_string(&mesh, &state).is_err());
}

fn elastic_run(increments: usize, policy: FailurePolicy, max_iterations: usize) -> phasefield::solver::RunRecord {
    let mesh = generate_rect(1.0, 1.0, 2, 2, ElementKind::Quad4, Regime::PlaneStrain).unwrap();
    let choice = ModelChoice::new(Model::At1, Split::Isotropic, Formulation::Hybrid).unwrap();
    let params = MaterialParams { youngs: 100.0, poisson: 0.0, toughness: 0.1, strength: None, length_scale: 0.1, residual_stiffness: 1e-7 };
    let material = Material::new(params, choice, Regime::PlaneStrain).unwrap();
    let bcs = [
        BoundaryCondition::fixed("left", Dof::X, 0.0),
        BoundaryCondition::fixed("bottom", Dof::Y, 0.0),
        BoundaryCondition::ramp("right", Dof::X, 3e-3),
    ];
    let reaction = ReactionSpec { node_set: "right".into(), dof: Dof::X };
    let config = SolveConfig { increments, on_failure: policy, max_iterations, ..Default::default() };
    let mut solver = Solver::new(&mesh, material, &bcs, Some(&reaction), config).unwrap();
    solver.run(|_, _| {}).unwrap().record
}

fn parse_csv(text: &str) -> Vec<(usize, f64, f64, usize, bool)> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>().join(","), CSV_HEADER);
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap(), r[4].parse().unwrap())
        })
        .collect()
}

#[test]
fn three_elastic_increments_give_a_linear_reaction_column() {
    let record = elastic_run(3, FailurePolicy::default(), 200);
    let rows = parse_csv(&force_displacement_csv(&record).unwrap());
    assert_eq!(rows.len(), 3);
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row.0, k + 1);
        assert!(row.4);
        let expected = rows[0].2 * (k + 1) as f64;
        assert!((row.2 - expected).abs() <= 1e-12 * expected.abs(), "{row:?}");
    }
    // E = 100, unit cross-section, strain 1e-3 per increment
    assert!((rows[0].2 - 0.1).abs() < 1e-7);
}

#[test]
fn failed_final_increment_is_kept_in_the_csv() {
    let record = elastic_run(2, FailurePolicy::Abort, 1);
    let rows = parse_csv(&force_displacement_csv(&record).unwrap());
    assert_eq!(rows.len(), 1);
    assert!(!rows[0].4);
}

#[test]
fn csv_sums_match_the_run_record() {
    let record = elastic_run(7, FailurePolicy::default(), 200);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    write_force_displacement(&record, &path).unwrap();
    let rows = parse_csv(&std::fs::read_to_string(&path).unwrap());
    let sum = |f: &dyn Fn(&(usize, f64, f64, usize, bool)) -> f64| rows.iter().map(f).sum::<f64>();
    assert_eq!(sum(&|r| r.1), record.rows.iter().map(|r| r.applied).sum::<f64>());
    assert_eq!(sum(&|r| r.2), record.rows.iter().map(|r| r.reaction).sum::<f64>());
    assert_eq!(rows.iter().map(|r| r.3).sum::<usize>(), record.rows.iter().map(|r| r.iterations).sum::<usize>());
}

#[test]
fn empty_record_is_rejected() {
    assert!(force_displacement_csv(&Default::default()).is_err());
}
