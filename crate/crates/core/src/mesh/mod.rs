//! Two-dimensional meshes of linear quadrilaterals and triangles.

mod gmsh;
mod kinematics;
mod quadrature;
mod shape;

use std::collections::BTreeMap;
use std::path::PathBuf;

use thiserror::Error;

pub use gmsh::{parse_gmsh, parse_gmsh_str};
pub use kinematics::{element_kinematics, Kinematics, MAX_U_DOFS};
pub use quadrature::{quadrature, QuadraturePoint};
pub use shape::{shape_eval, ShapeEval};

/// Largest node count of any supported element.
pub const MAX_NODES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Quad4,
    Tri3,
}

impl ElementKind {
    pub fn node_count(self) -> usize {
        match self {
            ElementKind::Quad4 => 4,
            ElementKind::Tri3 => 3,
        }
    }

    pub fn quadrature_count(self) -> usize {
        quadrature(self).len()
    }

    /// Cell type id in the legacy VTK format.
    pub fn vtk_cell_type(self) -> u8 {
        match self {
            ElementKind::Quad4 => 9,
            ElementKind::Tri3 => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Regime {
    #[default]
    PlaneStrain,
    PlaneStress,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub kind: ElementKind,
    pub nodes: Vec<usize>,
}

impl Element {
    pub fn quad(nodes: [usize; 4]) -> Self {
        Self { kind: ElementKind::Quad4, nodes: nodes.to_vec() }
    }

    pub fn tri(nodes: [usize; 3]) -> Self {
        Self { kind: ElementKind::Tri3, nodes: nodes.to_vec() }
    }
}

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("non-positive mesh dimension or count: {0}")]
    InvalidDimensions(String),
    #[error("element {element} references node {node}, but the mesh has {count} nodes")]
    NodeOutOfRange { element: usize, node: usize, count: usize },
    #[error("element {element} has {found} nodes, expected {expected}")]
    WrongNodeCount { element: usize, found: usize, expected: usize },
    #[error("inverted or degenerate element{}: det J = {det_j:e}", element.map(|e| format!(" {e}")).unwrap_or_default())]
    InvertedElement { element: Option<usize>, det_j: f64 },
    #[error("node set `{name}` references node {node}, but the mesh has {count} nodes")]
    BadNodeSet { name: String, node: usize, count: usize },
    #[error("unsupported MSH format version {0}")]
    UnsupportedVersion(String),
    #[error("unsupported element kind: gmsh type {kind} (element {id})")]
    UnsupportedElement { id: u64, kind: u32 },
    #[error("malformed MSH file at line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Immutable finite element mesh (coordinates in mm).
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<[f64; 2]>,
    elements: Vec<Element>,
    node_sets: BTreeMap<String, Vec<usize>>,
    regime: Regime,
    qp_offsets: Vec<usize>,
}

impl Mesh {
    /// Builds a mesh and checks connectivity, node sets and element
    /// orientation at every quadrature point.
    pub fn new(
        nodes: Vec<[f64; 2]>,
        elements: Vec<Element>,
        node_sets: BTreeMap<String, Vec<usize>>,
        regime: Regime,
    ) -> Result<Self, MeshError> {
        let count = nodes.len();
        let mut qp_offsets = Vec::with_capacity(elements.len() + 1);
        let mut offset = 0;
        for (e, el) in elements.iter().enumerate() {
            if el.nodes.len() != el.kind.node_count() {
                return Err(MeshError::WrongNodeCount {
                    element: e,
                    found: el.nodes.len(),
                    expected: el.kind.node_count(),
                });
            }
            if let Some(&node) = el.nodes.iter().find(|&&n| n >= count) {
                return Err(MeshError::NodeOutOfRange { element: e, node, count });
            }
            let coords: Vec<[f64; 2]> = el.nodes.iter().map(|&n| nodes[n]).collect();
            for qp in quadrature(el.kind) {
                element_kinematics(el.kind, &coords, qp.xi).map_err(|err| match err {
                    MeshError::InvertedElement { det_j, .. } => {
                        MeshError::InvertedElement { element: Some(e), det_j }
                    }
                    other => other,
                })?;
            }
            qp_offsets.push(offset);
            offset += el.kind.quadrature_count();
        }
        qp_offsets.push(offset);
        for (name, set) in &node_sets {
            if let Some(&node) = set.iter().find(|&&n| n >= count) {
                return Err(MeshError::BadNodeSet { name: name.clone(), node, count });
            }
        }
        Ok(Self { nodes, elements, node_sets, regime, qp_offsets })
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn with_regime(mut self, regime: Regime) -> Self {
        self.regime = regime;
        self
    }

    pub fn node_sets(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.node_sets
    }

    pub fn node_set(&self, name: &str) -> Option<&[usize]> {
        self.node_sets.get(name).map(Vec::as_slice)
    }

    /// Adds or replaces a node set.
    pub fn insert_node_set(&mut self, name: &str, mut nodes: Vec<usize>) -> Result<(), MeshError> {
        nodes.sort_unstable();
        nodes.dedup();
        if let Some(&node) = nodes.iter().find(|&&n| n >= self.nodes.len()) {
            return Err(MeshError::BadNodeSet { name: name.to_owned(), node, count: self.nodes.len() });
        }
        self.node_sets.insert(name.to_owned(), nodes);
        Ok(())
    }

    /// Node set of all nodes satisfying a coordinate predicate.
    pub fn select_nodes(&self, pred: impl Fn([f64; 2]) -> bool) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| pred(self.nodes[i])).collect()
    }

    pub fn element_coords(&self, e: usize) -> Vec<[f64; 2]> {
        self.elements[e].nodes.iter().map(|&n| self.nodes[n]).collect()
    }

    pub fn element_centroid(&self, e: usize) -> [f64; 2] {
        let el = &self.elements[e];
        let k = el.nodes.len() as f64;
        let mut c = [0.0; 2];
        for &n in &el.nodes {
            c[0] += self.nodes[n][0] / k;
            c[1] += self.nodes[n][1] / k;
        }
        c
    }

    /// Index of the first quadrature point of element `e` in global storage.
    pub fn qp_offset(&self, e: usize) -> usize {
        self.qp_offsets[e]
    }

    pub fn quadrature_point_count(&self) -> usize {
        *self.qp_offsets.last().unwrap_or(&0)
    }

    /// Sum of `det J * w` over every quadrature point.
    pub fn area(&self) -> f64 {
        let mut area = 0.0;
        for e in 0..self.elements.len() {
            let kind = self.elements[e].kind;
            let coords = self.element_coords(e);
            for qp in quadrature(kind) {
                // orientation was checked at construction
                let k = element_kinematics(kind, &coords, qp.xi).expect("validated element");
                area += k.det_j * qp.weight;
            }
        }
        area
    }

    /// Characteristic element size: square root of the element area.
    pub fn element_size(&self, e: usize) -> f64 {
        let kind = self.elements[e].kind;
        let coords = self.element_coords(e);
        quadrature(kind)
            .iter()
            .map(|qp| element_kinematics(kind, &coords, qp.xi).map(|k| k.det_j * qp.weight).unwrap_or(0.0))
            .sum::<f64>()
            .sqrt()
    }

    pub fn min_element_size(&self) -> f64 {
        (0..self.elements.len()).map(|e| self.element_size(e)).fold(f64::INFINITY, f64::min)
    }

    /// Warns when even the finest elements are coarser than a fifth of the
    /// phase-field length scale. Returns whether the guideline holds.
    pub fn check_resolution(&self, length_scale: f64) -> bool {
        let h = self.min_element_size();
        let ok = h * 5.0 <= length_scale * (1.0 + 1e-9);
        if !ok {
            log::warn!(
                "finest element size {h:.4} mm exceeds length scale / 5 = {:.4} mm; crack bands will be under-resolved",
                length_scale / 5.0
            );
        }
        ok
    }
}

/// Uniform structured mesh of the rectangle `[0, width] x [0, height]`.
///
/// Nodes are numbered row-major from the bottom-left corner. Node sets
/// `left`, `right`, `top` and `bottom` are created automatically.
pub fn generate_rect(
    width: f64,
    height: f64,
    nx: usize,
    ny: usize,
    kind: ElementKind,
    regime: Regime,
) -> Result<Mesh, MeshError> {
    if !(width > 0.0 && height > 0.0) || nx == 0 || ny == 0 {
        return Err(MeshError::InvalidDimensions(format!(
            "width={width}, height={height}, nx={nx}, ny={ny}"
        )));
    }
    let xs: Vec<f64> = (0..=nx).map(|i| width * i as f64 / nx as f64).collect();
    let ys: Vec<f64> = (0..=ny).map(|j| height * j as f64 / ny as f64).collect();
    generate_graded(&xs, &ys, kind, regime)
}

/// Structured tensor-product mesh on strictly increasing grid lines.
pub fn generate_graded(
    xs: &[f64],
    ys: &[f64],
    kind: ElementKind,
    regime: Regime,
) -> Result<Mesh, MeshError> {
    let increasing = |v: &[f64]| v.len() >= 2 && v.windows(2).all(|w| w[1] > w[0]);
    if !increasing(xs) || !increasing(ys) {
        return Err(MeshError::InvalidDimensions(
            "grid lines must be at least two strictly increasing values".into(),
        ));
    }
    let (nx, ny) = (xs.len() - 1, ys.len() - 1);
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for &y in ys {
        for &x in xs {
            nodes.push([x, y]);
        }
    }
    let mut elements = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            match kind {
                ElementKind::Quad4 => elements.push(Element::quad([a, b, c, d])),
                ElementKind::Tri3 => {
                    elements.push(Element::tri([a, b, c]));
                    elements.push(Element::tri([a, c, d]));
                }
            }
        }
    }
    let mut sets = BTreeMap::new();
    sets.insert("bottom".to_owned(), (0..=nx).map(|i| id(i, 0)).collect());
    sets.insert("top".to_owned(), (0..=nx).map(|i| id(i, ny)).collect());
    sets.insert("left".to_owned(), (0..=ny).map(|j| id(0, j)).collect());
    sets.insert("right".to_owned(), (0..=ny).map(|j| id(nx, j)).collect());
    Mesh::new(nodes, elements, sets, regime)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_quad() {
        let m = generate_rect(1.0, 1.0, 1, 1, ElementKind::Quad4, Regime::PlaneStrain).unwrap();
        assert_eq!(m.node_count(), 4);
        assert_eq!(m.element_count(), 1);
        let k = element_kinematics(ElementKind::Quad4, &m.element_coords(0), [0.0, 0.0]).unwrap();
        assert!((k.det_j - 0.25).abs() < 1e-15);
    }

    #[test]
    fn counts_and_sets() {
        let m = generate_rect(2.0, 1.0, 2, 1, ElementKind::Quad4, Regime::PlaneStrain).unwrap();
        assert_eq!((m.node_count(), m.element_count()), (6, 2));
        let m = generate_rect(1.0, 1.0, 10, 10, ElementKind::Quad4, Regime::PlaneStrain).unwrap();
        assert_eq!(m.node_set("bottom").unwrap().len(), 11);
        assert_eq!(m.quadrature_point_count(), 400);
        let t = generate_rect(1.0, 1.0, 3, 2, ElementKind::Tri3, Regime::PlaneStress).unwrap();
        assert_eq!(t.element_count(), 12);
        assert_eq!(t.quadrature_point_count(), 12);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(generate_rect(0.0, 1.0, 1, 1, ElementKind::Quad4, Regime::PlaneStrain).is_err());
        assert!(generate_rect(1.0, -1.0, 1, 1, ElementKind::Quad4, Regime::PlaneStrain).is_err());
        assert!(generate_rect(1.0, 1.0, 0, 1, ElementKind::Quad4, Regime::PlaneStrain).is_err());
    }

    #[test]
    fn area_is_exact() {
        for kind in [ElementKind::Quad4, ElementKind::Tri3] {
            let m = generate_rect(3.7, 1.3, 7, 5, kind, Regime::PlaneStrain).unwrap();
            assert!((m.area() - 3.7 * 1.3).abs() < 1e-12 * 3.7 * 1.3);
        }
    }

    #[test]
    fn validation_catches_bad_connectivity() {
        let nodes = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let err = Mesh::new(nodes.clone(), vec![Element::tri([0, 1, 5])], BTreeMap::new(), Regime::PlaneStrain);
        assert!(matches!(err, Err(MeshError::NodeOutOfRange { node: 5, .. })));
        let err = Mesh::new(nodes.clone(), vec![Element::tri([0, 2, 1])], BTreeMap::new(), Regime::PlaneStrain);
        assert!(matches!(err, Err(MeshError::InvertedElement { element: Some(0), .. })));
        let mut sets = BTreeMap::new();
        sets.insert("x".to_owned(), vec![9]);
        let err = Mesh::new(nodes, vec![Element::tri([0, 1, 2])], sets, Regime::PlaneStrain);
        assert!(matches!(err, Err(MeshError::BadNodeSet { .. })));
    }

    #[test]
    fn resolution_guideline() {
        let m = generate_rect(1.0, 1.0, 10, 10, ElementKind::Quad4, Regime::PlaneStrain).unwrap();
        assert!(m.check_resolution(0.5));
        assert!(!m.check_resolution(0.2));
    }
}
