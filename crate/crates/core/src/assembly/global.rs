//! Global assembly of the displacement and phase-field blocks.
//!
//! The sparsity pattern and the element-to-value scatter maps are computed
//! once per mesh. Element blocks are evaluated in parallel and scattered in
//! element order, so results do not depend on the thread count.

use rayon::prelude::*;

use super::element::{element_blocks, element_driving_forces, element_energies, ElementBlocks, ElementState, PhasePath};
use super::sparse::SymmetricCsc;
use super::AssemblyError;
use crate::constitutive::Material;
use crate::mesh::{Mesh, MAX_NODES, MAX_U_DOFS};

/// Displacement DOF of `component` (0 = x, 1 = y) at `node`.
pub fn u_dof(node: usize, component: usize) -> usize {
    2 * node + component
}

/// Assembled blocks. The coupling blocks are absent by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem {
    pub k_uu: SymmetricCsc,
    pub k_phi: SymmetricCsc,
    /// Internal force `int B^T sigma dV`.
    pub r_u: Vec<f64>,
    pub r_phi: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Assembler {
    k_uu: SymmetricCsc,
    k_phi: SymmetricCsc,
    scatter_u: Vec<Vec<usize>>,
    scatter_phi: Vec<Vec<usize>>,
    nodes: usize,
}

impl Assembler {
    pub fn new(mesh: &Mesh) -> Self {
        let n = mesh.node_count();
        let mut adjacency = vec![Vec::new(); n];
        for el in mesh.elements() {
            for &a in &el.nodes {
                adjacency[a].extend_from_slice(&el.nodes);
            }
        }
        for a in &mut adjacency {
            a.sort_unstable();
            a.dedup();
        }
        let mut u_columns = Vec::with_capacity(2 * n);
        for a in 0..n {
            for _ in 0..2 {
                u_columns.push(adjacency[a].iter().flat_map(|&b| [2 * b, 2 * b + 1]).collect::<Vec<_>>());
            }
        }
        let k_uu = SymmetricCsc::from_pattern(&u_columns);
        let k_phi = SymmetricCsc::from_pattern(&adjacency);
        let mut scatter_u = Vec::with_capacity(mesh.element_count());
        let mut scatter_phi = Vec::with_capacity(mesh.element_count());
        for el in mesh.elements() {
            let dofs: Vec<usize> = el.nodes.iter().flat_map(|&a| [2 * a, 2 * a + 1]).collect();
            let mut su = Vec::with_capacity(dofs.len() * dofs.len());
            for &i in &dofs {
                for &j in &dofs {
                    su.push(k_uu.find(i, j).expect("pattern covers element"));
                }
            }
            let mut sp = Vec::with_capacity(el.nodes.len() * el.nodes.len());
            for &i in &el.nodes {
                for &j in &el.nodes {
                    sp.push(k_phi.find(i, j).expect("pattern covers element"));
                }
            }
            scatter_u.push(su);
            scatter_phi.push(sp);
        }
        Self { k_uu, k_phi, scatter_u, scatter_phi, nodes: n }
    }

    pub fn u_dofs(&self) -> usize {
        2 * self.nodes
    }

    pub fn phi_dofs(&self) -> usize {
        self.nodes
    }

    fn check_sizes(&self, mesh: &Mesh, u: &[f64], phi: &[f64], history: Option<&[f64]>) -> Result<(), AssemblyError> {
        let mismatch = |what, expected, found| AssemblyError::SizeMismatch { what, expected, found };
        if mesh.node_count() != self.nodes {
            return Err(mismatch("mesh nodes", self.nodes, mesh.node_count()));
        }
        if u.len() != 2 * self.nodes {
            return Err(mismatch("displacement vector", 2 * self.nodes, u.len()));
        }
        if phi.len() != self.nodes {
            return Err(mismatch("phase-field vector", self.nodes, phi.len()));
        }
        if let Some(h) = history {
            if h.len() != mesh.quadrature_point_count() {
                return Err(mismatch("history field", mesh.quadrature_point_count(), h.len()));
            }
        }
        Ok(())
    }

    /// Assembles both blocks and residuals for the given state.
    pub fn assemble(
        &self,
        mesh: &Mesh,
        material: &Material,
        u: &[f64],
        phi: &[f64],
        history: &[f64],
        path: PhasePath,
    ) -> Result<SparseSystem, AssemblyError> {
        self.check_sizes(mesh, u, phi, Some(history))?;
        let blocks = map_elements(mesh, material, u, phi, Some(history), |state| {
            element_blocks(state, path)
        })?;
        let mut k_uu = self.k_uu.clone();
        let mut k_phi = self.k_phi.clone();
        let mut r_u = vec![0.0; 2 * self.nodes];
        let mut r_phi = vec![0.0; self.nodes];
        for (e, b) in blocks.iter().enumerate() {
            self.scatter(mesh, e, b, &mut k_uu, &mut k_phi, &mut r_u, &mut r_phi);
        }
        Ok(SparseSystem { k_uu, k_phi, r_u, r_phi })
    }

    #[allow(clippy::too_many_arguments)]
    fn scatter(
        &self,
        mesh: &Mesh,
        e: usize,
        b: &ElementBlocks,
        k_uu: &mut SymmetricCsc,
        k_phi: &mut SymmetricCsc,
        r_u: &mut [f64],
        r_phi: &mut [f64],
    ) {
        let nodes = &mesh.elements()[e].nodes;
        let (n, m) = (nodes.len(), 2 * nodes.len());
        let vu = k_uu.values_mut();
        for a in 0..m {
            for c in 0..m {
                vu[self.scatter_u[e][a * m + c]] += b.k_uu[a][c];
            }
        }
        let vp = k_phi.values_mut();
        for a in 0..n {
            for c in 0..n {
                vp[self.scatter_phi[e][a * n + c]] += b.k_phi[a][c];
            }
        }
        for (a, &node) in nodes.iter().enumerate() {
            r_u[2 * node] += b.r_u[2 * a];
            r_u[2 * node + 1] += b.r_u[2 * a + 1];
            r_phi[node] += b.r_phi[a];
        }
    }

    /// Active energy `psi_0^+` at every quadrature point.
    pub fn driving_forces(&self, mesh: &Mesh, material: &Material, u: &[f64]) -> Result<Vec<f64>, AssemblyError> {
        let phi = vec![0.0; self.nodes];
        self.check_sizes(mesh, u, &phi, None)?;
        let per_element = map_elements(mesh, material, u, &phi, None, |state| {
            let mut out = [0.0; MAX_NODES];
            element_driving_forces(state, &mut out)?;
            Ok(out)
        })?;
        let mut values = Vec::with_capacity(mesh.quadrature_point_count());
        for (e, v) in per_element.iter().enumerate() {
            values.extend_from_slice(&v[..mesh.elements()[e].kind.quadrature_count()]);
        }
        Ok(values)
    }

    /// Stored elastic energy and regularised fracture energy of the body.
    pub fn energies(&self, mesh: &Mesh, material: &Material, u: &[f64], phi: &[f64]) -> Result<(f64, f64), AssemblyError> {
        self.check_sizes(mesh, u, phi, None)?;
        let per_element = map_elements(mesh, material, u, phi, None, element_energies)?;
        Ok(per_element.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y)))
    }
}

/// Evaluates `f` on every element in parallel and returns the results in
/// element order.
fn map_elements<T, F>(
    mesh: &Mesh,
    material: &Material,
    u: &[f64],
    phi: &[f64],
    history: Option<&[f64]>,
    f: F,
) -> Result<Vec<T>, AssemblyError>
where
    T: Send,
    F: Fn(&ElementState) -> Result<T, crate::mesh::MeshError> + Sync,
{
    let zeros = [0.0; MAX_NODES];
    (0..mesh.element_count())
        .into_par_iter()
        .map(|e| {
            let el = &mesh.elements()[e];
            let n = el.nodes.len();
            let mut coords = [[0.0; 2]; MAX_NODES];
            let mut ue = [0.0; MAX_U_DOFS];
            let mut pe = [0.0; MAX_NODES];
            for (a, &node) in el.nodes.iter().enumerate() {
                coords[a] = mesh.nodes()[node];
                ue[2 * a] = u[2 * node];
                ue[2 * a + 1] = u[2 * node + 1];
                pe[a] = phi[node];
            }
            let offset = mesh.qp_offset(e);
            let h = match history {
                Some(h) => &h[offset..offset + el.kind.quadrature_count()],
                None => &zeros[..el.kind.quadrature_count()],
            };
            let state = ElementState {
                kind: el.kind,
                coords: &coords[..n],
                u: &ue[..2 * n],
                phi: &pe[..n],
                history: h,
                material,
            };
            f(&state).map_err(|err| AssemblyError::from_mesh(err, e))
        })
        .collect()
}
