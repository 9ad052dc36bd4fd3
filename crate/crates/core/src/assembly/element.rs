//! Element residuals and tangents of the displacement and phase-field
//! equations.

use crate::constitutive::Material;
use crate::mesh::{element_kinematics, quadrature, ElementKind, Kinematics, MeshError, MAX_NODES, MAX_U_DOFS};

/// Everything needed to evaluate one element.
#[derive(Debug, Clone, Copy)]
pub struct ElementState<'a> {
    pub kind: ElementKind,
    pub coords: &'a [[f64; 2]],
    /// Nodal displacements, interleaved `(u_x, u_y)` per node.
    pub u: &'a [f64],
    /// Nodal phase-field values.
    pub phi: &'a [f64],
    /// History value at each quadrature point.
    pub history: &'a [f64],
    pub material: &'a Material,
}

/// Element vectors and matrices, padded to the largest element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementBlocks {
    pub count: usize,
    pub r_u: [f64; MAX_U_DOFS],
    pub r_phi: [f64; MAX_NODES],
    pub k_uu: [[f64; MAX_U_DOFS]; MAX_U_DOFS],
    pub k_phi: [[f64; MAX_NODES]; MAX_NODES],
}

impl ElementBlocks {
    fn zero(count: usize) -> Self {
        Self {
            count,
            r_u: [0.0; MAX_U_DOFS],
            r_phi: [0.0; MAX_NODES],
            k_uu: [[0.0; MAX_U_DOFS]; MAX_U_DOFS],
            k_phi: [[0.0; MAX_NODES]; MAX_NODES],
        }
    }
}

/// Which weak form the phase-field block is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhasePath {
    /// Residual and tangent written directly in terms of `g`, `w` and `H`.
    #[default]
    Direct,
    /// Steady heat conduction with unit conductivity and source `r`,
    /// rescaled by `G_c l / (2 c_w)`.
    HeatAnalogy,
}

/// Heat source `r` and its derivative `dr/dphi` at one point.
pub fn heat_source(material: &Material, phi: f64, history: f64) -> (f64, f64) {
    let (_, dg, d2g) = material.degrade(phi);
    let geo = material.geometry(phi);
    let ell = material.params.length_scale;
    let scale = 2.0 * material.c_w / (ell * material.params.toughness);
    let r = -dg * history * scale - geo.dw / (2.0 * ell * ell);
    let dr = -d2g * history * scale - geo.d2w / (2.0 * ell * ell);
    (r, dr)
}

/// Factor turning the heat-analogy block into the direct block.
pub fn heat_scaling(material: &Material) -> f64 {
    material.params.toughness * material.params.length_scale / (2.0 * material.c_w)
}

pub(crate) fn kinematics_at(state: &ElementState, xi: [f64; 2]) -> Result<Kinematics, MeshError> {
    element_kinematics(state.kind, state.coords, xi)
}

fn accumulate_u(out: &mut ElementBlocks, k: &Kinematics, state: &ElementState, phi: f64, dv: f64) {
    let m = 2 * k.count;
    let b = k.b_u();
    let eps = k.strain(state.u);
    let (sigma, c) = state.material.stress_and_tangent(&eps, phi);
    for a in 0..m {
        out.r_u[a] += (b[0][a] * sigma[0] + b[1][a] * sigma[1] + b[2][a] * sigma[2]) * dv;
    }
    // C B, then B^T (C B)
    let mut cb = [[0.0; MAX_U_DOFS]; 3];
    for i in 0..3 {
        for a in 0..m {
            cb[i][a] = c[i][0] * b[0][a] + c[i][1] * b[1][a] + c[i][2] * b[2][a];
        }
    }
    for a in 0..m {
        for bb in 0..m {
            out.k_uu[a][bb] += (b[0][a] * cb[0][bb] + b[1][a] * cb[1][bb] + b[2][a] * cb[2][bb]) * dv;
        }
    }
}

fn accumulate_phi_direct(out: &mut ElementBlocks, k: &Kinematics, phi: f64, grad: [f64; 2], h: f64, m: &Material, dv: f64) {
    let (_, dg, d2g) = m.degrade(phi);
    let geo = m.geometry(phi);
    let (gc, ell, cw) = (m.params.toughness, m.params.length_scale, m.c_w);
    let local = dg * h + gc * geo.dw / (4.0 * cw * ell);
    let mass = d2g * h + gc * geo.d2w / (4.0 * cw * ell);
    let diffusion = gc * ell / (2.0 * cw);
    for i in 0..k.count {
        let gi = k.dn_dx[i];
        out.r_phi[i] += (local * k.n[i] + diffusion * (gi[0] * grad[0] + gi[1] * grad[1])) * dv;
        for j in 0..k.count {
            let gj = k.dn_dx[j];
            out.k_phi[i][j] += (mass * k.n[i] * k.n[j] + diffusion * (gi[0] * gj[0] + gi[1] * gj[1])) * dv;
        }
    }
}

fn accumulate_phi_heat(out: &mut ElementBlocks, k: &Kinematics, phi: f64, grad: [f64; 2], h: f64, m: &Material, dv: f64) {
    let (r, dr) = heat_source(m, phi, h);
    for i in 0..k.count {
        let gi = k.dn_dx[i];
        out.r_phi[i] += (gi[0] * grad[0] + gi[1] * grad[1] - r * k.n[i]) * dv;
        for j in 0..k.count {
            let gj = k.dn_dx[j];
            out.k_phi[i][j] += (gi[0] * gj[0] + gi[1] * gj[1] - dr * k.n[i] * k.n[j]) * dv;
        }
    }
}

/// Residuals and tangents of both blocks.
///
/// With [`PhasePath::HeatAnalogy`] the phase block is the raw heat-conduction
/// block; multiply by [`heat_scaling`] to compare with the direct path.
pub fn element_blocks(state: &ElementState, path: PhasePath) -> Result<ElementBlocks, MeshError> {
    let count = state.kind.node_count();
    let mut out = ElementBlocks::zero(count);
    for (q, qp) in quadrature(state.kind).iter().enumerate() {
        let k = kinematics_at(state, qp.xi)?;
        let dv = k.det_j * qp.weight;
        let phi = k.interpolate(state.phi).clamp(0.0, 1.0);
        let grad = k.gradient(state.phi);
        accumulate_u(&mut out, &k, state, phi, dv);
        let h = state.history[q];
        match path {
            PhasePath::Direct => accumulate_phi_direct(&mut out, &k, phi, grad, h, state.material, dv),
            PhasePath::HeatAnalogy => accumulate_phi_heat(&mut out, &k, phi, grad, h, state.material, dv),
        }
    }
    Ok(out)
}

/// `(R_u, R_phi)` of one element.
pub fn element_residuals(state: &ElementState) -> Result<(Vec<f64>, Vec<f64>), MeshError> {
    let b = element_blocks(state, PhasePath::Direct)?;
    Ok((b.r_u[..2 * b.count].to_vec(), b.r_phi[..b.count].to_vec()))
}

/// `(K_uu, K_phiphi)` of one element as dense row-major matrices.
pub fn element_tangents(state: &ElementState) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>), MeshError> {
    let b = element_blocks(state, PhasePath::Direct)?;
    let n = b.count;
    let kuu = (0..2 * n).map(|i| b.k_uu[i][..2 * n].to_vec()).collect();
    let kpp = (0..n).map(|i| b.k_phi[i][..n].to_vec()).collect();
    Ok((kuu, kpp))
}

/// Active energy `psi_0^+` at every quadrature point of one element.
pub fn element_driving_forces(state: &ElementState, out: &mut [f64]) -> Result<(), MeshError> {
    for (q, qp) in quadrature(state.kind).iter().enumerate() {
        let k = kinematics_at(state, qp.xi)?;
        out[q] = state.material.driving_force(&k.strain(state.u));
    }
    Ok(())
}

/// Stored elastic energy and regularised fracture energy of one element.
pub fn element_energies(state: &ElementState) -> Result<(f64, f64), MeshError> {
    let (mut elastic, mut fracture) = (0.0, 0.0);
    let gc = state.material.params.toughness;
    for qp in quadrature(state.kind) {
        let k = kinematics_at(state, qp.xi)?;
        let dv = k.det_j * qp.weight;
        let phi = k.interpolate(state.phi).clamp(0.0, 1.0);
        elastic += state.material.stored_energy(&k.strain(state.u), phi) * dv;
        fracture += gc * state.material.crack_density(phi, k.gradient(state.phi)) * dv;
    }
    Ok((elastic, fracture))
}
