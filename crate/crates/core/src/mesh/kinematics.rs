//! Isoparametric map and strain-displacement operators.
//!
//! Voigt order is `(eps_xx, eps_yy, gamma_xy)` with engineering shear.
//! Displacement DOFs are interleaved per node: `(u_x0, u_y0, u_x1, ...)`.

use super::shape::shape_eval;
use super::{ElementKind, MeshError, MAX_NODES};

pub const MAX_U_DOFS: usize = 2 * MAX_NODES;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub count: usize,
    /// Shape function values.
    pub n: [f64; MAX_NODES],
    /// Physical gradients `dN_i/dx`.
    pub dn_dx: [[f64; 2]; MAX_NODES],
    pub det_j: f64,
}

impl Kinematics {
    /// `B_u` as a 3 x (2 * count) matrix, padded with zeros.
    pub fn b_u(&self) -> [[f64; MAX_U_DOFS]; 3] {
        let mut b = [[0.0; MAX_U_DOFS]; 3];
        for i in 0..self.count {
            let [gx, gy] = self.dn_dx[i];
            b[0][2 * i] = gx;
            b[1][2 * i + 1] = gy;
            b[2][2 * i] = gy;
            b[2][2 * i + 1] = gx;
        }
        b
    }

    /// `B_phi` as a 2 x count matrix, padded with zeros.
    pub fn b_phi(&self) -> [[f64; MAX_NODES]; 2] {
        let mut b = [[0.0; MAX_NODES]; 2];
        for i in 0..self.count {
            b[0][i] = self.dn_dx[i][0];
            b[1][i] = self.dn_dx[i][1];
        }
        b
    }

    pub fn strain(&self, u: &[f64]) -> [f64; 3] {
        let mut eps = [0.0; 3];
        for i in 0..self.count {
            let [gx, gy] = self.dn_dx[i];
            let (ux, uy) = (u[2 * i], u[2 * i + 1]);
            eps[0] += gx * ux;
            eps[1] += gy * uy;
            eps[2] += gy * ux + gx * uy;
        }
        eps
    }

    pub fn interpolate(&self, values: &[f64]) -> f64 {
        (0..self.count).map(|i| self.n[i] * values[i]).sum()
    }

    pub fn gradient(&self, values: &[f64]) -> [f64; 2] {
        let mut g = [0.0; 2];
        for i in 0..self.count {
            g[0] += self.dn_dx[i][0] * values[i];
            g[1] += self.dn_dx[i][1] * values[i];
        }
        g
    }
}

/// Evaluates the map at reference point `xi` for an element with the given
/// nodal coordinates. Fails if the Jacobian determinant is not positive.
pub fn element_kinematics(
    kind: ElementKind,
    coords: &[[f64; 2]],
    xi: [f64; 2],
) -> Result<Kinematics, MeshError> {
    let s = shape_eval(kind, xi);
    let count = s.count;
    debug_assert_eq!(coords.len(), count);
    // J = d x / d xi, rows x/y, columns xi/eta
    let mut j = [[0.0; 2]; 2];
    for i in 0..count {
        for a in 0..2 {
            for b in 0..2 {
                j[a][b] += coords[i][a] * s.dn_dxi[i][b];
            }
        }
    }
    let det_j = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if !(det_j > 0.0) {
        return Err(MeshError::InvertedElement { element: None, det_j });
    }
    let inv = [
        [j[1][1] / det_j, -j[0][1] / det_j],
        [-j[1][0] / det_j, j[0][0] / det_j],
    ];
    let mut dn_dx = [[0.0; 2]; MAX_NODES];
    for i in 0..count {
        let [a, b] = s.dn_dxi[i];
        // dN/dx = J^{-T} dN/dxi
        dn_dx[i] = [a * inv[0][0] + b * inv[1][0], a * inv[0][1] + b * inv[1][1]];
    }
    Ok(Kinematics {
        count,
        n: s.n,
        dn_dx,
        det_j,
    })
}
