//! Linear Lagrange shape functions on the reference elements.
//!
//! Q4 lives on `[-1, 1]^2` with nodes ordered counter-clockwise from
//! `(-1, -1)`. T3 lives on the unit right triangle with nodes
//! `(0, 0), (1, 0), (0, 1)`.

use super::{ElementKind, MAX_NODES};

/// Shape function values and reference gradients at one point.
///
/// Only the first `count` entries are meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeEval {
    pub count: usize,
    pub n: [f64; MAX_NODES],
    pub dn_dxi: [[f64; 2]; MAX_NODES],
}

impl ShapeEval {
    pub fn values(&self) -> &[f64] {
        &self.n[..self.count]
    }

    pub fn gradients(&self) -> &[[f64; 2]] {
        &self.dn_dxi[..self.count]
    }
}

const QUAD4_NODES: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];

pub fn shape_eval(kind: ElementKind, xi: [f64; 2]) -> ShapeEval {
    let mut out = ShapeEval {
        count: kind.node_count(),
        n: [0.0; MAX_NODES],
        dn_dxi: [[0.0; 2]; MAX_NODES],
    };
    match kind {
        ElementKind::Quad4 => {
            for (i, [a, b]) in QUAD4_NODES.iter().enumerate() {
                let sx = 1.0 + a * xi[0];
                let sy = 1.0 + b * xi[1];
                out.n[i] = 0.25 * sx * sy;
                out.dn_dxi[i] = [0.25 * a * sy, 0.25 * b * sx];
            }
        }
        ElementKind::Tri3 => {
            out.n[0] = 1.0 - xi[0] - xi[1];
            out.n[1] = xi[0];
            out.n[2] = xi[1];
            out.dn_dxi[0] = [-1.0, -1.0];
            out.dn_dxi[1] = [1.0, 0.0];
            out.dn_dxi[2] = [0.0, 1.0];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-14
    }

    #[test]
    fn quad_center_is_uniform() {
        let s = shape_eval(ElementKind::Quad4, [0.0, 0.0]);
        assert!(s.values().iter().all(|&v| close(v, 0.25)));
    }

    #[test]
    fn quad_corner_interpolates() {
        let s = shape_eval(ElementKind::Quad4, [-1.0, -1.0]);
        assert_eq!(s.values(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn tri_barycenter() {
        let s = shape_eval(ElementKind::Tri3, [1.0 / 3.0, 1.0 / 3.0]);
        assert!(s.values().iter().all(|&v| close(v, 1.0 / 3.0)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn quad_partition_of_unity(x in -1.0f64..=1.0, y in -1.0f64..=1.0) {
            let s = shape_eval(ElementKind::Quad4, [x, y]);
            let sum: f64 = s.values().iter().sum();
            let gx: f64 = s.gradients().iter().map(|g| g[0]).sum();
            let gy: f64 = s.gradients().iter().map(|g| g[1]).sum();
            prop_assert!((sum - 1.0).abs() < 1e-14);
            prop_assert!(gx.abs() < 1e-14 && gy.abs() < 1e-14);
        }

        #[test]
        fn tri_partition_of_unity(x in 0.0f64..=1.0, t in 0.0f64..=1.0) {
            let y = (1.0 - x) * t;
            let s = shape_eval(ElementKind::Tri3, [x, y]);
            let sum: f64 = s.values().iter().sum();
            let gx: f64 = s.gradients().iter().map(|g| g[0]).sum();
            let gy: f64 = s.gradients().iter().map(|g| g[1]).sum();
            prop_assert!((sum - 1.0).abs() < 1e-14);
            prop_assert!(gx.abs() < 1e-14 && gy.abs() < 1e-14);
        }
    }
}
