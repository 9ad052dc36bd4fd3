//! Fixed integration rules: 2x2 Gauss for Q4, one point for T3.

use super::ElementKind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraturePoint {
    /// Reference-element coordinates.
    pub xi: [f64; 2],
    pub weight: f64,
}

const G: f64 = 0.577_350_269_189_625_8; // 1/sqrt(3)

static QUAD4_RULE: [QuadraturePoint; 4] = [
    QuadraturePoint { xi: [-G, -G], weight: 1.0 },
    QuadraturePoint { xi: [G, -G], weight: 1.0 },
    QuadraturePoint { xi: [G, G], weight: 1.0 },
    QuadraturePoint { xi: [-G, G], weight: 1.0 },
];

static TRI3_RULE: [QuadraturePoint; 1] = [QuadraturePoint {
    xi: [1.0 / 3.0, 1.0 / 3.0],
    weight: 0.5,
}];

pub fn quadrature(kind: ElementKind) -> &'static [QuadraturePoint] {
    match kind {
        ElementKind::Quad4 => &QUAD4_RULE,
        ElementKind::Tri3 => &TRI3_RULE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_reference_area() {
        let q: f64 = quadrature(ElementKind::Quad4).iter().map(|p| p.weight).sum();
        let t: f64 = quadrature(ElementKind::Tri3).iter().map(|p| p.weight).sum();
        assert_eq!(q, 4.0);
        assert_eq!(t, 0.5);
    }

    #[test]
    fn gauss_rule_integrates_cubics_exactly() {
        // int_{-1}^{1} int_{-1}^{1} (x^3 + x^2 y^2 + y^2) = 0 + 4/9 + 4/3
        let s: f64 = quadrature(ElementKind::Quad4)
            .iter()
            .map(|p| {
                let [x, y] = p.xi;
                p.weight * (x.powi(3) + x * x * y * y + y * y)
            })
            .sum();
        assert!((s - (4.0 / 9.0 + 4.0 / 3.0)).abs() < 1e-14);
    }
}
