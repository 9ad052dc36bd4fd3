//! Geometric crack functions `w(phi)` and their normalisation constants.

use super::Model;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrackGeometry {
    pub w: f64,
    pub dw: f64,
    pub d2w: f64,
    /// `c_w = int_0^1 sqrt(w(z)) dz`
    pub c_w: f64,
}

pub fn normalisation(model: Model) -> f64 {
    match model {
        Model::At2 => 0.5,
        Model::At1 => 2.0 / 3.0,
        Model::PfczmLinear | Model::PfczmExponential => std::f64::consts::FRAC_PI_4,
    }
}

/// Evaluates `w` and its derivatives with `phi` clamped to `[0, 1]`.
pub fn crack_geometry(model: Model, phi: f64) -> CrackGeometry {
    let phi = phi.clamp(0.0, 1.0);
    let (w, dw, d2w) = match model {
        Model::At2 => (phi * phi, 2.0 * phi, 2.0),
        Model::At1 => (phi, 1.0, 0.0),
        Model::PfczmLinear | Model::PfczmExponential => {
            (2.0 * phi - phi * phi, 2.0 - 2.0 * phi, -2.0)
        }
    };
    CrackGeometry { w, dw, d2w, c_w: normalisation(model) }
}
